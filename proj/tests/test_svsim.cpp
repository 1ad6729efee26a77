#include <cmath>

#include "doctest.h"
#include "svrand/estimator.hpp"
#include "svrand/svsim.hpp"

using namespace svrand;

namespace {

SourceSpec iid(double epsilon, std::uint64_t n, std::uint64_t seed) {
    SourceSpec spec;
    spec.kind = SourceKind::iid_bias;
    spec.epsilon = epsilon;
    spec.n = n;
    spec.seed = seed;
    return spec;
}

SourceSpec pattern(double epsilon, std::uint32_t order, std::vector<int> signs, std::uint64_t n,
                   std::uint64_t seed) {
    SourceSpec spec;
    spec.kind = SourceKind::pattern_bias;
    spec.epsilon = epsilon;
    spec.order = order;
    spec.sign_table = std::move(signs);
    spec.n = n;
    spec.seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("maximal bias produces all ones") {
    const BitSequence s = generate(iid(0.5, 1000, 3));
    for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(s[i] == 1);
}

TEST_CASE("generation is a pure function of the source description") {
    const SourceSpec spec = iid(0.2, 4096, 99);
    CHECK(generate(spec) == generate(spec));
    SourceSpec other = spec;
    other.seed = 100;
    CHECK(generate(spec) != generate(other));
}

TEST_CASE("requested length is honored") {
    CHECK(generate(iid(0.0, 12345, 1)).size() == 12345);
    CHECK(generate(pattern(0.1, 2, {1, -1, -1, 1}, 777, 1)).size() == 777);
}

TEST_CASE("source validation") {
    CHECK_THROWS_AS(generate(iid(0.6, 10, 1)), std::invalid_argument);
    CHECK_THROWS_AS(generate(iid(-0.1, 10, 1)), std::invalid_argument);
    CHECK_THROWS_AS(generate(iid(0.1, 0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(generate(pattern(0.1, 0, {1, -1}, 10, 1)), std::invalid_argument);
    CHECK_THROWS_AS(generate(pattern(0.1, 2, {1, -1}, 10, 1)), std::invalid_argument);
    CHECK_THROWS_AS(generate(pattern(0.1, 1, {1, 0}, 10, 1)), std::invalid_argument);
}

TEST_CASE("true epsilon echoes the configured bias for both kinds") {
    CHECK(true_epsilon(iid(0.1, 10, 1)) == 0.1);
    CHECK(true_epsilon(iid(0.0, 10, 1)) == 0.0);
    CHECK(true_epsilon(pattern(0.2, 2, {1, -1, 1, -1}, 10, 1)) == 0.2);
}

TEST_CASE("saturated pattern bias alternates deterministically") {
    // With epsilon 1/2 and signs {0 -> +1, 1 -> -1}, a 0 is always followed
    // by 1 and vice versa; only the first bit is random.
    const BitSequence s = generate(pattern(0.5, 1, {1, -1}, 500, 17));
    for (std::size_t i = 1; i < s.size(); ++i) REQUIRE(s[i] == 1 - s[i - 1]);
}

TEST_CASE("saturated one-sided pattern bias pins every bit after the warmup") {
    const BitSequence s = generate(pattern(0.5, 1, {1, 1}, 200, 23));
    for (std::size_t i = 1; i < s.size(); ++i) REQUIRE(s[i] == 1);
}

TEST_CASE("iid bias calibrates against the estimator") {
    const BitSequence s = generate(iid(0.25, 1 << 18, 31));
    // 5 sigma of the marginal estimate at this n is about 0.005.
    CHECK(std::fabs(epsilon_h(s, 0) - 0.25) < 0.01);
}

TEST_CASE("alternating-sign pattern bias hides from the marginal") {
    const BitSequence s = generate(pattern(0.2, 1, {1, -1}, 1 << 18, 37));
    CHECK(epsilon_h(s, 0) < 0.01);
    CHECK(std::fabs(epsilon_h(s, 1) - 0.2) < 0.01);
}

TEST_CASE("hex sign tables decode with bit j addressing history pattern j") {
    CHECK(sign_table_from_hex("1", 1) == std::vector<int>{1, -1});
    CHECK(sign_table_from_hex("0x1", 1) == std::vector<int>{1, -1});
    CHECK(sign_table_from_hex("2", 1) == std::vector<int>{-1, 1});
    // 0x6 = 0110: patterns 1 and 2 get +1, patterns 0 and 3 get -1.
    CHECK(sign_table_from_hex("6", 2) == std::vector<int>{-1, 1, 1, -1});
    CHECK(sign_table_from_hex("F", 2) == std::vector<int>{1, 1, 1, 1});
    // Missing high digits default to -1.
    CHECK(sign_table_from_hex("01", 2) == std::vector<int>{1, -1, -1, -1});
}

TEST_CASE("hex sign table validation") {
    CHECK_THROWS_AS(sign_table_from_hex("g1", 2), std::invalid_argument);
    CHECK_THROWS_AS(sign_table_from_hex("", 2), std::invalid_argument);
    CHECK_THROWS_AS(sign_table_from_hex("0x", 2), std::invalid_argument);
    // Mask bit 2 addresses a pattern that does not exist at order 1.
    CHECK_THROWS_AS(sign_table_from_hex("4", 1), std::invalid_argument);
    CHECK_THROWS_AS(sign_table_from_hex("1", 0), std::invalid_argument);
    CHECK_THROWS_AS(sign_table_from_hex("1", 25), std::invalid_argument);
}
