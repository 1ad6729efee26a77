#include "svrand/svsim.hpp"

#include <random>
#include <stdexcept>

namespace svrand {

namespace {

constexpr std::uint32_t kMaxOrder = 24;  // keeps the sign table under 2^24 entries

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument(std::string("invalid hex digit '") + c + "' in sign table");
}

}  // namespace

void validate(const SourceSpec& spec) {
    if (!(spec.epsilon >= 0.0 && spec.epsilon <= 0.5))
        throw std::invalid_argument("epsilon must be in [0, 0.5]");
    if (spec.n == 0) throw std::invalid_argument("sample length must be positive");
    if (spec.kind == SourceKind::pattern_bias) {
        if (spec.order == 0 || spec.order > kMaxOrder)
            throw std::invalid_argument("pattern order must be in [1, 24]");
        if (spec.sign_table.size() != (std::size_t{1} << spec.order))
            throw std::invalid_argument("sign table must have exactly 2^order entries");
        for (int s : spec.sign_table)
            if (s != 1 && s != -1)
                throw std::invalid_argument("sign table entries must be +1 or -1");
    }
}

BitSequence generate(const SourceSpec& spec) {
    validate(spec);
    std::mt19937_64 rng(spec.seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    BitSequence bits;
    bits.reserve(spec.n);
    if (spec.kind == SourceKind::iid_bias) {
        const double p = 0.5 + spec.epsilon;
        for (std::uint64_t i = 0; i < spec.n; ++i) bits.push_back(uniform() < p ? 1 : 0);
        return bits;
    }

    const std::uint64_t mask = (std::uint64_t{1} << spec.order) - 1;
    std::uint64_t history = 0;
    for (std::uint64_t i = 0; i < spec.n; ++i) {
        const double p =
            i < spec.order ? 0.5 : 0.5 + spec.sign_table[history] * spec.epsilon;
        const int bit = uniform() < p ? 1 : 0;
        bits.push_back(bit);
        history = ((history << 1) | static_cast<std::uint64_t>(bit)) & mask;
    }
    return bits;
}

double true_epsilon(const SourceSpec& spec) {
    validate(spec);
    return spec.epsilon;
}

std::vector<int> sign_table_from_hex(const std::string& hex, std::uint32_t order) {
    if (order == 0 || order > kMaxOrder)
        throw std::invalid_argument("pattern order must be in [1, 24]");
    std::string_view digits(hex);
    if (digits.starts_with("0x") || digits.starts_with("0X")) digits.remove_prefix(2);
    if (digits.empty()) throw std::invalid_argument("empty sign table");

    const std::size_t entries = std::size_t{1} << order;
    std::vector<int> table(entries, -1);
    for (std::size_t d = 0; d < digits.size(); ++d) {
        const int v = hex_digit(digits[digits.size() - 1 - d]);
        for (int b = 0; b < 4; ++b) {
            if (((v >> b) & 1) == 0) continue;
            const std::size_t j = 4 * d + b;
            if (j >= entries)
                throw std::invalid_argument("sign table mask wider than 2^order");
            table[j] = 1;
        }
    }
    return table;
}

}  // namespace svrand
