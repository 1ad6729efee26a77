#include "svrand/combine.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace svrand {

namespace {

// Raw (unnormalized) weights. The final value is computed as
// dot(raw, eps) / sum(raw) with plain left-to-right sums: halving commutes
// with rounding, so a constant profile of 1/2 maps to exactly 1/2.
std::vector<double> raw_weights(const WeightScheme& scheme) {
    if (scheme.family == WeightFamily::polynomial && scheme.k == 0)
        throw std::invalid_argument("polynomial order must be >= 1");
    std::vector<double> raw(scheme.h_max + 1);
    for (std::uint32_t h = 0; h <= scheme.h_max; ++h) {
        if (scheme.family == WeightFamily::exponential) {
            raw[h] = std::ldexp(1.0, -static_cast<int>(h));
        } else {
            double p = 1.0;
            for (unsigned i = 0; i < scheme.k; ++i) p *= static_cast<double>(h + 1);
            raw[h] = 1.0 / p;
        }
    }
    return raw;
}

double plain_sum(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
}

}  // namespace

WeightScheme parse_weight_scheme(std::string_view name, std::uint32_t h_max) {
    if (name == "exp") return WeightScheme{WeightFamily::exponential, 1, h_max};
    if (name.starts_with("poly:")) {
        const std::string digits(name.substr(5));
        std::size_t used = 0;
        unsigned long k = 0;
        try {
            k = std::stoul(digits, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid combiner: " + std::string(name));
        }
        if (used != digits.size() || k == 0)
            throw std::invalid_argument("polynomial order must be >= 1");
        return WeightScheme{WeightFamily::polynomial, static_cast<unsigned>(k), h_max};
    }
    throw std::invalid_argument("unknown combiner: " + std::string(name) +
                                " (expected exp or poly:K)");
}

std::string to_string(const WeightScheme& scheme) {
    if (scheme.family == WeightFamily::exponential) return "exp";
    return "poly:" + std::to_string(scheme.k);
}

std::vector<double> weights(const WeightScheme& scheme) {
    auto raw = raw_weights(scheme);
    const double total = plain_sum(raw);
    for (double& w : raw) w /= total;
    return raw;
}

double combine(std::span<const double> epsilons, const WeightScheme& scheme) {
    if (epsilons.size() < static_cast<std::size_t>(scheme.h_max) + 1)
        throw std::invalid_argument("profile too short");
    const auto raw = raw_weights(scheme);
    double dot = 0.0;
    for (std::uint32_t h = 0; h <= scheme.h_max; ++h) dot += raw[h] * epsilons[h];
    return dot / plain_sum(raw);
}

CombinerReport combine(const EpsilonProfile& profile, const WeightScheme& scheme) {
    if (scheme.h_max > profile.h_max) throw std::invalid_argument("profile too short");
    CombinerReport report;
    report.scheme = scheme;
    report.final_epsilon = combine(std::span<const double>(profile.epsilons), scheme);
    const auto normalized = weights(scheme);
    report.contributions.resize(scheme.h_max + 1);
    for (std::uint32_t h = 0; h <= scheme.h_max; ++h)
        report.contributions[h] = normalized[h] * profile.epsilons[h];
    return report;
}

CombinerFn make_combiner(const WeightScheme& scheme) {
    return [scheme](std::span<const double> epsilons) { return combine(epsilons, scheme); };
}

namespace {

std::mutex combiner_mutex;

std::vector<RegisteredCombiner>& combiner_list() {
    static std::vector<RegisteredCombiner> list = [] {
        std::vector<RegisteredCombiner> builtins;
        builtins.push_back({"exp",
                            [](std::uint32_t h_max) {
                                return make_combiner({WeightFamily::exponential, 1, h_max});
                            },
                            false});
        for (unsigned k = 1; k <= 3; ++k) {
            builtins.push_back({"poly:" + std::to_string(k),
                                [k](std::uint32_t h_max) {
                                    return make_combiner({WeightFamily::polynomial, k, h_max});
                                },
                                false});
        }
        // Truncated maximum, kept only as a diagnostic: overly sensitive to
        // poorly estimated high-h terms and not position-aware.
        builtins.push_back({"max",
                            [](std::uint32_t h_max) {
                                return CombinerFn([h_max](std::span<const double> eps) {
                                    double best = 0.0;
                                    for (std::uint32_t h = 0; h <= h_max; ++h)
                                        best = std::max(best, eps[h]);
                                    return best;
                                });
                            },
                            true});
        return builtins;
    }();
    return list;
}

}  // namespace

void register_combiner(RegisteredCombiner combiner) {
    std::lock_guard lock(combiner_mutex);
    auto& list = combiner_list();
    for (auto& existing : list) {
        if (existing.name == combiner.name) {
            existing = std::move(combiner);
            return;
        }
    }
    list.push_back(std::move(combiner));
}

const RegisteredCombiner* find_combiner(std::string_view name) {
    std::lock_guard lock(combiner_mutex);
    for (const auto& c : combiner_list())
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<RegisteredCombiner> registered_combiners() {
    std::lock_guard lock(combiner_mutex);
    return combiner_list();
}

namespace {

// splitmix64; decouples trial inputs from scheduling order.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct TrialRng {
    std::uint64_t state;
    double next() {  // uniform in [0, 1)
        state = mix64(state);
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    }
};

std::string format_profile(std::span<const double> p) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? ", " : "") << p[i];
    out << ")";
    return out.str();
}

}  // namespace

AxiomReport check_axioms(const CombinerFn& combiner, std::uint32_t h_max, std::uint64_t trials,
                         std::uint64_t seed) {
    AxiomReport report;
    report.trials = trials;
    const std::size_t dims = static_cast<std::size_t>(h_max) + 1;

    auto fail = [&](int axiom, std::vector<double> input, std::vector<double> mutated,
                    double before, double after, std::string detail) {
        report.axiom_ok[axiom - 1] = false;
        if (!report.first_failure) {
            report.first_failure = AxiomCounterexample{axiom, std::move(input), std::move(mutated),
                                                       before, after, std::move(detail)};
        }
    };

    // A1: the all-zero profile maps to zero.
    {
        const std::vector<double> zeros(dims, 0.0);
        const double value = combiner(zeros);
        if (std::fabs(value) > kAxiomTolerance)
            fail(1, zeros, {}, 0.0, value, "zero profile maps to " + std::to_string(value));
    }

    for (std::uint64_t trial = 0; trial < trials && !report.first_failure; ++trial) {
        TrialRng rng{mix64(seed ^ mix64(trial + 1))};
        std::vector<double> p(dims);
        for (double& x : p) x = 0.5 * rng.next();
        const double base = combiner(p);

        // A2: raising one coordinate cannot lower the output.
        {
            const std::size_t i = static_cast<std::size_t>(rng.next() * dims) % dims;
            const double room = 0.5 - p[i];
            if (room > 0.0) {
                const double delta = room * std::max(rng.next(), 1e-6);
                auto raised = p;
                raised[i] += delta;
                const double value = combiner(raised);
                if (value < base - kAxiomTolerance) {
                    std::ostringstream what;
                    what << "raising eps[" << i << "] by " << delta << " lowered the result: "
                         << base << " -> " << value << " on " << format_profile(p);
                    fail(2, p, raised, base, value, what.str());
                }
            }
        }

        // A3: moving mass toward a longer history cannot raise the output.
        if (dims >= 2 && !report.first_failure) {
            std::size_t i = static_cast<std::size_t>(rng.next() * (dims - 1)) % (dims - 1);
            std::size_t j = i + 1 + static_cast<std::size_t>(rng.next() * (dims - 1 - i)) % (dims - 1 - i);
            const double room = std::min(p[i], 0.5 - p[j]);
            if (room > 0.0) {
                const double delta = room * std::max(rng.next(), 1e-6);
                auto moved = p;
                moved[i] -= delta;
                moved[j] += delta;
                const double value = combiner(moved);
                if (value > base + kAxiomTolerance) {
                    std::ostringstream what;
                    what << "moving " << delta << " from eps[" << i << "] to eps[" << j
                         << "] raised the result: " << base << " -> " << value << " on "
                         << format_profile(p);
                    fail(3, p, moved, base, value, what.str());
                }
            }
        }

        // A4: constant profiles map to the constant.
        if (!report.first_failure) {
            const double a = 0.5 * std::max(rng.next(), 1e-9);
            const std::vector<double> constant(dims, a);
            const double value = combiner(constant);
            if (std::fabs(value - a) > kAxiomTolerance) {
                std::ostringstream what;
                what << "constant profile a=" << a << " maps to " << value;
                fail(4, constant, {}, a, value, what.str());
            }
        }
    }

    report.passed = report.axiom_ok[0] && report.axiom_ok[1] && report.axiom_ok[2] &&
                    report.axiom_ok[3];
    return report;
}

AxiomReport check_axioms(const WeightScheme& scheme, std::uint64_t trials, std::uint64_t seed) {
    return check_axioms(make_combiner(scheme), scheme.h_max, trials, seed);
}

}  // namespace svrand
