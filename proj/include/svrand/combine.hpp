#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svrand/estimator.hpp"

namespace svrand {

enum class WeightFamily { exponential, polynomial };

// A normalized, non-increasing weight family over history lengths 0..h_max.
// exponential: w_h proportional to 2^-h; polynomial: w_h proportional to
// (h+1)^-k.
struct WeightScheme {
    WeightFamily family = WeightFamily::exponential;
    unsigned k = 1;  // polynomial order, ignored for exponential
    std::uint32_t h_max = 0;
};

WeightScheme parse_weight_scheme(std::string_view name, std::uint32_t h_max);
std::string to_string(const WeightScheme& scheme);

// Normalized weights: positive, non-increasing, summing to 1. The
// exponential normalizer is the exact geometric sum 2 - 2^-h_max.
std::vector<double> weights(const WeightScheme& scheme);

struct CombinerReport {
    WeightScheme scheme;
    double final_epsilon = 0.0;
    std::vector<double> contributions;  // w_h * eps_h per history length
};

// final_epsilon = sum_h w_h * eps_h over h in [0, scheme.h_max].
CombinerReport combine(const EpsilonProfile& profile, const WeightScheme& scheme);
double combine(std::span<const double> epsilons, const WeightScheme& scheme);

// Any map from a (h_max+1)-long profile to a single epsilon can stand in
// for the built-in weighted averages; the axiom harness below checks it.
using CombinerFn = std::function<double(std::span<const double>)>;
CombinerFn make_combiner(const WeightScheme& scheme);

struct RegisteredCombiner {
    std::string name;
    std::function<CombinerFn(std::uint32_t h_max)> make;
    bool diagnostic = false;  // excluded from default reports and selftest
};

void register_combiner(RegisteredCombiner combiner);
const RegisteredCombiner* find_combiner(std::string_view name);
std::vector<RegisteredCombiner> registered_combiners();

struct AxiomCounterexample {
    int axiom = 0;  // 1..4
    std::vector<double> input;
    std::vector<double> mutated;  // empty for axioms 1 and 4
    double value_before = 0.0;
    double value_after = 0.0;
    std::string detail;
};

struct AxiomReport {
    bool passed = false;
    std::array<bool, 4> axiom_ok{true, true, true, true};
    std::uint64_t trials = 0;
    std::optional<AxiomCounterexample> first_failure;
};

// Property check of the four combiner axioms over seeded random profiles in
// [0, 1/2]^(h_max+1): zero maps to zero, coordinatewise monotonicity,
// mass moved to a later coordinate never increases the output, constants map
// to themselves. Trial inputs derive from seed + trial index alone, so the
// report is deterministic. Failures are reported, never thrown.
AxiomReport check_axioms(const CombinerFn& combiner, std::uint32_t h_max,
                         std::uint64_t trials, std::uint64_t seed);
AxiomReport check_axioms(const WeightScheme& scheme, std::uint64_t trials,
                         std::uint64_t seed);

inline constexpr double kAxiomTolerance = 1e-12;

}  // namespace svrand
