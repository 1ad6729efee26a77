#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svrand/bit_sequence.hpp"

namespace svrand {

enum class SourceKind {
    iid_bias,      // every bit independently 1 with probability 1/2 + epsilon
    pattern_bias,  // bias sign depends on the previous `order` bits
};

// A synthetic source whose conditional probabilities all lie within
// [1/2 - epsilon, 1/2 + epsilon], saturating the bound, so its true
// parameter is known exactly.
struct SourceSpec {
    SourceKind kind = SourceKind::iid_bias;
    double epsilon = 0.0;               // in [0, 1/2]
    std::uint32_t order = 0;            // pattern history length m
    std::vector<int> sign_table;        // 2^order entries of +1/-1 (pattern only)
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
};

// Throws std::invalid_argument with a description on a malformed source.
void validate(const SourceSpec& spec);

// Deterministic: the same SourceSpec always yields the same bits. For
// pattern_bias the first `order` bits are drawn fair; afterwards bit i is 1
// with probability 1/2 + sign_table[previous order bits] * epsilon, history
// encoded with the earliest bit most significant.
BitSequence generate(const SourceSpec& spec);

// The smallest epsilon bounding every conditional deviation; both kinds
// saturate their bound by construction.
double true_epsilon(const SourceSpec& spec);

// Parses a hexadecimal mask into a +1/-1 table of size 2^order: bit j of the
// mask (LSB = history pattern 0) set means sign +1 for that history.
std::vector<int> sign_table_from_hex(const std::string& hex, std::uint32_t order);

}  // namespace svrand
