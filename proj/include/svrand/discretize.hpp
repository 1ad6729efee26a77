#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "svrand/bit_sequence.hpp"

namespace svrand {

// The five built-in real-to-bit mappings. Every rule maps equality to bit 0.
enum class Discretization : int {
    sign = 1,                // 0 iff d_i >= 0
    mean_threshold = 2,      // 0 iff d_i >= mean(d)
    abs_mean_threshold = 3,  // 0 iff |d_i| >= mean(|d|)
    step = 4,                // 0 iff d_{i+1} >= d_i, emits n-1 bits
    abs_step = 5,            // 0 iff |d_{i+1}| >= |d_i|, emits n-1 bits
};

Discretization parse_discretization(int id);

// Compensated-summation means; stable up to very long series.
double mean(const RealSeries& d);
double mean_abs(const RealSeries& d);

BitSequence discretize(const RealSeries& d, Discretization method);

// Extension point: user-defined named mappings from a RealSeries to bits.
// The built-in methods are preregistered under names "1".."5".
using DiscretizeFn = std::function<BitSequence(const RealSeries&)>;
void register_discretization(const std::string& name, DiscretizeFn fn);
const DiscretizeFn* find_discretization(std::string_view name);
std::vector<std::string> discretization_names();

}  // namespace svrand
