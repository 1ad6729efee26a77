#include "svrand/discretize.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace svrand {

Discretization parse_discretization(int id) {
    if (id < 1 || id > 5) throw std::invalid_argument("discretization must be in 1..5");
    return static_cast<Discretization>(id);
}

namespace {

// Neumaier compensated sum; keeps the mean thresholds stable for very long
// series where naive accumulation drifts.
double compensated_sum(const std::vector<double>& values, bool absolute) {
    double sum = 0.0;
    double compensation = 0.0;
    for (double v : values) {
        const double x = absolute ? std::fabs(v) : v;
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            compensation += (sum - t) + x;
        } else {
            compensation += (x - t) + sum;
        }
        sum = t;
    }
    return sum + compensation;
}

void require_nonempty(const RealSeries& d) {
    if (d.empty()) throw std::invalid_argument("empty series");
}

BitSequence threshold_bits(const RealSeries& d, double threshold, bool absolute) {
    BitSequence s;
    s.reserve(d.size());
    for (double v : d.values) {
        const double x = absolute ? std::fabs(v) : v;
        s.push_back(x >= threshold ? 0 : 1);
    }
    return s;
}

BitSequence step_bits(const RealSeries& d, bool absolute) {
    if (d.size() < 2)
        throw std::invalid_argument("insufficient data for pairwise discretization");
    BitSequence s;
    s.reserve(d.size() - 1);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        const double a = absolute ? std::fabs(d.values[i]) : d.values[i];
        const double b = absolute ? std::fabs(d.values[i + 1]) : d.values[i + 1];
        s.push_back(b >= a ? 0 : 1);
    }
    return s;
}

}  // namespace

double mean(const RealSeries& d) {
    require_nonempty(d);
    return compensated_sum(d.values, false) / static_cast<double>(d.size());
}

double mean_abs(const RealSeries& d) {
    require_nonempty(d);
    return compensated_sum(d.values, true) / static_cast<double>(d.size());
}

BitSequence discretize(const RealSeries& d, Discretization method) {
    require_nonempty(d);
    switch (method) {
        case Discretization::sign:
            return threshold_bits(d, 0.0, false);
        case Discretization::mean_threshold:
            return threshold_bits(d, mean(d), false);
        case Discretization::abs_mean_threshold:
            return threshold_bits(d, mean_abs(d), true);
        case Discretization::step:
            return step_bits(d, false);
        case Discretization::abs_step:
            return step_bits(d, true);
    }
    throw std::invalid_argument("unknown discretization");
}

namespace {

std::mutex registry_mutex;

std::map<std::string, DiscretizeFn, std::less<>>& registry() {
    static std::map<std::string, DiscretizeFn, std::less<>> map = [] {
        std::map<std::string, DiscretizeFn, std::less<>> m;
        for (int id = 1; id <= 5; ++id) {
            const auto method = static_cast<Discretization>(id);
            m.emplace(std::to_string(id),
                      [method](const RealSeries& d) { return discretize(d, method); });
        }
        return m;
    }();
    return map;
}

}  // namespace

void register_discretization(const std::string& name, DiscretizeFn fn) {
    std::lock_guard lock(registry_mutex);
    registry()[name] = std::move(fn);
}

const DiscretizeFn* find_discretization(std::string_view name) {
    std::lock_guard lock(registry_mutex);
    auto& map = registry();
    auto it = map.find(name);
    return it == map.end() ? nullptr : &it->second;
}

std::vector<std::string> discretization_names() {
    std::lock_guard lock(registry_mutex);
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

}  // namespace svrand
