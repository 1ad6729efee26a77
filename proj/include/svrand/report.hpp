#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "svrand/combine.hpp"
#include "svrand/estimator.hpp"

namespace svrand {

inline constexpr const char* kToolName = "svrand";
inline constexpr const char* kToolVersion = "0.1.0";

struct InputMeta {
    std::string path;
    std::string format;
    std::uint64_t n = 0;
    std::uint64_t skipped_lines = 0;
    std::optional<int> discretization;  // unset for already-binary input
};

struct Report {
    InputMeta input;
    EstimatorVariant variant = EstimatorVariant::raw_ratio;
    int threads = 1;
    EpsilonProfile profile;
    std::vector<CombinerReport> combiners;
    double duration_seconds = 0.0;
};

// Human table truncates at the first trivial row, mirroring how per-history
// results are usually tabulated; CSV and JSON always carry the full profile.
void render_table(std::ostream& out, const Report& report);
void render_csv(std::ostream& out, const Report& report);
void render_json(std::ostream& out, const Report& report);

}  // namespace svrand
