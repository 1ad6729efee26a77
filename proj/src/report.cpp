#include "svrand/report.hpp"

#include <iomanip>
#include <limits>
#include <ostream>

#include "json.hpp"

namespace svrand {

namespace {

const char* variant_name(EstimatorVariant variant) {
    return variant == EstimatorVariant::raw_ratio ? "raw-ratio" : "finite-size";
}

// Rows past the first trivial 1/2 carry no information for a reader; the
// machine formats keep them.
std::uint32_t last_displayed_h(const EpsilonProfile& profile) {
    return profile.first_trivial_h ? *profile.first_trivial_h : profile.h_max;
}

}  // namespace

void render_table(std::ostream& out, const Report& report) {
    out << "input:      " << report.input.path << " (" << report.input.format;
    if (report.input.discretization)
        out << ", discretization " << *report.input.discretization;
    out << ")\n";
    out << "bits:       " << report.input.n;
    if (report.input.skipped_lines)
        out << " (" << report.input.skipped_lines << " lines skipped)";
    out << "\n";
    out << "estimator:  " << variant_name(report.variant) << ", h_max "
        << report.profile.h_max << ", threads " << report.threads << "\n\n";

    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(12);

    out << "   h  epsilon_h\n";
    const std::uint32_t stop = last_displayed_h(report.profile);
    for (std::uint32_t h = 0; h <= stop; ++h)
        out << std::setw(4) << h << "  " << report.profile.epsilons[h] << "\n";
    if (stop < report.profile.h_max) out << "   ...\n";
    for (const auto& c : report.combiners)
        out << "eps[" << to_string(c.scheme) << "] = " << c.final_epsilon << "\n";

    out.flags(flags);
    out.precision(precision);
    out << "\nduration:   " << report.duration_seconds << " s\n";
}

void render_csv(std::ostream& out, const Report& report) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);

    out << "# tool=" << kToolName << " " << kToolVersion << "\n";
    out << "# input=" << report.input.path << "\n";
    out << "# format=" << report.input.format << "\n";
    if (report.input.discretization)
        out << "# discretization=" << *report.input.discretization << "\n";
    out << "# n=" << report.input.n << "\n";
    out << "# skipped_lines=" << report.input.skipped_lines << "\n";
    out << "# variant=" << variant_name(report.variant) << "\n";
    out << "# threads=" << report.threads << "\n";
    out << "# first_trivial_h=";
    if (report.profile.first_trivial_h)
        out << *report.profile.first_trivial_h;
    else
        out << "none";
    out << "\n";
    for (const auto& c : report.combiners)
        out << "# eps[" << to_string(c.scheme) << "]=" << c.final_epsilon << "\n";

    out << "h,epsilon_h\n";
    for (std::uint32_t h = 0; h <= report.profile.h_max; ++h)
        out << h << "," << report.profile.epsilons[h] << "\n";

    out.flags(flags);
    out.precision(precision);
}

void render_json(std::ostream& out, const Report& report) {
    nlohmann::json doc;
    doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    doc["input"] = {{"path", report.input.path},
                    {"format", report.input.format},
                    {"n", report.input.n},
                    {"skipped_lines", report.input.skipped_lines}};
    if (report.input.discretization)
        doc["input"]["discretization"] = *report.input.discretization;
    else
        doc["input"]["discretization"] = "binary";
    doc["estimator"] = {{"variant", variant_name(report.variant)},
                        {"threads", report.threads},
                        {"h_max", report.profile.h_max}};
    doc["profile"]["epsilons"] = report.profile.epsilons;
    if (report.profile.first_trivial_h)
        doc["profile"]["first_trivial_h"] = *report.profile.first_trivial_h;
    else
        doc["profile"]["first_trivial_h"] = nullptr;
    doc["combined"] = nlohmann::json::array();
    for (const auto& c : report.combiners) {
        doc["combined"].push_back({{"scheme", to_string(c.scheme)},
                                   {"epsilon", c.final_epsilon},
                                   {"contributions", c.contributions}});
    }
    doc["duration_seconds"] = report.duration_seconds;
    out << doc.dump(2) << "\n";
}

}  // namespace svrand
