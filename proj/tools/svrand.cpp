// svrand: estimates how far a bit stream strays from a fair coin by bounding
// the conditional bias of each bit given its history, then collapsing the
// per-history-length profile into a single epsilon via weighted averaging.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svrand/bitio.hpp"
#include "svrand/combine.hpp"
#include "svrand/discretize.hpp"
#include "svrand/estimator.hpp"
#include "svrand/report.hpp"
#include "svrand/svsim.hpp"

namespace {

using namespace svrand;

// Exit contract: 0 success, 1 usage, 2 data, 3 selftest failure.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<long> peak_rss_kb() {
    std::ifstream status("/proc/self/status");
    std::string line;
    while (std::getline(status, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            long kb = 0;
            if (std::sscanf(line.c_str(), "VmHWM: %ld", &kb) == 1) return kb;
        }
    }
    return std::nullopt;
}

// --lines means: lines of text for the ascii formats, bits (bytes * 8) for
// raw input. Applied while reading so huge files are never fully loaded.
BitSequence read_bits_limited(std::istream& in, BitFormat format, std::uint64_t limit) {
    if (limit == kNoLineLimit) return read_bits(in, format);
    if (format == BitFormat::ascii01) {
        std::string buffer, line;
        std::uint64_t taken = 0;
        while (taken < limit && std::getline(in, line)) {
            buffer += line;
            buffer += '\n';
            ++taken;
        }
        std::istringstream window(buffer);
        return read_bits(window, format);
    }
    const std::uint64_t bytes = (limit + 7) / 8;
    std::string buffer(bytes, '\0');
    in.read(buffer.data(), static_cast<std::streamsize>(bytes));
    buffer.resize(static_cast<std::size_t>(in.gcount()));
    std::istringstream window(buffer);
    BitSequence bits = read_bits(window, format);
    if (bits.size() > limit) bits.truncate(limit);
    return bits;
}

struct EstimateArgs {
    std::string input;
    std::string format = "ascii01";
    int discretization = 0;  // 0 = not requested
    std::vector<std::string> combiners;
    std::uint32_t history_max = 0;  // 0 = derive from n
    bool history_max_set = false;
    std::uint64_t lines = kNoLineLimit;
    bool finite_size = false;
    int threads = 1;
    std::uint32_t dense_cap = 26;
    bool csv = false;
    bool json = false;
};

int run_estimate(const EstimateArgs& args) {
    // Validate flag combinations before touching the input.
    std::vector<std::string> combiner_names = args.combiners;
    if (combiner_names.empty()) combiner_names.push_back("exp");
    for (const auto& name : combiner_names) {
        try {
            parse_weight_scheme(name, 0);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    const bool reals = args.format == "ascii-reals";
    if (reals && args.discretization == 0)
        throw UsageError("--format ascii-reals requires --discretization");
    if (!reals && args.discretization != 0)
        throw UsageError("--discretization only applies to --format ascii-reals");

    const auto started = std::chrono::steady_clock::now();
    std::ifstream file;
    std::istream* in = &std::cin;
    if (args.input != "-") {
        file.open(args.input, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + args.input);
        in = &file;
    }

    Report report;
    report.input.path = args.input == "-" ? "stdin" : args.input;
    report.input.format = args.format;
    BitSequence bits;
    if (reals) {
        const Discretization method = parse_discretization(args.discretization);
        const RealSeries series = read_ascii_reals(*in, args.lines);
        bits = discretize(series, method);
        report.input.discretization = args.discretization;
        report.input.skipped_lines = series.skipped_lines;
    } else {
        bits = read_bits_limited(*in, parse_bit_format(args.format), args.lines);
    }
    report.input.n = bits.size();

    const std::uint32_t h_max = args.history_max_set ? args.history_max : default_hmax(bits.size());
    ProfileOptions options;
    options.variant = args.finite_size ? EstimatorVariant::finite_size : EstimatorVariant::raw_ratio;
    options.threads = args.threads;
    options.dense_bits_cap = args.dense_cap;
    report.variant = options.variant;
    report.threads = args.threads;
    report.profile = profile(bits, h_max, options);
    for (const auto& name : combiner_names)
        report.combiners.push_back(combine(report.profile, parse_weight_scheme(name, h_max)));

    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (args.csv)
        render_csv(std::cout, report);
    else if (args.json)
        render_json(std::cout, report);
    else
        render_table(std::cout, report);

    std::cerr << "info: " << bits.size() << " bits in " << report.duration_seconds << " s";
    if (auto rss = peak_rss_kb()) std::cerr << ", peak rss " << *rss << " kB";
    std::cerr << "\n";
    return 0;
}

struct SimulateArgs {
    std::string kind = "iid";
    double epsilon = 0.0;
    std::uint32_t order = 0;
    std::string sign_table;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "ascii01";
};

int run_simulate(const SimulateArgs& args) {
    SourceSpec spec;
    spec.epsilon = args.epsilon;
    spec.n = args.n;
    spec.seed = args.seed;
    try {
        if (args.kind == "pattern") {
            spec.kind = SourceKind::pattern_bias;
            spec.order = args.order;
            if (args.sign_table.empty())
                throw std::invalid_argument("--kind pattern requires --sign-table");
            spec.sign_table = sign_table_from_hex(args.sign_table, args.order);
        } else if (!args.sign_table.empty() || args.order != 0) {
            throw std::invalid_argument("--order/--sign-table only apply to --kind pattern");
        }
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const BitSequence bits = generate(spec);
    const BitFormat format = parse_bit_format(args.format);
    if (args.out == "-") {
        write_bits(std::cout, bits, format);
    } else {
        std::ofstream out(args.out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + args.out);
        write_bits(out, bits, format);
        if (!out) throw std::runtime_error("write failed: " + args.out);
    }
    std::cerr << "info: wrote " << bits.size() << " bits (true epsilon " << true_epsilon(spec)
              << ") to " << (args.out == "-" ? "stdout" : args.out) << "\n";
    return 0;
}

struct ConvertArgs {
    std::string input;
    std::string from = "ascii01";
    std::string to = "ascii01";
    int discretization = 0;
    std::uint64_t lines = kNoLineLimit;
    std::string out = "-";
};

int run_convert(const ConvertArgs& args) {
    const bool reals = args.from == "ascii-reals";
    if (reals && args.discretization == 0)
        throw UsageError("--from ascii-reals requires --discretization");
    if (!reals && args.discretization != 0)
        throw UsageError("--discretization only applies to --from ascii-reals");

    std::ifstream file;
    std::istream* in = &std::cin;
    if (args.input != "-") {
        file.open(args.input, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + args.input);
        in = &file;
    }

    BitSequence bits;
    if (reals) {
        const Discretization method = parse_discretization(args.discretization);
        bits = discretize(read_ascii_reals(*in, args.lines), method);
    } else {
        bits = read_bits_limited(*in, parse_bit_format(args.from), args.lines);
    }

    const BitFormat target = parse_bit_format(args.to);
    if (args.out == "-") {
        write_bits(std::cout, bits, target);
    } else {
        std::ofstream out(args.out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + args.out);
        write_bits(out, bits, target);
        if (!out) throw std::runtime_error("write failed: " + args.out);
    }
    std::cerr << "info: converted " << bits.size() << " bits\n";
    return 0;
}

// ---- selftest ----------------------------------------------------------

// Position-by-position reference counter, deliberately unrelated to the
// rolling-window implementation it cross-checks.
std::uint64_t naive_count(const BitSequence& s, std::uint64_t pattern, std::uint32_t length) {
    if (length > s.size()) return 0;
    std::uint64_t hits = 0;
    for (std::size_t start = 0; start + length <= s.size(); ++start) {
        std::uint64_t window = 0;
        for (std::uint32_t j = 0; j < length; ++j)
            window = (window << 1) | s[start + j];
        if (window == pattern) ++hits;
    }
    return hits;
}

BitSequence random_bits(std::mt19937_64& rng, std::size_t n) {
    BitSequence s;
    s.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<int>(rng() & 1));
    return s;
}

int run_selftest(std::uint64_t seed, std::uint64_t trials, bool inject_adversarial) {
    bool all_passed = true;
    auto suite = [&](const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!ok && !detail.empty()) std::cout << ": " << detail;
        std::cout << "\n";
        all_passed = all_passed && ok;
    };

    for (const char* name : {"exp", "poly:1", "poly:2", "poly:3"}) {
        const auto report = check_axioms(parse_weight_scheme(name, 8), trials, seed);
        suite(std::string("axioms ") + name + " (h_max 8, " + std::to_string(trials) + " trials)",
              report.passed, report.first_failure ? report.first_failure->detail : "");
    }

    {
        std::mt19937_64 rng(seed);
        bool ok = true;
        std::string detail;
        for (int round = 0; round < 20 && ok; ++round) {
            const std::uint32_t length = 1 + static_cast<std::uint32_t>(rng() % 8);
            const std::size_t n = length + rng() % 512;
            const BitSequence s = random_bits(rng, n);
            for (std::uint32_t cap : {26u, 1u}) {  // dense table, then forced sparse
                const CountTable table = count_substrings(s, length, {1, cap});
                for (std::uint64_t p = 0; p < (std::uint64_t{1} << length); ++p) {
                    if (table.count(p) != naive_count(s, p, length)) {
                        ok = false;
                        detail = "mismatch at n=" + std::to_string(n) +
                                 " L=" + std::to_string(length) + " pattern=" + std::to_string(p);
                        break;
                    }
                }
                if (ok && table.total() != s.size() - length + 1) {
                    ok = false;
                    detail = "total mass wrong at L=" + std::to_string(length);
                }
                if (!ok) break;
            }
        }
        suite("counting matches reference scanner (20 seeded rounds)", ok, detail);
    }

    {
        std::mt19937_64 rng(seed ^ 0x5eed);
        bool ok = true;
        std::string detail;
        for (int round = 0; round < 10 && ok; ++round) {
            const std::size_t n = 64 + rng() % 512;
            const BitSequence s = random_bits(rng, n);
            const std::uint32_t h_max = 6;
            const EpsilonProfile full = profile(s, h_max);
            for (std::uint32_t h = 0; h <= h_max; ++h) {
                if (epsilon_h(s, h) != full.epsilons[h]) {
                    ok = false;
                    detail = "profile[" + std::to_string(h) + "] differs from direct computation";
                    break;
                }
            }
        }
        suite("profile equals per-h estimates (10 seeded rounds)", ok, detail);
    }

    {
        std::mt19937_64 rng(seed ^ 0xb17);
        bool ok = true;
        std::string detail;
        for (int round = 0; round < 10 && ok; ++round) {
            const std::size_t n = 8 * (1 + rng() % 64);
            const BitSequence s = random_bits(rng, n);
            std::stringstream ascii, raw, back;
            write_bits(ascii, s, BitFormat::ascii01);
            if (read_bits(ascii, BitFormat::ascii01) != s) {
                ok = false;
                detail = "ascii01 round trip changed the bits";
                break;
            }
            write_bits(raw, s, BitFormat::raw_bytes);
            const BitSequence via_raw = read_bits(raw, BitFormat::raw_bytes);
            if (via_raw != s) {
                ok = false;
                detail = "raw-bytes round trip changed the bits";
            }
        }
        suite("ascii01/raw-bytes round trips (10 seeded rounds)", ok, detail);
    }

    {
        SourceSpec spec;
        spec.kind = SourceKind::iid_bias;
        spec.epsilon = 0.2;
        spec.n = 4096;
        spec.seed = seed;
        const bool ok = generate(spec) == generate(spec);
        suite("simulator is deterministic in the seed", ok);
    }

    if (inject_adversarial) {
        // Weights that grow with h: deliberately violates the rule that mass
        // moved to a longer history must not raise the output.
        const std::uint32_t h_max = 8;
        CombinerFn increasing = [h_max](std::span<const double> eps) {
            double dot = 0.0, total = 0.0;
            for (std::uint32_t h = 0; h <= h_max; ++h) {
                const double w = static_cast<double>(h + 1);
                dot += w * eps[h];
                total += w;
            }
            return dot / total;
        };
        const auto report = check_axioms(increasing, h_max, trials, seed);
        suite("axioms adversarial increasing-weights fixture", report.passed,
              report.first_failure ? report.first_failure->detail : "");
    }

    std::cout << (all_passed ? "selftest: all suites passed" : "selftest: FAILURES detected")
              << "\n";
    return all_passed ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounds the conditional bias of a bit stream given its history"};
    app.require_subcommand(1);

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Estimate the bias profile of an input");
    estimate->add_option("input", est.input, "input file, or - for stdin")->required();
    estimate->add_option("--format", est.format, "input format")
        ->check(CLI::IsMember({"ascii01", "raw-bytes", "ascii-reals"}));
    estimate->add_option("--discretization", est.discretization, "method 1-5 for ascii-reals")
        ->check(CLI::Range(1, 5));
    estimate->add_option("--combiner", est.combiners, "exp or poly:K (repeatable)");
    estimate->add_option("--history-max", est.history_max, "largest history length")
        ->check(CLI::Range(0, 62));
    estimate->add_option("--lines", est.lines,
                         "input records to take: lines (ascii), bits (raw)");
    estimate->add_flag("--finite-size", est.finite_size,
                       "use per-window frequencies instead of raw count ratios");
    estimate->add_option("--threads", est.threads, "counting threads")
        ->envname("SVRAND_THREADS")
        ->check(CLI::Range(1, 256));
    estimate->add_option("--dense-cap", est.dense_cap,
                         "largest table width kept as a dense array");
    auto* csv_flag = estimate->add_flag("--csv", est.csv, "emit CSV");
    estimate->add_flag("--json", est.json, "emit JSON")->excludes(csv_flag);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Generate bits with a known bias");
    simulate->add_option("--kind", sim.kind, "source kind")
        ->check(CLI::IsMember({"iid", "pattern"}));
    simulate->add_option("--epsilon", sim.epsilon, "bias magnitude in [0, 0.5]")->required();
    simulate->add_option("--order", sim.order, "pattern history length m");
    simulate->add_option("--sign-table", sim.sign_table,
                         "hex mask, bit j set = +1 for history pattern j");
    simulate->add_option("--n", sim.n, "number of bits")->required();
    simulate->add_option("--seed", sim.seed, "generator seed");
    simulate->add_option("--out", sim.out, "output file, or - for stdout")->required();
    simulate->add_option("--format", sim.format, "output format")
        ->check(CLI::IsMember({"ascii01", "raw-bytes"}));

    std::uint64_t selftest_seed = 1;
    std::uint64_t selftest_trials = 200;
    bool inject_adversarial = false;
    auto* selftest = app.add_subcommand("selftest", "Run the built-in consistency suites");
    selftest->add_option("--seed", selftest_seed, "seed for all generated cases");
    selftest->add_option("--trials", selftest_trials, "profiles per axiom check");
    selftest->add_flag("--inject-adversarial", inject_adversarial,
                       "also check a combiner built to fail, proving detection");

    ConvertArgs conv;
    auto* convert = app.add_subcommand("convert", "Rewrite bits between formats");
    convert->add_option("input", conv.input, "input file, or - for stdin")->required();
    convert->add_option("--from", conv.from, "input format")
        ->check(CLI::IsMember({"ascii01", "raw-bytes", "ascii-reals"}));
    convert->add_option("--to", conv.to, "output format")
        ->check(CLI::IsMember({"ascii01", "raw-bytes"}));
    convert->add_option("--discretization", conv.discretization, "method 1-5 for ascii-reals")
        ->check(CLI::Range(1, 5));
    convert->add_option("--lines", conv.lines, "input records to take");
    convert->add_option("--out", conv.out, "output file, or - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        est.history_max_set = estimate->count("--history-max") > 0;
        if (app.got_subcommand(estimate)) return run_estimate(est);
        if (app.got_subcommand(simulate)) return run_simulate(sim);
        if (app.got_subcommand(selftest))
            return run_selftest(selftest_seed, selftest_trials, inject_adversarial);
        if (app.got_subcommand(convert)) return run_convert(conv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
