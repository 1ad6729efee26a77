#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path test_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("svrand_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream buffer;
    buffer << f.rdbuf();
    return buffer.str();
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    f << content;
}

// `prefix` lets a test pipe data in or set environment variables.
RunResult run_cli(const std::string& args, const std::string& prefix = "") {
    const fs::path out_path = test_dir() / "stdout.txt";
    const fs::path err_path = test_dir() / "stderr.txt";
    const std::string cmd = prefix + std::string(SVRAND_CLI_PATH) + " " + args + " > " +
                            out_path.string() + " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

fs::path zeros_file() {
    static const fs::path p = [] {
        const fs::path path = test_dir() / "zeros.txt";
        spit(path, std::string(1024, '0'));
        return path;
    }();
    return p;
}

}  // namespace

TEST_CASE("estimate renders a human table") {
    const RunResult r = run_cli("estimate --format ascii01 --history-max 9 " +
                                zeros_file().string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("h  epsilon_h") != std::string::npos);
    CHECK(r.out.find("eps[exp] = 0.5") != std::string::npos);
    // The profile is trivial from h = 0, so exactly one row shows, then the
    // truncation marker.
    CHECK(r.out.find("   0  0.5\n   ...") != std::string::npos);
    CHECK(r.out.find("   1  ") == std::string::npos);
}

TEST_CASE("json report carries the full untruncated profile") {
    const RunResult r = run_cli(
        "estimate --format ascii01 --history-max 9 --combiner exp --combiner poly:1 --json " +
        zeros_file().string());
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["input"]["n"] == 1024);
    CHECK(doc["input"]["discretization"] == "binary");
    CHECK(doc["profile"]["first_trivial_h"] == 0);
    REQUIRE(doc["profile"]["epsilons"].size() == 10);
    for (const auto& e : doc["profile"]["epsilons"]) CHECK(e.get<double>() == 0.5);
    REQUIRE(doc["combined"].size() == 2);
    CHECK(doc["combined"][0]["scheme"] == "exp");
    CHECK(doc["combined"][0]["epsilon"].get<double>() == 0.5);
    CHECK(doc["combined"][1]["scheme"] == "poly:1");
    CHECK(doc["combined"][1]["epsilon"].get<double>() == 0.5);
}

TEST_CASE("csv report carries the full untruncated profile") {
    const RunResult r = run_cli("estimate --format ascii01 --history-max 9 --csv " +
                                zeros_file().string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("h,epsilon_h\n") != std::string::npos);
    int data_rows = 0;
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line != "h,epsilon_h") ++data_rows;
    CHECK(data_rows == 10);
    CHECK(r.out.find("# first_trivial_h=0") != std::string::npos);
    CHECK(r.out.find("# eps[exp]=0.5") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(run_cli("estimate --format ascii01 --discretization 2 " + zeros_file().string())
              .exit_code == 1);
    CHECK(run_cli("estimate --format ascii-reals " + zeros_file().string()).exit_code == 1);
    CHECK(run_cli("estimate --combiner bogus " + zeros_file().string()).exit_code == 1);
    CHECK(run_cli("estimate").exit_code == 1);           // missing input
    CHECK(run_cli("frobnicate").exit_code == 1);         // unknown subcommand
    CHECK(run_cli("estimate --nope x").exit_code == 1);  // unknown flag
    CHECK(run_cli("simulate --kind pattern --epsilon 0.1 --order 1 --n 10 --out -").exit_code ==
          1);  // pattern without a sign table
}

TEST_CASE("data errors exit with 2") {
    CHECK(run_cli("estimate " + (test_dir() / "missing.txt").string()).exit_code == 2);
    const fs::path bad = test_dir() / "bad.txt";
    spit(bad, "01x1");
    const RunResult r = run_cli("estimate --format ascii01 " + bad.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("invalid character at offset 2") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("estimate --help").exit_code == 0);
}

TEST_CASE("selftest is deterministic and passes") {
    const RunResult a = run_cli("selftest --seed 42");
    const RunResult b = run_cli("selftest --seed 42");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("[FAIL]") == std::string::npos);
    CHECK(a.out.find("all suites passed") != std::string::npos);
}

TEST_CASE("injected adversarial combiner is detected and fails the selftest") {
    const RunResult r = run_cli("selftest --seed 42 --inject-adversarial");
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("[FAIL] axioms adversarial") != std::string::npos);
    CHECK(r.out.find("raised the result") != std::string::npos);
}

TEST_CASE("simulate writes a deterministic file the estimator can read") {
    const fs::path a = test_dir() / "sim_a.bin";
    const fs::path b = test_dir() / "sim_b.bin";
    const std::string flags =
        "simulate --kind iid --epsilon 0.1 --n 65536 --seed 5 --format raw-bytes --out ";
    REQUIRE(run_cli(flags + a.string()).exit_code == 0);
    REQUIRE(run_cli(flags + b.string()).exit_code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(fs::file_size(a) == 65536 / 8);

    const RunResult est = run_cli("estimate --format raw-bytes --json " + a.string());
    REQUIRE(est.exit_code == 0);
    const auto doc = nlohmann::json::parse(est.out);
    const double eps0 = doc["profile"]["epsilons"][0].get<double>();
    CHECK(eps0 > 0.08);
    CHECK(eps0 < 0.12);
}

TEST_CASE("convert round trips between the bit formats") {
    const fs::path text = test_dir() / "rt.txt";
    const fs::path raw = test_dir() / "rt.bin";
    const fs::path back = test_dir() / "rt2.txt";
    spit(text, "0110100111001010");
    REQUIRE(run_cli("convert " + text.string() + " --from ascii01 --to raw-bytes --out " +
                    raw.string())
                .exit_code == 0);
    REQUIRE(run_cli("convert " + raw.string() + " --from raw-bytes --to ascii01 --out " +
                    back.string())
                .exit_code == 0);
    CHECK(slurp(back) == "0110100111001010");
}

TEST_CASE("convert discretizes real series, pairwise method drops one sample") {
    const fs::path reals = test_dir() / "vals.txt";
    spit(reals, "1\n2\n2\n1\n");
    const RunResult r =
        run_cli("convert " + reals.string() + " --from ascii-reals --discretization 4 --to ascii01");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out == "001");
}

TEST_CASE("zero-mean series estimates identically under methods 1 and 2") {
    const fs::path reals = test_dir() / "sym.txt";
    std::ostringstream content;
    std::mt19937_64 rng(8);
    for (int i = 0; i < 500; ++i) {
        const double x = 0.001 * static_cast<double>(1 + rng() % 100000);
        content << x << "\n" << -x << "\n";
    }
    spit(reals, content.str());
    const std::string base = "estimate --format ascii-reals --json " + reals.string();
    const RunResult m1 = run_cli(base + " --discretization 1");
    const RunResult m2 = run_cli(base + " --discretization 2");
    REQUIRE(m1.exit_code == 0);
    REQUIRE(m2.exit_code == 0);
    const auto d1 = nlohmann::json::parse(m1.out);
    const auto d2 = nlohmann::json::parse(m2.out);
    CHECK(d1["profile"]["epsilons"] == d2["profile"]["epsilons"]);
    CHECK(d1["combined"][0]["epsilon"] == d2["combined"][0]["epsilon"]);
}

TEST_CASE("line limits select a prefix of the input") {
    const fs::path reals = test_dir() / "ten.txt";
    spit(reals, "1\n-2\n3\n-4\n5\n-6\n7\n-8\n9\n-10\n");
    const RunResult r =
        run_cli("estimate --format ascii-reals --discretization 1 --lines 5 --history-max 1 "
                "--json " +
                reals.string());
    REQUIRE(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.out)["input"]["n"] == 5);

    const fs::path bits = test_dir() / "two_lines.txt";
    spit(bits, "0101\n0110\n");
    const RunResult one_line =
        run_cli("estimate --format ascii01 --lines 1 --history-max 1 --json " + bits.string());
    REQUIRE(one_line.exit_code == 0);
    CHECK(nlohmann::json::parse(one_line.out)["input"]["n"] == 4);
}

TEST_CASE("threads come from the environment unless overridden") {
    const std::string args = "estimate --format ascii01 --history-max 3 --json ";
    const RunResult from_env = run_cli(args + zeros_file().string(), "SVRAND_THREADS=3 ");
    REQUIRE(from_env.exit_code == 0);
    CHECK(nlohmann::json::parse(from_env.out)["estimator"]["threads"] == 3);

    const RunResult overridden =
        run_cli(args + "--threads 2 " + zeros_file().string(), "SVRAND_THREADS=3 ");
    REQUIRE(overridden.exit_code == 0);
    CHECK(nlohmann::json::parse(overridden.out)["estimator"]["threads"] == 2);
}

TEST_CASE("estimate reads from stdin") {
    const RunResult r =
        run_cli("estimate --format ascii01 --history-max 1 --json -", "printf 01010101 | ");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["input"]["path"] == "stdin");
    CHECK(doc["input"]["n"] == 8);
}

TEST_CASE("thread count does not change numeric output") {
    const fs::path sim = test_dir() / "threads.bin";
    REQUIRE(run_cli("simulate --kind iid --epsilon 0.05 --n 262144 --seed 9 --format raw-bytes "
                    "--out " +
                    sim.string())
                .exit_code == 0);
    const std::string base = "estimate --format raw-bytes --history-max 14 --csv " + sim.string();
    const RunResult serial = run_cli(base + " --threads 1");
    const RunResult parallel = run_cli(base + " --threads 4");
    REQUIRE(serial.exit_code == 0);
    REQUIRE(parallel.exit_code == 0);
    // CSV carries no timing, so identical numerics mean identical bytes,
    // except the threads metadata line itself.
    std::string a = serial.out, b = parallel.out;
    const auto strip = [](std::string& text) {
        const auto pos = text.find("# threads=");
        const auto end = text.find('\n', pos);
        text.erase(pos, end - pos + 1);
    };
    strip(a);
    strip(b);
    CHECK(a == b);
}
