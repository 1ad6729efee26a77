#include "svrand/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace svrand {

CountTable::CountTable(std::uint32_t length, bool dense) : length_(length), dense_(dense) {
    if (length == 0 || length > 63) throw std::invalid_argument("substring length must be in 1..63");
    if (dense_) dense_counts_.assign(std::uint64_t{1} << length, 0);
}

std::uint64_t CountTable::count(std::uint64_t pattern) const {
    if (dense_) return dense_counts_[pattern];
    auto it = sparse_counts_.find(pattern);
    return it == sparse_counts_.end() ? 0 : it->second;
}

void CountTable::add(std::uint64_t pattern, std::uint64_t k) {
    if (dense_) {
        dense_counts_[pattern] += k;
    } else {
        sparse_counts_[pattern] += k;
    }
    total_ += k;
}

void CountTable::merge(const CountTable& other) {
    other.for_each([this](std::uint64_t pattern, std::uint64_t c) { add(pattern, c); });
}

namespace {

constexpr std::uint64_t window_mask(std::uint32_t length) {
    return (std::uint64_t{1} << length) - 1;
}

// Counts windows whose start position lies in [lo, hi) into `sink`, which
// must provide hit(window). Rolling update, one table access per position.
template <typename Sink>
void count_range(const BitSequence& s, std::uint32_t length, std::uint64_t lo, std::uint64_t hi,
                 Sink&& sink) {
    const std::uint64_t mask = window_mask(length);
    std::uint64_t window = 0;
    for (std::uint64_t i = lo; i + 1 < lo + length; ++i) window = (window << 1) | s[i];
    for (std::uint64_t p = lo; p < hi; ++p) {
        window = ((window << 1) | s[p + length - 1]) & mask;
        sink.hit(window);
    }
}

struct DenseSink {
    std::vector<std::uint64_t>& table;
    void hit(std::uint64_t w) { ++table[w]; }
};

struct SparseSink {
    std::unordered_map<std::uint64_t, std::uint64_t>& table;
    void hit(std::uint64_t w) { ++table[w]; }
};

int clamp_threads(int threads, std::uint64_t positions) {
    if (threads < 1) threads = 1;
    const auto cap = static_cast<std::uint64_t>(threads);
    return static_cast<int>(std::min<std::uint64_t>(cap, std::max<std::uint64_t>(positions, 1)));
}

// Splits the start positions into per-thread chunks, counts independently and
// sums. Integer merges keep the result identical to a serial run.
std::vector<std::uint64_t> count_dense(const BitSequence& s, std::uint32_t length, int threads) {
    const std::uint64_t positions = s.size() - length + 1;
    std::vector<std::uint64_t> table(std::uint64_t{1} << length, 0);
    threads = clamp_threads(threads, positions);
    if (threads == 1) {
        DenseSink sink{table};
        count_range(s, length, 0, positions, sink);
        return table;
    }
    std::vector<std::vector<std::uint64_t>> partial(
        threads, std::vector<std::uint64_t>(std::uint64_t{1} << length, 0));
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        const std::uint64_t lo = positions * t / threads;
        const std::uint64_t hi = positions * (t + 1) / threads;
        workers.emplace_back([&, t, lo, hi] {
            DenseSink sink{partial[t]};
            count_range(s, length, lo, hi, sink);
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& part : partial)
        for (std::uint64_t i = 0; i < table.size(); ++i) table[i] += part[i];
    return table;
}

std::unordered_map<std::uint64_t, std::uint64_t> count_sparse(const BitSequence& s,
                                                              std::uint32_t length, int threads) {
    const std::uint64_t positions = s.size() - length + 1;
    std::unordered_map<std::uint64_t, std::uint64_t> table;
    threads = clamp_threads(threads, positions);
    if (threads == 1) {
        SparseSink sink{table};
        count_range(s, length, 0, positions, sink);
        return table;
    }
    std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> partial(threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        const std::uint64_t lo = positions * t / threads;
        const std::uint64_t hi = positions * (t + 1) / threads;
        workers.emplace_back([&, t, lo, hi] {
            SparseSink sink{partial[t]};
            count_range(s, length, lo, hi, sink);
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& part : partial)
        for (const auto& [pattern, c] : part) table[pattern] += c;
    return table;
}

// Deviation of one continuation count against its history count. Shared by
// the per-h estimator and the folded profile so both produce bitwise equal
// doubles.
inline double raw_dev(std::uint64_t c, std::uint64_t cw) {
    return std::fabs(static_cast<double>(c) / static_cast<double>(cw) - 0.5);
}

// Finite-size form: per-window frequencies with normalizers n-h and n-h+1.
// The ratio can exceed 1 on short sequences; clamp so epsilons stay in
// [0, 1/2].
inline double finite_size_dev(std::uint64_t c, std::uint64_t cw, std::uint64_t n,
                              std::uint32_t h) {
    const double num = static_cast<double>(c) / static_cast<double>(n - h);
    const double den = static_cast<double>(cw) / static_cast<double>(n - h + 1);
    return std::min(std::fabs(num / den - 0.5), 0.5);
}

inline double history_dev(std::uint64_t c0, std::uint64_t c1, std::uint64_t cw,
                          EstimatorVariant variant, std::uint64_t n, std::uint32_t h) {
    if (cw == 0) return 0.0;
    if (variant == EstimatorVariant::raw_ratio)
        return std::max(raw_dev(c0, cw), raw_dev(c1, cw));
    return std::max(finite_size_dev(c0, cw, n, h), finite_size_dev(c1, cw, n, h));
}

// h = 0: the empty history occurs n times by convention, for both variants.
inline double zero_history_eps(std::uint64_t zeros, std::uint64_t ones, std::uint64_t n) {
    return std::max(raw_dev(zeros, n), raw_dev(ones, n));
}

// Encoded suffixes s[n-h..n) for h in [1, h_top]; suffix_of[h] is the one
// pattern whose history count exceeds the sum of its continuation counts.
std::vector<std::uint64_t> suffix_codes(const BitSequence& s, std::uint32_t h_top) {
    const std::uint64_t n = s.size();
    std::vector<std::uint64_t> suffix(h_top + 1, 0);
    for (std::uint32_t h = 1; h <= h_top; ++h)
        suffix[h] = suffix[h - 1] | (static_cast<std::uint64_t>(s[n - h]) << (h - 1));
    return suffix;
}

// Folds a dense table from level L down to 1, writing eps[L-1]..eps[0].
// In place: count_{L-1}(w) = T[2w] + T[2w+1] + [w is the length-(L-1) suffix].
void fold_dense(std::vector<std::uint64_t>& table, std::uint32_t level,
                const std::vector<std::uint64_t>& suffix, std::uint64_t n,
                EstimatorVariant variant, std::vector<double>& eps) {
    for (std::uint32_t L = level; L >= 2; --L) {
        const std::uint32_t h = L - 1;
        const std::uint64_t half = std::uint64_t{1} << h;
        const std::uint64_t tail = suffix[h];
        double best = 0.0;
        for (std::uint64_t w = 0; w < half; ++w) {
            const std::uint64_t c0 = table[2 * w];
            const std::uint64_t c1 = table[2 * w + 1];
            const std::uint64_t cw = c0 + c1 + (w == tail ? 1 : 0);
            if (cw != 0) best = std::max(best, history_dev(c0, c1, cw, variant, n, h));
            table[w] = cw;
        }
        eps[h] = best;
    }
    eps[0] = zero_history_eps(table[0], table[1], n);
}

}  // namespace

CountTable count_substrings(const BitSequence& s, std::uint32_t length,
                            const CountOptions& options) {
    if (length == 0) throw std::invalid_argument("substring length must be positive");
    if (length > s.size()) throw std::invalid_argument("window longer than sequence");
    if (length > 63) throw std::invalid_argument("substring length must be in 1..63");
    const bool dense = length <= options.dense_bits_cap;
    CountTable result(length, dense);
    if (dense) {
        auto table = count_dense(s, length, options.threads);
        for (std::uint64_t p = 0; p < table.size(); ++p)
            if (table[p] != 0) result.add(p, table[p]);
    } else {
        for (const auto& [pattern, c] : count_sparse(s, length, options.threads))
            result.add(pattern, c);
    }
    return result;
}

double epsilon_h(const BitSequence& s, std::uint32_t h, EstimatorVariant variant,
                 const CountOptions& options) {
    const std::uint64_t n = s.size();
    if (h >= n) throw std::invalid_argument("history longer than sequence");
    if (h == 0) {
        const CountTable bits = count_substrings(s, 1, options);
        return zero_history_eps(bits.count(0), bits.count(1), n);
    }
    const CountTable continuations = count_substrings(s, h + 1, options);
    const CountTable histories = count_substrings(s, h, options);
    double best = 0.0;
    histories.for_each([&](std::uint64_t w, std::uint64_t cw) {
        const std::uint64_t c0 = continuations.count(2 * w);
        const std::uint64_t c1 = continuations.count(2 * w + 1);
        best = std::max(best, history_dev(c0, c1, cw, variant, n, h));
    });
    return best;
}

EpsilonProfile profile(const BitSequence& s, std::uint32_t h_max, const ProfileOptions& options) {
    const std::uint64_t n = s.size();
    if (n == 0) throw std::invalid_argument("empty sequence");
    if (static_cast<std::uint64_t>(h_max) + 1 > n)
        throw std::invalid_argument("history longer than sequence");
    if (h_max > 62) throw std::invalid_argument("history length must be at most 62");

    const std::uint32_t top = h_max + 1;
    const std::uint32_t cap = std::max<std::uint32_t>(1, options.dense_bits_cap);
    const auto suffix = suffix_codes(s, h_max);

    EpsilonProfile result;
    result.n = n;
    result.h_max = h_max;
    result.epsilons.assign(h_max + 1, 0.0);

    if (top <= cap) {
        auto table = count_dense(s, top, options.threads);
        fold_dense(table, top, suffix, n, options.variant, result.epsilons);
    } else {
        // Sparse levels down to the dense cap, then a dense finish.
        auto current = count_sparse(s, top, options.threads);
        std::uint32_t level = top;
        while (level > cap) {
            const std::uint32_t h = level - 1;
            std::unordered_map<std::uint64_t, std::uint64_t> next;
            next.reserve(current.size());
            for (const auto& [pattern, c] : current) next[pattern >> 1] += c;
            next[suffix[h]] += 1;
            double best = 0.0;
            for (const auto& [w, cw] : next) {
                const auto find = [&](std::uint64_t p) {
                    auto it = current.find(p);
                    return it == current.end() ? std::uint64_t{0} : it->second;
                };
                best = std::max(best,
                                history_dev(find(2 * w), find(2 * w + 1), cw, options.variant, n, h));
            }
            result.epsilons[h] = best;
            current = std::move(next);
            --level;
        }
        std::vector<std::uint64_t> table(std::uint64_t{1} << level, 0);
        for (const auto& [pattern, c] : current) table[pattern] = c;
        fold_dense(table, level, suffix, n, options.variant, result.epsilons);
    }

    for (std::uint32_t h = 0; h <= h_max; ++h) {
        if (result.epsilons[h] == 0.5) {
            result.first_trivial_h = h;
            break;
        }
    }
    return result;
}

std::uint32_t default_hmax(std::uint64_t n) {
    if (n < 2) throw std::invalid_argument("sequence too short for history estimation");
    const auto log2n = static_cast<std::uint32_t>(std::bit_width(n) - 1);
    return log2n - 1;
}

}  // namespace svrand
