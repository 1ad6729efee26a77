#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "svrand/bit_sequence.hpp"

namespace svrand {

// Occurrence counts of all binary substrings of one fixed length. Windows
// overlap and the sequence is not wrapped, so counts sum to n - L + 1.
// Patterns are encoded as integers with the earliest bit most significant.
//
// Tables up to 2^dense_bits_cap entries live in a flat array; longer
// patterns fall back to a hash map keyed by the encoded window.
class CountTable {
public:
    CountTable(std::uint32_t length, bool dense);

    std::uint32_t length() const noexcept { return length_; }
    bool dense() const noexcept { return dense_; }

    std::uint64_t count(std::uint64_t pattern) const;
    std::uint64_t total() const noexcept { return total_; }

    void add(std::uint64_t pattern, std::uint64_t k = 1);
    void merge(const CountTable& other);

    // Visits every pattern with a nonzero count.
    template <typename Fn>
    void for_each(Fn&& fn) const {
        if (dense_) {
            for (std::uint64_t p = 0; p < dense_counts_.size(); ++p)
                if (dense_counts_[p] != 0) fn(p, dense_counts_[p]);
        } else {
            for (const auto& [p, c] : sparse_counts_) fn(p, c);
        }
    }

private:
    std::uint32_t length_;
    bool dense_;
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> dense_counts_;
    std::unordered_map<std::uint64_t, std::uint64_t> sparse_counts_;
};

struct CountOptions {
    int threads = 1;
    std::uint32_t dense_bits_cap = 26;  // dense storage while 2^L counters fit a desk
};

// Overlapping, non-cyclic substring counts for every pattern of the given
// length. Multi-threaded counting splits the start positions into chunks and
// sums per-thread tables, so the result is bit-exact equal to a serial run.
CountTable count_substrings(const BitSequence& s, std::uint32_t length,
                            const CountOptions& options = {});

enum class EstimatorVariant {
    raw_ratio,    // ratio of raw counts
    finite_size,  // ratio of per-window frequencies, normalizers n-h and n-h+1
};

// Maximal conditional deviation from 1/2 at history length h: the largest
// |count(history+bit)/count(history) - 1/2| over all h-bit histories and
// both continuations. A history that never occurs contributes zero; the
// empty history counts as n occurrences.
double epsilon_h(const BitSequence& s, std::uint32_t h,
                 EstimatorVariant variant = EstimatorVariant::raw_ratio,
                 const CountOptions& options = {});

struct EpsilonProfile {
    std::uint64_t n = 0;
    std::uint32_t h_max = 0;
    std::vector<double> epsilons;  // index h in [0, h_max]
    std::optional<std::uint32_t> first_trivial_h;  // smallest h with eps == 1/2
};

struct ProfileOptions {
    EstimatorVariant variant = EstimatorVariant::raw_ratio;
    int threads = 1;
    std::uint32_t dense_bits_cap = 26;
};

// All epsilon_h for h in [0, h_max], computed from a single counting pass:
// the longest table is counted once and shorter tables are derived by
// folding sibling counts plus the suffix correction. Equals per-h calls
// exactly.
EpsilonProfile profile(const BitSequence& s, std::uint32_t h_max,
                       const ProfileOptions& options = {});

// Largest history length that is meaningfully estimable: floor(log2 n) - 1.
std::uint32_t default_hmax(std::uint64_t n);

}  // namespace svrand
