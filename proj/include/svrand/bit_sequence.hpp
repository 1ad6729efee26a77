#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace svrand {

// Packed bit string. Index 0 is the earliest sample. Bits are stored
// most-significant-first within each 64-bit word, so the byte image of the
// word array (big-endian per word) is exactly the raw-bytes file layout.
class BitSequence {
public:
    BitSequence() = default;

    static BitSequence from_bits(std::initializer_list<int> bits) {
        BitSequence s;
        s.reserve(bits.size());
        for (int b : bits) s.push_back(b);
        return s;
    }

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    // Unchecked access, hot path for counting.
    int operator[](std::size_t i) const noexcept {
        return static_cast<int>((words_[i >> 6] >> (63 - (i & 63))) & 1u);
    }

    int at(std::size_t i) const {
        if (i >= size_) throw std::out_of_range("bit index out of range");
        return (*this)[i];
    }

    void push_back(int bit) {
        if ((size_ & 63) == 0) words_.push_back(0);
        words_.back() |= static_cast<std::uint64_t>(bit & 1) << (63 - (size_ & 63));
        ++size_;
    }

    void reserve(std::size_t bits) { words_.reserve((bits + 63) / 64); }

    // Keep only the first `new_size` bits. Pad bits stay zero so that
    // equality remains a plain word comparison.
    void truncate(std::size_t new_size) {
        if (new_size >= size_) return;
        size_ = new_size;
        words_.resize((size_ + 63) / 64);
        const std::size_t r = size_ & 63;
        if (r != 0) words_.back() &= ~std::uint64_t{0} << (64 - r);
    }

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    bool operator==(const BitSequence&) const = default;

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

// Finite real-valued series as parsed from an input file. `skipped_lines`
// records how many non-numeric (or non-finite) lines were dropped.
struct RealSeries {
    std::vector<double> values;
    std::size_t skipped_lines = 0;

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
};

}  // namespace svrand
