#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>

#include "svrand/bit_sequence.hpp"

namespace svrand {

enum class BitFormat {
    ascii01,    // text of '0'/'1' characters, whitespace ignored
    raw_bytes,  // every byte contributes 8 bits, most-significant bit first
};

BitFormat parse_bit_format(std::string_view name);
std::string to_string(BitFormat format);

inline constexpr std::uint64_t kNoLineLimit = std::numeric_limits<std::uint64_t>::max();

// Reads one candidate number per line. Lines that do not parse as a finite
// number are counted in skipped_lines and dropped; blank lines are ignored.
// Throws std::runtime_error("no data") if nothing parses.
RealSeries read_ascii_reals(std::istream& in, std::uint64_t max_lines = kNoLineLimit);

// Decodes a bit stream in the given format. For ascii01 any character other
// than '0', '1' or whitespace raises an error naming its byte offset.
BitSequence read_bits(std::istream& in, BitFormat format);

// Inverse of read_bits. For raw_bytes the final partial byte is zero-padded
// in its low-order bits; the true bit length must travel out-of-band.
void write_bits(std::ostream& out, const BitSequence& s, BitFormat format);

}  // namespace svrand
