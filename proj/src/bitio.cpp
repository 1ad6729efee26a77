#include "svrand/bitio.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace svrand {

BitFormat parse_bit_format(std::string_view name) {
    if (name == "ascii01") return BitFormat::ascii01;
    if (name == "raw-bytes") return BitFormat::raw_bytes;
    throw std::invalid_argument("unknown bit format: " + std::string(name));
}

std::string to_string(BitFormat format) {
    return format == BitFormat::ascii01 ? "ascii01" : "raw-bytes";
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// A line parses iff the whole trimmed token is a finite number.
bool parse_finite(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) return false;
    if (!std::isfinite(value)) return false;
    out = value;
    return true;
}

}  // namespace

RealSeries read_ascii_reals(std::istream& in, std::uint64_t max_lines) {
    RealSeries series;
    std::string line;
    std::uint64_t lines_read = 0;
    while (lines_read < max_lines && std::getline(in, line)) {
        ++lines_read;
        const std::string_view token = trim(line);
        if (token.empty()) continue;
        double value = 0.0;
        if (parse_finite(token, value)) {
            series.values.push_back(value);
        } else {
            ++series.skipped_lines;
        }
    }
    if (series.values.empty()) throw std::runtime_error("no data");
    return series;
}

BitSequence read_bits(std::istream& in, BitFormat format) {
    BitSequence s;
    if (format == BitFormat::ascii01) {
        std::uint64_t offset = 0;
        char c = 0;
        while (in.get(c)) {
            if (c == '0' || c == '1') {
                s.push_back(c - '0');
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                throw std::runtime_error("invalid character at offset " + std::to_string(offset));
            }
            ++offset;
        }
    } else {
        char byte = 0;
        while (in.get(byte)) {
            const auto b = static_cast<unsigned char>(byte);
            for (int k = 7; k >= 0; --k) s.push_back((b >> k) & 1);
        }
    }
    if (s.empty()) throw std::runtime_error("no data");
    return s;
}

void write_bits(std::ostream& out, const BitSequence& s, BitFormat format) {
    if (s.empty()) throw std::invalid_argument("no data");
    if (format == BitFormat::ascii01) {
        std::string buffer;
        buffer.reserve(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) buffer.push_back(static_cast<char>('0' + s[i]));
        out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    } else {
        const std::size_t bytes = (s.size() + 7) / 8;
        std::string buffer(bytes, '\0');
        const auto& words = s.words();
        for (std::size_t j = 0; j < bytes; ++j) {
            const std::uint64_t word = words[j >> 3];
            buffer[j] = static_cast<char>((word >> (56 - 8 * (j & 7))) & 0xFF);
        }
        out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    }
}

}  // namespace svrand
