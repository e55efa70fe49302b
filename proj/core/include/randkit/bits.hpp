#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace randkit {

/// A finite sequence of bits, the input type of every analysis in this
/// library. Immutable use is the norm: build it once, then share freely
/// across threads.
class BitString {
public:
    BitString() = default;

    /// Takes ownership of a 0/1 byte vector. Throws std::invalid_argument
    /// if any element is neither 0 nor 1.
    explicit BitString(std::vector<std::uint8_t> bits);

    /// Parses a string of '0'/'1' characters, e.g. "0110".
    static BitString from_string(std::string_view s);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }

    void push_back(std::uint8_t bit);
    void reserve(std::size_t n) { bits_.reserve(n); }

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    auto begin() const noexcept { return bits_.begin(); }
    auto end() const noexcept { return bits_.end(); }

    std::size_t count_ones() const noexcept;
    std::string to_string() const;

    /// Bitwise complement (0 <-> 1).
    BitString complement() const;

    bool operator==(const BitString&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// On-disk encodings for bit strings.
///
///  - ascii:  characters '0'/'1'; '\n' and '\r' are ignored on load, any
///            other character is an error.
///  - packed: magic "RBIT", 64-bit little-endian length N, then
///            ceil(N/8) payload bytes, MSB-first within each byte,
///            zero padding in the last byte.
enum class BitFileFormat { ascii, packed };

BitString load_bits(const std::filesystem::path& path, BitFileFormat format);
void store_bits(const BitString& s, const std::filesystem::path& path, BitFileFormat format);

/// In-memory codecs behind load_bits/store_bits, usable on buffers.
std::vector<std::uint8_t> encode_bits(const BitString& s, BitFileFormat format);
BitString decode_bits(std::span<const std::uint8_t> bytes, BitFileFormat format);

/// Fraction of ones, (count of ones)/N. Throws on the empty string.
double relative_frequency(const BitString& s);

/// c = (a1, b1, a2, b2, ..., aN, bN). Both inputs must have equal length.
BitString interleave(const BitString& a, const BitString& b);

/// Inverse of interleave: even positions (0-based) to first, odd to second.
std::pair<BitString, BitString> deinterleave(const BitString& c);

/// Identity and first-order statistics of one analyzed string.
struct StringMeta {
    std::string source_id;
    std::size_t n = 0;
    double relative_frequency = 0.0;
};

} // namespace randkit
