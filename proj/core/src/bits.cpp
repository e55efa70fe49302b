#include "randkit/bits.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace randkit {

namespace {

constexpr char kPackedMagic[4] = {'R', 'B', 'I', 'T'};

[[noreturn]] void throw_io(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

} // namespace

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] > 1)
            throw std::invalid_argument("BitString: element at index " + std::to_string(i) +
                                        " is not 0 or 1");
    }
}

BitString BitString::from_string(std::string_view s) {
    std::vector<std::uint8_t> bits;
    bits.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw std::invalid_argument("BitString: malformed character at offset " +
                                        std::to_string(i));
        bits.push_back(static_cast<std::uint8_t>(s[i] - '0'));
    }
    return BitString(std::move(bits));
}

void BitString::push_back(std::uint8_t bit) {
    if (bit > 1) throw std::invalid_argument("BitString: bit must be 0 or 1");
    bits_.push_back(bit);
}

std::size_t BitString::count_ones() const noexcept {
    return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0});
}

std::string BitString::to_string() const {
    std::string out(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out[i] = '1';
    return out;
}

BitString BitString::complement() const {
    std::vector<std::uint8_t> out(bits_.size());
    std::transform(bits_.begin(), bits_.end(), out.begin(),
                   [](std::uint8_t b) { return static_cast<std::uint8_t>(1 - b); });
    return BitString(std::move(out));
}

std::vector<std::uint8_t> encode_bits(const BitString& s, BitFileFormat format) {
    std::vector<std::uint8_t> out;
    if (format == BitFileFormat::ascii) {
        out.reserve(s.size());
        for (std::uint8_t b : s) out.push_back(b ? '1' : '0');
        return out;
    }
    const std::uint64_t n = s.size();
    out.reserve(12 + (n + 7) / 8);
    out.insert(out.end(), std::begin(kPackedMagic), std::end(kPackedMagic));
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
    std::uint8_t acc = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        acc = static_cast<std::uint8_t>(acc | (s[i] << (7 - i % 8)));
        if (i % 8 == 7) {
            out.push_back(acc);
            acc = 0;
        }
    }
    if (n % 8 != 0) out.push_back(acc);
    return out;
}

BitString decode_bits(std::span<const std::uint8_t> bytes, BitFileFormat format) {
    if (format == BitFileFormat::ascii) {
        std::vector<std::uint8_t> bits;
        bits.reserve(bytes.size());
        for (std::size_t i = 0; i < bytes.size(); ++i) {
            const char c = static_cast<char>(bytes[i]);
            if (c == '\n' || c == '\r') continue;
            if (c != '0' && c != '1')
                throw std::invalid_argument("malformed character at offset " + std::to_string(i));
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return BitString(std::move(bits));
    }
    if (bytes.size() < 12 || !std::equal(std::begin(kPackedMagic), std::end(kPackedMagic),
                                         bytes.begin(), [](char m, std::uint8_t b) {
                                             return static_cast<std::uint8_t>(m) == b;
                                         }))
        throw std::invalid_argument("packed bit file: missing RBIT magic");
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(bytes[4 + i]) << (8 * i);
    const std::uint64_t payload = (n + 7) / 8;
    if (bytes.size() != 12 + payload)
        throw std::invalid_argument("packed bit file: payload holds " +
                                    std::to_string(bytes.size() - 12) + " bytes, header needs " +
                                    std::to_string(payload));
    std::vector<std::uint8_t> bits;
    bits.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        bits.push_back((bytes[12 + i / 8] >> (7 - i % 8)) & 1u);
    return BitString(std::move(bits));
}

BitString load_bits(const std::filesystem::path& path, BitFileFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io(path, "cannot open for reading");
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
    try {
        return decode_bits(bytes, format);
    } catch (const std::invalid_argument& e) {
        throw_io(path, e.what());
    }
}

void store_bits(const BitString& s, const std::filesystem::path& path, BitFileFormat format) {
    const auto bytes = encode_bits(s, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw_io(path, "cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw_io(path, "write failed");
}

double relative_frequency(const BitString& s) {
    if (s.empty()) throw std::invalid_argument("relative_frequency: empty bit string");
    return static_cast<double>(s.count_ones()) / static_cast<double>(s.size());
}

BitString interleave(const BitString& a, const BitString& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("interleave: length mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    std::vector<std::uint8_t> out;
    out.reserve(2 * a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.push_back(a[i]);
        out.push_back(b[i]);
    }
    return BitString(std::move(out));
}

std::pair<BitString, BitString> deinterleave(const BitString& c) {
    if (c.size() % 2 != 0)
        throw std::invalid_argument("deinterleave: odd-length input");
    BitString a, b;
    a.reserve(c.size() / 2);
    b.reserve(c.size() / 2);
    for (std::size_t i = 0; i < c.size(); i += 2) {
        a.push_back(c[i]);
        b.push_back(c[i + 1]);
    }
    return {std::move(a), std::move(b)};
}

} // namespace randkit
