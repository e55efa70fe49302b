#include "randkit/chacha20.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace randkit {

namespace {

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c, std::uint32_t& d) {
    a += b; d ^= a; d = std::rotl(d, 16);
    c += d; b ^= c; b = std::rotl(b, 12);
    a += b; d ^= a; d = std::rotl(d, 8);
    c += d; b ^= c; b = std::rotl(b, 7);
}

inline std::uint32_t load_le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void store_le32(std::uint8_t* p, std::uint32_t v) {
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    p[2] = static_cast<std::uint8_t>(v >> 16);
    p[3] = static_cast<std::uint8_t>(v >> 24);
}

std::array<std::uint8_t, 64> run_block(const std::array<std::uint32_t, 16>& init) {
    std::array<std::uint32_t, 16> x = init;
    for (int round = 0; round < 10; ++round) {
        quarter_round(x[0], x[4], x[8], x[12]);
        quarter_round(x[1], x[5], x[9], x[13]);
        quarter_round(x[2], x[6], x[10], x[14]);
        quarter_round(x[3], x[7], x[11], x[15]);
        quarter_round(x[0], x[5], x[10], x[15]);
        quarter_round(x[1], x[6], x[11], x[12]);
        quarter_round(x[2], x[7], x[8], x[13]);
        quarter_round(x[3], x[4], x[9], x[14]);
    }
    std::array<std::uint8_t, 64> out;
    for (int i = 0; i < 16; ++i) store_le32(out.data() + 4 * i, x[i] + init[i]);
    return out;
}

} // namespace

ChaCha20::ChaCha20(const Key256& key, const Nonce96& nonce, std::uint32_t counter)
    : base_counter_(counter) {
    state_[0] = 0x61707865;
    state_[1] = 0x3320646e;
    state_[2] = 0x79622d32;
    state_[3] = 0x6b206574;
    for (int i = 0; i < 8; ++i) state_[4 + i] = load_le32(key.data() + 4 * i);
    state_[12] = counter;
    for (int i = 0; i < 3; ++i) state_[13 + i] = load_le32(nonce.data() + 4 * i);
}

void ChaCha20::refill() {
    state_[12] = static_cast<std::uint32_t>(base_counter_ + block_index_);
    buffer_ = run_block(state_);
    ++block_index_;
    buffer_pos_ = 0;
}

void ChaCha20::keystream(std::span<std::uint8_t> out) {
    std::size_t done = 0;
    while (done < out.size()) {
        if (buffer_pos_ == 64) refill();
        const std::size_t take = std::min(out.size() - done, std::size_t{64} - buffer_pos_);
        std::memcpy(out.data() + done, buffer_.data() + buffer_pos_, take);
        buffer_pos_ += take;
        done += take;
    }
}

std::vector<std::uint8_t> ChaCha20::keystream(std::size_t nbytes) {
    std::vector<std::uint8_t> out(nbytes);
    keystream(std::span<std::uint8_t>(out));
    return out;
}

void ChaCha20::seek(std::uint64_t byte_offset) {
    block_index_ = byte_offset / 64;
    refill();
    buffer_pos_ = byte_offset % 64;
}

std::array<std::uint8_t, 64> ChaCha20::block(const Key256& key, const Nonce96& nonce,
                                             std::uint32_t counter) {
    ChaCha20 c(key, nonce, counter);
    c.refill();
    return c.buffer_;
}

std::vector<std::uint8_t> chacha20_stream(const Key256& key, std::size_t nbytes) {
    return ChaCha20(key).keystream(nbytes);
}

Key256 parse_key_hex(std::string_view hex) {
    if (hex.size() != 64)
        throw std::invalid_argument("seed must be 64 hex characters, got " +
                                    std::to_string(hex.size()));
    auto nibble = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
        throw std::invalid_argument(std::string("invalid hex character '") + c + "' in seed");
    };
    Key256 key{};
    for (std::size_t i = 0; i < 32; ++i)
        key[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    return key;
}

std::string key_to_hex(const Key256& key) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(64, '0');
    for (std::size_t i = 0; i < 32; ++i) {
        out[2 * i] = digits[key[i] >> 4];
        out[2 * i + 1] = digits[key[i] & 0xf];
    }
    return out;
}

} // namespace randkit
