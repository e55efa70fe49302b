#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace randkit {

using Key256 = std::array<std::uint8_t, 32>;
using Nonce96 = std::array<std::uint8_t, 12>;

/// ChaCha20 keystream generator (RFC 8439).
///
/// The library-wide convention fixes the nonce to all zeros and the
/// initial block counter to 1, so a stream is a pure function of the
/// 32-byte key. The full (key, nonce, counter) constructor exists to hit
/// the published test vectors.
class ChaCha20 {
public:
    explicit ChaCha20(const Key256& key, const Nonce96& nonce = {}, std::uint32_t counter = 1);

    /// Fills `out` with the next keystream bytes.
    void keystream(std::span<std::uint8_t> out);

    std::vector<std::uint8_t> keystream(std::size_t nbytes);

    /// Repositions to the given byte offset of the stream (offset 0 is the
    /// first byte produced by the initial counter).
    void seek(std::uint64_t byte_offset);

    /// The raw block function: one 64-byte block for an explicit counter.
    static std::array<std::uint8_t, 64> block(const Key256& key, const Nonce96& nonce,
                                              std::uint32_t counter);

private:
    void refill();

    std::array<std::uint32_t, 16> state_{};
    std::uint32_t base_counter_ = 1;
    std::uint64_t block_index_ = 0; // blocks consumed since base counter
    std::array<std::uint8_t, 64> buffer_{};
    std::size_t buffer_pos_ = 64;   // 64 = empty
};

/// Whole keystream with the production convention (zero nonce, counter 1).
std::vector<std::uint8_t> chacha20_stream(const Key256& key, std::size_t nbytes);

/// Parses a 64-hex-character key, as accepted on the command line.
Key256 parse_key_hex(std::string_view hex);
std::string key_to_hex(const Key256& key);

} // namespace randkit
