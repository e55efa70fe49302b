#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "randkit/chacha20.hpp"

using namespace randkit;

namespace {

std::vector<std::uint8_t> from_hex(std::string_view hex) {
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i + 1 < hex.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(std::stoul(std::string(hex.substr(i, 2)),
                                                           nullptr, 16)));
    return out;
}

Key256 counting_key() {
    Key256 key{};
    for (std::size_t i = 0; i < key.size(); ++i) key[i] = static_cast<std::uint8_t>(i);
    return key;
}

} // namespace

TEST_CASE("published block vector (key 00..1f, nonce ..09....4a.., counter 1)") {
    Nonce96 nonce{};
    nonce[3] = 0x09;
    nonce[7] = 0x4a;
    const auto block = ChaCha20::block(counting_key(), nonce, 1);
    const auto expected = from_hex(
        "10f1e7e4d13b5915500fdd1fa32071c4c7d1f4c733c068030422aa9ac3d46c4e"
        "d2826446079faa0914c2d705d98b02a2b5129cd1de164eb9cbd083e8a2503c4e");
    CHECK(std::vector<std::uint8_t>(block.begin(), block.end()) == expected);
}

TEST_CASE("published two-block encryption vector") {
    // Keystream XOR known plaintext must give the published ciphertext.
    const std::string plaintext =
        "Ladies and Gentlemen of the class of '99: If I could offer you "
        "only one tip for the future, sunscreen would be it.";
    const auto expected = from_hex(
        "6e2e359a2568f98041ba0728dd0d6981e97e7aec1d4360c20a27afccfd9fae0b"
        "f91b65c5524733ab8f593dabcd62b3571639d624e65152ab8f530c359f0861d8"
        "07ca0dbf500d6a6156a38e088a22b65e52bc514d16ccf806818ce91ab7793736"
        "5af90bbf74a35be6b40b8eedf2785e42874d");

    Nonce96 nonce{};
    nonce[7] = 0x4a;
    ChaCha20 stream(counting_key(), nonce, 1);
    std::vector<std::uint8_t> ct(plaintext.size());
    stream.keystream(ct);
    for (std::size_t i = 0; i < ct.size(); ++i)
        ct[i] ^= static_cast<std::uint8_t>(plaintext[i]);
    CHECK(ct == expected);
}

TEST_CASE("production convention pins the stream to the key alone") {
    // Expected bytes computed with an independent implementation using
    // nonce 0 and initial counter 1.
    CHECK(chacha20_stream(Key256{}, 32) ==
          from_hex("9f07e7be5551387a98ba977c732d080dcb0f29a048e3656912c6533e32ee7aed"));
    CHECK(chacha20_stream(counting_key(), 32) ==
          from_hex("18b84231ade6a6d113615c61af434e27f8b1f3f5e1ad5b5cecf8fc122a35755c"));
}

TEST_CASE("streaming in odd chunks equals one shot") {
    const auto whole = chacha20_stream(counting_key(), 1000);
    ChaCha20 stream(counting_key());
    std::vector<std::uint8_t> pieced;
    for (std::size_t chunk : {1u, 63u, 64u, 65u, 7u, 128u, 500u, 172u}) {
        const auto part = stream.keystream(chunk);
        pieced.insert(pieced.end(), part.begin(), part.end());
    }
    CHECK(pieced == whole);
}

TEST_CASE("seek lands on the right byte") {
    const auto whole = chacha20_stream(counting_key(), 4096);
    ChaCha20 stream(counting_key());
    for (std::size_t offset : {0u, 1u, 63u, 64u, 65u, 127u, 128u, 1000u, 4000u}) {
        stream.seek(offset);
        const auto got = stream.keystream(std::size_t{16});
        CHECK(std::vector<std::uint8_t>(whole.begin() + static_cast<long>(offset),
                                        whole.begin() + static_cast<long>(offset) + 16) == got);
    }
    // Seek far past the first counter wraparound region still works.
    stream.seek(std::uint64_t{1} << 32);
    CHECK(stream.keystream(std::size_t{1}).size() == 1);
}

TEST_CASE("key hex round trip and validation") {
    const std::string hex = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";
    CHECK(parse_key_hex(hex) == counting_key());
    CHECK(key_to_hex(counting_key()) == hex);
    CHECK_THROWS_AS(parse_key_hex("0011"), std::invalid_argument);
    CHECK_THROWS_AS(parse_key_hex(std::string(64, 'g')), std::invalid_argument);
    CHECK_THROWS_AS(parse_key_hex(hex + "00"), std::invalid_argument);
}

TEST_CASE("zero-length requests are fine") {
    ChaCha20 stream(Key256{});
    CHECK(stream.keystream(std::size_t{0}).empty());
    CHECK(chacha20_stream(Key256{}, 0).empty());
}

TEST_CASE("distinct keys give distinct streams") {
    Key256 a{};
    Key256 b{};
    b[31] = 1;
    CHECK(chacha20_stream(a, 64) != chacha20_stream(b, 64));
}
