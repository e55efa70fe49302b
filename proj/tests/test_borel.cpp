#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "randkit/borel.hpp"
#include "randkit/sources.hpp"

using namespace randkit;

namespace {

BitString random_bits(std::mt19937_64& rng, std::size_t n) {
    BitString s;
    s.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<std::uint8_t>(rng() & 1));
    return s;
}

// Reference measure computed with no shared code: substring blocks and a
// plain loop over block values.
double naive_borel(const BitString& s) {
    const double log2n = std::log2(static_cast<double>(s.size()));
    const auto max_m = static_cast<unsigned>(std::floor(std::log2(log2n)));
    double worst = 0.0;
    for (unsigned m = 1; m <= max_m; ++m) {
        const std::size_t total = s.size() / m;
        std::vector<std::size_t> counts(std::size_t{1} << m, 0);
        for (std::size_t b = 0; b < total; ++b) {
            std::size_t v = 0;
            for (unsigned j = 0; j < m; ++j) v = (v << 1) | s[b * m + j];
            ++counts[v];
        }
        for (std::size_t v = 0; v < counts.size(); ++v) {
            const double dev = std::abs(static_cast<double>(counts[v]) / double(total) -
                                        1.0 / double(std::size_t{1} << m));
            worst = std::max(worst, dev);
        }
    }
    return worst * log2n;
}

} // namespace

TEST_CASE("block census worked examples") {
    const BitString s = BitString::from_string("01101100");
    const BlockCensus c1 = block_counts(s, 1);
    CHECK(c1.total_blocks == 8);
    CHECK(c1.counts == std::vector<std::size_t>{4, 4});

    const BlockCensus c2 = block_counts(s, 2);
    CHECK(c2.total_blocks == 4);
    // Blocks 01 10 11 00 -> one of each value.
    CHECK(c2.counts == std::vector<std::size_t>{1, 1, 1, 1});

    const BlockCensus c3 = block_counts(s, 3);
    CHECK(c3.total_blocks == 2);
    // Blocks 011 011; trailing 2 bits dropped.
    std::vector<std::size_t> expected3(8, 0);
    expected3[3] = 2;
    CHECK(c3.counts == expected3);

    CHECK_THROWS_AS(block_counts(s, 0), std::invalid_argument);
    CHECK_THROWS_AS(block_counts(s, 9), std::invalid_argument);
}

TEST_CASE("m range grows double-logarithmically") {
    CHECK(borel_max_block_len(4) == 1);
    CHECK(borel_max_block_len(15) == 1);
    CHECK(borel_max_block_len(16) == 2);
    CHECK(borel_max_block_len(20000) == 3);
    CHECK(borel_max_block_len(65536) == 4);
    CHECK_THROWS_AS(borel_max_block_len(3), std::invalid_argument);
}

TEST_CASE("alternating and constant strings at N = 16 score B = 3") {
    // Alternating: m=1 balanced, but the m=2 census is all 01 blocks, so
    // the worst deviation is 3/4 and B = 3/4 * log2(16) = 3.
    BitString alternating;
    for (int i = 0; i < 16; ++i) alternating.push_back(static_cast<std::uint8_t>(i & 1));
    CHECK(borel_measure(alternating) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_FALSE(is_borel_normal(alternating));

    // All zeros: the m=1 deviation is already 1/2, and m=2 reaches 3/4.
    BitString zeros;
    for (int i = 0; i < 16; ++i) zeros.push_back(0);
    CHECK(borel_measure(zeros) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_FALSE(is_borel_normal(zeros));
}

TEST_CASE("m = 1 deviation is the frequency imbalance") {
    // For N < 16 only m = 1 enters, so B = |freq - 1/2| log2 N exactly.
    const BitString s = BitString::from_string("011011011011");
    const double expected = std::abs(relative_frequency(s) - 0.5) * std::log2(12.0);
    CHECK(borel_measure(s) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("measure is invariant under complement at power-of-two lengths") {
    // Complementing maps each block value to its bitwise complement, a
    // permutation of the census, and block boundaries stay aligned.
    std::mt19937_64 rng(31);
    for (std::size_t n : {64u, 1024u, 16384u}) {
        const BitString s = random_bits(rng, n);
        CHECK(borel_measure(s) == doctest::Approx(borel_measure(s.complement())).epsilon(1e-12));
    }
}

TEST_CASE("measure matches the reference implementation") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 4 + rng() % 30000;
        const BitString s = random_bits(rng, n);
        REQUIRE(borel_measure(s) == doctest::Approx(naive_borel(s)).epsilon(1e-12));
    }
}

TEST_CASE("normality iff every deviation is within 1/log2 N") {
    std::mt19937_64 rng(123);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 16 + rng() % 5000;
        const BitString s = random_bits(rng, n);
        const double log2n = std::log2(static_cast<double>(n));
        bool all_within = true;
        for (unsigned m = 1; m <= borel_max_block_len(n); ++m) {
            const BlockCensus census = block_counts(s, m);
            for (std::size_t v = 0; v < census.counts.size(); ++v) {
                const double dev =
                    std::abs(double(census.counts[v]) / double(census.total_blocks) -
                             1.0 / double(std::size_t{1} << m));
                if (dev > 1.0 / log2n) all_within = false;
            }
        }
        REQUIRE(is_borel_normal(s) == all_within);
    }
}

TEST_CASE("typical pseudorandom strings are normal, constants are not") {
    const Key256 key{};
    CHECK(is_borel_normal(chacha20_bits(key, 20000)));
    BitString zeros;
    for (int i = 0; i < 20000; ++i) zeros.push_back(0);
    CHECK_FALSE(is_borel_normal(zeros));
    CHECK_THROWS_AS(borel_measure(BitString::from_string("011")), std::invalid_argument);
}
