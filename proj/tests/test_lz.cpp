#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "randkit/lz.hpp"
#include "randkit/sources.hpp"

using namespace randkit;

namespace {

// Reference parser: re-derives each phrase by linear search over the set
// of phrases emitted so far. O(N^2) but independent of the trie walk.
std::vector<std::string> naive_parse(const std::string& s, bool* trailing_duplicate = nullptr) {
    std::vector<std::string> phrases;
    std::set<std::string> seen;
    std::size_t i = 0;
    if (trailing_duplicate) *trailing_duplicate = false;
    while (i < s.size()) {
        std::size_t len = 1;
        while (i + len <= s.size() && seen.count(s.substr(i, len))) ++len;
        if (i + len > s.size()) {
            // Remainder matches an earlier phrase: counted as a final phrase.
            phrases.push_back(s.substr(i));
            if (trailing_duplicate) *trailing_duplicate = true;
            break;
        }
        phrases.push_back(s.substr(i, len));
        seen.insert(phrases.back());
        i += len;
    }
    return phrases;
}

std::vector<std::string> phrases_of(const BitString& bits, const Parsing& parsing) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t end : parsing.phrase_ends) {
        std::string phrase;
        for (std::size_t i = start; i < end; ++i) phrase += static_cast<char>('0' + bits[i]);
        out.push_back(std::move(phrase));
        start = end;
    }
    return out;
}

BitString random_bits(std::mt19937_64& rng, std::size_t n) {
    BitString s;
    s.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<std::uint8_t>(rng() & 1));
    return s;
}

BitString from_int(std::uint64_t value, std::size_t n) {
    BitString s;
    for (std::size_t i = 0; i < n; ++i)
        s.push_back(static_cast<std::uint8_t>((value >> (n - 1 - i)) & 1));
    return s;
}

} // namespace

TEST_CASE("worked parses") {
    // The ten-bit prefix of the exhaustive string splits into the six
    // shortest distinct phrases.
    const Parsing p = lz_parse(BitString::from_string("0100011011"));
    CHECK(phrases_of(BitString::from_string("0100011011"), p) ==
          std::vector<std::string>{"0", "1", "00", "01", "10", "11"});
    CHECK(p.phrase_count() == 6);
    CHECK_FALSE(p.final_phrase_duplicate);

    // Trailing remainder equal to an earlier phrase still counts.
    const BitString s = BitString::from_string("0100");
    const Parsing q = lz_parse(s);
    CHECK(phrases_of(s, q) == std::vector<std::string>{"0", "1", "00"});
    CHECK_FALSE(q.final_phrase_duplicate);

    const BitString t = BitString::from_string("010");
    const Parsing r = lz_parse(t);
    CHECK(phrases_of(t, r) == std::vector<std::string>{"0", "1", "0"});
    CHECK(r.final_phrase_duplicate);

    CHECK(lz_parse(BitString::from_string("0")).phrase_count() == 1);
    CHECK(lz_parse(BitString::from_string("0000")).phrase_count() == 3);
    CHECK_THROWS_AS(lz_parse(BitString{}), std::invalid_argument);
}

TEST_CASE("trie parse equals the reference parser on every short string") {
    for (std::size_t n = 1; n <= 16; ++n) {
        for (std::uint64_t v = 0; v < (1ull << n); ++v) {
            const BitString bits = from_int(v, n);
            const Parsing p = lz_parse(bits);
            bool dup = false;
            const auto expected = naive_parse(bits.to_string(), &dup);
            REQUIRE(phrases_of(bits, p) == expected);
            REQUIRE(p.final_phrase_duplicate == dup);
        }
    }
}

TEST_CASE("trie parse equals the reference parser on random long strings") {
    std::mt19937_64 rng(999);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + rng() % 2000;
        const BitString bits = random_bits(rng, n);
        const Parsing p = lz_parse(bits);
        bool dup = false;
        const auto expected = naive_parse(bits.to_string(), &dup);
        REQUIRE(phrases_of(bits, p) == expected);
        REQUIRE(p.final_phrase_duplicate == dup);
    }
}

TEST_CASE("parsing invariants: reconstruction and distinctness") {
    std::mt19937_64 rng(1234);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng() % 300;
        const BitString bits = random_bits(rng, n);
        const Parsing p = lz_parse(bits);
        REQUIRE(p.phrase_ends.back() == n);
        const auto phrases = phrases_of(bits, p);

        // Concatenation restores the input.
        std::string cat;
        for (const auto& ph : phrases) cat += ph;
        REQUIRE(cat == bits.to_string());

        // All phrases distinct except possibly the last.
        std::set<std::string> seen;
        for (std::size_t i = 0; i + 1 < phrases.size(); ++i)
            REQUIRE(seen.insert(phrases[i]).second);
        REQUIRE((p.final_phrase_duplicate == (seen.count(phrases.back()) > 0)));

        // Minimality: every phrase's proper prefix was already a phrase.
        for (std::size_t i = 0; i + 1 < phrases.size(); ++i)
            if (phrases[i].size() > 1)
                REQUIRE(seen.count(phrases[i].substr(0, phrases[i].size() - 1)));
    }
}

TEST_CASE("complexity and epsilon formulas") {
    // c = 6 phrases at N = 10.
    const BitString t10 = BitString::from_string("0100011011");
    CHECK(lz_complexity(t10) == doctest::Approx(6.0 * std::log2(10.0) / 10.0));

    // eps_N = 2 (1 + log2 log2 2N) / log2 N, checked against a direct
    // evaluation at a few sizes.
    for (std::size_t n : {4096u, 8192u, 90000u}) {
        const double direct =
            2.0 * (1.0 + std::log2(std::log2(2.0 * static_cast<double>(n)))) /
            std::log2(static_cast<double>(n));
        CHECK(lz_epsilon(n) == doctest::Approx(direct).epsilon(1e-12));
    }
    CHECK(lz_epsilon(4096) == doctest::Approx(0.7834066197).epsilon(1e-9));
    CHECK_THROWS_AS(lz_epsilon(1), std::invalid_argument);
}

TEST_CASE("exhaustive string and block prefix lengths") {
    CHECK(exhaustive_string(10) == BitString::from_string("0100011011"));
    CHECK(exhaustive_string(13) == BitString::from_string("0100011011000"));

    // l_m = sum over j <= m of j 2^j, checked against direct summation.
    std::size_t acc = 0;
    for (std::size_t m = 1; m <= 10; ++m) {
        acc += m << m;
        CHECK(lz_block_prefix_length(m) == acc);
    }
    CHECK(lz_block_prefix_length(0) == 0);
    const std::size_t expected[] = {2, 10, 34, 98, 258, 642};
    for (std::size_t m = 1; m <= 6; ++m) CHECK(lz_block_prefix_length(m) == expected[m - 1]);
}

TEST_CASE("exhaustive string attains c_max at every length") {
    for (std::size_t n = 1; n <= 700; ++n) {
        const BitString t = exhaustive_string(n);
        CHECK(lz_parse(t).phrase_count() == lz_cmax(n).c_max);
    }
}

TEST_CASE("c_max formula against a direct ceiling computation") {
    for (std::size_t n = 1; n <= 3000; ++n) {
        std::size_t m_star = 0;
        while (lz_block_prefix_length(m_star + 1) <= n) ++m_star;
        const std::size_t rest = n - lz_block_prefix_length(m_star);
        const std::size_t expected =
            (std::size_t{1} << (m_star + 1)) - 2 +
            (rest + m_star) / (m_star + 1); // ceil(rest / (m_star + 1))
        const CmaxResult got = lz_cmax(n);
        REQUIRE(got.c_max == expected);
        REQUIRE(got.m_star == m_star);
    }
}

TEST_CASE("kappa is 1 exactly on exhaustive block prefixes") {
    for (std::size_t m = 1; m <= 6; ++m) {
        const std::size_t l = lz_block_prefix_length(m);
        const LzReport rep = lz_report(exhaustive_string(l));
        CHECK(rep.kappa == 1.0);
        CHECK(rep.c == rep.c_max);
    }
}

TEST_CASE("phrase-count and K bounds hold for random strings") {
    std::mt19937_64 rng(42);
    for (std::size_t n : {4096u, 8192u, 20000u}) {
        const double eps = lz_epsilon(n);
        const double c_bound = static_cast<double>(n) / ((1.0 - eps) * std::log2(double(n)));
        for (int rep = 0; rep < 20; ++rep) {
            const LzReport r = lz_report(random_bits(rng, n));
            REQUIRE(static_cast<double>(r.c) < c_bound);
            REQUIRE(r.k < 4.6);
            REQUIRE(r.kappa > 0.0);
            REQUIRE(r.kappa <= 1.0);
        }
    }
}

TEST_CASE("K bound tightens to about 2.65 at N = 90000") {
    const std::size_t n = 90000;
    const double bound = 1.0 / (1.0 - lz_epsilon(n));
    CHECK(bound == doctest::Approx(2.6523).epsilon(1e-3));
    std::mt19937_64 rng(5);
    const LzReport r = lz_report(random_bits(rng, n));
    CHECK(r.k < bound);
}

TEST_CASE("lz_report is deterministic and self-consistent") {
    const Key256 key{};
    const BitString s = chacha20_bits(key, 5000);
    const LzReport a = lz_report(s);
    const LzReport b = lz_report(s);
    CHECK(a.c == b.c);
    CHECK(a.k == b.k);
    CHECK(a.kappa == doctest::Approx(double(a.c) / double(a.c_max)).epsilon(1e-15));
    CHECK(a.k == doctest::Approx(double(a.c) * std::log2(5000.0) / 5000.0).epsilon(1e-15));
    CHECK(a.k_max == doctest::Approx(double(a.c_max) * std::log2(5000.0) / 5000.0).epsilon(1e-15));
}
