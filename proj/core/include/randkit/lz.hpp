#pragma once

#include <cstddef>
#include <vector>

#include "randkit/bits.hpp"

namespace randkit {

/// Greedy distinct-phrase decomposition of a bit string.
///
/// Scanning left to right, each phrase is the shortest substring starting
/// at the current position that differs from every phrase emitted so far.
/// The rule makes the phrase set prefix-closed, so the trailing remainder
/// of the input may coincide with an earlier phrase; it is still emitted
/// (and counted) as the final phrase, with `final_phrase_duplicate` set.
struct Parsing {
    /// 1-based inclusive end position of each phrase; back() == N.
    std::vector<std::size_t> phrase_ends;
    bool final_phrase_duplicate = false;

    std::size_t phrase_count() const noexcept { return phrase_ends.size(); }
};

/// Everything the LZ analysis of one string produces, including the
/// length-dependent normalization constants.
struct LzReport {
    std::size_t n = 0;       ///< string length N
    std::size_t c = 0;       ///< phrase count c(N)
    double k = 0.0;          ///< K(N) = c(N) log2(N) / N
    std::size_t c_max = 0;   ///< maximal phrase count attainable at length N
    double k_max = 0.0;      ///< c_max(N) log2(N) / N
    double kappa = 0.0;      ///< c / c_max, in (0, 1]
    double epsilon = 0.0;    ///< eps_N = 2 (1 + log2 log2 2N) / log2 N
    std::size_t m_star = 0;  ///< largest m with l_m <= N (see lz_cmax)
};

/// Runs the greedy distinct-phrase parse. Throws on the empty string.
/// O(N): phrase lookup walks a binary trie over the emitted phrases.
Parsing lz_parse(const BitString& s);

/// K(N) = c(N) log2(N) / N. Requires N >= 2.
double lz_complexity(const BitString& s);

/// eps_N = 2 (1 + log2 log2 (2N)) / log2(N). Requires N >= 2. Decreases
/// monotonically in N; the phrase count of any string obeys
/// c(N) < N / ((1 - eps_N) log2 N) once eps_N < 1.
double lz_epsilon(std::size_t n);

/// Prefix of length n of the string formed by concatenating all bit
/// strings of length 1 in lexicographic order, then all of length 2, and
/// so on: 0 1 00 01 10 11 000 ...  This string maximizes the phrase count
/// at every length.
BitString exhaustive_string(std::size_t n);

/// Cumulative length of all distinct bit strings of length <= m,
/// l_m = (m-1) 2^(m+1) + 2, with l_0 = 0.
std::size_t lz_block_prefix_length(std::size_t m);

struct CmaxResult {
    std::size_t c_max = 0;
    std::size_t m_star = 0;
};

/// Maximal phrase count at length n:
/// c_max = 2^(m*+1) - 2 + ceil((n - l_{m*}) / (m*+1)), with m* the largest
/// m >= 0 such that l_m <= n.
CmaxResult lz_cmax(std::size_t n);

/// Full LZ analysis: parse plus all derived quantities. Requires N >= 2.
LzReport lz_report(const BitString& s);

} // namespace randkit
