#pragma once

#include <cstddef>
#include <vector>

#include "randkit/bits.hpp"

namespace randkit {

/// Census of consecutive non-overlapping m-bit blocks of a string.
/// counts[j-1] is the number of occurrences of the lexicographically j-th
/// string of length m (j-1 equals the block read as a binary integer,
/// MSB first). Trailing N mod m bits are discarded.
struct BlockCensus {
    unsigned m = 0;
    std::vector<std::size_t> counts; ///< size 2^m
    std::size_t total_blocks = 0;    ///< floor(N / m)
};

/// Counts the non-overlapping m-blocks of s. Requires 1 <= m <= N.
BlockCensus block_counts(const BitString& s, unsigned m);

/// Largest block length entering the normality measure at length n,
/// floor(log2 log2 n). Requires n >= 4 so that the range is nonempty.
unsigned borel_max_block_len(std::size_t n);

/// B(s) = max over m = 1..floor(log2 log2 N) and all 2^m blocks of
/// | count/total - 2^-m | * log2 N.  B <= 1 means the string satisfies
/// the block-frequency normality condition at accuracy 1/log2 N.
double borel_measure(const BitString& s);

/// True iff borel_measure(s) <= 1.
bool is_borel_normal(const BitString& s);

} // namespace randkit
