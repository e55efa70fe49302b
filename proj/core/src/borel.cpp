#include "randkit/borel.hpp"

#include <cmath>
#include <stdexcept>

namespace randkit {

BlockCensus block_counts(const BitString& s, unsigned m) {
    if (m < 1) throw std::invalid_argument("block_counts: need m >= 1");
    if (s.size() < m)
        throw std::invalid_argument("block_counts: string shorter than block length");

    BlockCensus census;
    census.m = m;
    census.counts.assign(std::size_t{1} << m, 0);
    census.total_blocks = s.size() / m;
    for (std::size_t b = 0; b < census.total_blocks; ++b) {
        std::size_t value = 0;
        for (unsigned k = 0; k < m; ++k) value = (value << 1) | s[b * m + k];
        ++census.counts[value];
    }
    return census;
}

unsigned borel_max_block_len(std::size_t n) {
    if (n < 4) throw std::invalid_argument("borel: need N >= 4");
    return static_cast<unsigned>(std::floor(std::log2(std::log2(static_cast<double>(n)))));
}

double borel_measure(const BitString& s) {
    const unsigned m_max = borel_max_block_len(s.size());
    const double log2_n = std::log2(static_cast<double>(s.size()));

    double max_dev = 0.0;
    for (unsigned m = 1; m <= m_max; ++m) {
        const auto census = block_counts(s, m);
        const double expected = 1.0 / static_cast<double>(std::size_t{1} << m);
        const double total = static_cast<double>(census.total_blocks);
        for (std::size_t count : census.counts) {
            const double dev = std::abs(static_cast<double>(count) / total - expected);
            if (dev > max_dev) max_dev = dev;
        }
    }
    return max_dev * log2_n;
}

bool is_borel_normal(const BitString& s) { return borel_measure(s) <= 1.0; }

} // namespace randkit
