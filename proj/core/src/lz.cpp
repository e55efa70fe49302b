#include "randkit/lz.hpp"

#include <cmath>
#include <stdexcept>

namespace randkit {

namespace {

double log2_size(std::size_t n) { return std::log2(static_cast<double>(n)); }

// Trie over emitted phrases. Every phrase's proper prefixes are earlier
// phrases, so the phrase set is exactly the node set below the root.
struct PhraseTrie {
    struct Node {
        std::int32_t child[2] = {-1, -1};
    };
    std::vector<Node> nodes{Node{}};

    std::int32_t step(std::int32_t at, std::uint8_t bit) const { return nodes[at].child[bit]; }

    std::int32_t add(std::int32_t at, std::uint8_t bit) {
        const auto idx = static_cast<std::int32_t>(nodes.size());
        nodes.push_back(Node{});
        nodes[at].child[bit] = idx;
        return idx;
    }
};

} // namespace

Parsing lz_parse(const BitString& s) {
    if (s.empty()) throw std::invalid_argument("lz_parse: empty bit string");

    Parsing out;
    PhraseTrie trie;
    trie.nodes.reserve(64);

    std::int32_t at = 0; // trie position of the phrase prefix read so far
    for (std::size_t i = 0; i < s.size(); ++i) {
        const std::uint8_t bit = s[i];
        const std::int32_t next = trie.step(at, bit);
        if (next < 0) {
            // prefix + bit is new: the phrase ends here
            trie.add(at, bit);
            out.phrase_ends.push_back(i + 1);
            at = 0;
        } else {
            at = next;
        }
    }
    if (at != 0) {
        // input ended inside the trie: the remainder repeats an earlier phrase
        out.phrase_ends.push_back(s.size());
        out.final_phrase_duplicate = true;
    }
    return out;
}

double lz_complexity(const BitString& s) {
    if (s.size() < 2) throw std::invalid_argument("lz_complexity: need N >= 2");
    const auto c = lz_parse(s).phrase_count();
    return static_cast<double>(c) * log2_size(s.size()) / static_cast<double>(s.size());
}

double lz_epsilon(std::size_t n) {
    if (n < 2) throw std::invalid_argument("lz_epsilon: need N >= 2");
    return 2.0 * (1.0 + std::log2(std::log2(2.0 * static_cast<double>(n)))) / log2_size(n);
}

BitString exhaustive_string(std::size_t n) {
    BitString out;
    out.reserve(n);
    for (std::size_t m = 1; out.size() < n; ++m) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << m) && out.size() < n; ++v) {
            for (std::size_t b = 0; b < m && out.size() < n; ++b)
                out.push_back(static_cast<std::uint8_t>((v >> (m - 1 - b)) & 1u));
        }
    }
    return out;
}

std::size_t lz_block_prefix_length(std::size_t m) {
    if (m == 0) return 0;
    return (m - 1) * (std::size_t{1} << (m + 1)) + 2;
}

CmaxResult lz_cmax(std::size_t n) {
    if (n == 0) throw std::invalid_argument("lz_cmax: need N >= 1");
    std::size_t m = 0;
    while (lz_block_prefix_length(m + 1) <= n) ++m;
    const std::size_t lm = lz_block_prefix_length(m);
    const std::size_t rest = n - lm;
    const std::size_t c_max = (std::size_t{1} << (m + 1)) - 2 + (rest + m) / (m + 1);
    return {c_max, m};
}

LzReport lz_report(const BitString& s) {
    if (s.size() < 2) throw std::invalid_argument("lz_report: need N >= 2");
    LzReport r;
    r.n = s.size();
    r.c = lz_parse(s).phrase_count();
    const double scale = log2_size(r.n) / static_cast<double>(r.n);
    r.k = static_cast<double>(r.c) * scale;
    const auto cm = lz_cmax(r.n);
    r.c_max = cm.c_max;
    r.m_star = cm.m_star;
    r.k_max = static_cast<double>(r.c_max) * scale;
    r.kappa = static_cast<double>(r.c) / static_cast<double>(r.c_max);
    r.epsilon = lz_epsilon(r.n);
    return r;
}

} // namespace randkit
