#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randkit/bell.hpp"
#include "randkit/bits.hpp"
#include "randkit/chacha20.hpp"

namespace randkit {

/// n bits from the operating system entropy source. Throws if the source
/// is unavailable. Safe to call concurrently.
BitString trng_bits(std::size_t n);

/// Unpacks bytes to bits, MSB first, truncated to n bits.
BitString bytes_to_bits(std::span<const std::uint8_t> bytes, std::size_t n);

/// First n bits of the ChaCha20 keystream for the given key (zero nonce,
/// counter 1), MSB first within each byte.
BitString chacha20_bits(const Key256& seed, std::size_t n);

/// Bias-matched generator: consumes two keystream bytes per output bit,
/// reads them as a big-endian 16-bit integer v, and emits 1 iff
/// v < round(p * 2^16). The achieved one-probability is within 2^-16 of p.
BitString mimic_two_byte(const Key256& seed, double p, std::size_t n);

/// Sequential MSB-first reader over a bit string.
class BitReader {
public:
    explicit BitReader(const BitString& s) : bits_(s.bits()) {}
    explicit BitReader(std::span<const std::uint8_t> bits) : bits_(bits) {}

    std::size_t remaining() const noexcept { return bits_.size() - pos_; }
    bool exhausted() const noexcept { return pos_ == bits_.size(); }
    std::uint8_t next();

    /// Next m bits as an unsigned integer, MSB first. Requires m <= 63.
    std::uint64_t take(unsigned m);

private:
    std::span<const std::uint8_t> bits_;
    std::size_t pos_ = 0;
};

/// Biased-bit simulation from a uniform bit stream: per output bit,
/// consumes m input bits as an integer U and emits 1 iff U < round(p*2^m),
/// so the one-probability is exactly round(p*2^m)/2^m, within 2^-m of p.
/// Emits until the stream is exhausted; throws if it runs out mid-symbol.
BitString mimic_fraction(BitReader& uniform, double p, unsigned m);

enum class SourceKind {
    os_entropy,
    chacha20,
    mimic_2byte,
    mimic_fraction,
    bell_quantum,
    bell_lhv,
};

std::string to_string(SourceKind kind);
SourceKind source_kind_from_string(const std::string& name);

/// Declarative description of a bit source. Seed must be present exactly
/// for the deterministic kinds (everything except os_entropy).
struct SourceSpec {
    SourceKind kind = SourceKind::chacha20;
    std::optional<Key256> seed;
    double p = 0.5;       ///< target one-probability (mimic kinds)
    unsigned m = 16;      ///< precision bits (mimic_fraction)
    std::size_t n = 0;    ///< output length in bits

    std::string label() const;
};

/// Throws std::invalid_argument if the spec is internally inconsistent.
void validate(const SourceSpec& spec);

/// Subkey for one trial: 32 bytes of the master-key keystream starting at
/// byte offset 32*trial. Distinct trials give independent-looking streams
/// while the whole batch stays a pure function of the master seed.
Key256 derive_trial_key(const Key256& master, std::uint64_t trial);

/// Draws one string from a bit source. Deterministic kinds are a pure
/// function of (spec.seed, trial); os_entropy ignores the trial index.
/// Throws for the bell_* kinds, which produce events, not bits.
BitString draw_bits(const SourceSpec& spec, std::uint64_t trial);

/// Deterministic sampler over a ChaCha20 keystream; the basis of every
/// seeded simulation so that runs reproduce bit-for-bit.
class KeystreamRng {
public:
    explicit KeystreamRng(const Key256& key) : stream_(key) {}

    std::uint8_t bit() { return byte() & 1u; }
    std::uint8_t byte();
    std::uint64_t next_u64();
    double uniform01();                       ///< [0, 1), 53-bit
    bool bernoulli(double p) { return uniform01() < p; }
    double exponential(double mean);
    double gaussian(double mean, double sigma);

private:
    ChaCha20 stream_;
    bool have_cached_gaussian_ = false;
    double cached_gaussian_ = 0.0;
};

/// Shared timing model of the synthetic two-station experiments: pair
/// creation is a Poisson process; each station sees the pair time plus
/// its own Gaussian jitter and keeps the event with its efficiency.
struct TimingParams {
    double rate_hz = 50000.0;
    double jitter_sigma_ns = 0.0;
    double efficiency_a = 1.0;
    double efficiency_b = 1.0;
};

/// Setting-conditional correlations E[(-1)^(a xor b) | x, y].
struct CorrelationTable {
    double e[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

/// CHSH-optimal singlet correlations (1/sqrt2 except E_11 = -1/sqrt2).
CorrelationTable singlet_correlations();

struct EventPairStreams {
    std::vector<EventRecord> alice;
    std::vector<EventRecord> bob;
};

/// Samples n_pairs entangled-pair outcomes with
/// P(a,b|x,y) = 1/4 (1 + (-1)^(a xor b) E_xy), settings uniform and
/// independent, under the shared timing model. Output streams are sorted
/// by time. Throws if any |E_xy| > 1.
EventPairStreams bell_quantum_events(const Key256& seed, std::size_t n_pairs,
                                     const CorrelationTable& correlations,
                                     const TimingParams& timing);

/// Local deterministic strategy: outcome tables indexed by setting and a
/// shared hidden variable lambda drawn from `lambda_weights`.
struct LhvStrategy {
    std::vector<double> lambda_weights;
    std::array<std::vector<std::uint8_t>, 2> a; ///< a[x][lambda]
    std::array<std::vector<std::uint8_t>, 2> b; ///< b[y][lambda]
};

/// Classical baseline over the same timing model; the expectation of the
/// CHSH function never exceeds 2. Throws on a malformed strategy table.
EventPairStreams bell_lhv_events(const Key256& seed, std::size_t n_pairs,
                                 const LhvStrategy& strategy, const TimingParams& timing);

} // namespace randkit
