#include "randkit/sources.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

namespace randkit {

namespace {

bool read_os_entropy(std::uint8_t* out, std::size_t n) {
    std::ifstream dev("/dev/urandom", std::ios::binary);
    if (!dev) return false;
    dev.read(reinterpret_cast<char*>(out), static_cast<std::streamsize>(n));
    return dev.gcount() == static_cast<std::streamsize>(n);
}

} // namespace

BitString trng_bits(std::size_t n) {
    const std::size_t nbytes = (n + 7) / 8;
    std::vector<std::uint8_t> bytes(nbytes);
    if (!read_os_entropy(bytes.data(), nbytes)) {
        try {
            std::random_device rd;
            for (std::size_t i = 0; i < nbytes; ++i)
                bytes[i] = static_cast<std::uint8_t>(rd() & 0xffu);
        } catch (const std::exception&) {
            throw std::runtime_error("no operating-system entropy source available");
        }
    }
    return bytes_to_bits(bytes, n);
}

BitString bytes_to_bits(std::span<const std::uint8_t> bytes, std::size_t n) {
    if (bytes.size() * 8 < n) throw std::invalid_argument("bytes_to_bits: not enough bytes");
    BitString out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t byte = bytes[i / 8];
        out.push_back((byte >> (7 - i % 8)) & 1u);
    }
    return out;
}

BitString chacha20_bits(const Key256& seed, std::size_t n) {
    return bytes_to_bits(chacha20_stream(seed, (n + 7) / 8), n);
}

BitString mimic_two_byte(const Key256& seed, double p, std::size_t n) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mimic_two_byte: p outside [0, 1]");
    const auto threshold = static_cast<std::uint32_t>(std::llround(p * 65536.0));
    const std::vector<std::uint8_t> bytes = chacha20_stream(seed, 2 * n);
    BitString out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t v =
            (static_cast<std::uint32_t>(bytes[2 * i]) << 8) | bytes[2 * i + 1];
        out.push_back(v < threshold ? 1 : 0);
    }
    return out;
}

std::uint8_t BitReader::next() {
    if (exhausted()) throw std::out_of_range("bit stream exhausted");
    return bits_[pos_++];
}

std::uint64_t BitReader::take(unsigned m) {
    if (m > 63) throw std::invalid_argument("BitReader::take: m > 63");
    std::uint64_t value = 0;
    for (unsigned i = 0; i < m; ++i) value = (value << 1) | next();
    return value;
}

BitString mimic_fraction(BitReader& uniform, double p, unsigned m) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mimic_fraction: p outside [0, 1]");
    if (m == 0 || m > 62) throw std::invalid_argument("mimic_fraction: m outside [1, 62]");
    const auto numerator =
        static_cast<std::uint64_t>(std::llround(p * static_cast<double>(1ull << m)));
    BitString out;
    out.reserve(uniform.remaining() / m);
    while (!uniform.exhausted()) {
        if (uniform.remaining() < m)
            throw std::invalid_argument("mimic_fraction: input stream exhausted mid-symbol");
        out.push_back(uniform.take(m) < numerator ? 1 : 0);
    }
    return out;
}

std::string to_string(SourceKind kind) {
    switch (kind) {
    case SourceKind::os_entropy: return "os_entropy";
    case SourceKind::chacha20: return "chacha20";
    case SourceKind::mimic_2byte: return "mimic_2byte";
    case SourceKind::mimic_fraction: return "mimic_fraction";
    case SourceKind::bell_quantum: return "bell_quantum";
    case SourceKind::bell_lhv: return "bell_lhv";
    }
    throw std::invalid_argument("unknown source kind");
}

SourceKind source_kind_from_string(const std::string& name) {
    if (name == "os_entropy") return SourceKind::os_entropy;
    if (name == "chacha20") return SourceKind::chacha20;
    if (name == "mimic_2byte") return SourceKind::mimic_2byte;
    if (name == "mimic_fraction") return SourceKind::mimic_fraction;
    if (name == "bell_quantum") return SourceKind::bell_quantum;
    if (name == "bell_lhv") return SourceKind::bell_lhv;
    throw std::invalid_argument("unknown source kind: " + name);
}

std::string SourceSpec::label() const {
    std::string s = to_string(kind);
    // No commas: labels embed verbatim in CSV cells.
    if (kind == SourceKind::mimic_2byte || kind == SourceKind::mimic_fraction) {
        s += "(p=" + std::to_string(p);
        if (kind == SourceKind::mimic_fraction) s += ";m=" + std::to_string(m);
        s += ")";
    }
    return s;
}

void validate(const SourceSpec& spec) {
    const bool needs_seed = spec.kind != SourceKind::os_entropy;
    if (needs_seed && !spec.seed)
        throw std::invalid_argument(to_string(spec.kind) + " source requires a seed");
    if (spec.kind == SourceKind::mimic_2byte || spec.kind == SourceKind::mimic_fraction) {
        if (!(spec.p >= 0.0 && spec.p <= 1.0))
            throw std::invalid_argument("source p outside [0, 1]");
    }
    if (spec.kind == SourceKind::mimic_fraction && (spec.m == 0 || spec.m > 62))
        throw std::invalid_argument("source m outside [1, 62]");
}

Key256 derive_trial_key(const Key256& master, std::uint64_t trial) {
    ChaCha20 stream(master);
    stream.seek(32 * trial);
    Key256 key{};
    stream.keystream(key);
    return key;
}

BitString draw_bits(const SourceSpec& spec, std::uint64_t trial) {
    validate(spec);
    switch (spec.kind) {
    case SourceKind::os_entropy:
        return trng_bits(spec.n);
    case SourceKind::chacha20:
        return chacha20_bits(derive_trial_key(*spec.seed, trial), spec.n);
    case SourceKind::mimic_2byte:
        return mimic_two_byte(derive_trial_key(*spec.seed, trial), spec.p, spec.n);
    case SourceKind::mimic_fraction: {
        const BitString uniform =
            chacha20_bits(derive_trial_key(*spec.seed, trial), spec.n * spec.m);
        BitReader reader(uniform);
        return mimic_fraction(reader, spec.p, spec.m);
    }
    case SourceKind::bell_quantum:
    case SourceKind::bell_lhv:
        throw std::invalid_argument(to_string(spec.kind) +
                                    " produces event streams, not bits; use the event generators");
    }
    throw std::invalid_argument("unknown source kind");
}

std::uint8_t KeystreamRng::byte() {
    std::uint8_t b = 0;
    stream_.keystream({&b, 1});
    return b;
}

std::uint64_t KeystreamRng::next_u64() {
    std::array<std::uint8_t, 8> raw{};
    stream_.keystream(raw);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | raw[static_cast<std::size_t>(i)];
    return v;
}

double KeystreamRng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double KeystreamRng::exponential(double mean) {
    if (!(mean > 0.0)) throw std::invalid_argument("exponential: mean must be positive");
    // 1 - uniform01() is in (0, 1], keeping the log finite.
    return -mean * std::log(1.0 - uniform01());
}

double KeystreamRng::gaussian(double mean, double sigma) {
    if (have_cached_gaussian_) {
        have_cached_gaussian_ = false;
        return mean + sigma * cached_gaussian_;
    }
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_gaussian_ = radius * std::sin(angle);
    have_cached_gaussian_ = true;
    return mean + sigma * radius * std::cos(angle);
}

CorrelationTable singlet_correlations() {
    const double q = 1.0 / std::numbers::sqrt2;
    CorrelationTable t;
    t.e[0][0] = q;
    t.e[0][1] = q;
    t.e[1][0] = q;
    t.e[1][1] = -q;
    return t;
}

namespace {

void validate_timing(const TimingParams& timing) {
    if (!(timing.rate_hz > 0.0)) throw std::invalid_argument("pair rate must be positive");
    if (!(timing.jitter_sigma_ns >= 0.0))
        throw std::invalid_argument("jitter sigma must be non-negative");
    if (!(timing.efficiency_a >= 0.0 && timing.efficiency_a <= 1.0) ||
        !(timing.efficiency_b >= 0.0 && timing.efficiency_b <= 1.0))
        throw std::invalid_argument("efficiency outside [0, 1]");
}

struct PairEmitter {
    KeystreamRng& rng;
    const TimingParams& timing;
    double mean_gap_ns;
    double t = 0.0;
    EventPairStreams out;

    explicit PairEmitter(KeystreamRng& r, const TimingParams& tp)
        : rng(r), timing(tp), mean_gap_ns(1e9 / tp.rate_hz) {}

    void emit(std::uint8_t x, std::uint8_t y, std::uint8_t a, std::uint8_t b) {
        t += rng.exponential(mean_gap_ns);
        double ta = t;
        double tb = t;
        if (timing.jitter_sigma_ns > 0.0) {
            ta += rng.gaussian(0.0, timing.jitter_sigma_ns);
            tb += rng.gaussian(0.0, timing.jitter_sigma_ns);
        }
        const bool keep_a = rng.uniform01() < timing.efficiency_a;
        const bool keep_b = rng.uniform01() < timing.efficiency_b;
        if (keep_a) out.alice.push_back({static_cast<std::int64_t>(std::llround(ta)), x, a});
        if (keep_b) out.bob.push_back({static_cast<std::int64_t>(std::llround(tb)), y, b});
    }

    EventPairStreams finish() {
        auto by_time = [](const EventRecord& l, const EventRecord& r) {
            return l.time_ns < r.time_ns;
        };
        std::stable_sort(out.alice.begin(), out.alice.end(), by_time);
        std::stable_sort(out.bob.begin(), out.bob.end(), by_time);
        return std::move(out);
    }
};

} // namespace

EventPairStreams bell_quantum_events(const Key256& seed, std::size_t n_pairs,
                                     const CorrelationTable& correlations,
                                     const TimingParams& timing) {
    validate_timing(timing);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            if (!(std::abs(correlations.e[x][y]) <= 1.0))
                throw std::invalid_argument("correlation outside [-1, 1]");

    KeystreamRng rng(seed);
    PairEmitter emitter(rng, timing);
    for (std::size_t i = 0; i < n_pairs; ++i) {
        const std::uint8_t x = rng.bit();
        const std::uint8_t y = rng.bit();
        // P(a = b | x, y) = (1 + E_xy) / 2 with the marginal of a uniform.
        const bool equal = rng.uniform01() < 0.5 * (1.0 + correlations.e[x][y]);
        const std::uint8_t a = rng.bit();
        const std::uint8_t b = equal ? a : static_cast<std::uint8_t>(1 - a);
        emitter.emit(x, y, a, b);
    }
    return emitter.finish();
}

EventPairStreams bell_lhv_events(const Key256& seed, std::size_t n_pairs,
                                 const LhvStrategy& strategy, const TimingParams& timing) {
    validate_timing(timing);
    const std::size_t n_lambda = strategy.lambda_weights.size();
    if (n_lambda == 0) throw std::invalid_argument("LHV strategy has no hidden-variable values");
    double total = 0.0;
    for (double w : strategy.lambda_weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("LHV weight must be non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("LHV weights must not all be zero");
    for (int s = 0; s < 2; ++s) {
        if (strategy.a[s].size() != n_lambda || strategy.b[s].size() != n_lambda)
            throw std::invalid_argument("LHV response table size mismatch");
        for (std::size_t l = 0; l < n_lambda; ++l)
            if (strategy.a[s][l] > 1 || strategy.b[s][l] > 1)
                throw std::invalid_argument("LHV response table entries must be 0 or 1");
    }

    KeystreamRng rng(seed);
    PairEmitter emitter(rng, timing);
    for (std::size_t i = 0; i < n_pairs; ++i) {
        const std::uint8_t x = rng.bit();
        const std::uint8_t y = rng.bit();
        double u = rng.uniform01() * total;
        std::size_t lambda = n_lambda - 1;
        for (std::size_t l = 0; l < n_lambda; ++l) {
            if (u < strategy.lambda_weights[l]) {
                lambda = l;
                break;
            }
            u -= strategy.lambda_weights[l];
        }
        emitter.emit(x, y, strategy.a[x][lambda], strategy.b[y][lambda]);
    }
    return emitter.finish();
}

} // namespace randkit
