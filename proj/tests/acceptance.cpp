// Acceptance gate: one self-contained check per release criterion, each
// printing a single PASS/FAIL line. Exit code is the number of failures.
// Tolerances are pinned here, next to the checks that use them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "randkit/bell.hpp"
#include "randkit/bits.hpp"
#include "randkit/chacha20.hpp"
#include "randkit/lz.hpp"
#include "randkit/measures.hpp"
#include "randkit/sources.hpp"
#include "randkit/stats.hpp"

using namespace randkit;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
    int id;
    const char* name;
    bool ok = true;
    std::string detail;
    double ms = 0.0;
};

Key256 key_of(std::uint8_t fill) {
    Key256 k{};
    k.fill(fill);
    return k;
}

std::string phrase_at(const BitString& s, const Parsing& parse, std::size_t i) {
    const std::size_t begin = i == 0 ? 0 : parse.phrase_ends[i - 1];
    std::string out;
    for (std::size_t j = begin; j < parse.phrase_ends[i]; ++j)
        out.push_back(s[j] ? '1' : '0');
    return out;
}

// ---- criterion bodies ----------------------------------------------------

void check_parse_example(Criterion& c) {
    const BitString t10 = exhaustive_string(10);
    const Parsing parse = lz_parse(t10);
    const std::vector<std::string> expected = {"0", "1", "00", "01", "10", "11"};
    if (parse.phrase_count() != expected.size()) {
        c.ok = false;
        c.detail = "phrase count " + std::to_string(parse.phrase_count());
        return;
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const std::string got = phrase_at(t10, parse, i);
        if (got != expected[i]) {
            c.ok = false;
            c.detail = "phrase " + std::to_string(i) + " is " + got;
            return;
        }
    }
    c.detail = "0|1|00|01|10|11";
}

void check_bounds(Criterion& c) {
    const Key256 master = key_of(0xB0);
    std::size_t violations = 0;
    std::uint64_t trial = 0;
    for (std::size_t n : {4096u, 8192u, 20000u, 90000u}) {
        const double eps = lz_epsilon(n);
        const double c_bound = static_cast<double>(n) / ((1.0 - eps) * std::log2(double(n)));
        for (int rep = 0; rep < 1000; ++rep, ++trial) {
            const BitString s = chacha20_bits(derive_trial_key(master, trial), n);
            const LzReport r = lz_report(s);
            if (!(static_cast<double>(r.c) < c_bound)) ++violations;
            if (!(r.k < 4.6)) ++violations;
        }
    }
    c.ok = violations == 0;
    c.detail = "4000 strings, " + std::to_string(violations) + " violations";
}

void check_epsilon(Criterion& c) {
    const double eps = lz_epsilon(4096);
    c.ok = std::abs(eps - 0.78341) <= 0.00001;
    c.detail = "eps_4096 = " + std::to_string(eps);
}

void check_saturation(Criterion& c) {
    for (std::size_t m = 1; m <= 6; ++m) {
        const std::size_t lm = lz_block_prefix_length(m);
        const double kappa = lz_report(exhaustive_string(lm)).kappa;
        if (kappa != 1.0) {
            c.ok = false;
            c.detail = "kappa(t^" + std::to_string(lm) + ") = " + std::to_string(kappa);
            return;
        }
    }
    c.detail = "kappa = 1 exactly at N = 2, 10, 34, 98, 258, 642";
}

struct PublishedRow {
    std::size_t n;
    double r, p, ci_lo, ci_hi;
};

// 95% two-sided values as printed alongside the three sample strata
// (10, 7, and 3 runs); the n = 3 intervals are vacuous by construction.
constexpr PublishedRow published_rows[] = {
    {10, 0.450, 0.192, -0.251, 0.841},  {10, 0.405, 0.246, -0.302, 0.824},
    {10, -0.313, 0.379, -0.787, 0.394}, {10, 0.092, 0.801, -0.571, 0.682},
    {10, 0.115, 0.751, -0.555, 0.694},  {10, -0.080, 0.825, -0.676, 0.579},
    {10, 0.448, 0.194, -0.253, 0.841},  {10, 0.325, 0.360, -0.383, 0.792},
    {10, -0.222, 0.538, -0.747, 0.474}, {7, 0.395, 0.381, -0.510, 0.885},
    {7, 0.437, 0.327, -0.471, 0.895},   {7, -0.054, 0.909, -0.775, 0.729},
    {7, 0.047, 0.921, -0.732, 0.773},   {7, -0.014, 0.977, -0.759, 0.747},
    {7, -0.178, 0.703, -0.821, 0.664},  {7, -0.240, 0.604, -0.841, 0.626},
    {7, -0.515, 0.237, -0.914, 0.389},  {7, -0.236, 0.610, -0.840, 0.629},
    {3, -0.293, 0.811, -1.0, 1.0},      {3, -0.572, 0.612, -1.0, 1.0},
    {3, 0.075, 0.952, -1.0, 1.0},       {3, 0.845, 0.359, -1.0, 1.0},
    {3, 0.879, 0.316, -1.0, 1.0},       {3, -0.975, 0.144, -1.0, 1.0},
    {3, 0.684, 0.520, -1.0, 1.0},       {3, 0.665, 0.537, -1.0, 1.0},
    {3, -0.601, 0.589, -1.0, 1.0},
};

void check_pearson_rows(Criterion& c) {
    constexpr double tol = 0.003;
    std::size_t failures = 0;
    double worst = 0.0;
    for (const PublishedRow& row : published_rows) {
        const PearsonResult res = pearson_from_r(row.r, row.n);
        const double dev = std::max({std::abs(res.p - row.p), std::abs(res.ci_lo - row.ci_lo),
                                     std::abs(res.ci_hi - row.ci_hi)});
        worst = std::max(worst, dev);
        if (dev > tol) ++failures;
        if (row.n == 3 && (res.ci_lo != -1.0 || res.ci_hi != 1.0)) ++failures;
    }
    c.ok = failures == 0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "27 rows, worst deviation %.5f (tol %.3f)", worst, tol);
    c.detail = buf;
}

void check_sample_sizes(Criterion& c) {
    const std::size_t n1 = sample_size_power(0.45, 0.05, 0.8);
    const std::size_t n2 = sample_size_power(0.1, 0.05, 0.8);
    const SampleSizeCi w20 = sample_size_ci(0.45, 0.95, 0.20);
    const SampleSizeCi w15 = sample_size_ci(0.45, 0.95, 0.15);
    const SampleSizeCi w10 = sample_size_ci(0.45, 0.95, 0.10);
    auto near = [](std::size_t v, std::size_t target, std::size_t slack) {
        return v + slack >= target && v <= target + slack;
    };
    c.ok = (n1 == 36 || n1 == 37) && (n2 == 782 || n2 == 783) && near(w20.n_exact, 64, 1) &&
           near(w15.n_exact, 111, 1) && near(w10.n_exact, 247, 3);
    c.detail = "power: " + std::to_string(n1) + ", " + std::to_string(n2) +
               "; widths: " + std::to_string(w20.n_exact) + ", " + std::to_string(w15.n_exact) +
               ", " + std::to_string(w10.n_exact);
}

double chsh_of(const EventPairStreams& events) {
    return chsh_s(match_coincidences(events.alice, events.bob, 10, 0));
}

void check_chsh_endpoints(Criterion& c) {
    constexpr std::size_t n_pairs = 100000;
    const TimingParams timing; // lossless: unit efficiency, no jitter

    const double s_quantum =
        chsh_of(bell_quantum_events(key_of(0x51), n_pairs, singlet_correlations(), timing));
    const bool quantum_ok = std::abs(s_quantum - 2.828) <= 0.03;

    std::vector<LhvStrategy> strategies;
    { // constant outputs
        LhvStrategy s;
        s.lambda_weights = {1.0};
        s.a[0] = {0};
        s.a[1] = {0};
        s.b[0] = {0};
        s.b[1] = {0};
        strategies.push_back(s);
    }
    { // both echo a shared fair coin
        LhvStrategy s;
        s.lambda_weights = {0.5, 0.5};
        s.a[0] = {0, 1};
        s.a[1] = {0, 1};
        s.b[0] = {0, 1};
        s.b[1] = {0, 1};
        strategies.push_back(s);
    }
    { // setting-dependent deterministic tables
        LhvStrategy s;
        s.lambda_weights = {1.0};
        s.a[0] = {0};
        s.a[1] = {1};
        s.b[0] = {1};
        s.b[1] = {1};
        strategies.push_back(s);
    }
    { // four equally likely hidden values with mixed tables
        LhvStrategy s;
        s.lambda_weights = {0.25, 0.25, 0.25, 0.25};
        s.a[0] = {0, 0, 1, 1};
        s.a[1] = {0, 1, 0, 1};
        s.b[0] = {0, 1, 1, 0};
        s.b[1] = {1, 0, 1, 0};
        strategies.push_back(s);
    }

    double worst_lhv = 0.0;
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        const double s = chsh_of(
            bell_lhv_events(key_of(static_cast<std::uint8_t>(0xC0 + i)), n_pairs,
                            strategies[i], timing));
        worst_lhv = std::max(worst_lhv, s);
    }
    const bool lhv_ok = worst_lhv <= 2.05;

    c.ok = quantum_ok && lhv_ok;
    char buf[96];
    std::snprintf(buf, sizeof buf, "singlet S = %.4f (want 2.828 +/- 0.03); max LHV S = %.4f",
                  s_quantum, worst_lhv);
    c.detail = buf;
}

void check_coin_toss(Criterion& c) {
    SourceSpec spec;
    spec.kind = SourceKind::mimic_2byte;
    spec.seed = key_of(0xA8);
    spec.p = 0.4851;
    spec.n = 20000;
    std::vector<double> freq;
    for (std::uint64_t trial = 0; trial < 100; ++trial)
        freq.push_back(relative_frequency(draw_bits(spec, trial)));
    const double m = mean(freq);
    const double sd = std::sqrt(sample_variance(freq));
    c.ok = std::abs(m - 0.4851) <= 0.0011 && sd >= 0.0025 && sd <= 0.0045;
    char buf[96];
    std::snprintf(buf, sizeof buf, "mean = %.5f (want 0.4851 +/- 0.0011), std = %.5f", m, sd);
    c.detail = buf;
}

void check_indistinguishability(Criterion& c) {
    constexpr std::size_t n = 20000;
    const Key256 master = key_of(0xD1);

    // Part 1: batch comparisons should not separate the sources.
    int clean_experiments = 0;
    for (std::uint64_t exp = 0; exp < 20; ++exp) {
        std::vector<MeasureReport> chacha, os;
        SourceSpec spec;
        spec.kind = SourceKind::chacha20;
        spec.seed = derive_trial_key(master, exp);
        spec.n = n;
        for (std::uint64_t i = 0; i < 100; ++i) {
            chacha.push_back(measure_suite(draw_bits(spec, i)));
            os.push_back(measure_suite(trng_bits(n)));
        }
        const BatchComparison cmp = compare_batches(chacha, os);
        if (cmp.k.p > 0.001 && cmp.kappa.p > 0.001 && cmp.b.p > 0.001) ++clean_experiments;
    }
    const bool welch_ok = clean_experiments >= 19;

    // Part 2: a pilot-fitted threshold gains no useful advantage.
    SourceSpec src1;
    src1.kind = SourceKind::chacha20;
    src1.seed = key_of(0xD2);
    src1.n = n;
    SourceSpec src2;
    src2.kind = SourceKind::os_entropy;
    src2.n = n;

    double worst_adv = 0.0;
    std::string worst_measure;
    for (MeasureId id : {MeasureId::k, MeasureId::kappa, MeasureId::b, MeasureId::frequency}) {
        const Distinguisher d = pilot_median_distinguisher(src1, src2, id, n);
        const AdvantageEstimate e = estimate_advantage(src1, src2, d, 200, n);
        if (e.adv > worst_adv) {
            worst_adv = e.adv;
            worst_measure = to_string(id);
        }
    }
    const bool adv_ok = worst_adv < 0.14;

    c.ok = welch_ok && adv_ok;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "%d/20 experiments with p > 0.001 on all measures; max adv %.4f (%s)",
                  clean_experiments, worst_adv, worst_measure.c_str());
    c.detail = buf;
}

void check_entropy_correlation(Criterion& c) {
    constexpr std::size_t batches = 50;
    constexpr std::size_t per_batch = 20;
    constexpr std::size_t n = 20000;
    const Key256 master = key_of(0xE7);

    std::vector<double> h_values, mean_kappa;
    for (std::size_t i = 0; i < batches; ++i) {
        const double p = 0.40 + 0.10 * static_cast<double>(i) / (batches - 1);
        SourceSpec spec;
        spec.kind = SourceKind::mimic_2byte;
        spec.seed = derive_trial_key(master, i);
        spec.p = p;
        spec.n = n;
        double kappa_sum = 0.0;
        for (std::uint64_t trial = 0; trial < per_batch; ++trial)
            kappa_sum += lz_report(draw_bits(spec, trial)).kappa;
        h_values.push_back(binary_entropy(p));
        mean_kappa.push_back(kappa_sum / per_batch);
    }
    const PearsonResult res = pearson(h_values, mean_kappa);
    c.ok = res.r > 0.0 && res.p < 0.01;
    char buf[96];
    std::snprintf(buf, sizeof buf, "r = %.4f, p = %.3g over 50 batches", res.r, res.p);
    c.detail = buf;
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "worked parsing example, 10-bit exhaustive prefix"},
        {2, "phrase-count and complexity bounds over 4000 random strings"},
        {3, "epsilon at N = 4096"},
        {4, "normalized complexity saturates on exhaustive strings"},
        {5, "correlation table reproduction from printed coefficients"},
        {6, "sample-size formulas"},
        {7, "CHSH endpoints: singlet vs local hidden-variable strategies"},
        {8, "biased coin batch frequency statistics"},
        {9, "keyed generator vs OS entropy indistinguishability"},
        {10, "entropy vs normalized complexity correlation"},
    };
    const double budgets_ms[] = {1, 30000, 1000, 1000, 1000, 1000, 10000, 10000, 300000, 300000};

    void (*checks[])(Criterion&) = {
        check_parse_example, check_bounds,    check_epsilon,
        check_saturation,    check_pearson_rows, check_sample_sizes,
        check_chsh_endpoints, check_coin_toss, check_indistinguishability,
        check_entropy_correlation,
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Criterion& c = criteria[i];
        const auto start = Clock::now();
        checks[i](c);
        c.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        if (c.ms > budgets_ms[i]) {
            c.ok = false;
            c.detail += " [over time budget]";
        }
        std::printf("%s criterion %2d: %s - %s (%.1f ms)\n", c.ok ? "PASS" : "FAIL", c.id,
                    c.name, c.detail.c_str(), c.ms);
        if (!c.ok) ++failures;
    }
    if (failures == 0)
        std::printf("all %zu criteria passed\n", criteria.size());
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures;
}
