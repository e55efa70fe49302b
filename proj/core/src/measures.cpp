#include "randkit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "randkit/borel.hpp"
#include "randkit/lz.hpp"

namespace randkit {

MeasureReport measure_suite(const BitString& s, std::string source_id) {
    if (s.size() < 2)
        throw std::invalid_argument("measure_suite: string too short for lz (need N >= 2)");
    if (s.size() < 4)
        throw std::invalid_argument("measure_suite: string too short for borel (need N >= 4)");

    MeasureReport report;
    report.meta.source_id = std::move(source_id);
    report.meta.n = s.size();
    report.meta.relative_frequency = relative_frequency(s);

    const LzReport lz = lz_report(s);
    report.k = lz.k;
    report.kappa = lz.kappa;
    report.b = borel_measure(s);
    report.borel_normal = report.b <= 1.0;
    return report;
}

std::string to_string(MeasureId id) {
    switch (id) {
    case MeasureId::k: return "K";
    case MeasureId::kappa: return "kappa";
    case MeasureId::b: return "B";
    case MeasureId::frequency: return "frequency";
    }
    throw std::invalid_argument("unknown measure id");
}

MeasureId measure_id_from_string(const std::string& name) {
    if (name == "K" || name == "k") return MeasureId::k;
    if (name == "kappa") return MeasureId::kappa;
    if (name == "B" || name == "b") return MeasureId::b;
    if (name == "frequency") return MeasureId::frequency;
    throw std::invalid_argument("unknown measure id: " + name);
}

double measure_value(const MeasureReport& report, MeasureId id) {
    switch (id) {
    case MeasureId::k: return report.k;
    case MeasureId::kappa: return report.kappa;
    case MeasureId::b: return report.b;
    case MeasureId::frequency: return report.meta.relative_frequency;
    }
    throw std::invalid_argument("unknown measure id");
}

std::string to_string(ThresholdRule rule) {
    return rule == ThresholdRule::greater_than ? "greater_than" : "less_than";
}

bool Distinguisher::accepts(const MeasureReport& report) const {
    const double v = measure_value(report, measure);
    return rule == ThresholdRule::greater_than ? v > threshold : v < threshold;
}

namespace {

std::vector<double> column(std::span<const MeasureReport> batch, MeasureId id) {
    std::vector<double> out;
    out.reserve(batch.size());
    for (const MeasureReport& r : batch) out.push_back(measure_value(r, id));
    return out;
}

WelchResult compare_measure(std::span<const MeasureReport> a, std::span<const MeasureReport> b,
                            MeasureId id) {
    try {
        return welch_t(column(a, id), column(b, id));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("compare_batches, measure " + to_string(id) + ": " + e.what());
    }
}

// Pilot draws sit far above any realistic estimate trial index so that the
// threshold never sees the strings it will be judged on.
constexpr std::uint64_t pilot_trial_base = 1ull << 32;
constexpr std::size_t pilot_per_source = 25;

// Wald interval for a difference of two independent proportions.
double wald_halfwidth(double p1, double p2, double trials) {
    return 1.959963984540054 *
           std::sqrt(p1 * (1.0 - p1) / trials + p2 * (1.0 - p2) / trials);
}

} // namespace

BatchComparison compare_batches(std::span<const MeasureReport> batch_a,
                                std::span<const MeasureReport> batch_b) {
    if (batch_a.size() < 2 || batch_b.size() < 2)
        throw std::invalid_argument("compare_batches: each batch needs at least two reports");
    BatchComparison out;
    out.k = compare_measure(batch_a, batch_b, MeasureId::k);
    out.kappa = compare_measure(batch_a, batch_b, MeasureId::kappa);
    out.b = compare_measure(batch_a, batch_b, MeasureId::b);
    return out;
}

AdvantageEstimate estimate_advantage(const SourceSpec& src1, const SourceSpec& src2,
                                     const Distinguisher& d, std::size_t trials, std::size_t n) {
    if (trials < 30) throw std::invalid_argument("estimate_advantage: need at least 30 trials");

    auto acceptance_rate = [&](const SourceSpec& src) {
        SourceSpec spec = src;
        spec.n = n;
        std::size_t accepted = 0;
        for (std::size_t i = 0; i < trials; ++i) {
            const MeasureReport report = measure_suite(draw_bits(spec, i), spec.label());
            if (d.accepts(report)) ++accepted;
        }
        return static_cast<double>(accepted) / static_cast<double>(trials);
    };

    AdvantageEstimate out;
    out.trials = trials;
    out.rate1 = acceptance_rate(src1);
    out.rate2 = acceptance_rate(src2);
    out.diff = out.rate1 - out.rate2;
    out.adv = std::abs(out.diff);
    const double hw = wald_halfwidth(out.rate1, out.rate2, static_cast<double>(trials));
    out.ci_lo = std::max(-1.0, out.diff - hw);
    out.ci_hi = std::min(1.0, out.diff + hw);
    return out;
}

Distinguisher pilot_median_distinguisher(const SourceSpec& src1, const SourceSpec& src2,
                                         MeasureId id, std::size_t n) {
    std::vector<double> pooled;
    pooled.reserve(2 * pilot_per_source);
    for (const SourceSpec* src : {&src1, &src2}) {
        SourceSpec spec = *src;
        spec.n = n;
        for (std::size_t i = 0; i < pilot_per_source; ++i) {
            const MeasureReport report = measure_suite(draw_bits(spec, pilot_trial_base + i));
            pooled.push_back(measure_value(report, id));
        }
    }
    std::sort(pooled.begin(), pooled.end());
    const std::size_t half = pooled.size() / 2;
    const double median = 0.5 * (pooled[half - 1] + pooled[half]);
    return Distinguisher{id, ThresholdRule::greater_than, median};
}

} // namespace randkit
