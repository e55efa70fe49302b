#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "randkit/bits.hpp"
#include "randkit/sources.hpp"
#include "randkit/stats.hpp"

namespace randkit {

/// Every randomness measure of one string, computed together so that
/// downstream rows can never mix values from different strings.
struct MeasureReport {
    StringMeta meta;          ///< source id, length, relative frequency
    double k = 0.0;           ///< LZ complexity K(N)
    double kappa = 0.0;       ///< normalized LZ complexity, in (0, 1]
    double b = 0.0;           ///< Borel normality measure
    bool borel_normal = false;
};

/// Computes all measures for a string. Needs N >= 4 (the block-frequency
/// measure is undefined below that); the error names the failing measure.
MeasureReport measure_suite(const BitString& s, std::string source_id = "");

enum class MeasureId { k, kappa, b, frequency };

std::string to_string(MeasureId id);
MeasureId measure_id_from_string(const std::string& name);
double measure_value(const MeasureReport& report, MeasureId id);

enum class ThresholdRule { greater_than, less_than };

std::string to_string(ThresholdRule rule);

/// Single-threshold binary test over one measure: the only distinguisher
/// family the harness models.
struct Distinguisher {
    MeasureId measure = MeasureId::kappa;
    ThresholdRule rule = ThresholdRule::greater_than;
    double threshold = 0.0;

    bool accepts(const MeasureReport& report) const;
};

struct BatchComparison {
    WelchResult k;
    WelchResult kappa;
    WelchResult b;
};

/// Welch's t per measure between two batches of reports (>= 2 each).
/// A measure with zero variance in both batches is an error.
BatchComparison compare_batches(std::span<const MeasureReport> batch_a,
                                std::span<const MeasureReport> batch_b);

struct AdvantageEstimate {
    double rate1 = 0.0;   ///< acceptance rate on source 1
    double rate2 = 0.0;
    double diff = 0.0;    ///< rate1 - rate2
    double adv = 0.0;     ///< |diff|
    double ci_lo = 0.0;   ///< 95% binomial-difference interval for diff
    double ci_hi = 0.0;
    std::size_t trials = 0; ///< per source
};

/// Empirical distinguisher advantage: draws `trials` strings of length n
/// from each source, applies the distinguisher to each measure report,
/// and compares acceptance rates. Needs trials >= 30.
AdvantageEstimate estimate_advantage(const SourceSpec& src1, const SourceSpec& src2,
                                     const Distinguisher& d, std::size_t trials, std::size_t n);

/// Threshold fitted on a fresh pilot batch (25 strings per source, pooled):
/// the pooled median gives the threshold maximal single-cut power without
/// touching the trials used for the estimate itself.
Distinguisher pilot_median_distinguisher(const SourceSpec& src1, const SourceSpec& src2,
                                         MeasureId id, std::size_t n);

} // namespace randkit
