#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace randkit {

/// -sum p log2 p over a probability vector (0 log 0 = 0). Entries must be
/// non-negative and sum to 1 within 1e-9.
double shannon_entropy(std::span<const double> dist);

/// Binary entropy h(p) in bits.
double binary_entropy(double p);

struct WelchResult {
    double t = 0.0;
    double df = 0.0; ///< Welch-Satterthwaite degrees of freedom
    double p = 1.0;  ///< two-sided
};

/// Two-sample t-test without the equal-variance assumption. Each sample
/// needs at least two values and at least one needs nonzero variance.
WelchResult welch_t(std::span<const double> xs, std::span<const double> ys);

struct PearsonResult {
    double r = 0.0;
    double p = 1.0;      ///< two-sided, from t with n-2 degrees of freedom
    double ci_lo = -1.0; ///< Fisher-z interval; [-1, 1] when n = 3
    double ci_hi = 1.0;
    std::size_t n = 0;
    bool degenerate = false; ///< |r| = 1: p and CI carry no information
};

/// Sample correlation with p-value and Fisher-z confidence interval.
/// Needs n >= 3 and nonzero variance in both samples; the interval
/// requires n >= 4 and is reported as [-1, 1] for n = 3.
PearsonResult pearson(std::span<const double> xs, std::span<const double> ys,
                      double conf = 0.95);

/// Same inference from an already-known coefficient and sample size, for
/// recomputing p and CI when only (r, n) are available.
PearsonResult pearson_from_r(double r, std::size_t n, double conf = 0.95);

/// One run's coordinates for the stratified correlation: string length,
/// CHSH S, and the measure value under study.
struct StratumRecord {
    std::size_t n = 0;
    double s = 0.0;
    double value = 0.0;
};

struct StratumResult {
    std::size_t lower = 0; ///< stratum is lower <= N < upper
    std::size_t upper = 0; ///< SIZE_MAX for the open last stratum
    std::size_t count = 0;
    PearsonResult stats;
};

/// Partitions records by N at the given edges and correlates S against
/// the measure value within each stratum. Every stratum must be hit by
/// at least three records.
std::vector<StratumResult> stratified_pearson(std::span<const StratumRecord> records,
                                              std::span<const std::size_t> edges,
                                              double conf = 0.95);

/// Default stratum edges: N < 20000, 20000 <= N < 40000, N >= 40000.
std::span<const std::size_t> default_stratum_edges();

/// Fisher-z sample size for detecting correlation r at the given two-sided
/// level and power: ceil(((z_{1-a/2} + z_power)/atanh r)^2 + 3), floored
/// at the minimal usable n of 4.
std::size_t sample_size_power(double r, double alpha, double power);

struct SampleSizeCi {
    std::size_t n_exact = 0;  ///< smallest n whose CI half-width meets the target
    std::size_t n_approx = 0; ///< closed form (z(1-r^2)/halfwidth)^2 + 3, floored
};

/// Sample size so that the Fisher-z confidence interval for r has
/// half-width at most `halfwidth`. The iterative search is authoritative;
/// the closed-form approximation is reported alongside it.
SampleSizeCi sample_size_ci(double r, double conf, double halfwidth);

struct BoxStats {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
    double iqr = 0.0;
    double whisker_lo = 0.0; ///< smallest data point within 1.5 IQR of q1
    double whisker_hi = 0.0; ///< largest data point within 1.5 IQR of q3
    std::vector<double> outliers;
};

/// Five-number summary with linear-interpolation quartiles and 1.5 IQR
/// whisker fences.
BoxStats box_stats(std::span<const double> values);

/// Numeric kernels, exposed so tests can pin them independently.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);
double student_t_two_sided_p(double t, double df);
double normal_cdf(double x);
double normal_quantile(double p);

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);

} // namespace randkit
