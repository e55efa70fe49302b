#include "randkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace randkit {

double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("variance needs at least two values");
    const double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return acc / static_cast<double>(xs.size() - 1);
}

double shannon_entropy(std::span<const double> dist) {
    double sum = 0.0;
    for (double p : dist) {
        if (!(p >= 0.0)) throw std::invalid_argument("entropy: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("entropy: probabilities sum to " + std::to_string(sum));
    double h = 0.0;
    for (double p : dist)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p outside [0, 1]");
    const double dist[2] = {p, 1.0 - p};
    return shannon_entropy(dist);
}

namespace {

// Continued fraction for the regularized incomplete beta (Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int max_iter = 500;
    constexpr double eps = 1e-15;
    constexpr double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("incomplete beta: parameters must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete beta: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(ln_front) * beta_cf(a, b, x) / a;
    return 1.0 - std::exp(ln_front) * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("t-distribution: df must be positive");
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double student_t_cdf(double t, double df) {
    const double half_tail = 0.5 * student_t_two_sided_p(t, df);
    return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p outside (0, 1)");
    // Acklam's rational approximation, then one Halley refinement step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

WelchResult welch_t(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() < 2 || ys.size() < 2)
        throw std::invalid_argument("welch_t: each sample needs at least two values");
    const double vx = sample_variance(xs);
    const double vy = sample_variance(ys);
    if (vx == 0.0 && vy == 0.0)
        throw std::invalid_argument("welch_t: both samples have zero variance");
    const auto nx = static_cast<double>(xs.size());
    const auto ny = static_cast<double>(ys.size());
    const double se2x = vx / nx;
    const double se2y = vy / ny;
    WelchResult out;
    out.t = (mean(xs) - mean(ys)) / std::sqrt(se2x + se2y);
    out.df = (se2x + se2y) * (se2x + se2y) /
             (se2x * se2x / (nx - 1.0) + se2y * se2y / (ny - 1.0));
    out.p = student_t_two_sided_p(out.t, out.df);
    return out;
}

PearsonResult pearson(std::span<const double> xs, std::span<const double> ys, double conf) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
    if (xs.size() < 3) throw std::invalid_argument("pearson: need at least three points");
    if (!(conf > 0.0 && conf < 1.0))
        throw std::invalid_argument("pearson: confidence level outside (0, 1)");
    const std::size_t n = xs.size();
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: constant sample");

    const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    return pearson_from_r(r, n, conf);
}

PearsonResult pearson_from_r(double r, std::size_t n, double conf) {
    if (!(r >= -1.0 && r <= 1.0))
        throw std::invalid_argument("pearson_from_r: r outside [-1, 1]");
    if (n < 3) throw std::invalid_argument("pearson_from_r: need at least three points");
    if (!(conf > 0.0 && conf < 1.0))
        throw std::invalid_argument("pearson_from_r: confidence level outside (0, 1)");

    PearsonResult out;
    out.n = n;
    out.r = r;
    const double nf = static_cast<double>(n);
    const double one_minus_r2 = 1.0 - r * r;
    if (one_minus_r2 <= 0.0) {
        // Exactly collinear data: the test statistic diverges.
        out.degenerate = true;
        out.p = 0.0;
        out.ci_lo = out.ci_hi = r;
        return out;
    }
    const double t = r * std::sqrt((nf - 2.0) / one_minus_r2);
    out.p = student_t_two_sided_p(t, nf - 2.0);
    if (n == 3) {
        out.ci_lo = -1.0;
        out.ci_hi = 1.0;
    } else {
        const double z = std::atanh(r);
        const double delta = normal_quantile(0.5 + conf / 2.0) / std::sqrt(nf - 3.0);
        out.ci_lo = std::tanh(z - delta);
        out.ci_hi = std::tanh(z + delta);
    }
    return out;
}

std::span<const std::size_t> default_stratum_edges() {
    static constexpr std::size_t edges[] = {20000, 40000};
    return edges;
}

std::vector<StratumResult> stratified_pearson(std::span<const StratumRecord> records,
                                              std::span<const std::size_t> edges, double conf) {
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i] <= edges[i - 1])
            throw std::invalid_argument("stratified_pearson: edges must increase");

    const std::size_t n_strata = edges.size() + 1;
    std::vector<std::vector<double>> s(n_strata), v(n_strata);
    for (const StratumRecord& rec : records) {
        std::size_t idx = 0;
        while (idx < edges.size() && rec.n >= edges[idx]) ++idx;
        s[idx].push_back(rec.s);
        v[idx].push_back(rec.value);
    }

    std::vector<StratumResult> out;
    out.reserve(n_strata);
    for (std::size_t i = 0; i < n_strata; ++i) {
        StratumResult res;
        res.lower = i == 0 ? 0 : edges[i - 1];
        res.upper = i < edges.size() ? edges[i] : std::numeric_limits<std::size_t>::max();
        res.count = s[i].size();
        if (s[i].empty())
            throw std::invalid_argument("stratified_pearson: stratum " + std::to_string(i) +
                                        " is empty");
        res.stats = pearson(s[i], v[i], conf);
        out.push_back(std::move(res));
    }
    return out;
}

std::size_t sample_size_power(double r, double alpha, double power) {
    if (r == 0.0) throw std::invalid_argument("sample_size_power: r = 0 needs unbounded n");
    if (!(std::abs(r) < 1.0)) throw std::invalid_argument("sample_size_power: |r| must be < 1");
    if (!(alpha > 0.0 && alpha < 1.0) || !(power > 0.0 && power < 1.0))
        throw std::invalid_argument("sample_size_power: alpha and power must lie in (0, 1)");
    const double z_alpha = normal_quantile(1.0 - alpha / 2.0);
    const double z_power = normal_quantile(power);
    const double ratio = (z_alpha + z_power) / std::atanh(std::abs(r));
    const double n = std::ceil(ratio * ratio + 3.0);
    return std::max<std::size_t>(4, static_cast<std::size_t>(n));
}

SampleSizeCi sample_size_ci(double r, double conf, double halfwidth) {
    if (!(std::abs(r) < 1.0) || r == 0.0)
        throw std::invalid_argument("sample_size_ci: need 0 < |r| < 1");
    if (!(conf > 0.0 && conf < 1.0))
        throw std::invalid_argument("sample_size_ci: confidence level outside (0, 1)");
    if (!(halfwidth > 0.0 && halfwidth < 1.0))
        throw std::invalid_argument("sample_size_ci: half-width target unreachable");

    const double z_c = normal_quantile(0.5 + conf / 2.0);
    const double z_r = std::atanh(r);

    SampleSizeCi out;
    const double approx = z_c * (1.0 - r * r) / halfwidth;
    out.n_approx = static_cast<std::size_t>(std::floor(approx * approx + 3.0));

    constexpr std::size_t n_cap = 100000000;
    for (std::size_t n = 4; n <= n_cap; ++n) {
        const double delta = z_c / std::sqrt(static_cast<double>(n) - 3.0);
        const double hw = 0.5 * (std::tanh(z_r + delta) - std::tanh(z_r - delta));
        if (hw <= halfwidth) {
            out.n_exact = n;
            return out;
        }
    }
    throw std::invalid_argument("sample_size_ci: half-width target unreachable");
}

namespace {

// Quantile by linear interpolation of order statistics ("type 7").
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace

BoxStats box_stats(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("box_stats: empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    BoxStats out;
    out.min = sorted.front();
    out.max = sorted.back();
    out.q1 = quantile_sorted(sorted, 0.25);
    out.median = quantile_sorted(sorted, 0.50);
    out.q3 = quantile_sorted(sorted, 0.75);
    out.iqr = out.q3 - out.q1;

    const double fence_lo = out.q1 - 1.5 * out.iqr;
    const double fence_hi = out.q3 + 1.5 * out.iqr;
    out.whisker_lo = out.q3;
    out.whisker_hi = out.q1;
    bool any_inside = false;
    for (double x : sorted) {
        if (x < fence_lo || x > fence_hi) {
            out.outliers.push_back(x);
        } else {
            if (!any_inside) {
                out.whisker_lo = x;
                any_inside = true;
            }
            out.whisker_hi = x;
        }
    }
    // Quartiles lie inside the fences, so some point is always inside.
    return out;
}

} // namespace randkit
