#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zerocell/log_space.hpp"
#include "zerocell/random.hpp"
#include "zerocell/special_functions.hpp"

namespace zerocell {

// Stationary Poisson-Voronoi mosaic. The norm of a point drawn uniformly in
// the nucleus-centered zero cell has the closed-form law evaluated below.
// Everything is carried in log scale so dimensions in the hundreds work.
struct VoronoiModel {
    int dim = 0;
    double log_cell_intensity = 0.0; // ln lambda
    double rho = 0.0;                // (ln lambda) / dim

    static VoronoiModel with_rho(int dim, double rho) {
        check_dim(dim);
        return {dim, dim * rho, rho};
    }

    static VoronoiModel with_log_cell_intensity(int dim, double log_lambda) {
        check_dim(dim);
        return {dim, log_lambda, log_lambda / dim};
    }

    static VoronoiModel with_cell_intensity(int dim, double lambda) {
        if (!(lambda > 0.0)) throw std::domain_error("VoronoiModel: requires lambda > 0");
        return with_log_cell_intensity(dim, std::log(lambda));
    }

  private:
    static void check_dim(int dim) {
        if (dim < 1) throw std::domain_error("VoronoiModel: requires dim >= 1");
    }
};

// ln(lambda kappa_n R^n), the exponent that drives the whole law.
inline double log_norm_exponent(const VoronoiModel& m, double radius) {
    if (!(radius >= 0.0)) throw std::domain_error("log_norm_exponent: requires radius >= 0");
    if (radius == 0.0) return -std::numeric_limits<double>::infinity();
    return m.log_cell_intensity + log_unit_ball_volume(m.dim).log() + m.dim * std::log(radius);
}

// ln f_Y(x) at |x| = radius: ln lambda - lambda kappa_n radius^n.
inline LogValue norm_density(const VoronoiModel& m, double radius) {
    const double L = log_norm_exponent(m, radius);
    if (L > 709.0) return LogValue::zero();
    return LogValue::from_log(m.log_cell_intensity - std::exp(L));
}

// P(|Y| <= R) = 1 - exp(-lambda kappa_n R^n).
inline double cdf_norm(const VoronoiModel& m, double radius) {
    const double L = log_norm_exponent(m, radius);
    if (L > 709.0) return 1.0;
    return -std::expm1(-std::exp(L));
}

// ln P(|Y| <= R), stable for probabilities far below double range.
inline double log_cdf_norm(const VoronoiModel& m, double radius) {
    const double L = log_norm_exponent(m, radius);
    if (L > 709.0) return -0.0;
    const double e = std::exp(L);
    if (e < 1e-12) return L + std::log1p(-0.5 * e); // 1 - e^{-e} = e(1 - e/2 + ...)
    if (e > 37.0) return -std::exp(-e);             // ln(1 - x) = -x at this scale
    return std::log(-std::expm1(-e));
}

// ln P(|Y| >= R) = -lambda kappa_n R^n exactly.
inline double log_survival_norm(const VoronoiModel& m, double radius) {
    const double L = log_norm_exponent(m, radius);
    if (L > 709.0) return -std::numeric_limits<double>::infinity();
    return -std::exp(L);
}

// ln E|Y|^k = ln Gamma(1 + k/n) - (k/n) ln(lambda kappa_n); any real k >= 0.
inline LogValue norm_moment(const VoronoiModel& m, double k) {
    if (!(k >= 0.0)) throw std::domain_error("norm_moment: requires k >= 0");
    const double kn = k / m.dim;
    return LogValue::from_log(log_gamma(1.0 + kn) -
                              kn * (m.log_cell_intensity + log_unit_ball_volume(m.dim).log()));
}

// sigma = E[|Y|^2]^{1/2}.
inline double sigma(const VoronoiModel& m) { return std::exp(0.5 * norm_moment(m, 2.0).log()); }

// Large-n form sqrt(n) e^{-rho} / sqrt(2 pi e).
inline double sigma_asymptotic(const VoronoiModel& m) {
    return std::sqrt(m.dim / (2.0 * kPi * std::exp(1.0))) * std::exp(-m.rho);
}

// Exact draw of |Y| by inverting the CDF: (E / (lambda kappa_n))^{1/n}.
inline double sample_norm(const VoronoiModel& m, RandomStream& rng) {
    const double e = rng.exponential();
    if (e == 0.0) return 0.0;
    return std::exp((std::log(e) - m.log_cell_intensity - log_unit_ball_volume(m.dim).log()) /
                    m.dim);
}

enum class DeviationSide { upper, lower };

// Proven deviation bounds around sigma: P(|Y| >= (1+t) sigma) <= e^{-e^{-1}(1+t)^n}
// and P(|Y| <= (1-t) sigma) <= (1-t)^n.
inline double deviation_bound(const VoronoiModel& m, double t, DeviationSide side) {
    if (side == DeviationSide::upper) {
        if (!(t > 0.0)) throw std::domain_error("deviation_bound: upper side requires t > 0");
        const double growth = m.dim * std::log1p(t);
        if (growth > 709.0) return 0.0;
        return std::exp(-std::exp(-1.0) * std::exp(growth));
    }
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("deviation_bound: lower side requires t in (0,1)");
    if (m.dim < 2) throw std::domain_error("deviation_bound: lower side requires dim >= 2");
    return std::exp(m.dim * std::log1p(-t));
}

// Exponential rate of P(|Y_n| <= sqrt(n) R) under cell intensity e^{n rho}:
// rho + ln sqrt(2 pi e) + ln R. Negative values are small-ball decay rates;
// positive values drive the doubly exponential upper tail.
inline double scaled_norm_rate(double R, double rho) {
    if (!(R > 0.0)) throw std::domain_error("scaled_norm_rate: requires R > 0");
    return rho + 0.5 * std::log(2.0 * kPi * std::exp(1.0)) + std::log(R);
}

// Radius multiplier where the rate changes sign: e^{-rho} (2 pi e)^{-1/2}.
inline double concentration_radius(double rho) {
    return std::exp(-rho) / std::sqrt(2.0 * kPi * std::exp(1.0));
}

// Empirical E(|Y| / sqrt(mean |Y|^2) - 1)^2 from a batch of norm samples.
inline double thin_shell_statistic(std::span<const double> norms) {
    if (norms.empty()) throw std::invalid_argument("thin_shell_statistic: empty sample");
    double m2 = 0.0;
    for (double v : norms) m2 += v * v;
    m2 /= static_cast<double>(norms.size());
    if (!(m2 > 0.0)) throw std::invalid_argument("thin_shell_statistic: zero second moment");
    const double s = std::sqrt(m2);
    double acc = 0.0;
    for (double v : norms) {
        const double d = v / s - 1.0;
        acc += d * d;
    }
    return acc / static_cast<double>(norms.size());
}

struct RadialLawSummary {
    double sigma = 0.0;
    std::vector<std::pair<double, LogValue>> moments; // (k, ln E|Y|^k)
};

inline RadialLawSummary radial_law_summary(const VoronoiModel& m, std::span<const double> ks) {
    RadialLawSummary out;
    out.sigma = sigma(m);
    out.moments.reserve(ks.size());
    for (double k : ks) out.moments.emplace_back(k, norm_moment(m, k));
    return out;
}

} // namespace zerocell
