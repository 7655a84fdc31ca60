#pragma once

// Independent numerical oracles for the test suites.  Everything here is
// computed from first principles (quadrature, series, bisection) and never
// calls the library code it is used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracles {

/// Composite Simpson rule with n_intervals subdivisions (forced even).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t n_intervals = 1 << 14) {
  if (n_intervals % 2 == 1) ++n_intervals;
  const double h = (b - a) / static_cast<double>(n_intervals);
  double s = f(a) + f(b);
  for (std::size_t k = 1; k < n_intervals; ++k) {
    s += f(a + h * static_cast<double>(k)) * (k % 2 == 1 ? 4.0 : 2.0);
  }
  return s * h / 3.0;
}

/// Standard normal quantile by bisection on the erf-based CDF.
inline double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1)");
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Regularized lower incomplete gamma P(a, x) (series / continued fraction).
inline double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    // series representation
    double ap = a, sum = 1.0 / a, del = sum;
    for (int it = 0; it < 500; ++it) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // continued fraction for Q(a,x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

inline double chi_square_cdf(double dof, double x) { return gamma_p(dof / 2.0, x / 2.0); }

inline double chi_square_quantile(double dof, double p) {
  if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("chi_square_quantile: p in (0,1)");
  double lo = 0.0, hi = dof + 200.0 * std::sqrt(2.0 * dof) + 200.0;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    (chi_square_cdf(dof, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct PosteriorMoments {
  double mean = 0.0;
  double variance = 0.0;
};

struct BulkWindow {
  double lo = 0.0;
  double hi = 0.0;
  double peak_log = 0.0;
};

/// Locates the bulk of exp(log_w) numerically: scans a conservative bracket
/// for the mode, estimates the local width from the second difference, and
/// returns a window of +-16 widths around the mode.
inline BulkWindow locate_bulk(const std::function<double(double)>& log_w, double bracket_lo,
                              double bracket_hi, double width_guess) {
  double mode = bracket_lo;
  double best = -std::numeric_limits<double>::infinity();
  const int scan = 8192;
  for (int k = 0; k <= scan; ++k) {
    const double t = bracket_lo + (bracket_hi - bracket_lo) * k / scan;
    const double v = log_w(t);
    if (v > best) {
      best = v;
      mode = t;
    }
  }
  const double delta = width_guess * 1e-3;
  const double curv = (log_w(mode + delta) - 2.0 * log_w(mode) + log_w(mode - delta)) /
                      (delta * delta);
  const double width = curv < 0.0 ? 1.0 / std::sqrt(-curv) : width_guess;
  return {mode - 16.0 * width, mode + 16.0 * width, best};
}

/// Normal-normal Bayes update by quadrature: Y ~ N(kappa theta, 1/n),
/// theta ~ N(0, tau2).  Integrates the unnormalized posterior directly.
inline PosteriorMoments posterior_by_quadrature(double y, double kappa, double n, double tau2) {
  const double tau = std::sqrt(tau2);
  const double like_sd = 1.0 / (kappa * std::sqrt(n));
  const double sd_bound = std::min(tau, like_sd);
  auto log_w = [&](double t) {
    const double r = y - kappa * t;
    return -0.5 * n * r * r - 0.5 * t * t / tau2;
  };
  // the posterior bulk sits between the prior center 0 and y/kappa
  const BulkWindow win = locate_bulk(log_w, std::min(0.0, y / kappa) - 12.0 * sd_bound,
                                     std::max(0.0, y / kappa) + 12.0 * sd_bound, sd_bound);
  auto w = [&](double t) { return std::exp(log_w(t) - win.peak_log); };
  // 2^17 intervals: the mean's relative error is amplified by sd/|mean| under
  // heavy shrinkage, so the raw quadrature must be ~1e-12 accurate
  const std::size_t intervals = 1 << 17;
  const double m0 = simpson([&](double t) { return w(t); }, win.lo, win.hi, intervals);
  const double m1 = simpson([&](double t) { return t * w(t); }, win.lo, win.hi, intervals);
  const double mean = m1 / m0;
  // centered second pass avoids the m2 - mean^2 cancellation when sd << |mean|
  const double mc2 = simpson([&](double t) { return (t - mean) * (t - mean) * w(t); }, win.lo,
                             win.hi, intervals);
  return {mean, mc2 / m0};
}

/// log integral N(y | kappa theta, 1/n) N(theta | 0, tau2) dtheta by quadrature.
inline double marginal_loglik_by_quadrature(double y, double kappa, double n, double tau2) {
  const double tau = std::sqrt(tau2);
  const double like_sd = 1.0 / (kappa * std::sqrt(n));
  const double sd_bound = std::min(tau, like_sd);
  const double log_norm = 0.5 * std::log(n) - std::log(2.0 * M_PI) - std::log(tau);
  auto log_v = [&](double t) {
    const double r = y - kappa * t;
    return -0.5 * n * r * r - 0.5 * t * t / tau2;
  };
  const BulkWindow win = locate_bulk(log_v, std::min(0.0, y / kappa) - 14.0 * sd_bound,
                                     std::max(0.0, y / kappa) + 14.0 * sd_bound, sd_bound);
  const double integral =
      simpson([&](double t) { return std::exp(log_v(t) - win.peak_log); }, win.lo, win.hi);
  return log_norm + win.peak_log + std::log(integral);
}

/// Marginal log likelihood of alpha computed directly from the formula
/// (used as the objective of the brute-force argmax oracle).
inline double marginal_loglik_direct(const std::vector<double>& y, double alpha, double n,
                                     double kappa_p = 0.0) {
  double ll = 0.0;
  for (std::size_t i = 1; i <= y.size(); ++i) {
    const double kappa = std::pow(static_cast<double>(i), -kappa_p);
    const double v = kappa * kappa * std::pow(static_cast<double>(i), -(1.0 + 2.0 * alpha)) +
                     1.0 / n;
    ll += -0.5 * (std::log(2.0 * M_PI * v) + y[i - 1] * y[i - 1] / v);
  }
  return ll;
}

/// Brute-force uniform-grid argmax of the marginal log likelihood.
inline double eb_alpha_grid_argmax(const std::vector<double>& y, double n, double alpha_min,
                                   double alpha_max, std::size_t points = 2000,
                                   double kappa_p = 0.0) {
  double best_alpha = alpha_min;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points; ++k) {
    const double a =
        alpha_min + (alpha_max - alpha_min) * static_cast<double>(k) / (points - 1);
    const double v = marginal_loglik_direct(y, a, n, kappa_p);
    if (v > best) {
      best = v;
      best_alpha = a;
    }
  }
  return best_alpha;
}

}  // namespace oracles
