#include "seqcred/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace seqcred {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

double prior_precision(std::size_t i, double alpha) {
  return std::pow(static_cast<double>(i), 1.0 + 2.0 * alpha);
}

}  // namespace

PosteriorState posterior_update(const CoefficientSequence& y, const PriorSpec& prior,
                                const ModelConfig& model) {
  if (!(prior.alpha > 0.0)) {
    throw std::invalid_argument("posterior_update: prior alpha must be positive");
  }
  if (y.size() != model.n_trunc) {
    throw std::invalid_argument("posterior_update: data length must equal model.n_trunc");
  }
  PosteriorState state;
  state.alpha = prior.alpha;
  state.n = model.n;
  state.kappa = model.kappa;
  state.means.resize(model.n_trunc);
  state.variances.resize(model.n_trunc);
  for (std::size_t i = 1; i <= model.n_trunc; ++i) {
    const double k = model.kappa.eval(i);
    const double v = 1.0 / (prior_precision(i, prior.alpha) + model.n * k * k);
    state.variances[i - 1] = v;
    state.means[i - 1] = v * model.n * k * y.coeff(i);
  }
  return state;
}

std::vector<double> posterior_mean_function(const PosteriorState& state, const Grid& grid) {
  return synthesize(CoefficientSequence(state.means), grid);
}

CoefficientSequence sample_posterior_coeffs(const PosteriorState& state, RandomStream rng) {
  std::vector<double> draw(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    draw[i] = state.means[i] + std::sqrt(state.variances[i]) * rng.normal();
  }
  return CoefficientSequence(std::move(draw));
}

MarginalLoglik::MarginalLoglik(const CoefficientSequence& y, const ModelConfig& model)
    : noise_var_(1.0 / model.n) {
  const std::size_t len = model.n_trunc;
  log_i_.resize(len);
  kappa_sq_.resize(len);
  y_sq_.resize(len);
  for (std::size_t i = 1; i <= len; ++i) {
    log_i_[i - 1] = std::log(static_cast<double>(i));
    const double k = model.kappa.eval(i);
    kappa_sq_[i - 1] = k * k;
    const double yi = y.coeff(i);
    y_sq_[i - 1] = yi * yi;
  }
}

double MarginalLoglik::operator()(double alpha) const {
  const double e = -(1.0 + 2.0 * alpha);
  double ll = 0.0;
  for (std::size_t j = 0; j < log_i_.size(); ++j) {
    const double marg_var = kappa_sq_[j] * std::exp(e * log_i_[j]) + noise_var_;
    ll -= 0.5 * (kLog2Pi + std::log(marg_var) + y_sq_[j] / marg_var);
  }
  return ll;
}

double marginal_loglik(const CoefficientSequence& y, double alpha, const ModelConfig& model) {
  if (!(alpha > 0.0)) throw std::invalid_argument("marginal_loglik: alpha must be positive");
  return MarginalLoglik(y, model)(alpha);
}

double empirical_bayes_alpha(const CoefficientSequence& y, const ModelConfig& model,
                             const AlphaBounds& bounds) {
  if (!(bounds.min > 0.0) || !(bounds.min < bounds.max)) {
    throw std::invalid_argument("empirical_bayes_alpha: need 0 < alpha_min < alpha_max");
  }
  const MarginalLoglik ll(y, model);

  // Coarse log-spaced scan; strict improvement keeps ties at the smaller alpha.
  constexpr std::size_t kCoarse = 256;
  const double log_lo = std::log(bounds.min);
  const double log_hi = std::log(bounds.max);
  std::vector<double> grid(kCoarse);
  for (std::size_t k = 0; k < kCoarse; ++k) {
    grid[k] = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) / (kCoarse - 1));
  }
  grid.front() = bounds.min;
  grid.back() = bounds.max;

  std::size_t best = 0;
  double best_ll = ll(grid[0]);
  for (std::size_t k = 1; k < kCoarse; ++k) {
    const double v = ll(grid[k]);
    if (v > best_ll) {
      best_ll = v;
      best = k;
    }
  }

  // Golden-section refinement inside the bracketing cells.
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[best + 1 >= kCoarse ? kCoarse - 1 : best + 1];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = ll(c);
  double fd = ll(d);
  while (b - a > 1e-4) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = ll(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = ll(d);
    }
  }
  const double refined = 0.5 * (a + b);

  // Smallest alpha wins ties; an endpoint maximum is returned exactly.
  double alpha_hat = bounds.min;
  double value = ll(bounds.min);
  for (double cand : {grid[best], refined, bounds.max}) {
    const double v = ll(cand);
    if (v > value || (v == value && cand < alpha_hat)) {
      value = v;
      alpha_hat = cand;
    }
  }
  return alpha_hat;
}

EbBracket eb_bracket_probe(const TruthSpec& truth, const ModelConfig& model, std::size_t reps,
                           RandomStream rng, const AlphaBounds& bounds) {
  if (reps < 30) throw std::invalid_argument("eb_bracket_probe: need reps >= 30");
  const CoefficientSequence theta0 = generate_truth(truth);
  EbBracket out;
  out.alphas.resize(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const CoefficientSequence y = sample_data(theta0, model, rng.substream(r));
    out.alphas[r] = empirical_bayes_alpha(y, model, bounds);
  }
  out.alpha_lo = order_statistic_quantile(out.alphas, 0.025);
  out.alpha_hi = order_statistic_quantile(out.alphas, 0.975);
  return out;
}

double contraction_rate(double alpha, double n) {
  if (!(alpha > 0.0) || !(n > 1.0)) {
    throw std::invalid_argument("contraction_rate: need alpha > 0 and n > 1");
  }
  return std::pow(n, -alpha / (2.0 * alpha + 1.0)) * std::sqrt(std::log(n));
}

double order_statistic_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("order_statistic_quantile: empty sample");
  if (!(q > 0.0) || !(q <= 1.0)) {
    throw std::invalid_argument("order_statistic_quantile: q must lie in (0,1]");
  }
  // nudge below exact integers so ceil matches the real-arithmetic convention
  const double pos = q * static_cast<double>(values.size());
  std::size_t rank = static_cast<std::size_t>(std::ceil(pos - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[rank - 1];
}

}  // namespace seqcred
