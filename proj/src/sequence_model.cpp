#include "seqcred/sequence_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seqcred {

CoefficientSequence::CoefficientSequence(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw std::invalid_argument("CoefficientSequence: stored length must be >= 1");
  }
  for (double x : coeffs_) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("CoefficientSequence: entries must be finite");
    }
  }
}

CoefficientSequence CoefficientSequence::zeros(std::size_t len) {
  if (len == 0) throw std::invalid_argument("CoefficientSequence: stored length must be >= 1");
  return CoefficientSequence(std::vector<double>(len, 0.0));
}

CoefficientSequence CoefficientSequence::unit(std::size_t i, std::size_t len) {
  if (i == 0) throw std::invalid_argument("CoefficientSequence::unit: i is 1-based");
  std::vector<double> c(std::max(i, len), 0.0);
  c[i - 1] = 1.0;
  return CoefficientSequence(std::move(c));
}

KappaSpec KappaSpec::poly_ill_posed(double p) {
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw std::invalid_argument("KappaSpec: ill-posedness degree p must be >= 0");
  }
  return KappaSpec(Kind::kPolyIllPosed, p);
}

double KappaSpec::eval(std::size_t i) const {
  if (i == 0) throw std::invalid_argument("kappa_eval: index is 1-based");
  switch (kind_) {
    case Kind::kDirect:
      return 1.0;
    case Kind::kPolyIllPosed:
      return std::pow(static_cast<double>(i), -p_);
  }
  throw std::logic_error("KappaSpec: unknown kind");
}

double kappa_eval(const KappaSpec& spec, std::size_t i) { return spec.eval(i); }

ModelConfig::ModelConfig(double n_, KappaSpec kappa_, std::size_t n_trunc_)
    : n(n_), kappa(kappa_), n_trunc(n_trunc_) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("ModelConfig: n must be a positive real");
  }
  if (n_trunc < 1) {
    throw std::invalid_argument("ModelConfig: n_trunc must be >= 1");
  }
}

ModelConfig ModelConfig::with_defaults(double n, KappaSpec kappa) {
  return ModelConfig(n, kappa, default_n_trunc(n));
}

std::size_t default_n_trunc(double n, double alpha_min) {
  if (!(n > 0.0) || !(alpha_min > 0.0)) {
    throw std::invalid_argument("default_n_trunc: n and alpha_min must be positive");
  }
  const double window = 4.0 * std::pow(n, 1.0 / (1.0 + 2.0 * alpha_min));
  return std::max<std::size_t>(2048, static_cast<std::size_t>(std::ceil(window)));
}

CoefficientSequence sample_data(const CoefficientSequence& truth, const ModelConfig& model,
                                RandomStream rng) {
  const double noise_sd = 1.0 / std::sqrt(model.n);
  std::vector<double> y(model.n_trunc);
  for (std::size_t i = 1; i <= model.n_trunc; ++i) {
    y[i - 1] = model.kappa.eval(i) * truth.coeff(i) + noise_sd * rng.normal();
  }
  return CoefficientSequence(std::move(y));
}

double holder_norm(const CoefficientSequence& theta, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("holder_norm: alpha must be positive");
  double s = 0.0;
  for (std::size_t i = 1; i <= theta.size(); ++i) {
    s += std::pow(static_cast<double>(i), alpha) * std::abs(theta.coeff(i));
  }
  return s;
}

double sobolev_norm_sq(const CoefficientSequence& theta, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("sobolev_norm_sq: alpha must be positive");
  double s = 0.0;
  for (std::size_t i = 1; i <= theta.size(); ++i) {
    const double t = theta.coeff(i);
    s += std::pow(static_cast<double>(i), 2.0 * alpha) * t * t;
  }
  return s;
}

double l2_norm(const CoefficientSequence& theta) {
  double s = 0.0;
  for (double x : theta.coeffs()) s += x * x;
  return std::sqrt(s);
}

double l2_distance(const CoefficientSequence& a, const CoefficientSequence& b) {
  const std::size_t len = std::max(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 1; i <= len; ++i) {
    const double d = a.coeff(i) - b.coeff(i);
    s += d * d;
  }
  return std::sqrt(s);
}

double truncation_tail_bound(double alpha, std::size_t n_trunc) {
  if (!(alpha > 0.0)) throw std::invalid_argument("truncation_tail_bound: alpha must be positive");
  if (n_trunc < 1) throw std::invalid_argument("truncation_tail_bound: n_trunc must be >= 1");
  return std::pow(static_cast<double>(n_trunc), -2.0 * alpha) / (2.0 * alpha);
}

}  // namespace seqcred
