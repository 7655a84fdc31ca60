#pragma once

#include <cstddef>
#include <vector>

#include "seqcred/random.hpp"

namespace seqcred {

/// Finite vector of coefficients of an orthonormal basis expansion.
/// Coordinate i >= 1 of the infinite sequence is coeffs[i-1]; entries beyond
/// the stored length are exactly zero.  All entries are finite and the
/// stored length is at least one.
class CoefficientSequence {
 public:
  explicit CoefficientSequence(std::vector<double> coeffs);

  static CoefficientSequence zeros(std::size_t len);

  /// Unit coordinate vector e_i (1-based), stored length max(len, i).
  static CoefficientSequence unit(std::size_t i, std::size_t len = 0);

  std::size_t size() const noexcept { return coeffs_.size(); }

  /// 1-based coordinate access with the implicit zero tail.
  double coeff(std::size_t i) const {
    return (i >= 1 && i <= coeffs_.size()) ? coeffs_[i - 1] : 0.0;
  }

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

/// Deterministic multipliers kappa_i of the (diagonal) forward operator.
class KappaSpec {
 public:
  enum class Kind { kDirect, kPolyIllPosed };

  static KappaSpec direct() { return KappaSpec(Kind::kDirect, 0.0); }
  static KappaSpec poly_ill_posed(double p);

  Kind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }

  double eval(std::size_t i) const;

 private:
  KappaSpec(Kind kind, double p) : kind_(kind), p_(p) {}
  Kind kind_;
  double p_;
};

double kappa_eval(const KappaSpec& spec, std::size_t i);

/// Observation model Y_i = kappa_i theta_i + n^{-1/2} eps_i, truncated at
/// n_trunc stored coordinates.  n is a positive real: only the noise scale
/// n^{-1/2} enters, so log-spaced n grids are fine.
struct ModelConfig {
  double n = 1.0;
  KappaSpec kappa = KappaSpec::direct();
  std::size_t n_trunc = 1;

  ModelConfig(double n_, KappaSpec kappa_, std::size_t n_trunc_);

  /// Model with the default truncation policy applied.
  static ModelConfig with_defaults(double n, KappaSpec kappa = KappaSpec::direct());
};

/// Default series truncation: max(2048, ceil(4 n^{1/(1+2 alpha_min)})).
/// Keeps the signal window k_alpha ~ n^{1/(2 alpha+1)} well inside the
/// stored range for every supported alpha >= alpha_min.
std::size_t default_n_trunc(double n, double alpha_min = 0.25);

/// Draw Y of length model.n_trunc from the observation model.
CoefficientSequence sample_data(const CoefficientSequence& truth, const ModelConfig& model,
                                RandomStream rng);

/// Hoelder-type ball norm: sum_i i^alpha |theta_i| over stored entries.
double holder_norm(const CoefficientSequence& theta, double alpha);

/// Squared Sobolev norm: sum_i i^{2 alpha} theta_i^2.
double sobolev_norm_sq(const CoefficientSequence& theta, double alpha);

double l2_norm(const CoefficientSequence& theta);

/// Exact coefficient-space L2 distance, zero tails respected.
double l2_distance(const CoefficientSequence& a, const CoefficientSequence& b);

/// Upper bound N^{-2 alpha}/(2 alpha) on the ignored prior-variance tail
/// mass sum_{i>N} i^{-(1+2 alpha)}.
double truncation_tail_bound(double alpha, std::size_t n_trunc);

}  // namespace seqcred
