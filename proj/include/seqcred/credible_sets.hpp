#pragma once

#include <cstdint>
#include <optional>

#include "seqcred/fourier.hpp"
#include "seqcred/inference.hpp"
#include "seqcred/random.hpp"
#include "seqcred/sequence_model.hpp"

namespace seqcred {

enum class NormKind { kL2, kSupGrid };

/// Provenance of a Monte Carlo radius.
struct McMeta {
  std::uint64_t draws = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::size_t effective_coords = 0;   // coordinates simulated after the variance cutoff
  double dropped_tail_bound = 0.0;    // bound on the ignored contribution
};

/// Ball (L2) or band (sup on a grid) around the posterior mean.
struct CredibleSet {
  explicit CredibleSet(CoefficientSequence center_) : center(std::move(center_)) {}

  CoefficientSequence center;
  double radius = 0.0;
  NormKind norm_kind = NormKind::kL2;
  std::optional<Grid> grid;           // present iff norm_kind == kSupGrid
  double credibility = 0.5;           // 1 - gamma
  double inflation = 1.0;
  McMeta mc;

  double effective_radius() const { return inflation * radius; }
};

struct RadiusEstimate {
  double radius = 0.0;
  double mc_se = 0.0;   // batch-means standard error of the quantile
  McMeta meta;
};

/// (1-gamma)-quantile of ||Z||_inf over the grid, where Z is the mean-zero
/// posterior process Z(x) = sum_i sqrt(v_i) xi_i phi_i(x).  Depends on the
/// posterior only through the variances: identical streams give bit-identical
/// radii for any two datasets with the same (alpha, n, kappa).
double sup_radius(const PosteriorState& state, double gamma, const Grid& grid, std::size_t draws,
                  RandomStream rng, int threads = 1);
RadiusEstimate sup_radius_detail(const PosteriorState& state, double gamma, const Grid& grid,
                                 std::size_t draws, RandomStream rng, int threads = 1);

/// (1-gamma)-quantile of sqrt(sum_i v_i xi_i^2), the posterior law of
/// ||theta - theta_hat||_2 (weighted chi-square root).
double l2_radius(const PosteriorState& state, double gamma, std::size_t draws, RandomStream rng,
                 int threads = 1);
RadiusEstimate l2_radius_detail(const PosteriorState& state, double gamma, std::size_t draws,
                                RandomStream rng, int threads = 1);

/// Credible set of the requested kind centered at the posterior mean.
CredibleSet make_credible_set(const PosteriorState& state, double gamma, NormKind norm_kind,
                              const std::optional<Grid>& grid, std::size_t draws, RandomStream rng,
                              int threads = 1);

/// Same set with inflation factor M (effective radius M * radius).
CredibleSet inflate(CredibleSet set, double inflation);

/// Distance from the set's center in the set's norm.
double norm_distance(const CredibleSet& set, const CoefficientSequence& point);

/// Inclusive membership: norm_distance <= inflation * radius.
bool contains_truth(const CredibleSet& set, const CoefficientSequence& truth);

/// Analytic envelope sqrt(8 E||Z||_inf^2 log(2/gamma)) with the second moment
/// estimated by Monte Carlo; an upper bound for sup_radius.
double borell_radius_bound(const PosteriorState& state, double gamma, const Grid& grid,
                           std::size_t draws, RandomStream rng, int threads = 1);

struct SlepianProbe {
  double e_sup = 0.0;       // Monte Carlo estimate of E||Z||_inf over the grid
  double rate_ratio = 0.0;  // e_sup / (n^{-a/(2a+1)} sqrt(log n))
};

/// Probes the lower-bound side of the radius: E||Z||_inf against the
/// contraction rate; the harness asserts the ratio stays banded across n.
SlepianProbe slepian_lower_probe(const PosteriorState& state, double alpha, double n,
                                 const Grid& grid, std::size_t draws, RandomStream rng,
                                 int threads = 1);

/// Fraction of fresh posterior draws inside the un-inflated set.  Should be
/// the set's credibility up to Monte Carlo error.
double calibration_fraction(const PosteriorState& state, const CredibleSet& set,
                            std::size_t draws, RandomStream rng, int threads = 1);

}  // namespace seqcred
