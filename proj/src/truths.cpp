#include "seqcred/truths.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "seqcred/fourier.hpp"
#include "seqcred/random.hpp"

namespace seqcred {

namespace {

CoefficientSequence poly_profile(double alpha, double c, std::size_t n_trunc, bool alternate) {
  if (!(alpha > 0.0)) throw std::invalid_argument("generate_truth: alpha must be positive");
  if (!std::isfinite(c)) throw std::invalid_argument("generate_truth: scale must be finite");
  std::vector<double> theta(n_trunc);
  for (std::size_t i = 1; i <= n_trunc; ++i) {
    double t = c * std::pow(static_cast<double>(i), -(0.5 + alpha));
    if (alternate && (i % 2 == 1)) t = -t;
    theta[i - 1] = t;
  }
  return CoefficientSequence(std::move(theta));
}

CoefficientSequence random_holder(const RandomHolder& spec, std::size_t n_trunc) {
  if (!(spec.alpha > 0.0) || !(spec.radius > 0.0)) {
    throw std::invalid_argument("generate_truth: RandomHolder needs alpha > 0 and radius > 0");
  }
  RandomStream rng(spec.seed, 0x72616e64686f6cull);
  std::vector<double> theta(n_trunc);
  for (std::size_t i = 1; i <= n_trunc; ++i) {
    // i^{-(1+alpha)} makes sum i^alpha |theta_i| summable before rescaling
    theta[i - 1] = rng.normal() * std::pow(static_cast<double>(i), -(1.0 + spec.alpha));
  }
  CoefficientSequence raw(std::move(theta));
  const double norm = holder_norm(raw, spec.alpha);
  if (norm == 0.0) throw std::logic_error("generate_truth: degenerate RandomHolder draw");
  std::vector<double> scaled = raw.coeffs();
  for (double& x : scaled) x *= spec.radius / norm;
  CoefficientSequence result(std::move(scaled));
  // rounding may overshoot the ball boundary by an ulp; ball membership is a
  // postcondition, so nudge down until it holds
  while (holder_norm(result, spec.alpha) > spec.radius) {
    std::vector<double> shrunk = result.coeffs();
    for (double& x : shrunk) x *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
    result = CoefficientSequence(std::move(shrunk));
  }
  return result;
}

CoefficientSequence bump_profile(const LocalBump& spec, std::size_t n_trunc) {
  if (!(spec.width > 0.0)) throw std::invalid_argument("generate_truth: bump width must be > 0");
  if (!std::isfinite(spec.height)) {
    throw std::invalid_argument("generate_truth: bump height must be finite");
  }
  if (!(spec.center - spec.width > 0.0) || !(spec.center + spec.width < 1.0)) {
    throw std::invalid_argument("generate_truth: bump support must lie inside (0,1)");
  }
  // quadrature grid fine enough that the projected frequencies are unaliased
  std::size_t g = 4096;
  while (g < 4 * (n_trunc + 1)) g *= 2;
  Grid grid(g);
  std::vector<double> values(g, 0.0);
  const double w2 = spec.width * spec.width;
  for (std::size_t j = 0; j < g; ++j) {
    const double d = grid.point(j) - spec.center;
    const double r2 = w2 - d * d;
    if (r2 > 0.0) values[j] = spec.height * std::exp(-w2 / r2);
  }
  return project_onto_basis(values, grid, n_trunc);
}

}  // namespace

CoefficientSequence generate_truth(const TruthSpec& spec) {
  if (spec.n_trunc < 1) throw std::invalid_argument("generate_truth: n_trunc must be >= 1");
  return std::visit(
      [&](const auto& fam) -> CoefficientSequence {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, PolyDecay>) {
          return poly_profile(fam.alpha, fam.c, spec.n_trunc, false);
        } else if constexpr (std::is_same_v<T, AlternatingDecay>) {
          return poly_profile(fam.alpha, fam.c, spec.n_trunc, true);
        } else if constexpr (std::is_same_v<T, RandomHolder>) {
          return random_holder(fam, spec.n_trunc);
        } else {
          return bump_profile(fam, spec.n_trunc);
        }
      },
      spec.family);
}

bool classify_truth(const CoefficientSequence& theta, double alpha, double radius) {
  return holder_norm(theta, alpha) <= radius;
}

}  // namespace seqcred
