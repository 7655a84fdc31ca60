#pragma once

#include <cstddef>
#include <vector>

#include "seqcred/sequence_model.hpp"

namespace seqcred {

/// Uniform half-open grid x_j = j/G, j = 0..G-1.  Half-open so that the
/// periodic endpoint is not double counted and discrete orthogonality of the
/// trigonometric vectors is exact.
class Grid {
 public:
  explicit Grid(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  double point(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(size_); }

  bool operator==(const Grid& other) const noexcept { return size_ == other.size_; }

 private:
  std::size_t size_;
};

/// Trigonometric basis: phi_1 = 1, phi_{2m} = sqrt2 cos(2 pi m x),
/// phi_{2m+1} = sqrt2 sin(2 pi m x).
double basis_eval(std::size_t i, double x);

/// f(x_j) = sum_i theta_i phi_i(x_j) at every grid point.  Exact summation
/// over the stored coefficients; evaluated with an FFT, which on a uniform
/// grid reproduces the direct sum up to rounding (frequencies beyond the
/// Nyquist index fold onto their exact aliases at the grid points).
std::vector<double> synthesize(const CoefficientSequence& theta, const Grid& grid);

/// Grid-quadrature projection of sampled values onto the first n_coeffs
/// basis functions: theta_i = (1/G) sum_j f(x_j) phi_i(x_j).
CoefficientSequence project_onto_basis(const std::vector<double>& values, const Grid& grid,
                                       std::size_t n_coeffs);

double sup_norm_on_grid(const std::vector<double>& values);

/// Upper bound on the RMS increment of the posterior process between
/// adjacent grid points: sqrt(sum_{i<=n_trunc} 8 pi^2 i^2 / (i^{1+2a}+n)) / G.
/// Certifies that the grid sup tracks the continuum sup.
double grid_bias_bound(double alpha, double n, std::size_t grid_size, std::size_t n_trunc);

/// Smallest power of two G >= 4096 with grid_bias_bound <= 1e-3 n^{-a/(2a+1)},
/// clamped to `ceiling` (the unclamped policy is infeasible for small alpha
/// at large n; the achieved bound is always available via grid_bias_bound).
std::size_t default_grid_size(double alpha, double n, std::size_t n_trunc,
                              std::size_t ceiling = (1u << 20));

}  // namespace seqcred
