#include "seqcred/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "seqcred/fourier_detail.hpp"

namespace seqcred {

namespace detail {

namespace {

// FFTW plan creation is not thread safe; execution on caller-owned arrays is.
std::mutex g_plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan> g_plans;

fftw_plan plan_for(std::size_t n, fftw_r2r_kind kind) {
  std::scoped_lock lock(g_plan_mutex);
  auto key = std::make_pair(n, static_cast<int>(kind));
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  std::vector<double> in(n), out(n);
  // FFTW_ESTIMATE keeps planning deterministic (no runtime measurement);
  // FFTW_UNALIGNED lets the plan run on arbitrary caller buffers.
  fftw_plan p = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(), kind,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (p == nullptr) throw std::runtime_error("fourier: FFTW planning failed");
  g_plans.emplace(key, p);
  return p;
}

}  // namespace

void halfcomplex_to_grid(std::size_t grid_size, const double* halfcomplex, double* values) {
  fftw_plan p = plan_for(grid_size, FFTW_HC2R);
  fftw_execute_r2r(p, const_cast<double*>(halfcomplex), values);
}

void grid_to_halfcomplex(std::size_t grid_size, const double* values, double* halfcomplex) {
  fftw_plan p = plan_for(grid_size, FFTW_R2HC);
  fftw_execute_r2r(p, const_cast<double*>(values), halfcomplex);
}

void warm_plans(std::size_t grid_size) {
  plan_for(grid_size, FFTW_HC2R);
  plan_for(grid_size, FFTW_R2HC);
}

void fold_coefficient(std::size_t i, std::size_t grid_size, std::size_t* slot, double* scale) {
  const double sqrt2 = std::numbers::sqrt2;
  if (i == 1) {
    *slot = 0;
    *scale = 1.0;
    return;
  }
  const std::size_t m = i / 2;
  const bool is_sin = (i % 2 == 1);
  std::size_t r = m % grid_size;
  double sign = 1.0;
  if (2 * r > grid_size) {
    r = grid_size - r;
    if (is_sin) sign = -1.0;
  }
  if (r == 0) {
    // cos folds to the constant; sin vanishes at every grid point
    *slot = is_sin ? kDroppedSlot : 0;
    *scale = sqrt2;
    return;
  }
  if (2 * r == grid_size) {
    *slot = is_sin ? kDroppedSlot : r;
    *scale = sqrt2;  // hc[G/2] enters with unit weight
    return;
  }
  if (is_sin) {
    *slot = grid_size - r;
    *scale = -sign * sqrt2 / 2.0;  // Im Y_r = -B/2
  } else {
    *slot = r;
    *scale = sqrt2 / 2.0;  // Re Y_r = A/2
  }
}

}  // namespace detail

Grid::Grid(std::size_t size) : size_(size) {
  if (size < 2) throw std::invalid_argument("Grid: size must be >= 2");
}

double basis_eval(std::size_t i, double x) {
  if (i < 1) throw std::invalid_argument("basis_eval: index is 1-based");
  if (!(x >= 0.0) || !(x < 1.0)) {
    throw std::invalid_argument("basis_eval: x must lie in [0,1)");
  }
  if (i == 1) return 1.0;
  const double m = static_cast<double>(i / 2);
  const double arg = 2.0 * std::numbers::pi * m * x;
  return std::numbers::sqrt2 * ((i % 2 == 0) ? std::cos(arg) : std::sin(arg));
}

std::vector<double> synthesize(const CoefficientSequence& theta, const Grid& grid) {
  const std::size_t g = grid.size();
  std::vector<double> hc(g, 0.0);
  for (std::size_t i = 1; i <= theta.size(); ++i) {
    const double t = theta.coeff(i);
    if (t == 0.0) continue;
    std::size_t slot;
    double scale;
    detail::fold_coefficient(i, g, &slot, &scale);
    if (slot == detail::kDroppedSlot) continue;
    hc[slot] += scale * t;
  }
  std::vector<double> values(g);
  detail::halfcomplex_to_grid(g, hc.data(), values.data());
  return values;
}

CoefficientSequence project_onto_basis(const std::vector<double>& values, const Grid& grid,
                                       std::size_t n_coeffs) {
  const std::size_t g = grid.size();
  if (values.size() != g) {
    throw std::invalid_argument("project_onto_basis: values/grid size mismatch");
  }
  if (n_coeffs < 1) throw std::invalid_argument("project_onto_basis: need n_coeffs >= 1");
  if (n_coeffs >= g) {
    // beyond index g-1 the grid cannot separate aliased frequencies
    throw std::invalid_argument("project_onto_basis: n_coeffs must be < grid size");
  }
  std::vector<double> hc(g);
  detail::grid_to_halfcomplex(g, values.data(), hc.data());
  const double inv_g = 1.0 / static_cast<double>(g);
  const double sqrt2 = std::numbers::sqrt2;
  std::vector<double> theta(n_coeffs);
  theta[0] = hc[0] * inv_g;
  for (std::size_t i = 2; i <= n_coeffs; ++i) {
    const std::size_t m = i / 2;
    if (2 * m == g) {
      theta[i - 1] = (i % 2 == 0) ? sqrt2 * hc[m] * inv_g : 0.0;
    } else if (i % 2 == 0) {
      theta[i - 1] = sqrt2 * hc[m] * inv_g;
    } else {
      theta[i - 1] = -sqrt2 * hc[g - m] * inv_g;
    }
  }
  return CoefficientSequence(std::move(theta));
}

double sup_norm_on_grid(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("sup_norm_on_grid: empty input");
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double grid_bias_bound(double alpha, double n, std::size_t grid_size, std::size_t n_trunc) {
  if (!(alpha > 0.0) || !(n > 0.0) || grid_size == 0 || n_trunc == 0) {
    throw std::invalid_argument("grid_bias_bound: all arguments must be positive");
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double s = 0.0;
  for (std::size_t i = 1; i <= n_trunc; ++i) {
    const double di = static_cast<double>(i);
    s += 8.0 * pi2 * di * di / (std::pow(di, 1.0 + 2.0 * alpha) + n);
  }
  return std::sqrt(s) / static_cast<double>(grid_size);
}

std::size_t default_grid_size(double alpha, double n, std::size_t n_trunc, std::size_t ceiling) {
  const double target = 1e-3 * std::pow(n, -alpha / (2.0 * alpha + 1.0));
  std::size_t g = 4096;
  if (ceiling < g) ceiling = g;
  while (g < ceiling && grid_bias_bound(alpha, n, g, n_trunc) > target) g *= 2;
  return g;
}

}  // namespace seqcred
