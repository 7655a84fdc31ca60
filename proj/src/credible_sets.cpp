#include "seqcred/credible_sets.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "seqcred/fourier_detail.hpp"

namespace seqcred {

namespace {

constexpr double kVarianceCutoff = 1e-14;  // relative to the largest variance
constexpr std::size_t kBlockDraws = 256;   // draws claimed by a worker at a time

void check_mc_args(double gamma, std::size_t draws) {
  if (!(gamma > 0.0) || !(gamma <= 0.5)) {
    throw std::invalid_argument("credible_sets: gamma must lie in (0, 0.5]");
  }
  if (draws < 10000) {
    throw std::invalid_argument("credible_sets: need at least 10^4 draws");
  }
}

/// Coordinates kept after the relative variance cutoff (variances decrease
/// in i for every posterior built here, so the kept set is a prefix).
std::size_t effective_prefix(const std::vector<double>& variances) {
  double vmax = 0.0;
  for (double v : variances) vmax = std::max(vmax, v);
  const double cut = kVarianceCutoff * vmax;
  std::size_t n_eff = variances.size();
  while (n_eff > 1 && variances[n_eff - 1] < cut) --n_eff;
  return n_eff;
}

double dropped_variance_sum(const std::vector<double>& variances, std::size_t n_eff) {
  double s = 0.0;
  for (std::size_t i = n_eff; i < variances.size(); ++i) s += variances[i];
  return s;
}

/// Runs `body(draw_index, rng_for_draw, thread_slot)` over all draws.  Draw d
/// always uses rng.substream(d), so results are identical for any worker
/// count; thread_slot selects preallocated scratch.
template <typename Body>
void for_each_draw(std::size_t draws, const RandomStream& rng, int threads, Body&& body) {
  const int n_workers = std::max(1, threads);
  if (n_workers == 1) {
    for (std::size_t d = 0; d < draws; ++d) body(d, rng.substream(d), 0);
    return;
  }
  std::atomic<std::size_t> next_block{0};
  auto work = [&](int slot) {
    for (;;) {
      const std::size_t b = next_block.fetch_add(1);
      const std::size_t begin = b * kBlockDraws;
      if (begin >= draws) return;
      const std::size_t end = std::min(draws, begin + kBlockDraws);
      for (std::size_t d = begin; d < end; ++d) body(d, rng.substream(d), slot);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_workers - 1);
  for (int t = 1; t < n_workers; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& t : pool) t.join();
}

struct SupSampler {
  std::vector<std::size_t> slot;   // halfcomplex slot per coordinate
  std::vector<double> scale;      // fold weight * sqrt(variance)
  std::size_t grid_size = 0;
  std::size_t n_eff = 0;
  double dropped_bound = 0.0;

  SupSampler(const std::vector<double>& variances, const Grid& grid) {
    grid_size = grid.size();
    n_eff = effective_prefix(variances);
    slot.resize(n_eff);
    scale.resize(n_eff);
    for (std::size_t i = 1; i <= n_eff; ++i) {
      double w;
      detail::fold_coefficient(i, grid_size, &slot[i - 1], &w);
      scale[i - 1] = (slot[i - 1] == detail::kDroppedSlot)
                         ? 0.0
                         : w * std::sqrt(variances[i - 1]);
      if (slot[i - 1] == detail::kDroppedSlot) slot[i - 1] = 0;  // harmless sink
    }
    // E max of the ignored tail process: pointwise sd bounded by
    // sqrt(2 sum v_i), Gaussian max over 2G signed points.
    const double tail_var = 2.0 * dropped_variance_sum(variances, n_eff);
    dropped_bound =
        std::sqrt(tail_var) * std::sqrt(2.0 * std::log(2.0 * static_cast<double>(grid_size)));
  }

  // One ||Z||_inf draw; hc/values are caller scratch of length grid_size.
  double draw(RandomStream& rng, double* hc, double* values) const {
    std::fill(hc, hc + grid_size, 0.0);
    for (std::size_t j = 0; j < n_eff; ++j) {
      hc[slot[j]] += scale[j] * rng.normal();
    }
    detail::halfcomplex_to_grid(grid_size, hc, values);
    double m = 0.0;
    for (std::size_t j = 0; j < grid_size; ++j) m = std::max(m, std::abs(values[j]));
    return m;
  }
};

std::vector<double> sample_sup_norms(const PosteriorState& state, const Grid& grid,
                                     std::size_t draws, const RandomStream& rng, int threads,
                                     McMeta* meta) {
  detail::warm_plans(grid.size());
  const SupSampler sampler(state.variances, grid);
  const int n_workers = std::max(1, threads);
  std::vector<std::vector<double>> hc(n_workers), values(n_workers);
  for (int t = 0; t < n_workers; ++t) {
    hc[t].resize(grid.size());
    values[t].resize(grid.size());
  }
  std::vector<double> sups(draws);
  for_each_draw(draws, rng, threads, [&](std::size_t d, RandomStream draw_rng, int slot_idx) {
    sups[d] = sampler.draw(draw_rng, hc[slot_idx].data(), values[slot_idx].data());
  });
  if (meta != nullptr) {
    meta->draws = draws;
    meta->seed = rng.seed();
    meta->stream_id = rng.stream_id();
    meta->effective_coords = sampler.n_eff;
    meta->dropped_tail_bound = sampler.dropped_bound;
  }
  return sups;
}

std::vector<double> sample_l2_norms(const PosteriorState& state, std::size_t draws,
                                    const RandomStream& rng, int threads, McMeta* meta) {
  const std::size_t n_eff = effective_prefix(state.variances);
  std::vector<double> norms(draws);
  for_each_draw(draws, rng, threads, [&](std::size_t d, RandomStream draw_rng, int) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_eff; ++j) {
      const double x = draw_rng.normal();
      s += state.variances[j] * x * x;
    }
    norms[d] = std::sqrt(s);
  });
  if (meta != nullptr) {
    meta->draws = draws;
    meta->seed = rng.seed();
    meta->stream_id = rng.stream_id();
    meta->effective_coords = n_eff;
    meta->dropped_tail_bound = std::sqrt(dropped_variance_sum(state.variances, n_eff));
  }
  return norms;
}

/// Batch-means standard error of the ceil(q N) order statistic.
double quantile_batch_se(const std::vector<double>& values, double q) {
  constexpr std::size_t kBatches = 20;
  const std::size_t batch = values.size() / kBatches;
  if (batch < 10) return 0.0;
  std::vector<double> qs(kBatches);
  for (std::size_t b = 0; b < kBatches; ++b) {
    std::vector<double> chunk(values.begin() + b * batch, values.begin() + (b + 1) * batch);
    qs[b] = order_statistic_quantile(std::move(chunk), q);
  }
  double mean = 0.0;
  for (double v : qs) mean += v;
  mean /= kBatches;
  double var = 0.0;
  for (double v : qs) var += (v - mean) * (v - mean);
  var /= (kBatches - 1);
  return std::sqrt(var / kBatches);
}

RadiusEstimate radius_from_sample(std::vector<double> sample, double gamma, const McMeta& meta) {
  RadiusEstimate est;
  est.mc_se = quantile_batch_se(sample, 1.0 - gamma);
  est.radius = order_statistic_quantile(std::move(sample), 1.0 - gamma);
  est.meta = meta;
  return est;
}

}  // namespace

RadiusEstimate sup_radius_detail(const PosteriorState& state, double gamma, const Grid& grid,
                                 std::size_t draws, RandomStream rng, int threads) {
  check_mc_args(gamma, draws);
  McMeta meta;
  auto sups = sample_sup_norms(state, grid, draws, rng, threads, &meta);
  return radius_from_sample(std::move(sups), gamma, meta);
}

double sup_radius(const PosteriorState& state, double gamma, const Grid& grid, std::size_t draws,
                  RandomStream rng, int threads) {
  return sup_radius_detail(state, gamma, grid, draws, rng, threads).radius;
}

RadiusEstimate l2_radius_detail(const PosteriorState& state, double gamma, std::size_t draws,
                                RandomStream rng, int threads) {
  check_mc_args(gamma, draws);
  McMeta meta;
  auto norms = sample_l2_norms(state, draws, rng, threads, &meta);
  return radius_from_sample(std::move(norms), gamma, meta);
}

double l2_radius(const PosteriorState& state, double gamma, std::size_t draws, RandomStream rng,
                 int threads) {
  return l2_radius_detail(state, gamma, draws, rng, threads).radius;
}

CredibleSet make_credible_set(const PosteriorState& state, double gamma, NormKind norm_kind,
                              const std::optional<Grid>& grid, std::size_t draws, RandomStream rng,
                              int threads) {
  CredibleSet set{CoefficientSequence(state.means)};
  set.norm_kind = norm_kind;
  set.credibility = 1.0 - gamma;
  set.inflation = 1.0;
  if (norm_kind == NormKind::kSupGrid) {
    if (!grid.has_value()) {
      throw std::invalid_argument("make_credible_set: SupGrid requires a grid");
    }
    set.grid = grid;
    const RadiusEstimate est = sup_radius_detail(state, gamma, *grid, draws, rng, threads);
    set.radius = est.radius;
    set.mc = est.meta;
  } else {
    const RadiusEstimate est = l2_radius_detail(state, gamma, draws, rng, threads);
    set.radius = est.radius;
    set.mc = est.meta;
  }
  return set;
}

CredibleSet inflate(CredibleSet set, double inflation) {
  if (!(inflation >= 1.0)) throw std::invalid_argument("inflate: factor must be >= 1");
  set.inflation = inflation;
  return set;
}

double norm_distance(const CredibleSet& set, const CoefficientSequence& point) {
  if (set.norm_kind == NormKind::kL2) {
    return l2_distance(point, set.center);
  }
  const std::size_t len = std::max(point.size(), set.center.size());
  std::vector<double> diff(len);
  for (std::size_t i = 1; i <= len; ++i) diff[i - 1] = point.coeff(i) - set.center.coeff(i);
  return sup_norm_on_grid(synthesize(CoefficientSequence(std::move(diff)), *set.grid));
}

bool contains_truth(const CredibleSet& set, const CoefficientSequence& truth) {
  return norm_distance(set, truth) <= set.effective_radius();
}

double borell_radius_bound(const PosteriorState& state, double gamma, const Grid& grid,
                           std::size_t draws, RandomStream rng, int threads) {
  check_mc_args(gamma, draws);
  auto sups = sample_sup_norms(state, grid, draws, rng, threads, nullptr);
  double m2 = 0.0;
  for (double s : sups) m2 += s * s;
  m2 /= static_cast<double>(draws);
  return std::sqrt(8.0 * m2 * std::log(2.0 / gamma));
}

SlepianProbe slepian_lower_probe(const PosteriorState& state, double alpha, double n,
                                 const Grid& grid, std::size_t draws, RandomStream rng,
                                 int threads) {
  check_mc_args(0.5, draws);
  auto sups = sample_sup_norms(state, grid, draws, rng, threads, nullptr);
  double mean = 0.0;
  for (double s : sups) mean += s;
  mean /= static_cast<double>(draws);
  return SlepianProbe{mean, mean / contraction_rate(alpha, n)};
}

double calibration_fraction(const PosteriorState& state, const CredibleSet& set,
                            std::size_t draws, RandomStream rng, int threads) {
  if (draws == 0) throw std::invalid_argument("calibration_fraction: draws must be positive");
  std::vector<double> norms =
      (set.norm_kind == NormKind::kSupGrid)
          ? sample_sup_norms(state, *set.grid, draws, rng, threads, nullptr)
          : sample_l2_norms(state, draws, rng, threads, nullptr);
  std::size_t inside = 0;
  for (double v : norms) inside += (v <= set.radius);
  return static_cast<double>(inside) / static_cast<double>(draws);
}

}  // namespace seqcred
