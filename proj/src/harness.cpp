#include "seqcred/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "seqcred/fourier_detail.hpp"

namespace seqcred {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Purpose tags for substream derivation; fixed constants so stream layouts
// never depend on scheduling.
enum StreamTag : std::uint64_t {
  kDataTag = 1,
  kRadiusTag = 2,
  kCalibrationTag = 3,
};

std::size_t resolve_n_trunc(const ExperimentConfig& config, double n) {
  return config.n_trunc != 0 ? config.n_trunc : default_n_trunc(n);
}

std::size_t resolve_grid_size(const ExperimentConfig& config, double n, std::size_t n_trunc) {
  if (config.grid_size != 0) return config.grid_size;
  const double policy_alpha =
      config.prior.mode == PriorMode::kFixed ? config.prior.alpha : config.prior.bounds.min;
  return default_grid_size(policy_alpha, n, n_trunc);
}

TruthSpec resolve_truth_spec(const ExperimentConfig& config) {
  TruthSpec spec = config.truth;
  if (spec.n_trunc == 0) {
    std::size_t longest = 1;
    for (double n : config.n_grid) longest = std::max(longest, resolve_n_trunc(config, n));
    spec.n_trunc = longest;
  }
  return spec;
}

void validate_config(const ExperimentConfig& config, bool coverage_claim) {
  if (config.n_grid.empty()) throw std::invalid_argument("harness: n_grid must be nonempty");
  for (double n : config.n_grid) {
    if (!(n > 1.0)) throw std::invalid_argument("harness: every n must exceed 1");
  }
  if (!(config.gamma > 0.0) || !(config.gamma <= 0.5)) {
    throw std::invalid_argument("harness: gamma must lie in (0, 0.5]");
  }
  if (!(config.inflation >= 1.0)) throw std::invalid_argument("harness: inflation must be >= 1");
  if (coverage_claim && config.reps < 30) {
    throw std::invalid_argument("harness: coverage claims need reps >= 30");
  }
  if (config.prior.mode == PriorMode::kEmpiricalBayes && !(config.eb_lattice > 0.0)) {
    throw std::invalid_argument("harness: eb_lattice must be positive");
  }
}

CoefficientSequence sample_or_forward(const CoefficientSequence& truth, const ModelConfig& model,
                                      RandomStream rng, bool noiseless) {
  if (!noiseless) return sample_data(truth, model, rng);
  std::vector<double> y(model.n_trunc);
  for (std::size_t i = 1; i <= model.n_trunc; ++i) {
    y[i - 1] = model.kappa.eval(i) * truth.coeff(i);
  }
  return CoefficientSequence(std::move(y));
}

/// Posterior variances for (alpha, n) without data: radius inputs.
PosteriorState variance_state(double alpha, const ModelConfig& model) {
  return posterior_update(CoefficientSequence::zeros(model.n_trunc), PriorSpec{alpha}, model);
}

/// Deterministic index-parallel loop: body(i) for i in [0, count).
void for_each_index(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const int n_workers = std::max(1, threads);
  if (n_workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < n_workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

/// Write-once lattice cache of radius estimates keyed by alpha node.
class LatticeRadiusCache {
 public:
  RadiusEstimate get_or_compute(long long node,
                                const std::function<RadiusEstimate()>& compute) {
    {
      std::scoped_lock lock(mu_);
      auto it = cache_.find(node);
      if (it != cache_.end()) return it->second;
    }
    // Recomputation races are benign: the value is a pure function of node.
    RadiusEstimate value = compute();
    std::scoped_lock lock(mu_);
    return cache_.emplace(node, value).first->second;
  }

 private:
  std::map<long long, RadiusEstimate> cache_;
  std::mutex mu_;
};

struct CellContext {
  ModelConfig model;
  std::optional<Grid> grid;
  RadiusEstimate fixed_radius;  // fixed-alpha cells only
};

double quantile_of(std::vector<double> values, double q) {
  return order_statistic_quantile(std::move(values), q);
}

}  // namespace

double calibration_se(double gamma, std::size_t cal_draws, std::size_t radius_draws) {
  const double p = gamma * (1.0 - gamma);
  return std::sqrt(p * (1.0 / static_cast<double>(cal_draws) +
                        1.0 / static_cast<double>(radius_draws)));
}

std::string format_double(double value) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

CoverageReport run_coverage(const ExperimentConfig& config) {
  validate_config(config, /*coverage_claim=*/true);

  CoverageReport report;
  report.config = config;
  const TruthSpec truth_spec = resolve_truth_spec(config);
  report.truth_n_trunc = truth_spec.n_trunc;
  const CoefficientSequence truth = generate_truth(truth_spec);

  const RandomStream master(config.master_seed);
  const RandomStream radius_stream = master.substream(kRadiusTag);
  const bool fixed = config.prior.mode == PriorMode::kFixed;

  report.rows.resize(config.n_grid.size() * config.reps);

  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    const double n = config.n_grid[ni];
    LatticeRadiusCache lattice;  // per cell: radii depend on n, not just alpha
    CellContext cell{ModelConfig(n, config.kappa, resolve_n_trunc(config, n)), std::nullopt, {}};
    if (config.norm_kind == NormKind::kSupGrid) {
      cell.grid = Grid(resolve_grid_size(config, n, cell.model.n_trunc));
      detail::warm_plans(cell.grid->size());  // workers below only execute
    }

    auto radius_at = [&](double alpha) -> RadiusEstimate {
      const PosteriorState vs = variance_state(alpha, cell.model);
      return config.norm_kind == NormKind::kSupGrid
                 ? sup_radius_detail(vs, config.gamma, *cell.grid, config.draws, radius_stream,
                                     config.threads)
                 : l2_radius_detail(vs, config.gamma, config.draws, radius_stream,
                                    config.threads);
    };

    if (fixed) cell.fixed_radius = radius_at(config.prior.alpha);

    auto lattice_node = [&](double alpha_hat) {
      const long long node = std::llround(alpha_hat / config.eb_lattice);
      return node;
    };
    auto node_alpha = [&](long long node) {
      return std::clamp(static_cast<double>(node) * config.eb_lattice, config.prior.bounds.min,
                        config.prior.bounds.max);
    };

    const RandomStream data_root = master.substream(kDataTag).substream(ni);
    for_each_index(config.reps, config.threads, [&](std::size_t r) {
      const RandomStream data_rng = data_root.substream(r);
      const CoefficientSequence y =
          sample_or_forward(truth, cell.model, data_rng, config.noiseless);

      const double alpha_used =
          fixed ? config.prior.alpha : empirical_bayes_alpha(y, cell.model, config.prior.bounds);
      const PosteriorState state = posterior_update(y, PriorSpec{alpha_used}, cell.model);

      RadiusEstimate radius_est;
      if (fixed) {
        radius_est = cell.fixed_radius;
      } else {
        const long long node = lattice_node(alpha_used);
        radius_est = lattice.get_or_compute(node, [&] { return radius_at(node_alpha(node)); });
      }

      CredibleSet set{CoefficientSequence(state.means)};
      set.radius = radius_est.radius;
      set.norm_kind = config.norm_kind;
      set.grid = cell.grid;
      set.credibility = 1.0 - config.gamma;
      set.inflation = config.inflation;
      set.mc = radius_est.meta;

      const double error = norm_distance(set, truth);

      CoverageRow row;
      row.n = n;
      row.rep = static_cast<std::uint32_t>(r);
      row.alpha_used = alpha_used;
      row.gamma = config.gamma;
      row.inflation = config.inflation;
      row.norm_kind = config.norm_kind;
      row.radius = set.radius;
      row.effective_radius = set.effective_radius();
      row.error = error;
      row.covered = error <= set.effective_radius();
      row.seed = data_rng.stream_id();
      report.rows[ni * config.reps + r] = row;
    });

    // Aggregates: deterministic fold in rep order.
    CellStats stats;
    stats.n = n;
    stats.reps = config.reps;
    stats.n_trunc = cell.model.n_trunc;
    stats.grid_size = cell.grid ? cell.grid->size() : 0;
    std::size_t covered = 0;
    std::vector<double> alphas(config.reps);
    for (std::size_t r = 0; r < config.reps; ++r) {
      const CoverageRow& row = report.rows[ni * config.reps + r];
      covered += row.covered ? 1 : 0;
      stats.mean_radius += row.radius;
      stats.mean_effective_radius += row.effective_radius;
      stats.mean_error += row.error;
      stats.rate_ratio += row.radius / contraction_rate(row.alpha_used, n);
      alphas[r] = row.alpha_used;
    }
    const double inv_reps = 1.0 / static_cast<double>(config.reps);
    stats.coverage_rate = static_cast<double>(covered) * inv_reps;
    stats.mean_radius *= inv_reps;
    stats.mean_effective_radius *= inv_reps;
    stats.mean_error *= inv_reps;
    stats.rate_ratio *= inv_reps;
    stats.alpha_q025 = quantile_of(alphas, 0.025);
    stats.alpha_median = quantile_of(alphas, 0.5);
    stats.alpha_q975 = quantile_of(alphas, 0.975);

    // Credibility self-check at the cell's representative alpha.
    const double check_alpha = fixed ? config.prior.alpha
                                     : node_alpha(lattice_node(stats.alpha_median));
    const RadiusEstimate check_radius =
        fixed ? cell.fixed_radius
              : lattice.get_or_compute(lattice_node(stats.alpha_median),
                                       [&] { return radius_at(check_alpha); });
    const PosteriorState check_state = variance_state(check_alpha, cell.model);
    CredibleSet check_set{CoefficientSequence(check_state.means)};
    check_set.radius = check_radius.radius;
    check_set.norm_kind = config.norm_kind;
    check_set.grid = cell.grid;
    check_set.credibility = 1.0 - config.gamma;
    stats.calibration_fraction =
        calibration_fraction(check_state, check_set, config.calibration_draws,
                             master.substream(kCalibrationTag).substream(ni), config.threads);
    stats.calibration_se = calibration_se(config.gamma, config.calibration_draws, config.draws);
    stats.radius_mc_se = check_radius.mc_se;
    stats.effective_coords = check_radius.meta.effective_coords;
    stats.dropped_tail_bound = check_radius.meta.dropped_tail_bound;
    stats.truncation_tail = truncation_tail_bound(check_alpha, cell.model.n_trunc);
    report.cells.push_back(stats);
  }
  return report;
}

RateReport run_rate_study(const ExperimentConfig& config) {
  validate_config(config, /*coverage_claim=*/false);
  if (config.prior.mode != PriorMode::kFixed) {
    throw std::invalid_argument("run_rate_study: requires a fixed prior alpha");
  }
  if (config.n_grid.size() < 3) {
    throw std::invalid_argument("run_rate_study: need at least 3 grid points");
  }
  for (std::size_t k = 1; k < config.n_grid.size(); ++k) {
    if (!(config.n_grid[k] > config.n_grid[k - 1])) {
      throw std::invalid_argument("run_rate_study: n_grid must be strictly increasing");
    }
  }
  if (!(config.n_grid.back() / config.n_grid.front() >= 100.0)) {
    throw std::invalid_argument("run_rate_study: n_grid must span at least two decades");
  }

  RateReport report;
  report.config = config;
  const TruthSpec truth_spec = resolve_truth_spec(config);
  const CoefficientSequence truth = generate_truth(truth_spec);
  const RandomStream master(config.master_seed);
  const RandomStream radius_stream = master.substream(kRadiusTag);

  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    const double n = config.n_grid[ni];
    const ModelConfig model(n, config.kappa, resolve_n_trunc(config, n));
    const PosteriorState vs = variance_state(config.prior.alpha, model);

    RateRow row;
    row.n = n;
    row.n_trunc = model.n_trunc;
    if (config.norm_kind == NormKind::kSupGrid) {
      const Grid grid(resolve_grid_size(config, n, model.n_trunc));
      row.grid_size = grid.size();
      const RadiusEstimate est =
          sup_radius_detail(vs, config.gamma, grid, config.draws, radius_stream, config.threads);
      row.radius = est.radius;
      row.radius_mc_se = est.mc_se;
      // mean sup error of the posterior mean across reps
      const RandomStream data_root = master.substream(kDataTag).substream(ni);
      std::vector<double> errors(config.reps);
      for_each_index(config.reps, config.threads, [&](std::size_t r) {
        const CoefficientSequence y =
            sample_or_forward(truth, model, data_root.substream(r), config.noiseless);
        const PosteriorState state = posterior_update(y, PriorSpec{config.prior.alpha}, model);
        std::vector<double> diff(std::max(truth.size(), state.size()));
        for (std::size_t i = 1; i <= diff.size(); ++i) {
          diff[i - 1] = truth.coeff(i) - (i <= state.size() ? state.means[i - 1] : 0.0);
        }
        errors[r] = sup_norm_on_grid(synthesize(CoefficientSequence(std::move(diff)), grid));
      });
      for (double e : errors) row.mean_error += e;
    } else {
      const RadiusEstimate est =
          l2_radius_detail(vs, config.gamma, config.draws, radius_stream, config.threads);
      row.radius = est.radius;
      row.radius_mc_se = est.mc_se;
      const RandomStream data_root = master.substream(kDataTag).substream(ni);
      std::vector<double> errors(config.reps);
      for_each_index(config.reps, config.threads, [&](std::size_t r) {
        const CoefficientSequence y =
            sample_or_forward(truth, model, data_root.substream(r), config.noiseless);
        const PosteriorState state = posterior_update(y, PriorSpec{config.prior.alpha}, model);
        errors[r] = l2_distance(truth, CoefficientSequence(state.means));
      });
      for (double e : errors) row.mean_error += e;
    }
    row.mean_error /= static_cast<double>(config.reps);
    row.rate_ratio = row.radius / contraction_rate(config.prior.alpha, n);
    report.rows.push_back(row);
  }

  double lo = report.rows.front().rate_ratio;
  double hi = lo;
  bool decreasing = true;
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    lo = std::min(lo, report.rows[k].rate_ratio);
    hi = std::max(hi, report.rows[k].rate_ratio);
    if (k > 0 && !(report.rows[k].radius < report.rows[k - 1].radius)) decreasing = false;
  }
  report.ratio_spread = hi / lo;
  report.band_ok = report.ratio_spread <= config.rate_band;
  report.radii_decreasing = decreasing;
  return report;
}

CoxFreedmanReport run_cox_freedman_demo(const ExperimentConfig& config, double alpha_under) {
  if (config.prior.mode != PriorMode::kFixed) {
    throw std::invalid_argument("run_cox_freedman_demo: oversmoothing arm needs a fixed alpha");
  }
  ExperimentConfig over = config;
  over.inflation = 1.0;  // the demo is about un-inflated credible sets
  ExperimentConfig under = over;
  under.prior = PriorChoice::fixed(alpha_under);

  CoxFreedmanReport report;
  report.oversmoothed = run_coverage(over);
  report.undersmoothed = run_coverage(under);

  const auto& oc = report.oversmoothed.cells;
  report.oversmoothed_coverage_decays =
      oc.size() >= 2 && oc.back().coverage_rate < oc.front().coverage_rate;
  report.oversmoothed_final_below_credibility =
      oc.back().coverage_rate < (1.0 - config.gamma);
  report.undersmoothed_adequate = true;
  for (const auto& cell : report.undersmoothed.cells) {
    if (cell.coverage_rate < (1.0 - config.gamma)) report.undersmoothed_adequate = false;
  }
  return report;
}

EbStudyReport run_eb_study(const ExperimentConfig& config) {
  if (config.prior.mode != PriorMode::kEmpiricalBayes) {
    throw std::invalid_argument("run_eb_study: prior mode must be empirical Bayes");
  }
  EbStudyReport report;
  report.base = run_coverage(config);
  double lo = report.base.cells.front().rate_ratio;
  double hi = lo;
  for (const auto& cell : report.base.cells) {
    lo = std::min(lo, cell.rate_ratio);
    hi = std::max(hi, cell.rate_ratio);
  }
  report.ratio_min = lo;
  report.ratio_max = hi;
  report.ratio_banded = (hi / lo) <= config.rate_band;
  return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

const char* norm_name(NormKind k) { return k == NormKind::kSupGrid ? "sup" : "l2"; }

NormKind norm_from_name(const std::string& s) {
  if (s == "sup") return NormKind::kSupGrid;
  if (s == "l2") return NormKind::kL2;
  throw std::invalid_argument("unknown norm kind: " + s);
}

ordered_json truth_to_json(const TruthSpec& spec) {
  ordered_json j;
  std::visit(
      [&](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, PolyDecay>) {
          j["family"] = "polydecay";
          j["alpha"] = fam.alpha;
          j["c"] = fam.c;
        } else if constexpr (std::is_same_v<T, AlternatingDecay>) {
          j["family"] = "alternating";
          j["alpha"] = fam.alpha;
          j["c"] = fam.c;
        } else if constexpr (std::is_same_v<T, RandomHolder>) {
          j["family"] = "randomholder";
          j["alpha"] = fam.alpha;
          j["radius"] = fam.radius;
          j["seed"] = fam.seed;
        } else {
          j["family"] = "bump";
          j["center"] = fam.center;
          j["width"] = fam.width;
          j["height"] = fam.height;
        }
      },
      spec.family);
  j["n_trunc"] = spec.n_trunc;
  return j;
}

TruthSpec truth_from_json(const json& j) {
  TruthSpec spec;
  const std::string family = j.at("family").get<std::string>();
  if (family == "polydecay") {
    spec.family = PolyDecay{j.at("alpha").get<double>(), j.at("c").get<double>()};
  } else if (family == "alternating") {
    spec.family = AlternatingDecay{j.at("alpha").get<double>(), j.at("c").get<double>()};
  } else if (family == "randomholder") {
    spec.family = RandomHolder{j.at("alpha").get<double>(), j.at("radius").get<double>(),
                               j.at("seed").get<std::uint64_t>()};
  } else if (family == "bump") {
    spec.family = LocalBump{j.at("center").get<double>(), j.at("width").get<double>(),
                            j.at("height").get<double>()};
  } else {
    throw std::invalid_argument("unknown truth family: " + family);
  }
  spec.n_trunc = j.value("n_trunc", std::size_t{0});
  return spec;
}

ordered_json config_to_json(const ExperimentConfig& config) {
  ordered_json j;
  j["n_grid"] = config.n_grid;
  j["truth"] = truth_to_json(config.truth);
  if (config.prior.mode == PriorMode::kFixed) {
    j["prior"] = {{"mode", "fixed"}, {"alpha", config.prior.alpha}};
  } else {
    j["prior"] = {{"mode", "eb"},
                  {"alpha_min", config.prior.bounds.min},
                  {"alpha_max", config.prior.bounds.max}};
  }
  j["gamma"] = config.gamma;
  j["inflation"] = config.inflation;
  j["norm"] = norm_name(config.norm_kind);
  j["reps"] = config.reps;
  j["draws"] = config.draws;
  j["master_seed"] = config.master_seed;
  if (config.kappa.kind() == KappaSpec::Kind::kDirect) {
    j["kappa"] = {{"kind", "direct"}};
  } else {
    j["kappa"] = {{"kind", "poly"}, {"p", config.kappa.p()}};
  }
  // threads is an execution detail, not an experiment parameter: reports must
  // be bit-identical across worker counts, so it is not echoed
  j["grid_size"] = config.grid_size;
  j["n_trunc"] = config.n_trunc;
  j["eb_lattice"] = config.eb_lattice;
  j["calibration_draws"] = config.calibration_draws;
  j["rate_band"] = config.rate_band;
  j["noiseless"] = config.noiseless;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  config.n_grid = j.at("n_grid").get<std::vector<double>>();
  config.truth = truth_from_json(j.at("truth"));
  const json& prior = j.at("prior");
  if (prior.at("mode").get<std::string>() == "fixed") {
    config.prior = PriorChoice::fixed(prior.at("alpha").get<double>());
  } else {
    config.prior = PriorChoice::empirical_bayes(
        {prior.at("alpha_min").get<double>(), prior.at("alpha_max").get<double>()});
  }
  config.gamma = j.at("gamma").get<double>();
  config.inflation = j.at("inflation").get<double>();
  config.norm_kind = norm_from_name(j.at("norm").get<std::string>());
  config.reps = j.at("reps").get<std::size_t>();
  config.draws = j.at("draws").get<std::size_t>();
  config.master_seed = j.at("master_seed").get<std::uint64_t>();
  const json& kappa = j.at("kappa");
  config.kappa = kappa.at("kind").get<std::string>() == "direct"
                     ? KappaSpec::direct()
                     : KappaSpec::poly_ill_posed(kappa.at("p").get<double>());
  config.grid_size = j.value("grid_size", std::size_t{0});
  config.n_trunc = j.value("n_trunc", std::size_t{0});
  config.threads = j.value("threads", 1);
  config.eb_lattice = j.value("eb_lattice", 1e-3);
  config.calibration_draws = j.value("calibration_draws", std::size_t{20000});
  config.rate_band = j.value("rate_band", 4.0);
  config.noiseless = j.value("noiseless", false);
  return config;
}

ordered_json cell_to_json(const CellStats& c) {
  ordered_json j;
  j["n"] = c.n;
  j["reps"] = c.reps;
  j["coverage_rate"] = c.coverage_rate;
  j["mean_radius"] = c.mean_radius;
  j["mean_effective_radius"] = c.mean_effective_radius;
  j["mean_error"] = c.mean_error;
  j["rate_ratio"] = c.rate_ratio;
  j["alpha_q025"] = c.alpha_q025;
  j["alpha_median"] = c.alpha_median;
  j["alpha_q975"] = c.alpha_q975;
  j["calibration_fraction"] = c.calibration_fraction;
  j["calibration_se"] = c.calibration_se;
  j["radius_mc_se"] = c.radius_mc_se;
  j["n_trunc"] = c.n_trunc;
  j["grid_size"] = c.grid_size;
  j["effective_coords"] = c.effective_coords;
  j["dropped_tail_bound"] = c.dropped_tail_bound;
  j["truncation_tail"] = c.truncation_tail;
  return j;
}

CellStats cell_from_json(const json& j) {
  CellStats c;
  c.n = j.at("n").get<double>();
  c.reps = j.at("reps").get<std::size_t>();
  c.coverage_rate = j.at("coverage_rate").get<double>();
  c.mean_radius = j.at("mean_radius").get<double>();
  c.mean_effective_radius = j.at("mean_effective_radius").get<double>();
  c.mean_error = j.at("mean_error").get<double>();
  c.rate_ratio = j.at("rate_ratio").get<double>();
  c.alpha_q025 = j.at("alpha_q025").get<double>();
  c.alpha_median = j.at("alpha_median").get<double>();
  c.alpha_q975 = j.at("alpha_q975").get<double>();
  c.calibration_fraction = j.at("calibration_fraction").get<double>();
  c.calibration_se = j.at("calibration_se").get<double>();
  c.radius_mc_se = j.at("radius_mc_se").get<double>();
  c.n_trunc = j.at("n_trunc").get<std::size_t>();
  c.grid_size = j.at("grid_size").get<std::size_t>();
  c.effective_coords = j.at("effective_coords").get<std::size_t>();
  c.dropped_tail_bound = j.at("dropped_tail_bound").get<double>();
  c.truncation_tail = j.at("truncation_tail").get<double>();
  return c;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_report: cannot open " + path);
  out << body;
  if (!out) throw std::runtime_error("emit_report: write failed for " + path);
}

std::string coverage_csv(const CoverageReport& report) {
  std::ostringstream out;
  out << "n,rep,alpha_used,gamma,M,norm_kind,radius,effective_radius,error,covered,seed\n";
  for (const CoverageRow& r : report.rows) {
    out << format_double(r.n) << ',' << r.rep << ',' << format_double(r.alpha_used) << ','
        << format_double(r.gamma) << ',' << format_double(r.inflation) << ','
        << norm_name(r.norm_kind) << ',' << format_double(r.radius) << ','
        << format_double(r.effective_radius) << ',' << format_double(r.error) << ','
        << (r.covered ? 1 : 0) << ',' << r.seed << '\n';
  }
  return out.str();
}

}  // namespace

void emit_report(const CoverageReport& report, const std::string& path, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    write_file(path, coverage_csv(report));
    return;
  }
  ordered_json j;
  j["config"] = config_to_json(report.config);
  j["truth_n_trunc"] = report.truth_n_trunc;
  ordered_json rows = ordered_json::array();
  for (const CoverageRow& r : report.rows) {
    ordered_json row;
    row["n"] = r.n;
    row["rep"] = r.rep;
    row["alpha_used"] = r.alpha_used;
    row["gamma"] = r.gamma;
    row["M"] = r.inflation;
    row["norm_kind"] = norm_name(r.norm_kind);
    row["radius"] = r.radius;
    row["effective_radius"] = r.effective_radius;
    row["error"] = r.error;
    row["covered"] = r.covered ? 1 : 0;
    row["seed"] = r.seed;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  ordered_json cells = ordered_json::array();
  for (const CellStats& c : report.cells) cells.push_back(cell_to_json(c));
  j["cells"] = std::move(cells);
  write_file(path, j.dump(2) + "\n");
}

void emit_report(const RateReport& report, const std::string& path, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    std::ostringstream out;
    out << "n,radius,radius_mc_se,rate_ratio,mean_error,grid_size,n_trunc\n";
    for (const RateRow& r : report.rows) {
      out << format_double(r.n) << ',' << format_double(r.radius) << ','
          << format_double(r.radius_mc_se) << ',' << format_double(r.rate_ratio) << ','
          << format_double(r.mean_error) << ',' << r.grid_size << ',' << r.n_trunc << '\n';
    }
    write_file(path, out.str());
    return;
  }
  ordered_json j;
  j["config"] = config_to_json(report.config);
  ordered_json rows = ordered_json::array();
  for (const RateRow& r : report.rows) {
    ordered_json row;
    row["n"] = r.n;
    row["radius"] = r.radius;
    row["radius_mc_se"] = r.radius_mc_se;
    row["rate_ratio"] = r.rate_ratio;
    row["mean_error"] = r.mean_error;
    row["grid_size"] = r.grid_size;
    row["n_trunc"] = r.n_trunc;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["ratio_spread"] = report.ratio_spread;
  j["band_ok"] = report.band_ok;
  j["radii_decreasing"] = report.radii_decreasing;
  write_file(path, j.dump(2) + "\n");
}

CoverageReport parse_report_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("parse_report_json: cannot open " + path);
  json j = json::parse(in);

  CoverageReport report;
  report.config = config_from_json(j.at("config"));
  report.truth_n_trunc = j.at("truth_n_trunc").get<std::size_t>();
  for (const json& rj : j.at("rows")) {
    CoverageRow r;
    r.n = rj.at("n").get<double>();
    r.rep = rj.at("rep").get<std::uint32_t>();
    r.alpha_used = rj.at("alpha_used").get<double>();
    r.gamma = rj.at("gamma").get<double>();
    r.inflation = rj.at("M").get<double>();
    r.norm_kind = norm_from_name(rj.at("norm_kind").get<std::string>());
    r.radius = rj.at("radius").get<double>();
    r.effective_radius = rj.at("effective_radius").get<double>();
    r.error = rj.at("error").get<double>();
    r.covered = rj.at("covered").get<int>() != 0;
    r.seed = rj.at("seed").get<std::uint64_t>();
    report.rows.push_back(r);
  }
  for (const json& cj : j.at("cells")) report.cells.push_back(cell_from_json(cj));
  return report;
}

ExperimentConfig load_config_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_config_json: cannot open " + path);
  const json j = json::parse(in);
  // a previously emitted report works as a config file: use its echo
  return config_from_json(j.contains("config") ? j.at("config") : j);
}

}  // namespace seqcred
