// Command-line harness for credible-set experiments in the Gaussian
// white-noise sequence model.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "seqcred/harness.hpp"

namespace {

using namespace seqcred;

// --truth polydecay:alpha=1,c=0.5 | alternating:... | randomholder:alpha=1,R=1,seed=3
//         | bump:center=0.5,width=0.1,height=1 | zero
TruthSpec parse_truth(const std::string& text, std::size_t n_trunc_hint) {
  TruthSpec spec;
  spec.n_trunc = n_trunc_hint;
  const auto colon = text.find(':');
  const std::string family = text.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::istringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw CLI::ValidationError("--truth", "expected key=value in '" + item + "'");
      }
      kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
  }
  auto value = [&](const std::string& key, double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  if (family == "polydecay") {
    spec.family = PolyDecay{value("alpha", 1.0), value("c", 1.0)};
  } else if (family == "alternating") {
    spec.family = AlternatingDecay{value("alpha", 1.0), value("c", 1.0)};
  } else if (family == "randomholder") {
    spec.family = RandomHolder{value("alpha", 1.0), value("R", 1.0),
                               static_cast<std::uint64_t>(value("seed", 0.0))};
  } else if (family == "bump") {
    spec.family = LocalBump{value("center", 0.5), value("width", 0.1), value("height", 1.0)};
  } else if (family == "zero") {
    spec.family = PolyDecay{1.0, 0.0};
  } else {
    throw CLI::ValidationError("--truth", "unknown family '" + family + "'");
  }
  return spec;
}

KappaSpec parse_kappa(const std::string& text) {
  if (text == "direct") return KappaSpec::direct();
  if (text.rfind("poly:", 0) == 0) return KappaSpec::poly_ill_posed(std::stod(text.substr(5)));
  throw CLI::ValidationError("--kappa", "expected 'direct' or 'poly:<p>'");
}

ReportFormat parse_format(const std::string& text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  throw CLI::ValidationError("--format", "expected 'csv' or 'json'");
}

std::string with_suffix(const std::string& path, const std::string& tag) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

void print_cells(const CoverageReport& report) {
  for (const auto& cell : report.cells) {
    std::printf(
        "n=%-10g coverage=%.4f mean_radius=%.6g mean_error=%.6g rate_ratio=%.4g "
        "alpha[%.4g, %.4g, %.4g] calib=%.4f(se %.4f)\n",
        cell.n, cell.coverage_rate, cell.mean_radius, cell.mean_error, cell.rate_ratio,
        cell.alpha_q025, cell.alpha_median, cell.alpha_q975, cell.calibration_fraction,
        cell.calibration_se);
  }
}

struct CliState {
  ExperimentConfig config;
  std::string truth_text;
  std::string kappa_text;
  std::string prior_text = "fixed";
  double alpha = 1.0;
  std::string out_path;
  std::string format_text = "json";
};

void add_common_options(CLI::App* cmd, CliState* state) {
  cmd->add_option("--n", state->config.n_grid, "Inverse noise variance grid (one or more)");
  cmd->add_option("--alpha", state->alpha, "Prior smoothness (fixed-alpha mode)");
  cmd->add_option("--prior", state->prior_text, "Prior mode: fixed | eb");
  cmd->add_option("--alpha-min", state->config.prior.bounds.min, "Empirical Bayes lower bound");
  cmd->add_option("--alpha-max", state->config.prior.bounds.max, "Empirical Bayes upper bound");
  cmd->add_option("--gamma", state->config.gamma, "1 - credibility, in (0, 0.5]");
  cmd->add_option("--inflation", state->config.inflation, "Inflation factor M >= 1");
  cmd->add_option_function<std::string>(
      "--norm",
      [state](const std::string& v) {
        if (v == "l2") state->config.norm_kind = NormKind::kL2;
        else if (v == "sup") state->config.norm_kind = NormKind::kSupGrid;
        else throw CLI::ValidationError("--norm", "expected 'l2' or 'sup'");
      },
      "Set norm: l2 | sup");
  cmd->add_option("--truth", state->truth_text, "Truth family, e.g. polydecay:alpha=1,c=0.5");
  cmd->add_option("--reps", state->config.reps, "Replications per n");
  cmd->add_option("--draws", state->config.draws, "Monte Carlo draws for radii");
  cmd->add_option("--seed", state->config.master_seed, "Master seed");
  cmd->add_option("--grid-size", state->config.grid_size, "Sup-norm grid size (0 = policy)");
  cmd->add_option("--n-trunc", state->config.n_trunc, "Series truncation (0 = policy)");
  cmd->add_option("--kappa", state->kappa_text, "Operator: direct | poly:<p>");
  cmd->add_option("--threads", state->config.threads, "Worker threads");
  cmd->add_option("--eb-lattice", state->config.eb_lattice, "Alpha lattice for EB radius cache");
  cmd->add_option("--calibration-draws", state->config.calibration_draws,
                  "Fresh draws for the per-cell credibility self-check");
  cmd->add_option("--rate-band", state->config.rate_band, "Allowed max/min rate-ratio spread");
  cmd->add_flag("--noiseless", state->config.noiseless, "Debug mode: Y = kappa * theta exactly");
  cmd->add_option("--out", state->out_path, "Report output path");
  cmd->add_option("--format", state->format_text, "Report format: csv | json");
}

void finalize_config(const CLI::App& cmd, CliState* state) {
  if (cmd.count("--truth") > 0) state->config.truth = parse_truth(state->truth_text, 0);
  if (cmd.count("--kappa") > 0) state->config.kappa = parse_kappa(state->kappa_text);
  if (state->prior_text == "fixed") {
    const AlphaBounds bounds = state->config.prior.bounds;
    const bool keep = cmd.count("--alpha") == 0 &&
                      state->config.prior.mode == PriorMode::kFixed;
    const double alpha = keep ? state->config.prior.alpha : state->alpha;
    state->config.prior = PriorChoice::fixed(alpha);
    state->config.prior.bounds = bounds;
  } else if (state->prior_text == "eb") {
    state->config.prior = PriorChoice::empirical_bayes(state->config.prior.bounds);
  } else {
    throw CLI::ValidationError("--prior", "expected 'fixed' or 'eb'");
  }
}

int cmd_radius(CliState& state) {
  const ExperimentConfig& config = state.config;
  if (config.n_grid.size() != 1) {
    throw CLI::ValidationError("--n", "radius expects exactly one n");
  }
  const double n = config.n_grid.front();
  const double alpha =
      config.prior.mode == PriorMode::kFixed ? config.prior.alpha : config.prior.bounds.min;
  const std::size_t n_trunc = config.n_trunc != 0 ? config.n_trunc : default_n_trunc(n);
  const ModelConfig model(n, config.kappa, n_trunc);
  const PosteriorState state0 =
      posterior_update(CoefficientSequence::zeros(n_trunc), PriorSpec{alpha}, model);
  const RandomStream rng = RandomStream(config.master_seed).substream(2);

  nlohmann::ordered_json out;
  out["n"] = n;
  out["alpha"] = alpha;
  out["gamma"] = config.gamma;
  out["n_trunc"] = n_trunc;
  if (config.norm_kind == NormKind::kSupGrid) {
    const std::size_t g =
        config.grid_size != 0 ? config.grid_size : default_grid_size(alpha, n, n_trunc);
    const auto est =
        sup_radius_detail(state0, config.gamma, Grid(g), config.draws, rng, config.threads);
    out["norm"] = "sup";
    out["grid_size"] = g;
    out["grid_bias_bound"] = grid_bias_bound(alpha, n, g, n_trunc);
    out["radius"] = est.radius;
    out["radius_mc_se"] = est.mc_se;
    out["effective_coords"] = est.meta.effective_coords;
    out["dropped_tail_bound"] = est.meta.dropped_tail_bound;
  } else {
    const auto est = l2_radius_detail(state0, config.gamma, config.draws, rng, config.threads);
    out["norm"] = "l2";
    out["radius"] = est.radius;
    out["radius_mc_se"] = est.mc_se;
    out["effective_coords"] = est.meta.effective_coords;
    out["dropped_tail_bound"] = est.meta.dropped_tail_bound;
  }
  out["contraction_rate"] = contraction_rate(alpha, n);
  out["truncation_tail_bound"] = truncation_tail_bound(alpha, n_trunc);
  const std::string body = out.dump(2) + "\n";
  if (!state.out_path.empty()) {
    std::ofstream f(state.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + state.out_path);
    f << body;
  }
  std::cout << body;
  return 0;
}

int cmd_coverage(CliState& state) {
  const CoverageReport report = run_coverage(state.config);
  print_cells(report);
  if (!state.out_path.empty()) {
    emit_report(report, state.out_path, parse_format(state.format_text));
  }
  return 0;
}

int cmd_rates(CliState& state) {
  const RateReport report = run_rate_study(state.config);
  for (const auto& row : report.rows) {
    std::printf("n=%-10g radius=%.6g (se %.2g) rate_ratio=%.4f mean_error=%.6g grid=%zu\n",
                row.n, row.radius, row.radius_mc_se, row.rate_ratio, row.mean_error,
                row.grid_size);
  }
  std::printf("ratio_spread=%.4f band=%s radii_decreasing=%s\n", report.ratio_spread,
              report.band_ok ? "ok" : "VIOLATED", report.radii_decreasing ? "yes" : "NO");
  if (!state.out_path.empty()) {
    emit_report(report, state.out_path, parse_format(state.format_text));
  }
  return (report.band_ok && report.radii_decreasing) ? 0 : 2;
}

int cmd_cox(CliState& state, double alpha_under) {
  const CoxFreedmanReport report = run_cox_freedman_demo(state.config, alpha_under);
  std::printf("oversmoothed arm (alpha = %g):\n", report.oversmoothed.config.prior.alpha);
  print_cells(report.oversmoothed);
  std::printf("undersmoothed arm (alpha = %g):\n", report.undersmoothed.config.prior.alpha);
  print_cells(report.undersmoothed);
  std::printf("coverage_decays=%s final_below_credibility=%s undersmoothed_adequate=%s\n",
              report.oversmoothed_coverage_decays ? "yes" : "NO",
              report.oversmoothed_final_below_credibility ? "yes" : "NO",
              report.undersmoothed_adequate ? "yes" : "NO");
  if (!state.out_path.empty()) {
    const ReportFormat format = parse_format(state.format_text);
    emit_report(report.oversmoothed, with_suffix(state.out_path, "_over"), format);
    emit_report(report.undersmoothed, with_suffix(state.out_path, "_under"), format);
  }
  const bool ok = report.oversmoothed_coverage_decays &&
                  report.oversmoothed_final_below_credibility && report.undersmoothed_adequate;
  return ok ? 0 : 2;
}

int cmd_eb_study(CliState& state) {
  state.config.prior = PriorChoice::empirical_bayes(state.config.prior.bounds);
  const EbStudyReport report = run_eb_study(state.config);
  print_cells(report.base);
  std::printf("rate_ratio in [%.4g, %.4g], banded=%s (band %.2f)\n", report.ratio_min,
              report.ratio_max, report.ratio_banded ? "yes" : "NO", report.base.config.rate_band);
  if (!state.out_path.empty()) {
    emit_report(report.base, state.out_path, parse_format(state.format_text));
  }
  return report.ratio_banded ? 0 : 2;
}

int cmd_truth(CliState& state, bool values, std::size_t count) {
  TruthSpec spec = state.config.truth;
  if (spec.n_trunc == 0) spec.n_trunc = count != 0 ? count : 2048;
  const CoefficientSequence theta = generate_truth(spec);
  std::ostringstream out;
  if (values) {
    const std::size_t g = state.config.grid_size != 0 ? state.config.grid_size : 4096;
    const Grid grid(g);
    const auto f = synthesize(theta, grid);
    out << "x,f\n";
    for (std::size_t j = 0; j < g; ++j) {
      out << format_double(grid.point(j)) << ',' << format_double(f[j]) << '\n';
    }
  } else {
    out << "i,coeff\n";
    for (std::size_t i = 1; i <= theta.size(); ++i) {
      out << i << ',' << format_double(theta.coeff(i)) << '\n';
    }
  }
  if (!state.out_path.empty()) {
    std::ofstream f(state.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + state.out_path);
    f << out.str();
  } else {
    std::cout << out.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CliState state;
  state.config.n_grid = {10000.0};
  state.config.truth = TruthSpec{PolyDecay{1.0, 1.0}, 0};

  // load --config first so that explicit flags override file values
  for (int k = 1; k + 1 < argc; ++k) {
    if (std::string(argv[k]) == "--config") {
      try {
        state.config = load_config_json(argv[k + 1]);
        state.prior_text = state.config.prior.mode == PriorMode::kFixed ? "fixed" : "eb";
        state.alpha = state.config.prior.mode == PriorMode::kFixed ? state.config.prior.alpha
                                                                   : state.alpha;
      } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
      }
    }
  }

  CLI::App app{"Credible sets in the Gaussian white-noise sequence model"};
  app.require_subcommand(1);
  std::string config_path;

  auto* radius = app.add_subcommand("radius", "Print the credible radius for (alpha, n, gamma)");
  auto* coverage = app.add_subcommand("coverage", "Frequentist coverage study over an n grid");
  auto* rates = app.add_subcommand("rates", "Radius size against the contraction rate");
  auto* cox = app.add_subcommand("cox-freedman", "Oversmoothing coverage-collapse demo");
  auto* eb = app.add_subcommand("eb-study", "Empirical Bayes plug-in study");
  auto* truth = app.add_subcommand("truth", "Dump a truth's coefficients or function values");

  double alpha_under = 0.25;
  bool truth_values = false;
  std::size_t truth_count = 0;
  for (CLI::App* cmd : {radius, coverage, rates, cox, eb, truth}) {
    add_common_options(cmd, &state);
    cmd->add_option("--config", config_path, "JSON config file (flags override)");
  }
  cox->add_option("--alpha-under", alpha_under, "Undersmoothed arm's alpha");
  truth->add_flag("--values", truth_values, "Dump grid values instead of coefficients");
  truth->add_option("--count", truth_count, "Number of coefficients to generate");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* cmd = app.get_subcommands().front();
    finalize_config(*cmd, &state);
    if (cmd == radius) return cmd_radius(state);
    if (cmd == coverage) return cmd_coverage(state);
    if (cmd == rates) return cmd_rates(state);
    if (cmd == cox) return cmd_cox(state, alpha_under);
    if (cmd == eb) return cmd_eb_study(state);
    return cmd_truth(state, truth_values, truth_count);
  } catch (const CLI::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
