#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqcred/credible_sets.hpp"
#include "seqcred/inference.hpp"
#include "seqcred/sequence_model.hpp"
#include "seqcred/truths.hpp"

namespace seqcred {

enum class PriorMode { kFixed, kEmpiricalBayes };

struct PriorChoice {
  PriorMode mode = PriorMode::kFixed;
  double alpha = 1.0;       // fixed-mode smoothness
  AlphaBounds bounds = {};  // empirical-Bayes search window

  static PriorChoice fixed(double alpha) { return {PriorMode::kFixed, alpha, {}}; }
  static PriorChoice empirical_bayes(AlphaBounds b = {}) {
    return {PriorMode::kEmpiricalBayes, 0.0, b};
  }
};

struct ExperimentConfig {
  std::vector<double> n_grid;
  TruthSpec truth;                    // truth.n_trunc == 0: resolved to the largest model window
  PriorChoice prior = PriorChoice::fixed(1.0);
  double gamma = 0.5;
  double inflation = 3.0;
  NormKind norm_kind = NormKind::kSupGrid;
  std::size_t reps = 200;
  std::size_t draws = 100000;         // radius Monte Carlo draws
  std::uint64_t master_seed = 0;
  KappaSpec kappa = KappaSpec::direct();
  std::size_t grid_size = 0;          // 0: default_grid_size policy
  std::size_t n_trunc = 0;            // 0: default_n_trunc policy per n
  int threads = 1;
  double eb_lattice = 1e-3;           // alpha spacing of the EB radius cache
  std::size_t calibration_draws = 20000;
  double rate_band = 4.0;             // allowed max/min spread of rate ratios
  bool noiseless = false;             // debug mode: Y = kappa * theta exactly
};

struct CoverageRow {
  double n = 0.0;
  std::uint32_t rep = 0;
  double alpha_used = 0.0;
  double gamma = 0.0;
  double inflation = 1.0;
  NormKind norm_kind = NormKind::kL2;
  double radius = 0.0;
  double effective_radius = 0.0;
  double error = 0.0;
  bool covered = false;
  std::uint64_t seed = 0;  // data substream identity for the rep
};

struct CellStats {
  double n = 0.0;
  std::size_t reps = 0;
  double coverage_rate = 0.0;   // exact mean of covered flags
  double mean_radius = 0.0;
  double mean_effective_radius = 0.0;
  double mean_error = 0.0;
  double rate_ratio = 0.0;      // mean over reps of radius / eps(n, alpha_used)
  double alpha_q025 = 0.0;      // operational alpha-hat bracket (constant under fixed alpha)
  double alpha_median = 0.0;
  double alpha_q975 = 0.0;
  double calibration_fraction = 0.0;  // fresh-draw frequency inside the un-inflated set
  double calibration_se = 0.0;        // Monte Carlo s.e. of that frequency
  double radius_mc_se = 0.0;
  std::size_t n_trunc = 0;
  std::size_t grid_size = 0;          // 0 for L2 cells
  std::size_t effective_coords = 0;
  double dropped_tail_bound = 0.0;
  double truncation_tail = 0.0;       // prior-mass tail bound at n_trunc
};

struct CoverageReport {
  ExperimentConfig config;
  std::size_t truth_n_trunc = 0;
  std::vector<CoverageRow> rows;   // (n index, rep) order
  std::vector<CellStats> cells;    // n_grid order
};

struct RateRow {
  double n = 0.0;
  double radius = 0.0;
  double radius_mc_se = 0.0;
  double rate_ratio = 0.0;
  double mean_error = 0.0;
  std::size_t grid_size = 0;
  std::size_t n_trunc = 0;
};

struct RateReport {
  ExperimentConfig config;
  std::vector<RateRow> rows;
  double ratio_spread = 0.0;  // max/min rate ratio across the grid
  bool band_ok = false;
  bool radii_decreasing = false;
};

struct CoxFreedmanReport {
  CoverageReport oversmoothed;
  CoverageReport undersmoothed;
  bool oversmoothed_coverage_decays = false;  // last-n coverage below first-n
  bool oversmoothed_final_below_credibility = false;
  bool undersmoothed_adequate = false;        // every cell >= 1 - gamma
};

struct EbStudyReport {
  CoverageReport base;
  double ratio_min = 0.0;  // per-cell mean radius(alpha_hat)/eps(n, alpha_hat)
  double ratio_max = 0.0;
  bool ratio_banded = false;
};

/// Frequentist coverage of the inflated credible set along the n grid, one
/// fixed truth per config.  Deterministic given config (any thread count).
CoverageReport run_coverage(const ExperimentConfig& config);

/// Radius-versus-contraction-rate study on the n grid (fixed alpha only).
RateReport run_rate_study(const ExperimentConfig& config);

/// Oversmoothed fixed-alpha arm (from config, inflation forced to 1) against
/// an undersmoothed arm at alpha_under.
CoxFreedmanReport run_cox_freedman_demo(const ExperimentConfig& config, double alpha_under);

/// Empirical-Bayes plug-in study: per-rep alpha-hat, lattice-cached radii,
/// observational coverage, banded size ratios.
EbStudyReport run_eb_study(const ExperimentConfig& config);

enum class ReportFormat { kCsv, kJson };

/// CSV columns: n, rep, alpha_used, gamma, M, norm_kind, radius,
/// effective_radius, error, covered, seed.  JSON mirrors the rows and adds
/// the config echo and per-cell aggregates.
void emit_report(const CoverageReport& report, const std::string& path, ReportFormat format);

void emit_report(const RateReport& report, const std::string& path, ReportFormat format);

/// Reads back a JSON coverage report (round-trip counterpart of emit_report).
CoverageReport parse_report_json(const std::string& path);

/// Loads an ExperimentConfig from a JSON file (the config-echo schema).
ExperimentConfig load_config_json(const std::string& path);

/// Binomial + quantile Monte Carlo standard error for calibration checks:
/// fresh-draw count cal_draws against a radius estimated from radius_draws.
double calibration_se(double gamma, std::size_t cal_draws, std::size_t radius_draws);

std::string format_double(double value);  // shortest round-trip decimal

}  // namespace seqcred
