#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rfl/functionals.hpp"
#include "rfl/io.hpp"
#include "rfl/rkhs.hpp"
#include "rfl/spectral.hpp"
#include "rfl/tanh_net.hpp"

namespace rfl {

/// Unit-ball samples, their node values f(t̄) and targets F(f). The first
/// n_train columns form the training split.
struct SampleSet {
  Kernel kernel;
  int m = 0;
  std::uint64_t seed = 0;
  PointSet nodes;
  std::vector<RkhsFunction> functions;
  MatX inputs;  // N x n_samples
  VecX targets;
  Index n_train = 0;

  Index size() const { return targets.size(); }
  Dataset split() const;
};

struct SamplingOptions {
  int n_centers = 8;
  double heldout_fraction = 0.2;
  bool centers_at_nodes = false;  // draw f from span{K(., t_i)}
};

SampleSet generate_dataset(const Kernel& kernel, const TargetFunctional& functional, int m, int n_samples,
                           std::uint64_t seed, const SamplingOptions& options = {});

/// One row per sample: provenance, split, f(t̄), F(f).
Table dataset_table(const SampleSet& samples);

/// Power-function sup computed in double and recomputed in 50 or 100 digits
/// when the double value sits near round-off.
struct AdaptivePowerSup {
  PowerSup sup;
  std::string precision;
};
AdaptivePowerSup power_sup_adaptive(const Kernel& kernel, const PointSet& nodes, int multiplier = 16);

struct TermOne {
  double term_I = 0.0;
  double c_f = 0.0;
  double power_sup = 0.0;
  double bound = 0.0;  // C_F * power_sup^s
  bool holds = false;  // term_I <= bound * (1 + 1e-3)
};

/// max over samples of |F(f) - F(Pf)| against C_F eps^s.
TermOne term_one(const SampleSet& samples, const TargetFunctional& functional);

struct Decomposition {
  double term_I = 0.0;   // max |F(f) - F(Pf)| on the held-out split
  double term_II = 0.0;  // max |F(Pf) - G(f(t̄))|
  double total = 0.0;    // max |F(f) - G(f(t̄))|
  bool triangle_holds = false;
  TermOne all_samples;  // term I over every sample with its bound
  TrainReport training;
  TanhNetwork network;
};

/// Trains a network on `samples` and splits the held-out error into the
/// projection term and the network term.
Decomposition error_decomposition(const SampleSet& samples, const TargetFunctional& functional, Index w1, Index w2,
                                  const TrainConfig& config);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double residual_se = 0.0;
  double slope_se = 0.0;
  double slope_ci_low = 0.0;  // 95%
  double slope_ci_high = 0.0;
  int n = 0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
Json to_json(const LinearFit& f);

struct RateStudy {
  Table table;
  std::string fit_kind;  // log_log, log_linear, log_mlogm
  LinearFit fit;
  std::vector<double> sups;
  std::vector<double> ratios;  // sup(m_{k+1}) / sup(m_k)
  bool slope_negative = false;
  double estimated_c = std::numeric_limits<double>::quiet_NaN();
};

/// Power-function sup over a list of grids with the family's rate fit.
RateStudy rate_study_power(const Kernel& kernel, const std::vector<int>& m_list, int eval_multiplier = 16,
                           int threads = 1);

struct EigenStudy {
  std::vector<SpectralReport> reports;
  Table table;
  bool all_satisfied = false;
  bool all_pow_d_satisfied = false;
};

EigenStudy rate_study_eigen(const Kernel& kernel, const std::vector<int>& m_list, int d, int threads = 1);

struct FlmRow {
  int m = 0;
  Index n_nodes = 0;
  double heldout_sup = 0.0;
  double heldout_mean_abs = 0.0;
  Decomposition decomposition;
  double c_f = 0.0;
  double c_g = 0.0;
};

struct FlmStudy {
  std::vector<FlmRow> rows;
  Table table;
  bool sup_nonincreasing = false;  // within a 20% band
  bool triangle_always = false;
};

FlmStudy flm_experiment(const std::string& beta_name, const std::string& link_name, const Kernel& kernel,
                        const std::vector<int>& m_list, Index w1, Index w2, int n_samples, const TrainConfig& config,
                        std::uint64_t seed, int threads = 1);

struct WidthRow {
  Index w1 = 0;
  Index w2 = 0;
  TrainReport report;
};

struct WidthStudy {
  std::vector<WidthRow> rows;
  Table table;
  bool sup_nonincreasing = false;  // within a 20% band
};

/// Same data, one network per width pair.
WidthStudy width_study(const SampleSet& samples, const std::vector<std::pair<Index, Index>>& widths,
                       const TrainConfig& config);

/// Runs body(0..n-1) on up to `threads` workers; results must go to
/// per-index slots. The first exception is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

/// e_{k+1} <= (1 + band) e_k for every k.
bool nonincreasing_within(const std::vector<double>& values, double band);

enum class TheoremKind { sobolev, multiquadric, gaussian };
TheoremKind theorem_kind_from_string(const std::string& name);

struct TheoremParams {
  double s = 1.0;
  double sigma = 1.0;
  double beta = 1.0;  // multiquadric exponent
  double r = 2.0;     // Sobolev order
  int d = 1;
  double c = 1.0;         // decay constant of the power function
  double constant = 1.0;  // leading constant of the error bound
};

struct TheoremMetadata {
  TheoremKind theorem = TheoremKind::gaussian;
  double M = 0.0;
  int m = 0;
  double n_nodes = 0.0;
  TheoreticalWidths widths;
  double error_bound = 0.0;
  std::string m_formula;
  std::string bound_formula;
};

TheoremMetadata theorem_metadata(TheoremKind theorem, double M, const TheoremParams& params);
Json to_json(const TheoremMetadata& meta);

/// Serializable record of one CLI run.
struct ExperimentReport {
  std::string command;
  Json config = Json::object();
  std::vector<std::pair<std::string, Table>> tables;
  std::vector<std::pair<std::string, std::string>> plots;  // name -> SVG
  std::vector<std::pair<std::string, std::string>> files;  // relative path -> text
  Json fitted_slopes = Json::object();
  Json results = Json::object();
  std::vector<std::uint64_t> seeds;
  double wall_time = 0.0;

  void add_table(std::string name, Table table) { tables.emplace_back(std::move(name), std::move(table)); }
  Json to_json() const;
  /// report.json, tables/<name>.csv, plots/<name>.svg under `dir`.
  void write(const std::filesystem::path& dir) const;
};

}  // namespace rfl
