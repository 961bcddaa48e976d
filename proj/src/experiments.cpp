#include "rfl/experiments.hpp"

#include <cmath>
#include <numbers>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

namespace rfl {

Dataset SampleSet::split() const {
  Dataset d;
  d.x_train = inputs.leftCols(n_train);
  d.y_train = targets.head(n_train);
  d.x_test = inputs.rightCols(size() - n_train);
  d.y_test = targets.tail(size() - n_train);
  return d;
}

namespace {

RkhsFunction sample_node_span(const Kernel& kernel, const PointSet& nodes, double norm_target, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    VecX coeffs(nodes.size());
    for (Index i = 0; i < coeffs.size(); ++i) coeffs(i) = normal(rng);
    RkhsFunction f(kernel, nodes.points(), std::move(coeffs));
    const double norm = rkhs_norm(f);
    if (norm > 1e-150 && std::isfinite(norm)) return f * (norm_target / norm);
  }
  throw NumericalError("sample_node_span: degenerate draws after 8 attempts");
}

}  // namespace

SampleSet generate_dataset(const Kernel& kernel, const TargetFunctional& functional, int m, int n_samples,
                           std::uint64_t seed, const SamplingOptions& options) {
  if (n_samples < 1) throw ArgumentError("generate_dataset: n_samples must be >= 1");
  if (!(options.heldout_fraction >= 0.0 && options.heldout_fraction < 1.0)) {
    throw ArgumentError("generate_dataset: heldout fraction must be in [0,1)");
  }
  functional.validate(kernel);
  SampleSet s;
  s.kernel = kernel;
  s.m = m;
  s.seed = seed;
  s.nodes = uniform_grid(m, kernel.dim);
  const Index n_test = std::lround(options.heldout_fraction * n_samples);
  s.n_train = n_samples - n_test;
  if (s.n_train < 1) throw ArgumentError("generate_dataset: no training rows left after the split");
  s.inputs.resize(s.nodes.size(), n_samples);
  s.targets.resize(n_samples);
  s.functions.reserve(static_cast<std::size_t>(n_samples));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < n_samples; ++i) {
    const double norm_target = 1.0 - unit(rng);
    const std::uint64_t sample_seed = rng();
    RkhsFunction f = options.centers_at_nodes ? sample_node_span(kernel, s.nodes, norm_target, sample_seed)
                                              : sample_unit_ball(kernel, options.n_centers, norm_target, sample_seed);
    s.inputs.col(i) = f.values(s.nodes);
    s.targets(i) = functional(f);
    s.functions.push_back(std::move(f));
  }
  return s;
}

Table dataset_table(const SampleSet& samples) {
  std::vector<std::string> cols = {"kernel", "m", "M", "seed", "sample", "split"};
  for (Index i = 0; i < samples.inputs.rows(); ++i) cols.push_back("x" + std::to_string(i));
  cols.emplace_back("y");
  Table t(std::move(cols));
  const std::string kernel = samples.kernel.describe();
  for (Index j = 0; j < samples.size(); ++j) {
    auto row = t.row();
    row << kernel << samples.m << 0 << samples.seed << static_cast<long long>(j)
        << (j < samples.n_train ? "train" : "heldout");
    for (Index i = 0; i < samples.inputs.rows(); ++i) row << samples.inputs(i, j);
    row << samples.targets(j);
  }
  return t;
}

AdaptivePowerSup power_sup_adaptive(const Kernel& kernel, const PointSet& nodes, int multiplier) {
  const PointSet eval = default_eval_set(nodes, multiplier);
  const double kappa = std::sqrt(kernel_diagonal<double>(kernel));
  AdaptivePowerSup out;
  try {
    const auto sys = build_gram<double>(kernel, nodes);
    if (sys.jitter_used() == 0.0) {
      out.sup = power_function_sup(sys, eval);
      out.precision = "double";
      if (out.sup.value > 1e-6 * kappa) return out;
    }
  } catch (const SingularGramError&) {
  }
  try {
    const auto sys = build_gram<Extended>(kernel, nodes);
    if (sys.jitter_used() == 0.0) {
      out.sup = power_function_sup(sys, eval);
      out.precision = "extended";
      if (out.sup.value > 1e-18 * kappa) return out;
    }
  } catch (const SingularGramError&) {
  }
  const auto sys = build_gram<HighPrecision>(kernel, nodes);
  out.sup = power_function_sup(sys, eval);
  out.precision = "high";
  return out;
}

TermOne term_one(const SampleSet& samples, const TargetFunctional& functional) {
  TermOne t;
  const auto sys = build_gram<double>(samples.kernel, samples.nodes);
  for (Index j = 0; j < samples.size(); ++j) {
    const RkhsFunction pf = project(sys, samples.inputs.col(j));
    t.term_I = std::max(t.term_I, std::abs(samples.targets(j) - functional(pf)));
  }
  t.c_f = functional.holder_constant(samples.kernel);
  t.power_sup = power_sup_adaptive(samples.kernel, samples.nodes).sup.value;
  t.bound = t.c_f * std::pow(t.power_sup, functional.exponent());
  t.holds = t.term_I <= t.bound * (1.0 + 1e-3);
  return t;
}

Decomposition error_decomposition(const SampleSet& samples, const TargetFunctional& functional, Index w1, Index w2,
                                  const TrainConfig& config) {
  Decomposition d;
  const Dataset data = samples.split();
  TanhNetwork net = init_network(samples.nodes.size(), w1, w2, config.seed);
  d.training = train(net, data, config);
  d.network = net;
  const auto sys = build_gram<double>(samples.kernel, samples.nodes);
  for (Index j = samples.n_train; j < samples.size(); ++j) {
    const double f_val = samples.targets(j);
    const double pf_val = functional(project(sys, samples.inputs.col(j)));
    const double g_val = forward(net, samples.inputs.col(j));
    d.term_I = std::max(d.term_I, std::abs(f_val - pf_val));
    d.term_II = std::max(d.term_II, std::abs(pf_val - g_val));
    d.total = std::max(d.total, std::abs(f_val - g_val));
  }
  d.triangle_holds = d.total <= d.term_I + d.term_II + 1e-10;
  d.all_samples = term_one(samples, functional);
  return d;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("fit_line: need at least two paired values");
  LinearFit f;
  f.n = static_cast<int>(x.size());
  const Eigen::Map<const VecX> xv(x.data(), f.n), yv(y.data(), f.n);
  const double mx = xv.mean(), my = yv.mean();
  const double sxx = (xv.array() - mx).square().sum();
  const double sxy = ((xv.array() - mx) * (yv.array() - my)).sum();
  const double syy = (yv.array() - my).square().sum();
  if (sxx == 0.0) throw ArgumentError("fit_line: x values are constant");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double ss_res = ((yv.array() - f.intercept - f.slope * xv.array()).square()).sum();
  f.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  if (f.n > 2) {
    f.residual_se = std::sqrt(ss_res / (f.n - 2));
    f.slope_se = f.residual_se / std::sqrt(sxx);
    const boost::math::students_t dist(f.n - 2);
    const double q = boost::math::quantile(boost::math::complement(dist, 0.025));
    f.slope_ci_low = f.slope - q * f.slope_se;
    f.slope_ci_high = f.slope + q * f.slope_se;
  } else {
    f.residual_se = f.slope_se = std::numeric_limits<double>::quiet_NaN();
    f.slope_ci_low = f.slope_ci_high = std::numeric_limits<double>::quiet_NaN();
  }
  return f;
}

Json to_json(const LinearFit& f) {
  return Json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"r_squared", f.r_squared},
              {"residual_se", f.residual_se},
              {"slope_se", f.slope_se},
              {"slope_ci95", {f.slope_ci_low, f.slope_ci_high}},
              {"n", f.n}};
}

RateStudy rate_study_power(const Kernel& kernel, const std::vector<int>& m_list, int eval_multiplier, int threads) {
  if (m_list.size() < 2) throw ArgumentError("rate_study_power: need at least two grid sizes");
  for (std::size_t i = 1; i < m_list.size(); ++i) {
    if (m_list[i] <= m_list[i - 1]) throw ArgumentError("rate_study_power: m_list must be increasing");
  }
  RateStudy study;
  study.table = Table({"kernel", "m", "M", "seed", "d", "N", "fill_distance", "separation", "power_sup",
                       "eval_resolution", "precision", "holder_alpha", "holder_constant", "sqrt_bound",
                       "sqrt_bound_ok", "stated_bound", "stated_bound_ok"});
  const HolderData hd = holder_data(kernel);
  const double sqrt_d = std::sqrt(static_cast<double>(kernel.dim));
  switch (kernel.family) {
    case KernelFamily::sobolev:
      study.fit_kind = "log_log";
      break;
    case KernelFamily::inverse_multiquadric:
      study.fit_kind = "log_linear";
      break;
    case KernelFamily::gaussian:
      study.fit_kind = "log_mlogm";
      break;
  }
  struct Row {
    PointSet nodes;
    AdaptivePowerSup aps;
  };
  std::vector<Row> rows(m_list.size());
  parallel_for(m_list.size(), threads, [&](std::size_t i) {
    rows[i].nodes = uniform_grid(m_list[i], kernel.dim);
    rows[i].aps = power_sup_adaptive(kernel, rows[i].nodes, eval_multiplier);
  });
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    const int m = m_list[i];
    const PointSet& nodes = rows[i].nodes;
    const AdaptivePowerSup& aps = rows[i].aps;
    const double eps = aps.sup.value;
    const double stated = 2.0 * hd.constant * std::pow(sqrt_d / m, hd.alpha);
    const double root = std::sqrt(stated);
    study.table.row() << kernel.describe() << m << 0 << 0 << kernel.dim << static_cast<long long>(nodes.size())
                      << fill_distance(nodes).value << separation_radius(nodes) << eps << aps.sup.resolution
                      << aps.precision << hd.alpha << hd.constant << root << (eps <= root) << stated
                      << (eps <= stated);
    study.sups.push_back(eps);
    const double md = m;
    xs.push_back(study.fit_kind == "log_log" ? std::log(md) : study.fit_kind == "log_linear" ? md : md * std::log(md));
    ys.push_back(std::log(eps));
  }
  for (std::size_t i = 1; i < study.sups.size(); ++i) study.ratios.push_back(study.sups[i] / study.sups[i - 1]);
  study.fit = fit_line(xs, ys);
  study.slope_negative = study.fit.slope < 0;
  if (kernel.family != KernelFamily::sobolev) study.estimated_c = -study.fit.slope * sqrt_d;
  return study;
}

EigenStudy rate_study_eigen(const Kernel& kernel, const std::vector<int>& m_list, int d, int threads) {
  EigenStudy s;
  s.reports.resize(m_list.size());
  parallel_for(m_list.size(), threads, [&](std::size_t i) { s.reports[i] = check_eigen_lower_bound(kernel, m_list[i], d); });
  s.all_satisfied = s.all_pow_d_satisfied = true;
  for (const auto& r : s.reports) {
    s.all_satisfied = s.all_satisfied && r.bound_satisfied;
    s.all_pow_d_satisfied = s.all_pow_d_satisfied && r.bound_pow_d_satisfied;
  }
  s.table = spectral_table(s.reports);
  return s;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

bool nonincreasing_within(const std::vector<double>& values, double band) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > (1.0 + band) * values[i - 1]) return false;
  }
  return true;
}

FlmStudy flm_experiment(const std::string& beta_name, const std::string& link_name, const Kernel& kernel,
                        const std::vector<int>& m_list, Index w1, Index w2, int n_samples, const TrainConfig& config,
                        std::uint64_t seed, int threads) {
  TargetFunctional functional;
  functional.kind = FunctionalKind::gflm;
  functional.beta = beta_name;
  functional.link = link_name;
  functional.validate(kernel);
  FlmStudy study;
  study.table = Table({"kernel", "m", "M", "seed", "N", "heldout_sup", "heldout_mean_abs", "term_I", "term_II",
                       "total", "triangle_holds", "C_F", "C_G", "power_sup", "term_I_bound", "final_train_mse",
                       "epochs"});
  study.rows.resize(m_list.size());
  parallel_for(m_list.size(), threads, [&](std::size_t i) {
    const SampleSet samples = generate_dataset(kernel, functional, m_list[i], n_samples, seed);
    FlmRow& row = study.rows[i];
    row.m = m_list[i];
    row.n_nodes = samples.nodes.size();
    row.decomposition = error_decomposition(samples, functional, w1, w2, config);
    row.heldout_sup = row.decomposition.training.heldout_sup_error;
    row.heldout_mean_abs = row.decomposition.training.heldout_mean_abs;
    row.c_f = functional.holder_constant(kernel);
    row.c_g = holder_constant_G(kernel, samples.nodes, functional.exponent(), row.c_f).value;
  });
  study.triangle_always = true;
  std::vector<double> sups;
  for (const FlmRow& row : study.rows) {
    const auto& d = row.decomposition;
    study.table.row() << kernel.describe() << row.m << static_cast<long long>(w1) << seed
                      << static_cast<long long>(row.n_nodes) << row.heldout_sup << row.heldout_mean_abs << d.term_I
                      << d.term_II << d.total << d.triangle_holds << row.c_f << row.c_g << d.all_samples.power_sup
                      << d.all_samples.bound << d.training.final_train_mse << d.training.epochs;
    study.triangle_always = study.triangle_always && d.triangle_holds;
    sups.push_back(row.heldout_sup);
  }
  study.sup_nonincreasing = nonincreasing_within(sups, 0.2);
  return study;
}

WidthStudy width_study(const SampleSet& samples, const std::vector<std::pair<Index, Index>>& widths,
                       const TrainConfig& config) {
  WidthStudy study;
  study.table = Table({"kernel", "m", "M", "seed", "w1", "w2", "params", "heldout_sup", "heldout_mean_abs",
                       "baseline_mean_abs", "baseline_sup", "final_train_mse", "epochs"});
  const Dataset data = samples.split();
  std::vector<double> sups;
  for (const auto& [w1, w2] : widths) {
    TanhNetwork net = init_network(samples.nodes.size(), w1, w2, config.seed);
    WidthRow row{w1, w2, train(net, data, config)};
    const auto& r = row.report;
    study.table.row() << samples.kernel.describe() << samples.m << static_cast<long long>(w1) << config.seed
                      << static_cast<long long>(w1) << static_cast<long long>(w2)
                      << static_cast<long long>(r.param_count) << r.heldout_sup_error << r.heldout_mean_abs
                      << r.baseline_mean_abs << r.baseline_sup_error << r.final_train_mse << r.epochs;
    sups.push_back(r.heldout_sup_error);
    study.rows.push_back(std::move(row));
  }
  study.sup_nonincreasing = nonincreasing_within(sups, 0.2);
  return study;
}

TheoremKind theorem_kind_from_string(const std::string& name) {
  if (name == "sobolev") return TheoremKind::sobolev;
  if (name == "multiquadric" || name == "inverse_multiquadric") return TheoremKind::multiquadric;
  if (name == "gaussian") return TheoremKind::gaussian;
  throw ArgumentError("unknown theorem '" + name + "' (sobolev, multiquadric, gaussian)");
}

TheoremMetadata theorem_metadata(TheoremKind theorem, double M, const TheoremParams& p) {
  if (!(M >= 2)) throw ArgumentError("theorem_metadata: M must be >= 2");
  if (!(p.s > 0 && p.s <= 1)) throw ArgumentError("theorem_metadata: s must be in (0,1]");
  if (p.d < 1) throw ArgumentError("theorem_metadata: d must be >= 1");
  constexpr double pi = std::numbers::pi;
  TheoremMetadata out;
  out.theorem = theorem;
  out.M = M;
  const double d = p.d, s = p.s, logm = std::log(M);
  double m = 0.0;
  switch (theorem) {
    case TheoremKind::sobolev: {
      if (!(p.r - d / 2 > 0)) throw ArgumentError("theorem_metadata: sobolev requires r > d/2");
      m = std::ceil(std::pow(M, 1.0 / (2.0 * s * (2.0 * p.r - 1.0))));
      out.error_bound = p.constant * std::pow(d, s * (p.r + 0.5)) *
                        std::pow(M, -(2.0 * p.r - d) / (2.0 * (2.0 * p.r - 1.0)));
      out.m_formula = "ceil(M^(1/(2s(2r-1))))";
      out.bound_formula = "C d^(s(r+1/2)) M^(-(2r-d)/(2(2r-1)))";
      break;
    }
    case TheoremKind::multiquadric: {
      const double md = m_d_constant(p.d);
      m = std::ceil(logm / (4.0 * md * p.sigma * s + p.c * s / std::sqrt(d)));
      out.error_bound = p.constant * std::pow(logm, std::max(0.0, 2.0 * d - s * p.beta)) *
                        std::pow(M, -p.c / (4.0 * md * std::sqrt(d) * p.sigma + p.c));
      out.m_formula = "ceil(log M / (4 M_d sigma s + c s / sqrt(d)))";
      out.bound_formula = "C (log M)^max(0, 2d - s beta) M^(-c/(4 M_d sqrt(d) sigma + c))";
      break;
    }
    case TheoremKind::gaussian: {
      const double cs = p.c * s;
      m = std::ceil(2.0 * logm /
                    (cs / std::sqrt(d) + std::sqrt(cs * cs / d + 4.0 * p.sigma * p.sigma * pi * pi * d * s * logm)));
      const double expo = (0.5 * std::log(logm) - std::log(cs + p.sigma * pi * d * std::sqrt(s))) /
                          (2.0 * (1.0 + p.sigma * pi * d));
      out.error_bound = p.constant * std::pow(logm, d) * std::pow(M, -expo);
      out.m_formula = "ceil(2 log M / (cs/sqrt(d) + sqrt(c^2 s^2/d + 4 sigma^2 pi^2 d s log M)))";
      out.bound_formula = "C (log M)^d M^(-(1/2 log log M - log(cs + sigma pi d sqrt(s)))/(2(1 + sigma pi d)))";
      break;
    }
  }
  out.m = static_cast<int>(std::max(1.0, m));
  out.n_nodes = std::pow(out.m + 1.0, d);
  out.widths = theoretical_widths(static_cast<long long>(out.n_nodes), static_cast<long long>(std::floor(M)));
  return out;
}

Json to_json(const TheoremMetadata& meta) {
  static const char* names[] = {"sobolev", "multiquadric", "gaussian"};
  return Json{{"theorem", names[static_cast<int>(meta.theorem)]},
              {"M", meta.M},
              {"m", meta.m},
              {"N", meta.n_nodes},
              {"width1", meta.widths.w1},
              {"width2", meta.widths.w2},
              {"param_count_bound", meta.widths.param_count},
              {"overflow", meta.widths.overflow},
              {"width_hypothesis_M_gt_5N2", meta.widths.hypothesis_holds},
              {"error_bound", meta.error_bound},
              {"m_formula", meta.m_formula},
              {"bound_formula", meta.bound_formula}};
}

Json ExperimentReport::to_json() const {
  Json j;
  j["command"] = command;
  j["config"] = config;
  j["results"] = results;
  j["fitted_slopes"] = fitted_slopes;
  Json t = Json::object();
  for (const auto& [name, table] : tables) {
    t[name] = Json{{"path", "tables/" + name + ".csv"}, {"rows", table.size()}};
  }
  j["tables"] = t;
  Json p = Json::array();
  for (const auto& [name, svg] : plots) p.push_back("plots/" + name + ".svg");
  j["plots"] = p;
  Json f = Json::array();
  for (const auto& [name, text] : files) f.push_back(name);
  j["files"] = f;
  j["seeds"] = seeds;
  j["wall_time"] = wall_time;
  return j;
}

void ExperimentReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& [name, table] : tables) write_text(dir / "tables" / (name + ".csv"), table.to_csv());
  for (const auto& [name, svg] : plots) write_text(dir / "plots" / (name + ".svg"), svg);
  for (const auto& [name, text] : files) write_text(dir / name, text);
  write_text(dir / "report.json", to_json().dump(2) + "\n");
}

}  // namespace rfl
