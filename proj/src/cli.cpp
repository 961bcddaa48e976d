#include "rfl/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "rfl/config.hpp"
#include "rfl/experiments.hpp"

namespace rfl::cli {

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::string> kernel, functional, beta, link, schedule, out, theorem, ode_rhs;
  std::optional<double> sigma, kernel_beta, r, M, lr, value, ode_a, ode_b, ode_h0, s, c, constant;
  std::optional<int> d, m, n_samples, n_centers, eval_resolution, epochs, batch_size, quadrature_points, ode_steps,
      threads;
  std::optional<std::uint64_t> seed;
  std::vector<int> m_list, widths;
  std::vector<std::string> width_list;
};

Json default_train(const std::string& command) {
  if (command == "flm") return Json{{"epochs", 400}, {"batch_size", 64}, {"learning_rate", 3e-3}, {"schedule", "cosine"}};
  return Json{{"epochs", 200}, {"batch_size", 64}, {"learning_rate", 1e-3}, {"schedule", "cosine"}};
}

std::vector<int> default_rate_grid(const std::string& family) {
  if (family == "sobolev") return {4, 8, 16, 32, 64};
  if (family == "inverse_multiquadric" || family == "multiquadric") return {4, 8, 12, 16, 20, 24};
  return {2, 4, 8, 16};
}

/// Keys absent from `merged` are filled from the command's defaults.
void apply_defaults(Json& j) {
  const std::string cmd = j["command"].get<std::string>();
  auto put = [&](const char* key, Json v) {
    if (!j.contains(key)) j[key] = std::move(v);
  };
  put("seed", 0);
  put("threads", 1);
  const std::string family = j.contains("kernel") && j["kernel"].contains("family")
                                 ? j["kernel"]["family"].get<std::string>()
                                 : "gaussian";
  if (cmd == "rates") {
    put("m_list", default_rate_grid(family));
    put("eval_resolution", 16);
  } else if (cmd == "eigen") {
    put("m_list", std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  } else if (cmd == "project") {
    put("m", 8);
    put("n_samples", 200);
    put("n_centers", 8);
    put("eval_resolution", 16);
  } else if (cmd == "train") {
    put("m", 8);
    put("n_samples", 2000);
    put("n_centers", 8);
    put("widths", std::vector<int>{64, 64});
    put("functional", Json{{"kind", "linear_integral"}, {"beta", "one"}});
  } else if (cmd == "flm") {
    put("m_list", std::vector<int>{2, 4, 8});
    put("n_samples", 4000);
    put("n_centers", 8);
    put("widths", std::vector<int>{128, 128});
    if (!j.contains("functional")) j["functional"] = Json::object();
    Json& f = j["functional"];
    if (!f.contains("kind")) f["kind"] = "gflm";
    if (!f.contains("beta")) f["beta"] = "sin2pi";
    if (!f.contains("link")) f["link"] = "tanh";
  } else if (cmd == "meta") {
    put("M", 64);
    if (!j.contains("theorem")) j["theorem"] = Json::object();
    Json& t = j["theorem"];
    if (!t.contains("name")) {
      t["name"] = family == "sobolev" ? "sobolev" : family == "gaussian" ? "gaussian" : "multiquadric";
    }
    if (!t.contains("s")) t["s"] = 1.0;
    if (!t.contains("c")) t["c"] = 1.0;
    if (!t.contains("constant")) t["constant"] = 1.0;
  }
  if (cmd == "train" || cmd == "flm") {
    if (!j.contains("train")) j["train"] = Json::object();
    const Json train = default_train(cmd);
    for (const auto& [k, v] : train.items()) {
      if (!j["train"].contains(k)) j["train"][k] = v;
    }
  }
}

void overlay(Json& j, const Flags& f) {
  auto set = [](Json& at, const char* key, const auto& opt) {
    if (opt) at[key] = *opt;
  };
  if (f.kernel || f.sigma || f.kernel_beta || f.r || f.d) {
    if (!j.contains("kernel")) j["kernel"] = Json::object();
    Json& k = j["kernel"];
    set(k, "family", f.kernel);
    set(k, "sigma", f.sigma);
    set(k, "beta", f.kernel_beta);
    set(k, "r", f.r);
    set(k, "dim", f.d);
  }
  if (f.functional || f.beta || f.link || f.quadrature_points || f.value || f.ode_rhs || f.ode_a || f.ode_b ||
      f.ode_h0 || f.ode_steps) {
    if (!j.contains("functional")) j["functional"] = Json::object();
    Json& fn = j["functional"];
    set(fn, "kind", f.functional);
    set(fn, "beta", f.beta);
    set(fn, "link", f.link);
    set(fn, "quadrature_points", f.quadrature_points);
    set(fn, "value", f.value);
    if (f.ode_rhs || f.ode_a || f.ode_b || f.ode_h0 || f.ode_steps) {
      if (!fn.contains("ode")) fn["ode"] = Json::object();
      set(fn["ode"], "rhs", f.ode_rhs);
      set(fn["ode"], "a", f.ode_a);
      set(fn["ode"], "b", f.ode_b);
      set(fn["ode"], "h0", f.ode_h0);
      set(fn["ode"], "steps", f.ode_steps);
    }
  }
  set(j, "m", f.m);
  if (!f.m_list.empty()) j["m_list"] = f.m_list;
  set(j, "M", f.M);
  if (!f.widths.empty()) {
    if (f.widths.size() != 2) throw ConfigError("--widths: expected two values w1,w2");
    j["widths"] = f.widths;
  }
  if (!f.width_list.empty()) {
    Json list = Json::array();
    for (const std::string& item : f.width_list) {
      const auto x = item.find('x');
      if (x == std::string::npos) throw ConfigError("--width-list: expected entries like 8x8, got '" + item + "'");
      try {
        list.push_back({std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1))});
      } catch (const std::exception&) {
        throw ConfigError("--width-list: bad entry '" + item + "'");
      }
    }
    j["width_list"] = list;
  }
  set(j, "n_samples", f.n_samples);
  set(j, "n_centers", f.n_centers);
  set(j, "seed", f.seed);
  set(j, "output_dir", f.out);
  set(j, "eval_resolution", f.eval_resolution);
  set(j, "threads", f.threads);
  if (f.epochs || f.batch_size || f.lr || f.schedule) {
    if (!j.contains("train")) j["train"] = Json::object();
    set(j["train"], "epochs", f.epochs);
    set(j["train"], "batch_size", f.batch_size);
    set(j["train"], "learning_rate", f.lr);
    set(j["train"], "schedule", f.schedule);
  }
  if (f.theorem || f.s || f.c || f.constant) {
    if (!j.contains("theorem")) j["theorem"] = Json::object();
    set(j["theorem"], "name", f.theorem);
    set(j["theorem"], "s", f.s);
    set(j["theorem"], "c", f.c);
    set(j["theorem"], "constant", f.constant);
  }
}

std::filesystem::path output_root(const RunConfig& c) {
  if (!c.output_dir.empty()) return c.output_dir;
  if (const char* env = std::getenv("RFL_OUT_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env) / c.command;
  }
  return std::filesystem::path("rfl_out") / c.command;
}

const Kernel& need_kernel(const RunConfig& c) {
  if (!c.kernel) throw ConfigError("$: missing required property 'kernel'");
  return *c.kernel;
}

std::vector<int> grid_list(const RunConfig& c) {
  if (!c.m_list.empty()) return c.m_list;
  if (c.m) return {*c.m};
  throw ConfigError("$: missing required property 'm_list'");
}

void run_rates(const RunConfig& c, ExperimentReport& rep) {
  const Kernel& k = need_kernel(c);
  const RateStudy study = rate_study_power(k, c.m_list, c.eval_resolution, c.threads);
  PlotSeries s{"power_sup", {}, study.sups};
  for (int m : c.m_list) s.x.push_back(m);
  rep.plots.emplace_back("rates", svg_line_plot("power function sup, " + k.describe(), "m", "sup P", {s}, true));
  rep.fitted_slopes[study.fit_kind] = to_json(study.fit);
  if (std::isfinite(study.estimated_c)) rep.fitted_slopes["estimated_c"] = study.estimated_c;
  bool ratios_decreasing = true;
  for (std::size_t i = 1; i < study.ratios.size(); ++i) {
    ratios_decreasing = ratios_decreasing && study.ratios[i] < study.ratios[i - 1];
  }
  rep.results = Json{{"power_sups", study.sups},
                     {"ratios", study.ratios},
                     {"ratios_strictly_decreasing", ratios_decreasing},
                     {"slope_negative", study.slope_negative},
                     {"fit_kind", study.fit_kind}};
  rep.add_table("rates", study.table);
}

void run_eigen(const RunConfig& c, ExperimentReport& rep) {
  const Kernel& k = need_kernel(c);
  if (k.family == KernelFamily::inverse_multiquadric) {
    throw UnsupportedConfiguration("eigen: the lower bound needs a closed-form Fourier transform (gaussian, sobolev)");
  }
  const EigenStudy study = rate_study_eigen(k, c.m_list, k.dim, c.threads);
  PlotSeries lam{"log10 lambda_N", {}, {}}, bound{"log10 m Gamma_m", {}, {}};
  Json rows = Json::array();
  for (const auto& r : study.reports) {
    lam.x.push_back(r.m);
    lam.y.push_back(r.log10_lambda_min);
    bound.x.push_back(r.m);
    bound.y.push_back(r.log10_bound_m_gamma);
    rows.push_back(to_json(r));
  }
  rep.plots.emplace_back("eigen", svg_line_plot("smallest Gram eigenvalue, " + k.describe(), "m", "log10",
                                                {lam, bound}, false));
  rep.results = Json{{"all_satisfied", study.all_satisfied},
                     {"all_pow_d_satisfied", study.all_pow_d_satisfied},
                     {"reports", rows}};
  rep.add_table("eigen", study.table);
}

void run_project(const RunConfig& c, ExperimentReport& rep) {
  const Kernel& k = need_kernel(c);
  TargetFunctional functional;
  functional.kind = FunctionalKind::constant;
  if (c.functional) functional = *c.functional;
  SamplingOptions opts;
  opts.n_centers = c.n_centers;
  opts.heldout_fraction = 0.0;
  Table proj({"kernel", "m", "M", "seed", "sample", "rkhs_norm", "sup_error", "power_sup", "bound", "holds",
              "node_residual"});
  Table terms({"kernel", "m", "M", "seed", "functional", "term_I", "C_F", "power_sup", "bound", "holds"});
  Json per_m = Json::array();
  bool all_hold = true;
  for (int m : grid_list(c)) {
    const SampleSet samples = generate_dataset(k, functional, m, *c.n_samples, c.seed, opts);
    const auto sys = build_gram<double>(k, samples.nodes);
    const PointSet eval = default_eval_set(samples.nodes, c.eval_resolution);
    const AdaptivePowerSup aps = power_sup_adaptive(k, samples.nodes, c.eval_resolution);
    double worst = 0.0;
    for (Index j = 0; j < samples.size(); ++j) {
      const RkhsFunction& f = samples.functions[static_cast<std::size_t>(j)];
      const RkhsFunction pf = project(sys, samples.inputs.col(j));
      const double norm = rkhs_norm(f);
      const double err = sup_error(f, pf, eval);
      const double bound = norm * aps.sup.value;
      const double residual = (pf.values(samples.nodes) - samples.inputs.col(j)).cwiseAbs().maxCoeff();
      const bool holds = err <= bound * (1.0 + 1e-6);
      all_hold = all_hold && holds;
      if (bound > 0) worst = std::max(worst, err / bound);
      proj.row() << k.describe() << m << 0 << c.seed << static_cast<long long>(j) << norm << err << aps.sup.value
                 << bound << holds << residual;
      if (j == 0) {
        rep.add_table("trace_m" + std::to_string(m), evaluation_trace(f, pf, sys, eval));
      }
    }
    Json entry{{"m", m}, {"power_sup", aps.sup.value}, {"precision", aps.precision}, {"worst_ratio", worst}};
    if (c.functional) {
      const TermOne t = term_one(samples, functional);
      terms.row() << k.describe() << m << 0 << c.seed << functional.describe() << t.term_I << t.c_f << t.power_sup
                  << t.bound << t.holds;
      entry["term_I"] = t.term_I;
      entry["term_I_bound"] = t.bound;
      entry["term_I_holds"] = t.holds;
      all_hold = all_hold && t.holds;
    }
    per_m.push_back(entry);
  }
  rep.results = Json{{"all_bounds_hold", all_hold}, {"per_m", per_m}};
  rep.add_table("projection", proj);
  if (c.functional) rep.add_table("term_one", terms);
}

void run_train(const RunConfig& c, ExperimentReport& rep) {
  const Kernel& k = need_kernel(c);
  const TargetFunctional& functional = *c.functional;
  SamplingOptions opts;
  opts.n_centers = c.n_centers;
  const SampleSet samples = generate_dataset(k, functional, *c.m, *c.n_samples, c.seed, opts);
  const auto [w1, w2] = *c.widths;
  const Decomposition d = error_decomposition(samples, functional, w1, w2, c.train);
  const TrainReport& tr = d.training;
  const double improvement = tr.heldout_mean_abs > 0 ? tr.baseline_mean_abs / tr.heldout_mean_abs
                                                     : std::numeric_limits<double>::infinity();
  Table dec({"kernel", "m", "M", "seed", "N", "w1", "w2", "params", "term_I", "term_II", "total", "triangle_holds",
             "heldout_sup", "heldout_mean_abs", "baseline_mean_abs", "baseline_sup", "final_train_mse",
             "power_sup", "C_F", "term_I_bound"});
  dec.row() << k.describe() << *c.m << static_cast<long long>(w1) << c.seed
            << static_cast<long long>(samples.nodes.size()) << static_cast<long long>(w1)
            << static_cast<long long>(w2) << static_cast<long long>(tr.param_count) << d.term_I << d.term_II
            << d.total << d.triangle_holds << tr.heldout_sup_error << tr.heldout_mean_abs << tr.baseline_mean_abs
            << tr.baseline_sup_error << tr.final_train_mse << d.all_samples.power_sup << d.all_samples.c_f
            << d.all_samples.bound;
  rep.add_table("decomposition", dec);
  rep.add_table("loss_curve", loss_curve_table(tr));
  rep.add_table("dataset", dataset_table(samples));
  rep.files.emplace_back("network.json", to_json(d.network).dump() + "\n");
  PlotSeries loss{"train mse", {}, tr.loss_curve};
  for (std::size_t i = 0; i < tr.loss_curve.size(); ++i) loss.x.push_back(static_cast<double>(i));
  rep.plots.emplace_back("loss_curve", svg_line_plot("training loss", "epoch", "mse", {loss}, true));
  rep.results = Json{{"training", to_json(tr)},
                     {"term_I", d.term_I},
                     {"term_II", d.term_II},
                     {"total", d.total},
                     {"triangle_holds", d.triangle_holds},
                     {"baseline_improvement", improvement},
                     {"term_I_bound_holds", d.all_samples.holds}};
  if (!c.width_list.empty()) {
    const WidthStudy ws = width_study(samples, c.width_list, c.train);
    PlotSeries sup{"heldout sup", {}, {}};
    for (const auto& row : ws.rows) {
      sup.x.push_back(static_cast<double>(row.report.param_count));
      sup.y.push_back(row.report.heldout_sup_error);
    }
    rep.plots.emplace_back("widths", svg_line_plot("held-out sup error by width", "parameters", "sup error",
                                                   {sup}, true));
    rep.results["widths_sup"] = sup.y;
    rep.results["widths_nonincreasing"] = ws.sup_nonincreasing;
    rep.add_table("widths", ws.table);
  }
}

void run_flm(const RunConfig& c, ExperimentReport& rep) {
  const Kernel& k = need_kernel(c);
  const auto [w1, w2] = *c.widths;
  const FlmStudy study = flm_experiment(c.functional->beta, c.functional->link, k, c.m_list, w1, w2, *c.n_samples,
                                        c.train, c.seed, c.threads);
  PlotSeries sup{"heldout sup", {}, {}}, t1{"term I", {}, {}};
  for (const auto& row : study.rows) {
    sup.x.push_back(row.m);
    sup.y.push_back(row.heldout_sup);
    t1.x.push_back(row.m);
    t1.y.push_back(std::max(row.decomposition.term_I, 1e-300));
  }
  rep.plots.emplace_back("flm", svg_line_plot("generalized FLM, " + k.describe(), "m", "error", {sup, t1}, true));
  rep.results = Json{{"heldout_sup", sup.y},
                     {"sup_nonincreasing", study.sup_nonincreasing},
                     {"triangle_always", study.triangle_always}};
  rep.add_table("flm", study.table);
}

void run_meta(const RunConfig& c, ExperimentReport& rep) {
  TheoremParams p = c.theorem_params;
  if (c.kernel) {
    p.sigma = c.kernel->sigma;
    p.beta = c.kernel->beta;
    p.r = c.kernel->r;
    p.d = c.kernel->dim;
  }
  const TheoremKind kind = theorem_kind_from_string(c.theorem);
  const TheoremMetadata meta = theorem_metadata(kind, *c.M, p);
  rep.results = to_json(meta);
  Table t({"kernel", "m", "M", "seed", "N", "width1", "width2", "param_count_bound", "overflow", "error_bound"});
  PlotSeries bound{"error bound", {}, {}};
  std::vector<double> ms;
  for (double M = 2; M < *c.M; M *= 2) ms.push_back(M);
  ms.push_back(*c.M);
  for (double M : ms) {
    const TheoremMetadata row = theorem_metadata(kind, M, p);
    t.row() << c.theorem << row.m << M << c.seed << row.n_nodes << row.widths.w1 << row.widths.w2
            << row.widths.param_count << row.widths.overflow << row.error_bound;
    bound.x.push_back(M);
    bound.y.push_back(row.error_bound);
  }
  rep.plots.emplace_back("meta", svg_line_plot("theorem bound, " + c.theorem, "M", "bound", {bound}, true));
  rep.add_table("meta", t);
}

void add_options(CLI::App& sub, Flags& f, const std::string& cmd) {
  Json d = Json{{"command", cmd}};
  apply_defaults(d);
  auto shown = [&](const char* key) { return d.contains(key) ? d[key].dump() : std::string(); };
  auto opt = [&](CLI::Option* o, const std::string& def) {
    if (!def.empty()) o->default_str(def);
  };
  sub.add_option("--config", f.config_path, "JSON run config; flags override its values")->check(CLI::ExistingFile);
  opt(sub.add_option("--seed", f.seed, "master RNG seed"), shown("seed"));
  sub.add_option("--out", f.out, "output directory (default $RFL_OUT_DIR/" + cmd + " or ./rfl_out/" + cmd + ")");
  opt(sub.add_option("--threads", f.threads, "worker threads for independent per-m runs"), shown("threads"));

  const bool needs_kernel = cmd != "meta";
  opt(sub.add_option("--kernel", f.kernel,
                     std::string("kernel family: gaussian, inverse_multiquadric, sobolev") +
                         (needs_kernel ? " (required)" : "")),
      "");
  opt(sub.add_option("--sigma", f.sigma, "gaussian width or multiquadric shift"), "1");
  opt(sub.add_option("--kernel-beta", f.kernel_beta, "multiquadric exponent"), "1");
  opt(sub.add_option("--r", f.r, "Sobolev order, r > d/2"), "1");
  opt(sub.add_option("--d", f.d, "input dimension"), "1");

  if (cmd == "rates" || cmd == "eigen" || cmd == "flm" || cmd == "project") {
    opt(sub.add_option("--m-list", f.m_list, "grid sizes, comma separated")->delimiter(','),
        cmd == "rates" ? "gaussian [2,4,8,16]; multiquadric [4,...,24]; sobolev [4,...,64]" : shown("m_list"));
  }
  if (cmd == "project" || cmd == "train") {
    opt(sub.add_option("--m", f.m, "grid size; nodes j/m per axis"), shown("m"));
  }
  if (cmd == "rates" || cmd == "project") {
    opt(sub.add_option("--eval-resolution", f.eval_resolution, "evaluation cells per grid cell"),
        shown("eval_resolution"));
  }
  if (cmd == "project" || cmd == "train" || cmd == "flm") {
    opt(sub.add_option("--n-samples", f.n_samples, "unit-ball samples"), shown("n_samples"));
    opt(sub.add_option("--n-centers", f.n_centers, "kernel centers per sample"), shown("n_centers"));
  }
  if (cmd == "train" || cmd == "flm") {
    const Json& t = d["train"];
    opt(sub.add_option("--widths", f.widths, "hidden widths w1,w2")->delimiter(','), shown("widths"));
    opt(sub.add_option("--epochs", f.epochs, "training epochs"), t["epochs"].dump());
    opt(sub.add_option("--batch-size", f.batch_size, "minibatch size"), t["batch_size"].dump());
    opt(sub.add_option("--lr", f.lr, "Adam learning rate"), t["learning_rate"].dump());
    opt(sub.add_option("--schedule", f.schedule, "learning-rate schedule: constant, cosine"), t["schedule"].get<std::string>());
  }
  if (cmd == "train") {
    sub.add_option("--width-list", f.width_list, "width study, e.g. 8x8,32x32,128x128")->delimiter(',');
  }
  if (cmd == "project" || cmd == "train") {
    opt(sub.add_option("--functional", f.functional, "linear_integral, gflm, ode_map, l2_energy, constant"),
        cmd == "train" ? "linear_integral" : "none");
    opt(sub.add_option("--quadrature-points", f.quadrature_points, "Simpson nodes (odd)"), "129");
    opt(sub.add_option("--value", f.value, "value of the constant functional"), "0");
    opt(sub.add_option("--ode-rhs", f.ode_rhs, "ODE right-hand side: u, h, u-h, sin(u)*h"), "u");
    opt(sub.add_option("--ode-a", f.ode_a, "ODE start"), "0");
    opt(sub.add_option("--ode-b", f.ode_b, "ODE end"), "1");
    opt(sub.add_option("--ode-h0", f.ode_h0, "ODE initial value"), "0");
    opt(sub.add_option("--ode-steps", f.ode_steps, "RK4 steps"), "128");
  }
  if (cmd == "project" || cmd == "train" || cmd == "flm") {
    opt(sub.add_option("--beta", f.beta, "weight: one, sin2pi, zero"), cmd == "flm" ? "sin2pi" : "one");
    opt(sub.add_option("--link", f.link, "link: identity, tanh, logistic, sin"), cmd == "flm" ? "tanh" : "identity");
  }
  if (cmd == "meta") {
    opt(sub.add_option("--theorem", f.theorem, "sobolev, multiquadric, gaussian (default from --kernel)"),
        "gaussian");
    opt(sub.add_option("--M", f.M, "target accuracy parameter, >= 2"), shown("M"));
    opt(sub.add_option("--s", f.s, "Hoelder exponent of the functional"), "1");
    opt(sub.add_option("--c", f.c, "power-function decay constant"), "1");
    opt(sub.add_option("--C", f.constant, "leading constant of the error bound"), "1");
  }
}

int execute(CLI::App& app, const std::map<std::string, Flags>& flags) {
  std::string cmd;
  for (auto* sub : app.get_subcommands()) cmd = sub->get_name();
  const Flags& f = flags.at(cmd);
  Json merged = Json::object();
  if (!f.config_path.empty()) {
    try {
      merged = Json::parse(read_text(f.config_path));
    } catch (const Json::parse_error& e) {
      throw ConfigError(f.config_path + ": " + e.what());
    }
    if (!merged.is_object()) throw ConfigError("$: expected object");
    if (merged.contains("command") && merged["command"] != cmd) {
      throw ConfigError("$.command: config is for '" + merged["command"].get<std::string>() + "', not '" + cmd + "'");
    }
  }
  merged["command"] = cmd;
  overlay(merged, f);
  validate_schema(merged, run_config_schema());
  if (cmd != "meta" && !merged.contains("kernel")) throw ConfigError("$: missing required property 'kernel'");
  apply_defaults(merged);
  const RunConfig c = parse_run_config(merged);

  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.command = cmd;
  rep.config = merged;
  rep.seeds = {c.seed};
  if (cmd == "rates") run_rates(c, rep);
  else if (cmd == "eigen") run_eigen(c, rep);
  else if (cmd == "project") run_project(c, rep);
  else if (cmd == "train") run_train(c, rep);
  else if (cmd == "flm") run_flm(c, rep);
  else run_meta(c, rep);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto dir = output_root(c);
  rep.write(dir);
  std::cerr << "rfl " << cmd << ": wrote " << (dir / "report.json").string() << "\n";
  std::cout << rep.results.dump(2) << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Approximation of Hoelder functionals on RKHSs by kernel interpolation and tanh networks", "rfl"};
  app.require_subcommand(1);
  app.get_formatter()->column_width(40);
  std::map<std::string, Flags> flags;
  const std::pair<const char*, const char*> commands[] = {
      {"rates", "power-function decay over grid sizes, with the family's rate fit"},
      {"eigen", "smallest Gram eigenvalue against m Gamma_m"},
      {"project", "projection error of random unit-ball samples against the power-function bound"},
      {"train", "train a tanh network on a functional and split the error"},
      {"flm", "generalized functional linear model over grid sizes"},
      {"meta", "prescribed grid size, widths and error bound for a theorem"},
  };
  for (const auto& [name, help] : commands) {
    add_options(*app.add_subcommand(name, help), flags[name], name);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return 2;
  }
  try {
    return execute(app, flags);
  } catch (const NumericalError& e) {
    std::cerr << "rfl: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const ArgumentError& e) {
    std::cerr << "rfl: config error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedConfiguration& e) {
    std::cerr << "rfl: unsupported: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimitError& e) {
    std::cerr << "rfl: resource limit: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "rfl: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rfl: " << e.what() << "\n";
    return 1;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"rfl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace rfl::cli
