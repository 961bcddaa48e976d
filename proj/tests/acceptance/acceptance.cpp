// Acceptance harness: one PASS/FAIL line per criterion; `--only N` runs a single one.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rfl/cli.hpp"
#include "rfl/experiments.hpp"

using namespace rfl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::vector<Kernel> interpolation_kernels() {
  return {Kernel::gaussian(0.5), Kernel::gaussian(1.0), Kernel::sobolev(1.0), Kernel::sobolev(2.0),
          Kernel::inverse_multiquadric(1.0, 1.0)};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "rfl_acceptance" / name;
  fs::remove_all(p);
  return p;
}

Json run_cli(const std::vector<std::string>& args, const fs::path& out) {
  std::vector<std::string> full = args;
  full.push_back("--out");
  full.push_back(out.string());
  const int code = cli::run(full);
  if (code != 0) throw std::runtime_error("cli exited with " + std::to_string(code));
  return Json::parse(read_text(out / "report.json"));
}

Outcome interpolation() {
  double residual = 0.0, inner = 0.0;
  for (const Kernel& k : interpolation_kernels()) {
    for (int m : {2, 4, 8}) {
      const PointSet nodes = uniform_grid(m, 1);
      const auto sys = build_gram<double>(k, nodes);
      for (std::uint64_t s = 0; s < 100; ++s) {
        const RkhsFunction f = sample_unit_ball(k, 8, 1.0, s);
        const VecX fv = f.values(nodes);
        const RkhsFunction pf = project(sys, fv);
        residual = std::max(residual, (pf.values(nodes) - fv).cwiseAbs().maxCoeff());
        const RkhsFunction diff = f - pf;
        for (Index l = 0; l < nodes.size(); ++l) {
          inner = std::max(inner, std::abs(rkhs_inner(diff, kernel_section(k, nodes.point(l)))));
        }
      }
    }
  }
  return {residual <= 1e-8 && inner <= 1e-8, "max node residual " + fmt(residual) + ", max |<f-Pf,K_t>| " + fmt(inner)};
}

Outcome pointwise_bound() {
  const PointSet eval_set = midpoint_grid(2048, 1);
  double worst = 0.0;
  for (const Kernel& k : interpolation_kernels()) {
    for (int m : {2, 4, 8}) {
      const PointSet nodes = uniform_grid(m, 1);
      const auto sys = build_gram<double>(k, nodes);
      const auto ext = build_gram<Extended>(k, nodes);
      VecX power(eval_set.size());
      for (Index p = 0; p < eval_set.size(); ++p) power(p) = to_double(power_function(ext, eval_set.point(p)));
      for (std::uint64_t s = 0; s < 100; ++s) {
        const RkhsFunction f = sample_unit_ball(k, 8, 1.0, 1000 + s);
        const RkhsFunction pf = project(sys, f.values(nodes));
        const double norm = rkhs_norm(f);
        const VecX fv = f.values(eval_set), pv = pf.values(eval_set);
        for (Index p = 0; p < eval_set.size(); ++p) {
          worst = std::max(worst, std::abs(fv(p) - pv(p)) / (norm * power(p) * (1 + 1e-6)));
        }
      }
    }
  }
  return {worst <= 1.0, "worst |f-Pf| / (|f| P (1+1e-6)) = " + fmt(worst)};
}

Outcome power_decay() {
  const RateStudy sob = rate_study_power(Kernel::sobolev(2.0), {4, 8, 16, 32, 64});
  const RateStudy mq = rate_study_power(Kernel::inverse_multiquadric(1.0, 1.0), {4, 8, 12, 16, 20, 24});
  const RateStudy gau = rate_study_power(Kernel::gaussian(1.0), {2, 4, 8, 16});
  const bool sob_ok = sob.fit.slope >= -3.5 && sob.fit.slope <= -2.5;
  const bool mq_ok = mq.fit.r_squared >= 0.95 && mq.fit.slope < 0;
  bool gau_ok = true;
  for (std::size_t i = 1; i < gau.ratios.size(); ++i) gau_ok = gau_ok && gau.ratios[i] < gau.ratios[i - 1];
  std::ostringstream os;
  os << "sobolev r=2 log-log slope " << fmt(sob.fit.slope) << (sob_ok ? " ok" : " outside [-3.5,-2.5]")
     << "; multiquadric R^2 " << fmt(mq.fit.r_squared) << " slope " << fmt(mq.fit.slope) << (mq_ok ? " ok" : " bad")
     << "; gaussian ratios";
  for (double r : gau.ratios) os << " " << fmt(r);
  os << (gau_ok ? " ok" : " not strictly decreasing");
  return {sob_ok && mq_ok && gau_ok, os.str()};
}

Outcome eigen_bound() {
  struct Case {
    Kernel k;
    int d;
  };
  const std::vector<Case> cases = {{Kernel::gaussian(1.0), 1},      {Kernel::gaussian(1.0, 2), 2},
                                   {Kernel::sobolev(1.0), 1},       {Kernel::sobolev(2.0), 1},
                                   {Kernel::sobolev(1.5, 2), 2},    {Kernel::sobolev(2.5, 2), 2}};
  std::vector<int> ms;
  for (int m = 1; m <= 12; ++m) ms.push_back(m);
  int rows = 0, ok = 0, ok_pow_d = 0;
  for (const Case& c : cases) {
    const EigenStudy s = rate_study_eigen(c.k, ms, c.d);
    for (const auto& r : s.reports) {
      ++rows;
      ok += r.bound_satisfied;
      ok_pow_d += r.bound_pow_d_satisfied;
    }
  }
  return {ok == rows, std::to_string(ok) + "/" + std::to_string(rows) + " rows with lambda_N >= m Gamma_m; m^d variant " +
                          std::to_string(ok_pow_d) + "/" + std::to_string(rows)};
}

Outcome gradients() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Index dim = 2 + trial, w1 = 3 + 2 * trial, w2 = 4 + trial;
    TanhNetwork net = init_network(dim, w1, w2, 500 + trial);
    for (Index i = 0; i < net.b1.size(); ++i) net.b1(i) = 0.2 * n(rng);
    for (Index i = 0; i < net.b2.size(); ++i) net.b2(i) = 0.2 * n(rng);
    MatX xs(dim, 9);
    VecX ys(9);
    for (Index i = 0; i < xs.size(); ++i) xs(i) = n(rng);
    for (Index i = 0; i < ys.size(); ++i) ys(i) = n(rng);
    TanhNetwork grad, scratch_grad;
    loss_and_gradient(net, xs, ys, grad);
    const VecX analytic = grad.flatten();
    const VecX theta = net.flatten();
    for (Index i = 0; i < theta.size(); ++i) {
      VecX p = theta, q = theta;
      p(i) += 1e-5;
      q(i) -= 1e-5;
      TanhNetwork a = net, b = net;
      a.assign(p);
      b.assign(q);
      const double fd =
          (loss_and_gradient(a, xs, ys, scratch_grad) - loss_and_gradient(b, xs, ys, scratch_grad)) / 2e-5;
      worst = std::max(worst, std::abs(analytic(i) - fd) / std::max(1.0, std::abs(fd)));
    }
  }
  return {worst <= 1e-6, "worst relative deviation " + fmt(worst)};
}

Outcome term_one_bound() {
  TargetFunctional flm;
  flm.kind = FunctionalKind::gflm;
  flm.beta = "sin2pi";
  flm.link = "tanh";
  TargetFunctional energy;
  energy.kind = FunctionalKind::l2_energy;
  bool ok = true;
  std::ostringstream os;
  for (const TargetFunctional* f : {&flm, &energy}) {
    for (int m : {2, 4, 8}) {
      const SampleSet s = generate_dataset(Kernel::gaussian(1.0), *f, m, 200, 7);
      const TermOne t = term_one(s, *f);
      ok = ok && t.holds;
      os << f->describe() << " m=" << m << ": " << fmt(t.term_I) << " <= " << fmt(t.bound) << "; ";
    }
  }
  return {ok, os.str()};
}

Outcome end_to_end() {
  const Json rep = run_cli({"train", "--kernel", "gaussian", "--sigma", "1", "--m", "8", "--n-samples", "2000",
                            "--widths", "64,64", "--width-list", "8x8,32x32,128x128"},
                           scratch("c7"));
  const Json& r = rep["results"];
  const double improvement = r["baseline_improvement"].get<double>();
  const bool nonincreasing = r["widths_nonincreasing"].get<bool>();
  std::ostringstream os;
  os << "held-out mean abs " << fmt(r["training"]["heldout_mean_abs"].get<double>()) << " vs baseline "
     << fmt(r["training"]["baseline_mean_abs"].get<double>()) << " (" << fmt(improvement) << "x); width sups";
  for (const auto& v : r["widths_sup"]) os << " " << fmt(v.get<double>());
  return {improvement >= 10.0 && nonincreasing, os.str()};
}

Outcome flm_trend() {
  const Json rep = run_cli({"flm", "--kernel", "gaussian", "--sigma", "1", "--m-list", "2,4,8", "--widths", "128,128",
                            "--n-samples", "4000", "--beta", "sin2pi", "--link", "tanh", "--threads", "3"},
                           scratch("c8"));
  const Json& r = rep["results"];
  std::ostringstream os;
  os << "held-out sup over m=2,4,8:";
  for (const auto& v : r["heldout_sup"]) os << " " << fmt(v.get<double>());
  os << "; triangle " << (r["triangle_always"].get<bool>() ? "always holds" : "violated");
  return {r["sup_nonincreasing"].get<bool>() && r["triangle_always"].get<bool>(), os.str()};
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> runs = {
      {"rates", "--kernel", "gaussian", "--m-list", "2,4,8"},
      {"eigen", "--kernel", "sobolev", "--r", "2", "--m-list", "1,2,3,4"},
      {"project", "--kernel", "sobolev", "--r", "1", "--m", "4", "--n-samples", "50", "--functional", "l2_energy"},
      {"train", "--kernel", "gaussian", "--m", "4", "--n-samples", "300", "--epochs", "20", "--widths", "16,16"},
      {"flm", "--kernel", "gaussian", "--m-list", "2,4", "--n-samples", "300", "--epochs", "10", "--widths", "16,16",
       "--threads", "2"},
      {"meta", "--theorem", "gaussian", "--M", "1000"},
  };
  int files = 0, mismatched = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const fs::path a = scratch("c9_" + std::to_string(i) + "_a"), b = scratch("c9_" + std::to_string(i) + "_b");
    run_cli(runs[i], a);
    run_cli(runs[i], b);
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
      if (entry.path().extension() != ".csv") continue;
      ++files;
      const fs::path twin = b / fs::relative(entry.path(), a);
      if (!fs::exists(twin) || read_text(entry.path()) != read_text(twin)) ++mismatched;
    }
  }
  return {files > 0 && mismatched == 0,
          std::to_string(files) + " CSV files compared, " + std::to_string(mismatched) + " differ"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--only" && i + 1 < argc) only = std::stoi(argv[++i]);
  }
  const std::vector<Criterion> criteria = {
      {1, "interpolation and orthogonality", 30, interpolation},
      {2, "pointwise power-function bound", 60, pointwise_bound},
      {3, "power-function decay rates", 120, power_decay},
      {4, "Gram eigenvalue lower bound", 60, eigen_bound},
      {5, "backprop gradients", 10, gradients},
      {6, "projection term bound", 60, term_one_bound},
      {7, "trained network vs baseline and width trend", 300, end_to_end},
      {8, "FLM error trend over grid sizes", 600, flm_trend},
      {9, "byte-identical CSV reruns", 600, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::cout << "criterion " << c.id << " " << (pass ? "PASS" : "FAIL") << " [" << c.name << "] " << o.detail << " ("
              << fmt(secs) << " s" << (in_time ? "" : ", over the " + fmt(c.limit_seconds) + " s limit") << ")"
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
