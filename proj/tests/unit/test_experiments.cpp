#include <cmath>

#include "doctest.h"
#include "rfl/experiments.hpp"

using namespace rfl;
using doctest::Approx;

namespace {
const Kernel g1 = Kernel::gaussian(1.0);

TargetFunctional tanh_flm() {
  TargetFunctional f;
  f.kind = FunctionalKind::gflm;
  f.beta = "sin2pi";
  f.link = "tanh";
  return f;
}
}  // namespace

TEST_CASE("dataset split and determinism") {
  const SampleSet s = generate_dataset(g1, tanh_flm(), 4, 10, 3);
  CHECK(s.n_train == 8);
  const Dataset d = s.split();
  CHECK(d.x_train.cols() == 8);
  CHECK(d.x_test.cols() == 2);
  CHECK(s.inputs.rows() == 5);
  const SampleSet again = generate_dataset(g1, tanh_flm(), 4, 10, 3);
  CHECK(dataset_table(s).to_csv() == dataset_table(again).to_csv());
  TargetFunctional zero;
  zero.kind = FunctionalKind::constant;
  CHECK(generate_dataset(g1, zero, 4, 10, 3).targets.isZero(0.0));
  CHECK_THROWS_AS(generate_dataset(g1, zero, 4, 0, 3), ArgumentError);
}

TEST_CASE("term one") {
  SamplingOptions span;
  span.centers_at_nodes = true;
  const SampleSet in_span = generate_dataset(g1, tanh_flm(), 4, 20, 1, span);
  CHECK(term_one(in_span, tanh_flm()).term_I < 1e-8);
  double prev = INFINITY;
  for (int m : {2, 4, 8}) {
    const SampleSet s = generate_dataset(g1, tanh_flm(), m, 100, 2);
    const TermOne t = term_one(s, tanh_flm());
    CHECK(t.holds);
    CHECK(t.term_I <= t.bound * (1 + 1e-3));
    CHECK(t.term_I < prev);
    prev = t.term_I;
  }
}

TEST_CASE("error decomposition triangle") {
  TargetFunctional lin;
  lin.kind = FunctionalKind::gflm;
  lin.link = "identity";
  const SampleSet s = generate_dataset(g1, lin, 4, 100, 5);
  TrainConfig cfg;
  cfg.epochs = 20;
  const Decomposition d = error_decomposition(s, lin, 8, 8, cfg);
  CHECK(d.triangle_holds);
  CHECK(d.total <= d.term_I + d.term_II + 1e-12);
  CHECK(d.network.width1() == 8);
}

TEST_CASE("line fit") {
  const LinearFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == Approx(2.0));
  CHECK(f.intercept == Approx(1.0));
  CHECK(f.r_squared == Approx(1.0));
  const LinearFit noisy = fit_line({0, 1, 2, 3, 4}, {0.1, 0.9, 2.2, 2.8, 4.1});
  CHECK(noisy.slope_ci_low < noisy.slope);
  CHECK(noisy.slope < noisy.slope_ci_high);
  CHECK_THROWS_AS(fit_line({1}, {1}), ArgumentError);
  CHECK_THROWS_AS(fit_line({1, 1}, {1, 2}), ArgumentError);
}

TEST_CASE("rate studies") {
  const RateStudy g = rate_study_power(g1, {2, 4, 8});
  CHECK(g.fit_kind == "log_mlogm");
  CHECK(g.slope_negative);
  CHECK(g.ratios.size() == 2);
  CHECK(g.ratios[1] < g.ratios[0]);
  CHECK(g.table.size() == 3);
  for (std::size_t i = 0; i < g.table.size(); ++i) CHECK(g.table.rows()[i][14] == "true");
  const RateStudy par = rate_study_power(g1, {2, 4, 8}, 16, 3);
  CHECK(par.table.to_csv() == g.table.to_csv());
  CHECK_THROWS_AS(rate_study_power(g1, {4}), ArgumentError);
  CHECK_THROWS_AS(rate_study_power(g1, {4, 2}), ArgumentError);
  const EigenStudy e = rate_study_eigen(Kernel::sobolev(1.0), {1, 2, 4}, 1);
  CHECK(e.all_satisfied);
  CHECK(e.table.number(1, "m_gamma") == Approx(1.0));
}

TEST_CASE("nonincreasing band") {
  CHECK(nonincreasing_within({1.0, 1.1, 0.5}, 0.2));
  CHECK_FALSE(nonincreasing_within({1.0, 1.3}, 0.2));
  CHECK(nonincreasing_within({}, 0.2));
}

TEST_CASE("parallel_for propagates errors") {
  std::vector<int> out(10, 0);
  parallel_for(10, 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  CHECK(out[9] == 81);
  CHECK_THROWS_AS(parallel_for(5, 2, [](std::size_t i) { if (i == 3) throw NumericalError("x"); }), NumericalError);
}

TEST_CASE("theorem metadata") {
  TheoremParams p;
  p.r = 2.0;
  CHECK(theorem_metadata(TheoremKind::sobolev, 64, p).m == 2);
  CHECK(theorem_metadata(TheoremKind::sobolev, 64, p).n_nodes == 3);
  TheoremParams q;
  q.sigma = 1.0;
  q.c = 1.0;
  const double M = std::exp(10.0);
  const TheoremMetadata mq = theorem_metadata(TheoremKind::multiquadric, M, q);
  CHECK(mq.m == static_cast<int>(std::ceil(10.0 / (4 * m_d_constant(1) + 1))));
  const TheoremMetadata g = theorem_metadata(TheoremKind::gaussian, 1e6, q);
  CHECK(g.m >= 1);
  CHECK(std::isfinite(g.error_bound));
  CHECK_THROWS_AS(theorem_metadata(TheoremKind::gaussian, 1.5, q), ArgumentError);
  CHECK(theorem_kind_from_string("multiquadric") == TheoremKind::multiquadric);
}

TEST_CASE("report layout") {
  ExperimentReport r;
  r.command = "rates";
  Table t({"kernel", "m", "M", "seed"});
  t.row() << "k" << 1 << 0 << 0;
  r.add_table("rates", t);
  r.files.emplace_back("extra.txt", "hello\n");
  const auto dir = std::filesystem::temp_directory_path() / "rfl_report_test";
  std::filesystem::remove_all(dir);
  r.write(dir);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(read_text(dir / "tables" / "rates.csv") == t.to_csv());
  CHECK(read_text(dir / "extra.txt") == "hello\n");
  std::filesystem::remove_all(dir);
}
