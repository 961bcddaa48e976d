#include "rfl/tanh_net.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace rfl {

TanhNetwork TanhNetwork::zeros(Index input_dim, Index w1, Index w2) {
  if (input_dim < 1 || w1 < 1 || w2 < 1) throw ArgumentError("TanhNetwork: input dimension and widths must be >= 1");
  return {MatX::Zero(w1, input_dim), VecX::Zero(w1), MatX::Zero(w2, w1), VecX::Zero(w2), VecX::Zero(w2)};
}

VecX TanhNetwork::flatten() const {
  VecX out(param_count());
  out << W1.reshaped(), b1, W2.reshaped(), b2, a;
  return out;
}

void TanhNetwork::assign(const VecX& flat) {
  if (flat.size() != param_count()) throw ArgumentError("TanhNetwork::assign: parameter count mismatch");
  Index k = 0;
  auto take = [&](auto& block) {
    block.reshaped() = flat.segment(k, block.size());
    k += block.size();
  };
  take(W1);
  take(b1);
  take(W2);
  take(b2);
  take(a);
}

bool operator==(const TanhNetwork& x, const TanhNetwork& y) {
  return x.W1 == y.W1 && x.b1 == y.b1 && x.W2 == y.W2 && x.b2 == y.b2 && x.a == y.a;
}

TanhNetwork init_network(Index input_dim, Index w1, Index w2, std::uint64_t seed) {
  TanhNetwork net = TanhNetwork::zeros(input_dim, w1, w2);
  std::mt19937_64 rng(seed);
  auto fill = [&](auto& m, Index fan_in, Index fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i) m(i, j) = dist(rng);
  };
  fill(net.W1, input_dim, w1);
  fill(net.W2, w1, w2);
  fill(net.a, w2, 1);
  return net;
}

double forward(const TanhNetwork& net, const VecX& x) {
  if (x.size() != net.input_dim()) {
    throw ArgumentError("forward: expected input of length " + std::to_string(net.input_dim()));
  }
  const VecX h1 = (net.W1 * x - net.b1).array().tanh();
  const VecX h2 = (net.W2 * h1 - net.b2).array().tanh();
  return net.a.dot(h2);
}

VecX forward_batch(const TanhNetwork& net, const MatX& xs) {
  if (xs.rows() != net.input_dim()) throw ArgumentError("forward_batch: input dimension mismatch");
  const MatX h1 = (net.W1 * xs).colwise() - net.b1;
  const MatX t1 = h1.array().tanh();
  const MatX h2 = (net.W2 * t1).colwise() - net.b2;
  return h2.array().tanh().matrix().transpose() * net.a;
}

double loss_and_gradient(const TanhNetwork& net, const MatX& xs, const VecX& ys, TanhNetwork& grad) {
  if (xs.cols() == 0) throw ArgumentError("loss_and_gradient: empty batch");
  if (xs.rows() != net.input_dim() || ys.size() != xs.cols()) {
    throw ArgumentError("loss_and_gradient: batch shape mismatch");
  }
  const double inv_b = 1.0 / static_cast<double>(xs.cols());
  const MatX h1 = ((net.W1 * xs).colwise() - net.b1).array().tanh();
  const MatX h2 = ((net.W2 * h1).colwise() - net.b2).array().tanh();
  const VecX residual = h2.transpose() * net.a - ys;
  const VecX dout = residual * inv_b;

  grad.a = h2 * dout;
  const MatX dz2 = ((net.a * dout.transpose()).array() * (1.0 - h2.array().square())).matrix();
  grad.W2 = dz2 * h1.transpose();
  grad.b2 = -dz2.rowwise().sum();
  const MatX dz1 = ((net.W2.transpose() * dz2).array() * (1.0 - h1.array().square())).matrix();
  grad.W1 = dz1 * xs.transpose();
  grad.b1 = -dz1.rowwise().sum();
  return 0.5 * residual.squaredNorm() * inv_b;
}

namespace {

double mse(const TanhNetwork& net, const MatX& xs, const VecX& ys) {
  if (xs.cols() == 0) return 0.0;
  return (forward_batch(net, xs) - ys).squaredNorm() / static_cast<double>(xs.cols());
}

void check_finite(double loss, int epoch) {
  if (!std::isfinite(loss)) {
    throw DivergenceError("training loss became non-finite at epoch " + std::to_string(epoch));
  }
}

}  // namespace

TrainReport train(TanhNetwork& net, const Dataset& data, const TrainConfig& config) {
  if (config.epochs < 0) throw ArgumentError("train: epochs must be >= 0");
  if (config.batch_size < 1) throw ArgumentError("train: batch_size must be >= 1");
  if (!(config.learning_rate > 0)) throw ArgumentError("train: learning_rate must be > 0");
  if (config.schedule != "constant" && config.schedule != "cosine") {
    throw ArgumentError("train: schedule must be constant or cosine");
  }
  if (data.x_train.cols() == 0) throw ArgumentError("train: empty training split");
  if (data.x_train.rows() != net.input_dim()) throw ArgumentError("train: input dimension mismatch");

  TrainReport report;
  report.seed = config.seed;
  report.param_count = net.param_count();
  report.initial_train_mse = mse(net, data.x_train, data.y_train);
  check_finite(report.initial_train_mse, 0);
  report.loss_curve.push_back(report.initial_train_mse);

  const Index n = data.x_train.cols();
  const Index p = net.param_count();
  VecX m1 = VecX::Zero(p), m2 = VecX::Zero(p);
  VecX params = net.flatten();
  TanhNetwork grad = TanhNetwork::zeros(net.input_dim(), net.width1(), net.width2());
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(config.seed);
  const Index batches = (n + config.batch_size - 1) / config.batch_size;
  const double total_steps = static_cast<double>(batches) * config.epochs;
  long long step = 0;
  MatX xb;
  VecX yb;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (Index start = 0; start < n; start += config.batch_size) {
      const Index len = std::min<Index>(config.batch_size, n - start);
      xb.resize(net.input_dim(), len);
      yb.resize(len);
      for (Index k = 0; k < len; ++k) {
        const Index idx = order[static_cast<std::size_t>(start + k)];
        xb.col(k) = data.x_train.col(idx);
        yb(k) = data.y_train(idx);
      }
      const double loss = loss_and_gradient(net, xb, yb, grad);
      check_finite(loss, epoch);
      epoch_loss += 2.0 * loss * static_cast<double>(len);
      ++step;
      double lr = config.learning_rate;
      if (config.schedule == "cosine") {
        lr *= 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(step - 1) / total_steps));
      }
      const VecX g = grad.flatten();
      m1 = config.beta1 * m1 + (1.0 - config.beta1) * g;
      m2 = config.beta2 * m2 + (1.0 - config.beta2) * g.cwiseProduct(g);
      const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      params.array() -= lr * (m1.array() / c1) / ((m2.array() / c2).sqrt() + config.epsilon);
      net.assign(params);
    }
    report.loss_curve.push_back(epoch_loss / static_cast<double>(n));
    report.epochs = epoch;
  }
  report.final_train_mse = mse(net, data.x_train, data.y_train);
  check_finite(report.final_train_mse, config.epochs);

  const double mean_target = data.y_train.mean();
  if (data.x_test.cols() > 0) {
    const VecX err = (forward_batch(net, data.x_test) - data.y_test).cwiseAbs();
    report.heldout_sup_error = err.maxCoeff();
    report.heldout_mean_abs = err.mean();
    const VecX base = (data.y_test.array() - mean_target).abs();
    report.baseline_sup_error = base.maxCoeff();
    report.baseline_mean_abs = base.mean();
  }
  return report;
}

TheoreticalWidths theoretical_widths(long long n, long long m) {
  if (n < 1 || m < 2) throw ArgumentError("theoretical_widths: requires N >= 1 and M >= 2");
  TheoreticalWidths w;
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  w.hypothesis_holds = md > 5.0 * nd * nd;
  if (n == 1) {
    w.w1 = md - 1.0;
    w.w2 = 6.0 * md;
  } else {
    w.w1 = nd * (md - 1.0);
    w.w2 = 3.0 * std::ceil((nd + 1.0) / 2.0) * std::pow(5.0 * md, nd);
  }
  w.param_count = w.w1 * (nd + 1.0) + w.w2 * (w.w1 + 1.0) + w.w2;
  w.overflow = !std::isfinite(w.w2) || !std::isfinite(w.param_count);
  if (w.overflow) {
    w.w2 = std::isfinite(w.w2) ? w.w2 : std::numeric_limits<double>::infinity();
    w.param_count = std::numeric_limits<double>::infinity();
  }
  return w;
}

Json to_json(const TanhNetwork& net) {
  return Json{{"input_dim", net.input_dim()},
              {"widths", {net.width1(), net.width2()}},
              {"W1", to_json(VecX(net.W1.reshaped()))},
              {"b1", to_json(net.b1)},
              {"W2", to_json(VecX(net.W2.reshaped()))},
              {"b2", to_json(net.b2)},
              {"a", to_json(net.a)}};
}

TanhNetwork network_from_json(const Json& j) {
  const Index n = j.at("input_dim").get<Index>();
  const Index w1 = j.at("widths").at(0).get<Index>();
  const Index w2 = j.at("widths").at(1).get<Index>();
  TanhNetwork net = TanhNetwork::zeros(n, w1, w2);
  auto load = [&](const char* key, auto& block) {
    const VecX v = vector_from_json(j.at(key));
    if (v.size() != block.size()) throw ArgumentError(std::string("network JSON: wrong length for ") + key);
    block.reshaped() = v;
  };
  load("W1", net.W1);
  load("b1", net.b1);
  load("W2", net.W2);
  load("b2", net.b2);
  load("a", net.a);
  return net;
}

Json to_json(const TrainReport& r) {
  Json curve = Json::array();
  for (double v : r.loss_curve) curve.push_back(v);
  return Json{{"epochs", r.epochs},
              {"initial_train_mse", r.initial_train_mse},
              {"final_train_mse", r.final_train_mse},
              {"heldout_sup_error", r.heldout_sup_error},
              {"heldout_mean_abs", r.heldout_mean_abs},
              {"baseline_sup_error", r.baseline_sup_error},
              {"baseline_mean_abs", r.baseline_mean_abs},
              {"param_count", r.param_count},
              {"seed", r.seed},
              {"loss_curve", curve}};
}

Table loss_curve_table(const TrainReport& r) {
  Table t({"epoch", "loss"});
  for (std::size_t e = 0; e < r.loss_curve.size(); ++e) t.row() << static_cast<long long>(e) << r.loss_curve[e];
  return t;
}

}  // namespace rfl
