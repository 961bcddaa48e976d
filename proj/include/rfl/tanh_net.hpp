#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfl/errors.hpp"
#include "rfl/io.hpp"
#include "rfl/types.hpp"

namespace rfl {

/// x -> a^T tanh(W2 tanh(W1 x - b1) - b2).
struct TanhNetwork {
  MatX W1;  // w1 x N
  VecX b1;
  MatX W2;  // w2 x w1
  VecX b2;
  VecX a;

  Index input_dim() const { return W1.cols(); }
  Index width1() const { return W1.rows(); }
  Index width2() const { return W2.rows(); }
  Index param_count() const { return W1.size() + b1.size() + W2.size() + b2.size() + a.size(); }

  /// All parameters zero, given shape.
  static TanhNetwork zeros(Index input_dim, Index w1, Index w2);

  /// Parameters in the order W1 (column-major), b1, W2, b2, a.
  VecX flatten() const;
  void assign(const VecX& flat);

  friend bool operator==(const TanhNetwork& x, const TanhNetwork& y);
};

/// Xavier-uniform weights, zero biases.
TanhNetwork init_network(Index input_dim, Index w1, Index w2, std::uint64_t seed);

double forward(const TanhNetwork& net, const VecX& x);
/// One output per column of xs.
VecX forward_batch(const TanhNetwork& net, const MatX& xs);

/// Loss 0.5 * mean (forward(x) - y)^2 over the columns of xs; the gradient
/// with respect to every parameter is written into `grad` (same shapes).
double loss_and_gradient(const TanhNetwork& net, const MatX& xs, const VecX& ys, TanhNetwork& grad);

struct Dataset {
  MatX x_train;  // one sample per column
  VecX y_train;
  MatX x_test;
  VecX y_test;
};

struct TrainConfig {
  int epochs = 200;
  int batch_size = 64;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::string schedule = "constant";  // or "cosine"
  std::uint64_t seed = 0;
};

struct TrainReport {
  int epochs = 0;
  double initial_train_mse = 0.0;
  double final_train_mse = 0.0;
  double heldout_sup_error = 0.0;
  double heldout_mean_abs = 0.0;
  double baseline_mean_abs = 0.0;  // best constant predictor: mean training target
  double baseline_sup_error = 0.0;
  Index param_count = 0;
  std::uint64_t seed = 0;
  std::vector<double> loss_curve;  // MSE: entry 0 before training, then epoch averages
};

/// Adam on the training split. Throws DivergenceError on a non-finite loss.
TrainReport train(TanhNetwork& net, const Dataset& data, const TrainConfig& config);

struct TheoreticalWidths {
  double w1 = 0.0;
  double w2 = 0.0;
  double param_count = 0.0;
  bool overflow = false;          // some quantity exceeded double range
  bool hypothesis_holds = false;  // M > 5 N^2
};

/// (N(M-1), 3 ceil((N+1)/2) (5M)^N), or (M-1, 6M) when N = 1.
TheoreticalWidths theoretical_widths(long long n, long long m);

Json to_json(const TanhNetwork& net);
TanhNetwork network_from_json(const Json& j);
Json to_json(const TrainReport& r);
Table loss_curve_table(const TrainReport& r);

}  // namespace rfl
