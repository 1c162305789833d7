#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "sushi/rng.hpp"

namespace sushi {

struct DenseLayer {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;  // out
  bool operator==(const DenseLayer& o) const { return w == o.w && b == o.b; }
};

// Scratch matrices reused across huber_loss calls.
struct BackpropWorkspace {
  std::vector<Eigen::MatrixXd> acts;
  Eigen::MatrixXd delta, back;
};

// Fully connected Q-network: ReLU on hidden layers, linear output.
// Batches are column-major matrices with one sample per column.
class QNetwork {
 public:
  QNetwork() = default;
  // All weights and biases zero.
  explicit QNetwork(std::vector<int> sizes);
  // He-initialised weights, zero biases.
  QNetwork(std::vector<int> sizes, Rng& rng);

  static std::vector<int> default_sizes(int input_dim, int outputs,
                                        std::vector<int> hidden = {128, 128, 128, 128});

  const std::vector<int>& sizes() const { return sizes_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  long parameter_count() const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  // ShapeError when the input length differs from input_dim().
  Eigen::VectorXd forward(std::span<const double> x) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x) const;

  // Mean Huber loss of q(x_i)[action_i] against target_i. When `grads` is
  // given it receives d loss / d parameters with the network's shapes.
  double huber_loss(const Eigen::MatrixXd& x, std::span<const int> actions,
                    std::span<const double> targets, double delta,
                    std::vector<DenseLayer>* grads,
                    BackpropWorkspace* workspace = nullptr) const;

  // Flat view in layer order: w (column-major) then b for each layer.
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> p);
  static std::vector<double> flatten(const std::vector<DenseLayer>& layers);

  nlohmann::json to_json() const;
  static QNetwork from_json(const nlohmann::json& j);

  bool operator==(const QNetwork& o) const {
    return sizes_ == o.sizes_ && layers_ == o.layers_;
  }

 private:
  std::vector<int> sizes_;
  std::vector<DenseLayer> layers_;
};

double huber(double residual, double delta);

// In-place parameter updates.
class Optimizer {
 public:
  enum class Kind { kSgd, kAdam };
  Optimizer(Kind kind, double lr) : kind_(kind), lr_(lr) {}
  void step(QNetwork& net, const std::vector<DenseLayer>& grads);
  Kind kind() const { return kind_; }
  double lr() const { return lr_; }

 private:
  Kind kind_;
  double lr_;
  long t_ = 0;
  std::vector<DenseLayer> m_, v_;
};

}  // namespace sushi
