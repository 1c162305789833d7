#include "sushi/qnetwork.hpp"

#include <cmath>

#include "sushi/error.hpp"

namespace sushi {

using nlohmann::json;

namespace {

// Approximately standard normal from the engine's raw output (Box-Muller),
// independent of the standard library's distributions.
double normal(Rng& rng) {
  double u1 = uniform_unit(rng);
  while (u1 <= 0.0) u1 = uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void check_sizes(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw ShapeError("a network needs at least input and output sizes");
  for (int s : sizes) {
    if (s <= 0) throw ShapeError("layer sizes must be positive");
  }
}

}  // namespace

double huber(double r, double delta) {
  const double a = std::abs(r);
  return a <= delta ? 0.5 * r * r : delta * (a - 0.5 * delta);
}

QNetwork::QNetwork(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  check_sizes(sizes_);
  for (size_t i = 1; i < sizes_.size(); ++i) {
    layers_.push_back({Eigen::MatrixXd::Zero(sizes_[i], sizes_[i - 1]),
                       Eigen::VectorXd::Zero(sizes_[i])});
  }
}

QNetwork::QNetwork(std::vector<int> sizes, Rng& rng) : QNetwork(std::move(sizes)) {
  for (auto& l : layers_) {
    const double scale = std::sqrt(2.0 / static_cast<double>(l.w.cols()));
    for (Eigen::Index c = 0; c < l.w.cols(); ++c) {
      for (Eigen::Index r = 0; r < l.w.rows(); ++r) l.w(r, c) = scale * normal(rng);
    }
  }
}

std::vector<int> QNetwork::default_sizes(int input_dim, int outputs, std::vector<int> hidden) {
  std::vector<int> s{input_dim};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(outputs);
  return s;
}

long QNetwork::parameter_count() const {
  long n = 0;
  for (size_t i = 1; i < sizes_.size(); ++i) n += static_cast<long>(sizes_[i]) * (sizes_[i - 1] + 1);
  return n;
}

Eigen::VectorXd QNetwork::forward(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != input_dim()) {
    throw ShapeError("network expects " + std::to_string(input_dim()) + " inputs, got " +
                     std::to_string(x.size()));
  }
  Eigen::VectorXd h = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  for (size_t i = 0; i < layers_.size(); ++i) {
    Eigen::VectorXd z = layers_[i].w * h + layers_[i].b;
    h = i + 1 < layers_.size() ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  return h;
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& x) const {
  if (x.rows() != input_dim()) {
    throw ShapeError("network expects " + std::to_string(input_dim()) + " inputs, got " +
                     std::to_string(x.rows()));
  }
  Eigen::MatrixXd h = x;
  for (size_t i = 0; i < layers_.size(); ++i) {
    Eigen::MatrixXd z = layers_[i].w * h;
    z.colwise() += layers_[i].b;
    if (i + 1 < layers_.size()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h;
}

double QNetwork::huber_loss(const Eigen::MatrixXd& x, std::span<const int> actions,
                            std::span<const double> targets, double delta,
                            std::vector<DenseLayer>* grads, BackpropWorkspace* workspace) const {
  const Eigen::Index batch = x.cols();
  if (x.rows() != input_dim()) throw ShapeError("batch has the wrong input size");
  if (static_cast<Eigen::Index>(actions.size()) != batch ||
      static_cast<Eigen::Index>(targets.size()) != batch) {
    throw ShapeError("batch, actions and targets differ in length");
  }
  if (batch == 0) throw ShapeError("empty batch");

  BackpropWorkspace local;
  BackpropWorkspace& ws = workspace ? *workspace : local;
  // acts[i] is the output of layer i (post-activation); the input is x.
  ws.acts.resize(layers_.size());
  const auto input = [&](size_t i) -> const Eigen::MatrixXd& { return i == 0 ? x : ws.acts[i - 1]; };
  for (size_t i = 0; i < layers_.size(); ++i) {
    auto& z = ws.acts[i];
    z.resize(layers_[i].w.rows(), batch);
    z.noalias() = layers_[i].w * input(i);
    z.colwise() += layers_[i].b;
    if (i + 1 < layers_.size()) z = z.cwiseMax(0.0);
  }
  const Eigen::MatrixXd& q = ws.acts.back();
  auto& d = ws.delta;
  d.setZero(q.rows(), batch);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < batch; ++i) {
    const int a = actions[i];
    if (a < 0 || a >= output_dim()) throw ShapeError("action index out of range");
    const double r = q(a, i) - targets[i];
    loss += huber(r, delta);
    d(a, i) = std::clamp(r, -delta, delta) / static_cast<double>(batch);
  }
  loss /= static_cast<double>(batch);
  if (!grads) return loss;

  grads->resize(layers_.size());
  for (size_t i = layers_.size(); i-- > 0;) {
    auto& g = (*grads)[i];
    g.w.resize(layers_[i].w.rows(), layers_[i].w.cols());
    g.w.noalias() = d * input(i).transpose();
    g.b = d.rowwise().sum();
    if (i == 0) break;
    ws.back.resize(layers_[i].w.cols(), batch);
    ws.back.noalias() = layers_[i].w.transpose() * d;
    // ReLU derivative from the post-activation output of the layer below.
    d = ws.back.cwiseProduct((ws.acts[i - 1].array() > 0.0).cast<double>().matrix());
  }
  return loss;
}

std::vector<double> QNetwork::flatten(const std::vector<DenseLayer>& layers) {
  std::vector<double> out;
  for (const auto& l : layers) {
    out.insert(out.end(), l.w.data(), l.w.data() + l.w.size());
    out.insert(out.end(), l.b.data(), l.b.data() + l.b.size());
  }
  return out;
}

std::vector<double> QNetwork::parameters() const { return flatten(layers_); }

void QNetwork::set_parameters(std::span<const double> p) {
  if (static_cast<long>(p.size()) != parameter_count()) {
    throw ShapeError("expected " + std::to_string(parameter_count()) + " parameters, got " +
                     std::to_string(p.size()));
  }
  size_t o = 0;
  for (auto& l : layers_) {
    std::copy_n(p.begin() + static_cast<long>(o), l.w.size(), l.w.data());
    o += static_cast<size_t>(l.w.size());
    std::copy_n(p.begin() + static_cast<long>(o), l.b.size(), l.b.data());
    o += static_cast<size_t>(l.b.size());
  }
}

json QNetwork::to_json() const {
  json layers = json::array();
  for (const auto& l : layers_) {
    // Row-major weights: row r holds the input weights of output unit r.
    std::vector<double> w;
    w.reserve(static_cast<size_t>(l.w.size()));
    for (Eigen::Index r = 0; r < l.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.w.cols(); ++c) w.push_back(l.w(r, c));
    }
    layers.push_back({{"rows", l.w.rows()},
                      {"cols", l.w.cols()},
                      {"weights", w},
                      {"bias", std::vector<double>(l.b.data(), l.b.data() + l.b.size())}});
  }
  return json{{"sizes", sizes_}, {"hidden_activation", "relu"}, {"output_activation", "linear"},
              {"layers", layers}};
}

QNetwork QNetwork::from_json(const json& j) {
  try {
    QNetwork net(j.at("sizes").get<std::vector<int>>());
    const auto& layers = j.at("layers");
    if (layers.size() != net.layers_.size()) throw ShapeError("layer count does not match sizes");
    for (size_t i = 0; i < layers.size(); ++i) {
      auto& l = net.layers_[i];
      const auto w = layers[i].at("weights").get<std::vector<double>>();
      const auto b = layers[i].at("bias").get<std::vector<double>>();
      if (layers[i].at("rows").get<long>() != l.w.rows() ||
          layers[i].at("cols").get<long>() != l.w.cols() ||
          static_cast<long>(w.size()) != l.w.size() || static_cast<long>(b.size()) != l.b.size()) {
        throw ShapeError("layer " + std::to_string(i) + " has inconsistent shapes");
      }
      for (Eigen::Index r = 0; r < l.w.rows(); ++r) {
        for (Eigen::Index c = 0; c < l.w.cols(); ++c) l.w(r, c) = w[static_cast<size_t>(r * l.w.cols() + c)];
      }
      for (Eigen::Index r = 0; r < l.b.size(); ++r) l.b(r) = b[static_cast<size_t>(r)];
    }
    return net;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("network: ") + e.what());
  }
}

void Optimizer::step(QNetwork& net, const std::vector<DenseLayer>& grads) {
  auto& layers = net.layers();
  if (grads.size() != layers.size()) throw ShapeError("gradient has the wrong layer count");
  if (kind_ == Kind::kSgd) {
    for (size_t i = 0; i < layers.size(); ++i) {
      layers[i].w -= lr_ * grads[i].w;
      layers[i].b -= lr_ * grads[i].b;
    }
    return;
  }
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  if (m_.empty()) {
    for (const auto& l : layers) {
      m_.push_back({Eigen::MatrixXd::Zero(l.w.rows(), l.w.cols()), Eigen::VectorXd::Zero(l.b.size())});
    }
    v_ = m_;
  }
  ++t_;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double step = lr_ * std::sqrt(c2) / c1;
  for (size_t i = 0; i < layers.size(); ++i) {
    m_[i].w = b1 * m_[i].w + (1 - b1) * grads[i].w;
    m_[i].b = b1 * m_[i].b + (1 - b1) * grads[i].b;
    v_[i].w = b2 * v_[i].w + (1 - b2) * grads[i].w.cwiseAbs2();
    v_[i].b = b2 * v_[i].b + (1 - b2) * grads[i].b.cwiseAbs2();
    layers[i].w.array() -= step * m_[i].w.array() / (v_[i].w.array().sqrt() + eps);
    layers[i].b.array() -= step * m_[i].b.array() / (v_[i].b.array().sqrt() + eps);
  }
}

}  // namespace sushi
