#include "saguin/neural.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace saguin::nn {

bool Gradients::all_finite() const {
  for (const auto& w : weight)
    if (!w.allFinite()) return false;
  for (const auto& b : bias)
    if (!b.allFinite()) return false;
  return true;
}

double Gradients::squared_norm() const {
  double s = 0.0;
  for (const auto& w : weight) s += w.squaredNorm();
  for (const auto& b : bias) s += b.squaredNorm();
  return s;
}

Mlp::Mlp(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("an MLP needs >= 2 sizes");
  for (int s : sizes)
    if (s < 1) throw std::invalid_argument("layer sizes must be positive");
  for (size_t i = 1; i < sizes.size(); ++i) {
    DenseLayer layer;
    layer.weight = Eigen::MatrixXd::Zero(sizes[i], sizes[i - 1]);
    layer.bias = Eigen::VectorXd::Zero(sizes[i]);
    layer.activation =
        i + 1 == sizes.size() ? Activation::Linear : Activation::Tanh;
    layers_.push_back(std::move(layer));
  }
}

namespace {

Eigen::MatrixXd orthogonal_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool tall = rows >= cols;
  const int r = tall ? rows : cols;
  const int c = tall ? cols : rows;
  Eigen::MatrixXd g(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(r, c);
  const Eigen::MatrixXd rr = qr.matrixQR().topLeftCorner(c, c);
  for (int j = 0; j < c; ++j)
    if (rr(j, j) < 0.0) q.col(j) *= -1.0;
  return tall ? q : Eigen::MatrixXd(q.transpose());
}

}  // namespace

Mlp Mlp::orthogonal(const std::vector<int>& sizes, double hidden_gain,
                    double output_gain, std::mt19937_64& rng) {
  Mlp net(sizes);
  for (size_t i = 0; i < net.layers_.size(); ++i) {
    DenseLayer& layer = net.layers_[i];
    const double gain =
        i + 1 == net.layers_.size() ? output_gain : hidden_gain;
    layer.weight = gain * orthogonal_matrix(static_cast<int>(layer.weight.rows()),
                                            static_cast<int>(layer.weight.cols()),
                                            rng);
  }
  return net;
}

int Mlp::input_size() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols());
}

int Mlp::output_size() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows());
}

std::vector<int> Mlp::sizes() const {
  std::vector<int> out;
  if (layers_.empty()) return out;
  out.push_back(input_size());
  for (const auto& layer : layers_) out.push_back(static_cast<int>(layer.weight.rows()));
  return out;
}

size_t Mlp::parameter_count() const {
  size_t n = 0;
  for (const auto& layer : layers_)
    n += static_cast<size_t>(layer.weight.size() + layer.bias.size());
  return n;
}

namespace {

// Vectorized form of tanh; absolute error below 1e-15 on the whole line.
Eigen::MatrixXd fast_tanh(const Eigen::MatrixXd& z) {
  return (1.0 - 2.0 / ((2.0 * z.array()).exp() + 1.0)).matrix();
}

}  // namespace

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& X,
                             ForwardCache* cache) const {
  if (X.rows() != input_size())
    throw std::invalid_argument("input has " + std::to_string(X.rows()) +
                                " rows, network expects " +
                                std::to_string(input_size()));
  if (cache) {
    cache->activations.clear();
    cache->activations.reserve(layers_.size() + 1);
    cache->activations.push_back(X);
  }
  Eigen::MatrixXd a = X;
  for (const DenseLayer& layer : layers_) {
    Eigen::MatrixXd z = layer.weight * a;
    z.colwise() += layer.bias;
    if (layer.activation == Activation::Tanh) z = fast_tanh(z);
    a = std::move(z);
    if (cache) cache->activations.push_back(a);
  }
  return a;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  return forward(Eigen::MatrixXd(x)).col(0);
}

Gradients Mlp::backward(const ForwardCache& cache,
                        const Eigen::MatrixXd& d_output) const {
  if (cache.activations.size() != layers_.size() + 1)
    throw std::logic_error("backward called without a matching forward cache");
  const Eigen::Index batch = cache.activations.front().cols();
  if (d_output.rows() != output_size() || d_output.cols() != batch)
    throw std::invalid_argument("output gradient shape mismatch");

  Gradients grads;
  grads.weight.resize(layers_.size());
  grads.bias.resize(layers_.size());
  Eigen::MatrixXd delta = d_output;
  for (size_t i = layers_.size(); i-- > 0;) {
    const DenseLayer& layer = layers_[i];
    if (layer.activation == Activation::Tanh) {
      const Eigen::MatrixXd& a = cache.activations[i + 1];
      delta = (delta.array() * (1.0 - a.array().square())).matrix();
    }
    grads.weight[i].noalias() = delta * cache.activations[i].transpose();
    grads.bias[i] = delta.rowwise().sum();
    if (i > 0) delta = layer.weight.transpose() * delta;
  }
  return grads;
}

Gradients Mlp::zero_gradients() const {
  Gradients g;
  for (const auto& layer : layers_) {
    g.weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
    g.bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return g;
}

std::vector<double> Mlp::flat_parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
        out.push_back(layer.weight(r, c));
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) out.push_back(layer.bias(r));
  }
  return out;
}

void Mlp::set_flat_parameters(const std::vector<double>& flat) {
  if (flat.size() != parameter_count())
    throw std::invalid_argument("flat parameter size mismatch");
  size_t i = 0;
  for (auto& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
        layer.weight(r, c) = flat[i++];
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = flat[i++];
  }
}

bool Mlp::all_finite() const {
  for (const auto& layer : layers_)
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
  return true;
}

bool Mlp::operator==(const Mlp& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (size_t i = 0; i < layers_.size(); ++i) {
    const auto& a = layers_[i];
    const auto& b = other.layers_[i];
    if (a.activation != b.activation) return false;
    if (a.weight.rows() != b.weight.rows() || a.weight.cols() != b.weight.cols())
      return false;
    if (a.weight != b.weight || a.bias != b.bias) return false;
  }
  return true;
}

Eigen::MatrixXd softmax_heads(const Eigen::MatrixXd& logits, int width) {
  if (width < 1 || logits.rows() % width != 0)
    throw std::invalid_argument("logit rows are not a multiple of head width");
  Eigen::MatrixXd probs(logits.rows(), logits.cols());
  const Eigen::Index heads = logits.rows() / width;
  for (Eigen::Index h = 0; h < heads; ++h) {
    const auto block = logits.middleRows(h * width, width);
    const Eigen::RowVectorXd peak = block.colwise().maxCoeff();
    Eigen::MatrixXd e = (block.rowwise() - peak).array().exp().matrix();
    const Eigen::RowVectorXd total = e.colwise().sum();
    probs.middleRows(h * width, width) =
        (e.array().rowwise() / total.array()).matrix();
  }
  return probs;
}

Adam::Adam(const Mlp& net, AdamConfig config)
    : config_(config), m_(net.zero_gradients()), v_(net.zero_gradients()) {}

bool Adam::step(Mlp& net, const Gradients& grads) {
  if (!grads.all_finite()) {
    ++rejected_;
    return false;
  }
  auto& layers = net.layers();
  if (grads.weight.size() != layers.size() || m_.weight.size() != layers.size())
    throw std::invalid_argument("gradient structure does not match network");
  ++steps_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;
  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    param.array() -=
        lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  for (size_t i = 0; i < layers.size(); ++i) {
    update(layers[i].weight, grads.weight[i], m_.weight[i], v_.weight[i]);
    update(layers[i].bias, grads.bias[i], m_.bias[i], v_.bias[i]);
  }
  return true;
}

namespace {

template <typename T>
void put(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return value;
}

}  // namespace

void save_mlp(std::ostream& os, const Mlp& net) {
  os.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  put(os, kCheckpointVersion);
  const auto sizes = net.sizes();
  put(os, static_cast<std::uint32_t>(sizes.size()));
  for (int s : sizes) put(os, static_cast<std::uint32_t>(s));
  for (const auto& layer : net.layers())
    put(os, static_cast<std::uint8_t>(layer.activation));
  for (const auto& layer : net.layers()) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) put(os, layer.weight(r, c));
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) put(os, layer.bias(r));
  }
  if (!os) throw std::runtime_error("failed to write checkpoint");
}

Mlp load_mlp(std::istream& is) {
  char magic[sizeof(kCheckpointMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not a network checkpoint");
  const auto version = get<std::uint32_t>(is);
  if (version != kCheckpointVersion)
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));
  const auto count = get<std::uint32_t>(is);
  if (count < 2 || count > 64) throw std::runtime_error("corrupt checkpoint");
  std::vector<int> sizes;
  for (std::uint32_t i = 0; i < count; ++i)
    sizes.push_back(static_cast<int>(get<std::uint32_t>(is)));
  Mlp net(sizes);
  for (auto& layer : net.layers()) {
    const auto act = get<std::uint8_t>(is);
    if (act > 1) throw std::runtime_error("corrupt checkpoint activation");
    layer.activation = static_cast<Activation>(act);
  }
  for (auto& layer : net.layers()) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
        layer.weight(r, c) = get<double>(is);
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = get<double>(is);
  }
  return net;
}

void save_mlp_file(const std::string& path, const Mlp& net) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  save_mlp(os, net);
}

Mlp load_mlp_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return load_mlp(is);
}

}  // namespace saguin::nn
