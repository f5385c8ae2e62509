#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace saguin::nn {

enum class Activation : std::uint8_t { Tanh = 0, Linear = 1 };

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
  Activation activation = Activation::Tanh;
};

struct Gradients {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;

  bool all_finite() const;
  double squared_norm() const;
};

/// Post-activation outputs of every layer for one batch, with the input
/// stored first. Columns are samples.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> activations;
};

/// Fully connected network: Tanh hidden layers and a linear output layer.
class Mlp {
 public:
  Mlp() = default;
  /// Zero-initialized network with the given layer sizes (input first).
  explicit Mlp(const std::vector<int>& sizes);

  /// Orthogonal weights scaled by hidden_gain (output layer: output_gain),
  /// zero biases.
  static Mlp orthogonal(const std::vector<int>& sizes, double hidden_gain,
                        double output_gain, std::mt19937_64& rng);

  int input_size() const;
  int output_size() const;
  std::vector<int> sizes() const;
  size_t parameter_count() const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  /// Batched forward pass; X is input_size x batch. Fills cache when given.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& X,
                          ForwardCache* cache = nullptr) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  /// Reverse-mode gradients of a loss whose derivative with respect to the
  /// network output is d_output (output_size x batch).
  Gradients backward(const ForwardCache& cache,
                     const Eigen::MatrixXd& d_output) const;

  Gradients zero_gradients() const;

  /// Flattened parameter view, layer by layer: weights row-major, then bias.
  std::vector<double> flat_parameters() const;
  void set_flat_parameters(const std::vector<double>& flat);

  bool all_finite() const;
  bool operator==(const Mlp& other) const;

 private:
  std::vector<DenseLayer> layers_;
};

/// Row-wise softmax over consecutive blocks of `width` rows (one block per
/// head) of a logits matrix.
Eigen::MatrixXd softmax_heads(const Eigen::MatrixXd& logits, int width);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(const Mlp& net, AdamConfig config = {});

  /// Applies one bias-corrected update. Returns false and leaves every
  /// parameter and moment untouched when a gradient is non-finite.
  bool step(Mlp& net, const Gradients& grads);

  long steps() const { return steps_; }
  long rejected() const { return rejected_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  Gradients m_;
  Gradients v_;
  long steps_ = 0;
  long rejected_ = 0;
};

inline constexpr char kCheckpointMagic[8] = {'S', 'A', 'G', 'U', 'I', 'N', 'N', 'N'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary checkpoint: magic, version, layer count, sizes, activations, then
/// row-major little-endian doubles (each weight matrix followed by its bias).
void save_mlp(std::ostream& os, const Mlp& net);
Mlp load_mlp(std::istream& is);

void save_mlp_file(const std::string& path, const Mlp& net);
Mlp load_mlp_file(const std::string& path);

}  // namespace saguin::nn
