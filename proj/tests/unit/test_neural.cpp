#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "saguin/neural.hpp"

using namespace saguin::nn;

namespace {

double squared_loss(const Mlp& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return 0.5 * (net.forward(x) - y).squaredNorm();
}

}  // namespace

TEST_CASE("zero network outputs zeros") {
  const Mlp net({3, 4, 2});
  CHECK(net.input_size() == 3);
  CHECK(net.output_size() == 2);
  CHECK(net.parameter_count() == 3 * 4 + 4 + 4 * 2 + 2);
  CHECK(net.forward(Eigen::MatrixXd(Eigen::MatrixXd::Ones(3, 1))).isZero());
  CHECK(net.layers()[0].activation == Activation::Tanh);
  CHECK(net.layers()[1].activation == Activation::Linear);
}

TEST_CASE("orthogonal initialization") {
  std::mt19937_64 rng(3);
  const Mlp net = Mlp::orthogonal({6, 10, 10, 4}, 1.0, 0.01, rng);
  const auto& w0 = net.layers()[0].weight;  // 10 x 6: orthonormal columns
  CHECK((w0.transpose() * w0 - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-10);
  const auto& w1 = net.layers()[1].weight;
  CHECK((w1 * w1.transpose() - Eigen::MatrixXd::Identity(10, 10)).norm() < 1e-10);
  const auto& w2 = net.layers()[2].weight;  // 4 x 10: orthonormal rows times gain
  CHECK((w2 * w2.transpose() - 1e-4 * Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
  for (const auto& l : net.layers()) CHECK(l.bias.isZero());
  std::mt19937_64 again(3);
  CHECK(Mlp::orthogonal({6, 10, 10, 4}, 1.0, 0.01, again) == net);
}

TEST_CASE("backward matches central differences") {
  std::mt19937_64 rng(9);
  Mlp net = Mlp::orthogonal({4, 6, 5, 3}, 1.0, 1.0, rng);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (auto& l : net.layers())
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = 0.3 * n01(rng);
  Eigen::MatrixXd x(4, 7), y(3, 7);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = n01(rng);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = n01(rng);

  ForwardCache cache;
  const Eigen::MatrixXd out = net.forward(x, &cache);
  const Gradients g = net.backward(cache, out - y);
  const double h = 1e-5;
  for (size_t l = 0; l < net.layers().size(); ++l) {
    auto& w = net.layers()[l].weight;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double keep = w(i);
      w(i) = keep + h;
      const double up = squared_loss(net, x, y);
      w(i) = keep - h;
      const double down = squared_loss(net, x, y);
      w(i) = keep;
      const double fd = (up - down) / (2 * h);
      CHECK(std::abs(fd - g.weight[l](i)) <= 1e-4 * std::max({std::abs(fd), std::abs(g.weight[l](i)), 1e-6}));
    }
    auto& b = net.layers()[l].bias;
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      const double keep = b(i);
      b(i) = keep + h;
      const double up = squared_loss(net, x, y);
      b(i) = keep - h;
      const double down = squared_loss(net, x, y);
      b(i) = keep;
      const double fd = (up - down) / (2 * h);
      CHECK(std::abs(fd - g.bias[l](i)) <= 1e-4 * std::max({std::abs(fd), std::abs(g.bias[l](i)), 1e-6}));
    }
  }
}

TEST_CASE("backward rejects a mismatched cache") {
  const Mlp net({2, 3, 1});
  ForwardCache empty;
  CHECK_THROWS_AS(net.backward(empty, Eigen::MatrixXd::Zero(1, 1)), std::logic_error);
  ForwardCache cache;
  net.forward(Eigen::MatrixXd::Zero(2, 4), &cache);
  CHECK_THROWS_AS(net.backward(cache, Eigen::MatrixXd::Zero(1, 3)), std::logic_error);
}

TEST_CASE("softmax heads normalize each block") {
  Eigen::MatrixXd logits(6, 2);
  logits << 1, 1000, 2, 1000, 3, -1000, 0, 0, 0, 0, 0, 0;
  const Eigen::MatrixXd p = softmax_heads(logits, 3);
  for (int h = 0; h < 2; ++h)
    for (int c = 0; c < 2; ++c) CHECK(p.block(3 * h, c, 3, 1).sum() == doctest::Approx(1.0));
  CHECK(p(0, 1) == doctest::Approx(0.5));
  CHECK(p(2, 1) == 0.0);
  CHECK(p(3, 0) == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(softmax_heads(logits, 4), std::invalid_argument);
}

TEST_CASE("adam step against a hand-computed update") {
  Mlp net({1, 1});
  net.layers()[0].activation = Activation::Linear;
  Adam opt(net, AdamConfig{0.1, 0.9, 0.999, 1e-8});
  Gradients g = net.zero_gradients();
  g.weight[0](0, 0) = 2.0;
  g.bias[0](0) = -0.5;
  REQUIRE(opt.step(net, g));
  // first bias-corrected step is lr * sign(g) up to epsilon
  CHECK(net.layers()[0].weight(0, 0) == doctest::Approx(-0.1).epsilon(1e-6));
  CHECK(net.layers()[0].bias(0) == doctest::Approx(0.1).epsilon(1e-6));
  REQUIRE(opt.step(net, g));
  CHECK(net.layers()[0].weight(0, 0) == doctest::Approx(-0.2).epsilon(1e-6));
  CHECK(opt.steps() == 2);
}

TEST_CASE("adam leaves parameters untouched on non-finite gradients") {
  Mlp net({2, 2});
  Adam opt(net);
  Gradients g = net.zero_gradients();
  g.weight[0](1, 1) = std::numeric_limits<double>::quiet_NaN();
  const Mlp before = net;
  CHECK_FALSE(opt.step(net, g));
  CHECK(net == before);
  CHECK(opt.rejected() == 1);
  CHECK(opt.steps() == 0);
}

TEST_CASE("checkpoint round trip and corruption") {
  std::mt19937_64 rng(1);
  const Mlp net = Mlp::orthogonal({5, 7, 3}, 1.0, 0.5, rng);
  std::stringstream ss;
  save_mlp(ss, net);
  const std::string bytes = ss.str();
  CHECK(bytes.substr(0, 8) == "SAGUINNN");
  std::stringstream in(bytes);
  CHECK(load_mlp(in) == net);

  std::stringstream truncated(bytes.substr(0, bytes.size() - 4));
  CHECK_THROWS(load_mlp(truncated));
  std::string wrong = bytes;
  wrong[0] = 'X';
  std::stringstream bad(wrong);
  CHECK_THROWS(load_mlp(bad));
}

TEST_CASE("flat parameter view round trips") {
  std::mt19937_64 rng(2);
  Mlp net = Mlp::orthogonal({3, 4, 2}, 1.0, 1.0, rng);
  auto flat = net.flat_parameters();
  CHECK(flat.size() == net.parameter_count());
  for (double& v : flat) v += 1.0;
  Mlp other = net;
  other.set_flat_parameters(flat);
  CHECK(other.flat_parameters() == flat);
  CHECK(other.layers()[0].weight(0, 1) == doctest::Approx(net.layers()[0].weight(0, 1) + 1.0));
}
