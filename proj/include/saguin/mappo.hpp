#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "saguin/env.hpp"
#include "saguin/neural.hpp"
#include "saguin/radio.hpp"
#include "saguin/topology.hpp"

namespace saguin {

struct PpoHyper {
  double gamma = 0.95;
  double clip = 0.2;
  double entropy_beta = 0.01;
  double learning_rate = 1e-3;
  int epochs = 50;
  int hidden = 64;
  double hidden_gain = 1.0;
  double policy_output_gain = 0.01;
  double value_output_gain = 1.0;
  // Standardizes each epoch's TD advantages over the buffer before the
  // surrogate; the critic target is unaffected.
  bool normalize_advantages = true;
};

/// Maps one AP's action heads onto users. Head option 0 is idle and option
/// i >= 1 serves covered_users[i - 1], so every head has covered + 1 options.
struct HeadLayout {
  int channels = 1;
  std::vector<int> users;  // covered users, ascending

  int width() const { return static_cast<int>(users.size()) + 1; }
  int option_to_target(int option) const {
    return option == 0 ? 0 : users[static_cast<size_t>(option - 1)] + 1;
  }
};

struct Experience {
  std::vector<double> global_obs;
  std::vector<double> next_global_obs;
  std::vector<double> local_obs;
  std::vector<int> options;            // sampled head options, pre-mask
  AssignmentRow executed;              // after the redundancy mask
  double reward = 0.0;
  std::vector<double> behavior_probs;  // per head, probability of options[h]
};

struct ActResult {
  AssignmentRow executed;
  std::vector<int> options;
  std::vector<double> probs;  // per head, pre-mask
};

/// Removes repeated users from a row: the lowest channel keeps the user,
/// later duplicates become idle.
AssignmentRow apply_redundancy_mask(const AssignmentRow& row);

/// Samples one option per head from its categorical (or takes the argmax,
/// lowest index on ties, when greedy), then masks duplicates.
ActResult sample_action(const Eigen::VectorXd& head_probs,
                        const HeadLayout& layout, std::mt19937_64& rng,
                        bool greedy);

/// Discounted returns-to-go truncated at the end of the buffer.
std::vector<double> discounted_returns(std::span<const double> rewards,
                                       double gamma);

/// Column-packed view of a buffer.
struct PpoBatch {
  Eigen::MatrixXd local;        // local_size x N
  Eigen::MatrixXd global;       // global_size x N
  Eigen::MatrixXd next_global;  // global_size x N
  // global followed by each next observation that is not already the
  // following column; next_global.col(i) == states.col(next_index[i]).
  Eigen::MatrixXd states;
  std::vector<Eigen::Index> next_index;
  std::vector<std::vector<int>> options;
  Eigen::MatrixXd behavior_probs;  // heads x N
  Eigen::VectorXd rewards;
  Eigen::VectorXd returns;

  static PpoBatch from(std::span<const Experience> buffer, double gamma);
  Eigen::Index size() const { return rewards.size(); }
};

/// One-step TD advantages r + gamma V(o') - V(o).
Eigen::VectorXd td_advantages(const nn::Mlp& critic, const PpoBatch& batch,
                              double gamma);

struct LossTerms {
  double actor = 0.0;    // -J, clipped surrogate
  double critic = 0.0;   // mean 0.5 (V - R)^2
  double entropy = 0.0;  // mean over samples of entropy summed over heads
  double total = 0.0;    // actor + critic - beta * entropy
  double mean_abs_ratio_dev = 0.0;
  int clipped = 0;
  int ratio_overflow = 0;
};

struct LossGradients {
  LossTerms terms;
  nn::Gradients actor;
  nn::Gradients critic;
};

/// Total PPO loss and its exact gradients for both networks, with the
/// advantages held fixed.
LossGradients ppo_loss(const nn::Mlp& actor, const nn::Mlp& critic,
                       const HeadLayout& layout, const PpoBatch& batch,
                       const Eigen::VectorXd& advantages,
                       const PpoHyper& hyper);

struct UpdateDiagnostics {
  LossTerms first;
  LossTerms last;
  double mean_abs_ratio_dev = 0.0;  // averaged over epochs
  long rejected_steps = 0;
  long ratio_overflow = 0;
};

/// Actor on the AP's local observation, critic on the global observation.
class PpoInstance {
 public:
  PpoInstance(int ap, int local_size, int global_size, HeadLayout layout,
              const PpoHyper& hyper, std::mt19937_64& init_rng);
  PpoInstance(int ap, nn::Mlp actor, nn::Mlp critic, HeadLayout layout,
              const PpoHyper& hyper);

  ActResult act(std::span<const double> local_obs, std::mt19937_64& rng,
                bool greedy = false) const;
  Eigen::VectorXd head_probabilities(std::span<const double> local_obs) const;
  double value(std::span<const double> global_obs) const;

  /// Q epochs of full-batch updates over the buffer.
  UpdateDiagnostics update(std::span<const Experience> buffer);

  int ap() const { return ap_; }
  const HeadLayout& layout() const { return layout_; }
  const nn::Mlp& actor() const { return actor_; }
  const nn::Mlp& critic() const { return critic_; }
  nn::Mlp& actor() { return actor_; }
  nn::Mlp& critic() { return critic_; }

 private:
  int ap_;
  HeadLayout layout_;
  PpoHyper hyper_;
  nn::Mlp actor_;
  nn::Mlp critic_;
  nn::Adam actor_opt_;
  nn::Adam critic_opt_;
};

struct TrainConfig {
  int episodes = 300;
  int episode_length = 1000;
  int buffer_size = 256;
  std::uint64_t seed = 1;
  ObservationMode ablation = ObservationMode::Delayed;
  PpoHyper ppo;
  int checkpoint_interval = 0;  // episodes; 0 disables
  std::string checkpoint_dir;
};

struct EpisodeMetrics {
  int episode = 0;
  double mean_reward = 0.0;            // mean MDP reward per frame
  std::vector<double> mean_ap_reward;  // mean game reward per AP
  double aoi_sum = 0.0;                // sum_u of time-averaged AoI
  double energy_sum = 0.0;             // sum_{k>=1} of time-averaged energy
  long interference = 0;               // colliding cells over the episode
  double objective = 0.0;              // f over the episode
  double ratio_dev = 0.0;              // mean |ratio - 1| over updates
  std::vector<double> mean_aoi;        // per user
  std::vector<double> mean_energy;     // per AP
};

/// Time averages of one episode's frame records.
EpisodeMetrics summarize_frames(std::span<const FrameStats> stats,
                                const RewardWeights& weights, int episode);

/// Trained actors (and critics) for every AP plus what is needed to check a
/// checkpoint against a topology.
struct PolicyBundle {
  std::vector<nn::Mlp> actors;
  std::vector<nn::Mlp> critics;
  std::vector<HeadLayout> layouts;
  ObservationMode mode = ObservationMode::Delayed;
  int episodes_trained = 0;
  std::uint64_t seed = 0;

  void save(const std::string& dir) const;
  static PolicyBundle load(const std::string& dir);
};

std::string_view to_string(ObservationMode mode);
ObservationMode parse_observation_mode(std::string_view text);

class MappoTrainer {
 public:
  MappoTrainer(std::shared_ptr<const Topology> topology, EnergyTable energy,
               EnvConfig env_config, TrainConfig config);

  /// One episode of rollouts with an update every time the buffers fill
  /// (and once more on the remainder at the end of the episode).
  EpisodeMetrics run_episode();

  using EpisodeCallback = std::function<void(const EpisodeMetrics&)>;
  std::vector<EpisodeMetrics> train(const EpisodeCallback& on_episode = {});

  PolicyBundle bundle() const;
  const std::vector<PpoInstance>& instances() const { return instances_; }
  std::vector<PpoInstance>& instances() { return instances_; }
  Environment& env() { return env_; }
  int episodes_done() const { return episode_; }

  /// Fills every buffer with n frames from the current policy without
  /// updating; exposed for tests. Frame statistics are appended to `stats`
  /// when given.
  std::vector<std::vector<Experience>> collect(
      int frames, std::vector<FrameStats>* stats = nullptr);

 private:
  void update_all(std::vector<std::vector<Experience>>& buffers,
                  EpisodeMetrics& metrics, int& updates);

  Environment env_;
  TrainConfig config_;
  std::vector<PpoInstance> instances_;
  std::mt19937_64 rng_;
  int episode_ = 0;
  int diverged_streak_ = 0;
};

/// Greedy actor-only rollouts of a trained bundle; episode e resets the
/// environment with seed + e.
std::vector<EpisodeMetrics> evaluate(const PolicyBundle& bundle,
                                     std::shared_ptr<const Topology> topology,
                                     const EnergyTable& energy, EnvConfig env_config,
                                     int episodes, int episode_length,
                                     std::uint64_t seed = 0,
                                     std::vector<FrameStats>* frames = nullptr);

}  // namespace saguin
