#include "saguin/mappo.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "saguin/errors.hpp"

namespace saguin {

namespace {

constexpr double kMaxLogRatio = 20.0;

Eigen::VectorXd to_vector(std::span<const double> values) {
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

}  // namespace

std::string_view to_string(ObservationMode mode) {
  switch (mode) {
    case ObservationMode::Delayed:
      return "delayed";
    case ObservationMode::Instant:
      return "instant";
    case ObservationMode::NoAoi:
      return "no-aoi";
  }
  return "?";
}

ObservationMode parse_observation_mode(std::string_view text) {
  if (text == "delayed") return ObservationMode::Delayed;
  if (text == "instant") return ObservationMode::Instant;
  if (text == "no-aoi") return ObservationMode::NoAoi;
  throw ConfigError("unknown ablation '" + std::string(text) + "'");
}

AssignmentRow apply_redundancy_mask(const AssignmentRow& row) {
  AssignmentRow out = row;
  for (size_t p = 0; p < out.size(); ++p) {
    if (out[p] == 0) continue;
    for (size_t q = 0; q < p; ++q)
      if (out[q] == out[p]) {
        out[p] = 0;
        break;
      }
  }
  return out;
}

ActResult sample_action(const Eigen::VectorXd& head_probs,
                        const HeadLayout& layout, std::mt19937_64& rng,
                        bool greedy) {
  const int W = layout.width();
  const int P = layout.channels;
  if (head_probs.size() != static_cast<Eigen::Index>(W) * P)
    throw std::invalid_argument("head probability size mismatch");
  if (!head_probs.allFinite())
    throw std::runtime_error("non-finite action probabilities");
  ActResult out;
  AssignmentRow row(static_cast<size_t>(P), 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int h = 0; h < P; ++h) {
    const auto probs = head_probs.segment(static_cast<Eigen::Index>(h) * W, W);
    int choice = 0;
    if (greedy) {
      for (int i = 1; i < W; ++i)
        if (probs(i) > probs(choice)) choice = i;
    } else {
      const double draw = unit(rng);
      double acc = 0.0;
      choice = W - 1;
      for (int i = 0; i < W; ++i) {
        acc += probs(i);
        if (draw < acc) {
          choice = i;
          break;
        }
      }
    }
    out.options.push_back(choice);
    out.probs.push_back(probs(choice));
    row[static_cast<size_t>(h)] = layout.option_to_target(choice);
  }
  out.executed = apply_redundancy_mask(row);
  return out;
}

std::vector<double> discounted_returns(std::span<const double> rewards,
                                       double gamma) {
  if (rewards.empty()) throw std::invalid_argument("empty buffer");
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (size_t i = rewards.size(); i-- > 0;) {
    acc = rewards[i] + gamma * acc;
    out[i] = acc;
  }
  return out;
}

PpoBatch PpoBatch::from(std::span<const Experience> buffer, double gamma) {
  if (buffer.empty()) throw std::invalid_argument("empty buffer");
  const auto n = static_cast<Eigen::Index>(buffer.size());
  const auto local = static_cast<Eigen::Index>(buffer.front().local_obs.size());
  const auto global = static_cast<Eigen::Index>(buffer.front().global_obs.size());
  const auto heads = static_cast<Eigen::Index>(buffer.front().options.size());
  PpoBatch batch;
  batch.local.resize(local, n);
  batch.global.resize(global, n);
  batch.next_global.resize(global, n);
  batch.behavior_probs.resize(heads, n);
  batch.rewards.resize(n);
  std::vector<double> rewards;
  rewards.reserve(buffer.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Experience& e = buffer[static_cast<size_t>(i)];
    batch.local.col(i) = to_vector(e.local_obs);
    batch.global.col(i) = to_vector(e.global_obs);
    batch.next_global.col(i) = to_vector(e.next_global_obs);
    batch.behavior_probs.col(i) = to_vector(e.behavior_probs);
    batch.options.push_back(e.options);
    batch.rewards(i) = e.reward;
    rewards.push_back(e.reward);
  }
  batch.returns = to_vector(discounted_returns(rewards, gamma));

  std::vector<Eigen::Index> extra;
  batch.next_index.resize(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i + 1 < n && batch.next_global.col(i) == batch.global.col(i + 1)) {
      batch.next_index[static_cast<size_t>(i)] = i + 1;
    } else {
      batch.next_index[static_cast<size_t>(i)] = n + static_cast<Eigen::Index>(extra.size());
      extra.push_back(i);
    }
  }
  batch.states.resize(global, n + static_cast<Eigen::Index>(extra.size()));
  batch.states.leftCols(n) = batch.global;
  for (size_t j = 0; j < extra.size(); ++j)
    batch.states.col(n + static_cast<Eigen::Index>(j)) = batch.next_global.col(extra[j]);
  return batch;
}

namespace {

struct CriticPass {
  nn::ForwardCache cache;
  Eigen::RowVectorXd values;  // over batch.states
};

CriticPass critic_pass(const nn::Mlp& critic, const PpoBatch& batch) {
  CriticPass cp;
  cp.values = critic.forward(batch.states, &cp.cache).row(0);
  return cp;
}

Eigen::VectorXd advantages_from(const CriticPass& cp, const PpoBatch& batch,
                                double gamma) {
  const Eigen::Index n = batch.size();
  Eigen::VectorXd adv(n);
  for (Eigen::Index i = 0; i < n; ++i)
    adv(i) = batch.rewards(i) +
             gamma * cp.values(batch.next_index[static_cast<size_t>(i)]) - cp.values(i);
  return adv;
}

LossGradients ppo_loss_with(const nn::Mlp& actor, const nn::Mlp& critic,
                            const HeadLayout& layout, const PpoBatch& batch,
                            const Eigen::VectorXd& advantages,
                            const PpoHyper& hyper, const CriticPass& cp);

void standardize(Eigen::VectorXd& a) {
  const double mean = a.mean();
  a.array() -= mean;
  const double sd = std::sqrt(a.squaredNorm() / static_cast<double>(a.size()));
  if (sd > 1e-8) a /= sd;
}

}  // namespace

Eigen::VectorXd td_advantages(const nn::Mlp& critic, const PpoBatch& batch,
                              double gamma) {
  return advantages_from(critic_pass(critic, batch), batch, gamma);
}

LossGradients ppo_loss(const nn::Mlp& actor, const nn::Mlp& critic,
                       const HeadLayout& layout, const PpoBatch& batch,
                       const Eigen::VectorXd& advantages,
                       const PpoHyper& hyper) {
  return ppo_loss_with(actor, critic, layout, batch, advantages, hyper,
                       critic_pass(critic, batch));
}

namespace {

LossGradients ppo_loss_with(const nn::Mlp& actor, const nn::Mlp& critic,
                            const HeadLayout& layout, const PpoBatch& batch,
                            const Eigen::VectorXd& advantages,
                            const PpoHyper& hyper, const CriticPass& cp) {
  const Eigen::Index n = batch.size();
  const int W = layout.width();
  const int P = layout.channels;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double beta = hyper.entropy_beta;

  LossGradients out;
  nn::ForwardCache actor_cache;
  const Eigen::MatrixXd logits = actor.forward(batch.local, &actor_cache);
  Eigen::MatrixXd d_logits(logits.rows(), n);
  Eigen::VectorXd logp(W);

  for (Eigen::Index i = 0; i < n; ++i) {
    double log_ratio = 0.0;
    double entropy = 0.0;
    for (int h = 0; h < P; ++h) {
      const auto z = logits.col(i).segment(static_cast<Eigen::Index>(h) * W, W);
      const double peak = z.maxCoeff();
      const double lse = peak + std::log((z.array() - peak).exp().sum());
      logp = z.array() - lse;
      const int a = batch.options[static_cast<size_t>(i)][static_cast<size_t>(h)];
      log_ratio += logp(a) - std::log(batch.behavior_probs(h, i));
      const Eigen::VectorXd pi = logp.array().exp();
      const double head_entropy = -(pi.array() * logp.array()).sum();
      entropy += head_entropy;
      // d(-beta * H)/dz_i = beta * pi_i * (log pi_i + H)
      d_logits.col(i).segment(static_cast<Eigen::Index>(h) * W, W) =
          beta * inv_n * (pi.array() * (logp.array() + head_entropy)).matrix();
    }
    bool overflow = false;
    if (std::abs(log_ratio) > kMaxLogRatio) {
      log_ratio = std::clamp(log_ratio, -kMaxLogRatio, kMaxLogRatio);
      overflow = true;
      ++out.terms.ratio_overflow;
    }
    const double ratio = std::exp(log_ratio);
    const double adv = advantages(i);
    const double clipped = std::clamp(ratio, 1.0 - hyper.clip, 1.0 + hyper.clip);
    const double unclipped_term = ratio * adv;
    const double clipped_term = clipped * adv;
    const bool take_unclipped = unclipped_term <= clipped_term;
    if (!take_unclipped) ++out.terms.clipped;
    out.terms.actor -= std::min(unclipped_term, clipped_term) * inv_n;
    out.terms.entropy += entropy * inv_n;
    out.terms.mean_abs_ratio_dev += std::abs(ratio - 1.0) * inv_n;

    if (take_unclipped && !overflow) {
      // d(-ratio * A / n)/dz = -(A / n) * ratio * (onehot(a) - pi)
      const double coef = -adv * ratio * inv_n;
      for (int h = 0; h < P; ++h) {
        const auto z = logits.col(i).segment(static_cast<Eigen::Index>(h) * W, W);
        const double peak = z.maxCoeff();
        Eigen::VectorXd pi = (z.array() - peak).exp();
        pi /= pi.sum();
        const int a = batch.options[static_cast<size_t>(i)][static_cast<size_t>(h)];
        auto seg = d_logits.col(i).segment(static_cast<Eigen::Index>(h) * W, W);
        seg -= coef * pi;
        seg(a) += coef;
      }
    }
  }
  out.actor = actor.backward(actor_cache, d_logits);

  Eigen::MatrixXd d_values = Eigen::MatrixXd::Zero(1, cp.values.size());
  const Eigen::RowVectorXd err = cp.values.head(n) - batch.returns.transpose();
  out.terms.critic = 0.5 * err.squaredNorm() * inv_n;
  d_values.leftCols(n) = err * inv_n;
  out.critic = critic.backward(cp.cache, d_values);

  out.terms.total = out.terms.actor + out.terms.critic - beta * out.terms.entropy;
  return out;
}

}  // namespace

PpoInstance::PpoInstance(int ap, int local_size, int global_size,
                         HeadLayout layout, const PpoHyper& hyper,
                         std::mt19937_64& init_rng)
    : ap_(ap), layout_(std::move(layout)), hyper_(hyper) {
  const int out = layout_.width() * layout_.channels;
  actor_ = nn::Mlp::orthogonal({std::max(local_size, 1), hyper.hidden, hyper.hidden, out},
                               hyper.hidden_gain, hyper.policy_output_gain, init_rng);
  critic_ = nn::Mlp::orthogonal({std::max(global_size, 1), hyper.hidden, hyper.hidden, 1},
                                hyper.hidden_gain, hyper.value_output_gain, init_rng);
  nn::AdamConfig opt{.learning_rate = hyper.learning_rate};
  actor_opt_ = nn::Adam(actor_, opt);
  critic_opt_ = nn::Adam(critic_, opt);
}

PpoInstance::PpoInstance(int ap, nn::Mlp actor, nn::Mlp critic,
                         HeadLayout layout, const PpoHyper& hyper)
    : ap_(ap),
      layout_(std::move(layout)),
      hyper_(hyper),
      actor_(std::move(actor)),
      critic_(std::move(critic)) {
  nn::AdamConfig opt{.learning_rate = hyper.learning_rate};
  actor_opt_ = nn::Adam(actor_, opt);
  critic_opt_ = nn::Adam(critic_, opt);
}

Eigen::VectorXd PpoInstance::head_probabilities(
    std::span<const double> local_obs) const {
  Eigen::VectorXd x = local_obs.empty() ? Eigen::VectorXd::Zero(1)
                                        : to_vector(local_obs);
  const Eigen::MatrixXd logits = actor_.forward(Eigen::MatrixXd(x));
  return nn::softmax_heads(logits, layout_.width()).col(0);
}

ActResult PpoInstance::act(std::span<const double> local_obs,
                           std::mt19937_64& rng, bool greedy) const {
  return sample_action(head_probabilities(local_obs), layout_, rng, greedy);
}

double PpoInstance::value(std::span<const double> global_obs) const {
  return critic_.forward(Eigen::MatrixXd(to_vector(global_obs)))(0, 0);
}

UpdateDiagnostics PpoInstance::update(std::span<const Experience> buffer) {
  const PpoBatch batch = PpoBatch::from(buffer, hyper_.gamma);
  UpdateDiagnostics diag;
  for (int epoch = 0; epoch < hyper_.epochs; ++epoch) {
    const CriticPass cp = critic_pass(critic_, batch);
    Eigen::VectorXd adv = advantages_from(cp, batch, hyper_.gamma);
    if (hyper_.normalize_advantages) standardize(adv);
    const LossGradients lg = ppo_loss_with(actor_, critic_, layout_, batch, adv, hyper_, cp);
    if (epoch == 0) diag.first = lg.terms;
    diag.last = lg.terms;
    diag.mean_abs_ratio_dev += lg.terms.mean_abs_ratio_dev / hyper_.epochs;
    diag.ratio_overflow += lg.terms.ratio_overflow;
    if (!actor_opt_.step(actor_, lg.actor)) ++diag.rejected_steps;
    if (!critic_opt_.step(critic_, lg.critic)) ++diag.rejected_steps;
  }
  return diag;
}

void PolicyBundle::save(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json meta;
  meta["format_version"] = 1;
  meta["mode"] = std::string(to_string(mode));
  meta["episodes_trained"] = episodes_trained;
  meta["seed"] = seed;
  meta["aps"] = nlohmann::json::array();
  for (size_t k = 0; k < actors.size(); ++k) {
    const std::string actor_file = "actor_" + std::to_string(k) + ".bin";
    const std::string critic_file = "critic_" + std::to_string(k) + ".bin";
    nn::save_mlp_file((fs::path(dir) / actor_file).string(), actors[k]);
    if (k < critics.size())
      nn::save_mlp_file((fs::path(dir) / critic_file).string(), critics[k]);
    meta["aps"].push_back({{"ap", k},
                           {"channels", layouts[k].channels},
                           {"users", layouts[k].users},
                           {"actor", actor_file},
                           {"actor_sizes", actors[k].sizes()},
                           {"critic", k < critics.size() ? critic_file : ""}});
  }
  std::ofstream os(fs::path(dir) / "meta.json");
  os << meta.dump(2) << '\n';
  if (!os) throw std::runtime_error("cannot write checkpoint metadata in " + dir);
}

PolicyBundle PolicyBundle::load(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream is(fs::path(dir) / "meta.json");
  if (!is) throw std::runtime_error("no checkpoint metadata in " + dir);
  const nlohmann::json meta = nlohmann::json::parse(is);
  if (meta.at("format_version").get<int>() != 1)
    throw std::runtime_error("unsupported checkpoint format");
  PolicyBundle bundle;
  bundle.mode = parse_observation_mode(meta.at("mode").get<std::string>());
  bundle.episodes_trained = meta.at("episodes_trained").get<int>();
  bundle.seed = meta.at("seed").get<std::uint64_t>();
  for (const auto& entry : meta.at("aps")) {
    HeadLayout layout;
    layout.channels = entry.at("channels").get<int>();
    layout.users = entry.at("users").get<std::vector<int>>();
    bundle.layouts.push_back(layout);
    bundle.actors.push_back(
        nn::load_mlp_file((fs::path(dir) / entry.at("actor").get<std::string>()).string()));
    const std::string critic = entry.value("critic", "");
    if (!critic.empty())
      bundle.critics.push_back(nn::load_mlp_file((fs::path(dir) / critic).string()));
  }
  return bundle;
}

MappoTrainer::MappoTrainer(std::shared_ptr<const Topology> topology,
                           EnergyTable energy, EnvConfig env_config,
                           TrainConfig config)
    : env_(std::move(topology), std::move(energy),
           [&] {
             env_config.mode = config.ablation;
             return env_config;
           }()),
      config_(std::move(config)),
      rng_(config_.seed) {
  if (config_.buffer_size < 1 || config_.buffer_size > config_.episode_length)
    throw ConfigError("buffer size must lie in [1, episode length]");
  if (config_.episodes < 0) throw ConfigError("episode count must be >= 0");
  const Topology& topo = env_.topology();
  const int global = env_.global_observation_size();
  for (int k = 0; k < topo.num_aps(); ++k) {
    HeadLayout layout{topo.channels(), topo.covered_users(k)};
    instances_.emplace_back(k, env_.observation_size(k), global, layout,
                            config_.ppo, rng_);
  }
}

std::vector<std::vector<Experience>> MappoTrainer::collect(
    int frames, std::vector<FrameStats>* stats) {
  const int K = static_cast<int>(instances_.size());
  std::vector<std::vector<Experience>> buffers(static_cast<size_t>(K));
  std::vector<std::vector<double>> locals(static_cast<size_t>(K));
  std::vector<double> global;
  auto refresh = [&] {
    global.clear();
    for (int k = 0; k < K; ++k) {
      locals[static_cast<size_t>(k)] = env_.observe(k).flat();
      global.insert(global.end(), locals[static_cast<size_t>(k)].begin(),
                    locals[static_cast<size_t>(k)].end());
    }
  };
  refresh();
  for (int t = 0; t < frames; ++t) {
    JointAssignment joint(static_cast<size_t>(K));
    std::vector<ActResult> acts;
    for (int k = 0; k < K; ++k) {
      acts.push_back(instances_[static_cast<size_t>(k)].act(locals[static_cast<size_t>(k)], rng_));
      joint[static_cast<size_t>(k)] = acts.back().executed;
    }
    const StepOutcome outcome = env_.step(joint);
    if (stats) stats->push_back(outcome.stats);
    std::vector<std::vector<double>> prev_locals = locals;
    std::vector<double> prev_global = global;
    refresh();
    for (int k = 0; k < K; ++k) {
      Experience e;
      e.global_obs = prev_global;
      e.next_global_obs = global;
      e.local_obs = std::move(prev_locals[static_cast<size_t>(k)]);
      e.options = acts[static_cast<size_t>(k)].options;
      e.executed = acts[static_cast<size_t>(k)].executed;
      e.reward = outcome.stats.ap_rewards[static_cast<size_t>(k)];
      e.behavior_probs = acts[static_cast<size_t>(k)].probs;
      buffers[static_cast<size_t>(k)].push_back(std::move(e));
    }
  }
  return buffers;
}

void MappoTrainer::update_all(std::vector<std::vector<Experience>>& buffers,
                              EpisodeMetrics& metrics, int& updates) {
  double dev = 0.0;
  for (size_t k = 0; k < instances_.size(); ++k) {
    const UpdateDiagnostics diag = instances_[k].update(buffers[k]);
    dev += diag.mean_abs_ratio_dev / static_cast<double>(instances_.size());
    buffers[k].clear();
  }
  metrics.ratio_dev += dev;
  ++updates;
  if (dev > 10.0) {
    if (++diverged_streak_ >= 3)
      throw DivergenceError("mean |ratio - 1| above 10 for 3 consecutive updates");
  } else {
    diverged_streak_ = 0;
  }
}

EpisodeMetrics summarize_frames(std::span<const FrameStats> stats,
                                const RewardWeights& weights, int episode) {
  if (stats.empty()) throw std::invalid_argument("no frames to summarize");
  const double T = static_cast<double>(stats.size());
  EpisodeMetrics m;
  m.episode = episode;
  m.mean_ap_reward.assign(stats.front().ap_rewards.size(), 0.0);
  m.mean_energy.assign(stats.front().ap_energy.size(), 0.0);
  m.mean_aoi.assign(stats.front().aoi.size(), 0.0);
  for (const FrameStats& s : stats) {
    m.mean_reward += s.reward;
    m.interference += s.interference;
    for (size_t k = 0; k < s.ap_rewards.size(); ++k) {
      m.mean_ap_reward[k] += s.ap_rewards[k];
      m.mean_energy[k] += s.ap_energy[k];
    }
    for (size_t u = 0; u < s.aoi.size(); ++u) m.mean_aoi[u] += static_cast<double>(s.aoi[u]);
  }
  m.mean_reward /= T;
  for (double& r : m.mean_ap_reward) r /= T;
  for (double& e : m.mean_energy) e /= T;
  for (double& a : m.mean_aoi) {
    a /= T;
    m.aoi_sum += a;
  }
  for (size_t k = 1; k < m.mean_energy.size(); ++k) m.energy_sum += m.mean_energy[k];
  m.objective = weights.aoi * m.aoi_sum + weights.energy * m.energy_sum;
  return m;
}

EpisodeMetrics MappoTrainer::run_episode() {
  const int T = config_.episode_length;
  const RewardWeights& w = env_.config().weights;
  env_.reset(config_.seed + static_cast<std::uint64_t>(episode_));

  EpisodeMetrics metrics;
  std::vector<FrameStats> stats;
  stats.reserve(static_cast<size_t>(T));
  int updates = 0;

  // Buffers are emptied by every update, so filling them in chunks of N_B
  // (the last one shorter) is the same as flushing at the episode end.
  for (int done = 0; done < T;) {
    const int chunk = std::min(config_.buffer_size, T - done);
    auto buffers = collect(chunk, &stats);
    done += chunk;
    update_all(buffers, metrics, updates);
  }
  const double ratio_dev = metrics.ratio_dev;
  metrics = summarize_frames(stats, w, episode_ + 1);
  metrics.ratio_dev = ratio_dev;
  if (updates > 0) metrics.ratio_dev /= updates;
  ++episode_;
  return metrics;
}

std::vector<EpisodeMetrics> MappoTrainer::train(const EpisodeCallback& on_episode) {
  std::vector<EpisodeMetrics> out;
  for (int e = 0; e < config_.episodes; ++e) {
    out.push_back(run_episode());
    if (on_episode) on_episode(out.back());
    if (config_.checkpoint_interval > 0 && !config_.checkpoint_dir.empty() &&
        (e + 1) % config_.checkpoint_interval == 0) {
      bundle().save(config_.checkpoint_dir + "/episode_" + std::to_string(e + 1));
    }
  }
  return out;
}

PolicyBundle MappoTrainer::bundle() const {
  PolicyBundle b;
  for (const PpoInstance& inst : instances_) {
    b.actors.push_back(inst.actor());
    b.critics.push_back(inst.critic());
    b.layouts.push_back(inst.layout());
  }
  b.mode = config_.ablation;
  b.episodes_trained = episode_;
  b.seed = config_.seed;
  return b;
}

std::vector<EpisodeMetrics> evaluate(const PolicyBundle& bundle,
                                     std::shared_ptr<const Topology> topology,
                                     const EnergyTable& energy, EnvConfig env_config,
                                     int episodes, int episode_length, std::uint64_t seed,
                                     std::vector<FrameStats>* frames) {
  if (episodes < 1 || episode_length < 1)
    throw std::invalid_argument("evaluation needs episodes and frames");
  env_config.mode = bundle.mode;
  Environment env(topology, energy, env_config);
  const Topology& topo = *topology;
  const int K = topo.num_aps();
  if (static_cast<int>(bundle.actors.size()) != K ||
      static_cast<int>(bundle.layouts.size()) != K)
    throw ConfigError("checkpoint has " + std::to_string(bundle.actors.size()) +
                      " actors, topology has " + std::to_string(K) + " APs");
  std::vector<PpoInstance> actors;
  for (int k = 0; k < K; ++k) {
    const HeadLayout& layout = bundle.layouts[static_cast<size_t>(k)];
    const nn::Mlp& actor = bundle.actors[static_cast<size_t>(k)];
    if (layout.channels != topo.channels() || layout.users != topo.covered_users(k) ||
        actor.input_size() != std::max(env.observation_size(k), 1) ||
        actor.output_size() != layout.width() * layout.channels)
      throw ConfigError("checkpoint does not match topology at AP " + std::to_string(k));
    actors.emplace_back(k, actor, nn::Mlp({1, 1}), layout, PpoHyper{});
  }

  std::vector<EpisodeMetrics> out;
  std::vector<FrameStats> stats;
  std::mt19937_64 unused(seed);
  for (int e = 0; e < episodes; ++e) {
    env.reset(seed + static_cast<std::uint64_t>(e));
    stats.clear();
    for (int t = 0; t < episode_length; ++t) {
      JointAssignment joint(static_cast<size_t>(K));
      for (int k = 0; k < K; ++k)
        joint[static_cast<size_t>(k)] =
            actors[static_cast<size_t>(k)].act(env.observe(k).flat(), unused, true).executed;
      stats.push_back(env.step(joint).stats);
    }
    if (frames) frames->insert(frames->end(), stats.begin(), stats.end());
    out.push_back(summarize_frames(stats, env_config.weights, e + 1));
  }
  return out;
}

}  // namespace saguin
