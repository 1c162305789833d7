#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sushi/agents.hpp"
#include "sushi/game.hpp"
#include "sushi/observation.hpp"
#include "sushi/qnetwork.hpp"

namespace sushi {

struct TrainConfig {
  double gamma = 0.99;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  // Linear decay length in environment steps; 0 means half of training.
  long epsilon_decay_steps = 0;
  int buffer_capacity = 100000;
  int batch_size = 64;
  double learning_rate = 1e-3;
  std::string optimizer = "sgd";  // "sgd" or "adam"
  double huber_delta = 1.0;
  int target_sync = 1000;  // gradient steps between target copies
  int train_every = 1;     // environment steps between gradient steps
  int warmup = 1000;       // transitions stored before the first update
  int epochs = 10;
  int games_per_epoch = 2000;
  std::vector<int> hidden = {128, 128, 128, 128};
  bool memory = false;
  // Card universe for the feature layout and output slots; empty means the
  // training menu.
  std::vector<std::string> universe;
  std::uint64_t seed = 0;

  void validate() const;
  long total_steps(const GameConfig& game) const;
  double epsilon_at(long step, const GameConfig& game) const;

  nlohmann::json to_json() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static TrainConfig from_json(const nlohmann::json& j);
  static TrainConfig load(const std::filesystem::path& path);
};

// One transition. Actions and masks are in universe slots.
struct ReplayEntry {
  std::vector<double> obs;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_obs;
  bool done = false;
  std::vector<bool> legal_mask_next;
};

// Fixed-capacity ring buffer with uniform sampling.
class ReplayBuffer {
 public:
  ReplayBuffer(int capacity, int obs_dim, int n_actions);

  void push(std::span<const double> obs, int action, double reward,
            std::span<const double> next_obs, bool done,
            const std::vector<bool>& legal_mask_next);
  void push(const ReplayEntry& e) {
    push(e.obs, e.action, e.reward, e.next_obs, e.done, e.legal_mask_next);
  }
  int size() const { return size_; }
  int capacity() const { return capacity_; }
  ReplayEntry at(int i) const;
  std::vector<int> sample_indices(int batch, Rng& rng) const;

 private:
  friend struct Batch;
  int capacity_, obs_dim_, n_actions_;
  int size_ = 0, next_ = 0;
  std::vector<float> obs_, next_obs_;
  std::vector<int> action_;
  std::vector<double> reward_;
  std::vector<char> done_;
  std::vector<char> mask_;
};

struct Batch {
  Eigen::MatrixXd obs;       // obs_dim x B
  Eigen::MatrixXd next_obs;  // obs_dim x B
  std::vector<int> actions;
  std::vector<double> rewards;
  std::vector<char> done;
  std::vector<std::vector<bool>> legal_next;

  static Batch from_entries(std::span<const ReplayEntry> entries);
  static Batch gather(const ReplayBuffer& buffer, std::span<const int> indices);
  // Same, reusing this batch's storage.
  void gather_into(const ReplayBuffer& buffer, std::span<const int> indices);
  int size() const { return static_cast<int>(actions.size()); }
};

// With probability epsilon a uniform legal action, else the legal argmax
// (lowest index on ties). StateError if nothing is legal.
int act_epsilon_greedy(std::span<const double> q, const std::vector<bool>& mask,
                       double epsilon, Rng& rng);
int masked_argmax(std::span<const double> q, const std::vector<bool>& mask);

double td_target(const ReplayEntry& entry, const QNetwork& target, double gamma);
std::vector<double> td_targets(const Batch& batch, const QNetwork& target, double gamma);

// One optimizer step on the mean Huber loss; returns the loss before the
// step. TrainingError if the loss is not finite.
double train_step(QNetwork& net, const QNetwork& target, const Batch& batch,
                  double gamma, double huber_delta, Optimizer& optimizer,
                  BackpropWorkspace* workspace = nullptr);

// Softmax of q over legal actions at the given temperature; illegal
// actions get 0.
std::vector<double> policy_distribution(std::span<const double> q,
                                        const std::vector<bool>& mask,
                                        double temperature);
std::vector<double> policy_distribution(const QNetwork& net,
                                        std::span<const double> features,
                                        const std::vector<bool>& mask,
                                        double temperature);

struct EpochStats {
  int epoch = 0;
  long games = 0;
  long env_steps = 0;
  long grad_steps = 0;
  double epsilon = 0.0;
  double mean_loss = 0.0;
  double mean_reward = 0.0;  // per seat per game, this epoch
  double mean_score = 0.0;
};

struct Checkpoint {
  QNetwork net;
  FeatureLayout layout;
  TrainConfig train;
  GameConfig game;
  int epoch = 0;
  std::optional<EpochStats> stats;

  nlohmann::json to_json() const;
  static Checkpoint from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);
};

// FNV-1a 64 of a file's bytes, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

// Greedy policy of a trained network. Works on any menu whose kinds are in
// the layout's universe and whose table shape matches.
class DqnAgent : public Agent {
 public:
  DqnAgent(std::shared_ptr<const QNetwork> net, FeatureLayout layout,
           std::string name = "dqn");
  explicit DqnAgent(const Checkpoint& c, std::string name = "dqn");

  std::string name() const override { return name_; }
  KindId act(const PlayerView& view, std::span<const KindId> legal,
             Rng& rng) const override;

  const QNetwork& net() const { return *net_; }
  const FeatureLayout& layout() const { return layout_; }

 private:
  std::shared_ptr<const QNetwork> net_;
  FeatureLayout layout_;
  std::string name_;
};

using EpochCallback = std::function<void(const Checkpoint&, const EpochStats&)>;

// One pick of one seat as seen by the learner. `result` is set on the
// final pick of a game.
struct TransitionEvent {
  int epoch = 0;
  int game = 0;
  int seat = 0;
  int action = 0;  // universe slot
  double reward = 0.0;
  bool done = false;
  const FinalResult* result = nullptr;
};
using TransitionCallback = std::function<void(const TransitionEvent&)>;

// Shared-parameter self-play: one network picks for every seat and every
// seat's transitions go into one replay buffer. A seat's reward is its
// round score delta on the pick that ends a round and 0 otherwise; the
// final pick adds dessert points plus the win bonus for each winner.
Checkpoint self_play_train(const TrainConfig& config, const GameConfig& game,
                           const EpochCallback& on_epoch = {},
                           const TransitionCallback& on_transition = {});

}  // namespace sushi
