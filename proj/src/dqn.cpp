#include "sushi/dqn.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sushi/error.hpp"
#include "sushi/runner.hpp"

namespace sushi {

using nlohmann::json;

// ---------------------------------------------------------------- config

void TrainConfig::validate() const {
  const auto fail = [](const std::string& m) { throw ConfigError("train config: " + m); };
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must be in (0, 1]");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0)) fail("epsilon_start must be in [0, 1]");
  if (!(epsilon_end >= 0.0 && epsilon_end <= 1.0)) fail("epsilon_end must be in [0, 1]");
  if (epsilon_decay_steps < 0) fail("epsilon_decay_steps must be >= 0");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (buffer_capacity < batch_size) fail("buffer_capacity must be >= batch_size");
  if (!(learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (optimizer != "sgd" && optimizer != "adam") fail("optimizer must be \"sgd\" or \"adam\"");
  if (!(huber_delta > 0.0)) fail("huber_delta must be > 0");
  if (target_sync < 1) fail("target_sync must be >= 1");
  if (train_every < 1) fail("train_every must be >= 1");
  if (warmup < 0) fail("warmup must be >= 0");
  if (epochs < 1) fail("epochs must be >= 1");
  if (games_per_epoch < 1) fail("games_per_epoch must be >= 1");
  if (hidden.empty()) fail("hidden must list at least one layer");
  for (int h : hidden) {
    if (h < 1) fail("hidden layer sizes must be >= 1");
  }
}

long TrainConfig::total_steps(const GameConfig& game) const {
  return static_cast<long>(epochs) * games_per_epoch * game.rounds * game.hand_size;
}

double TrainConfig::epsilon_at(long step, const GameConfig& game) const {
  const long decay = epsilon_decay_steps > 0 ? epsilon_decay_steps
                                             : std::max<long>(1, total_steps(game) / 2);
  const double frac = std::min(1.0, static_cast<double>(step) / static_cast<double>(decay));
  return epsilon_start + frac * (epsilon_end - epsilon_start);
}

json TrainConfig::to_json() const {
  return json{{"gamma", gamma},
              {"epsilon_start", epsilon_start},
              {"epsilon_end", epsilon_end},
              {"epsilon_decay_steps", epsilon_decay_steps},
              {"buffer_capacity", buffer_capacity},
              {"batch_size", batch_size},
              {"learning_rate", learning_rate},
              {"optimizer", optimizer},
              {"huber_delta", huber_delta},
              {"target_sync", target_sync},
              {"train_every", train_every},
              {"warmup", warmup},
              {"epochs", epochs},
              {"games_per_epoch", games_per_epoch},
              {"hidden", hidden},
              {"memory", memory},
              {"universe", universe},
              {"seed", seed}};
}

TrainConfig TrainConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("train config must be a JSON object");
  TrainConfig c;
  const json defaults = c.to_json();
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw ConfigError("train config: unknown key '" + key + "'");
  }
  const auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("train config: field '") + key + "': " + e.what());
    }
  };
  get("gamma", c.gamma);
  get("epsilon_start", c.epsilon_start);
  get("epsilon_end", c.epsilon_end);
  get("epsilon_decay_steps", c.epsilon_decay_steps);
  get("buffer_capacity", c.buffer_capacity);
  get("batch_size", c.batch_size);
  get("learning_rate", c.learning_rate);
  get("optimizer", c.optimizer);
  get("huber_delta", c.huber_delta);
  get("target_sync", c.target_sync);
  get("train_every", c.train_every);
  get("warmup", c.warmup);
  get("epochs", c.epochs);
  get("games_per_epoch", c.games_per_epoch);
  get("hidden", c.hidden);
  get("memory", c.memory);
  get("universe", c.universe);
  get("seed", c.seed);
  c.validate();
  return c;
}

TrainConfig TrainConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open train config " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- replay

ReplayBuffer::ReplayBuffer(int capacity, int obs_dim, int n_actions)
    : capacity_(capacity), obs_dim_(obs_dim), n_actions_(n_actions) {
  if (capacity < 1) throw ConfigError("replay buffer capacity must be >= 1");
  const auto c = static_cast<size_t>(capacity);
  obs_.resize(c * static_cast<size_t>(obs_dim));
  next_obs_.resize(c * static_cast<size_t>(obs_dim));
  action_.resize(c);
  reward_.resize(c);
  done_.resize(c);
  mask_.resize(c * static_cast<size_t>(n_actions));
}

void ReplayBuffer::push(std::span<const double> obs, int action, double reward,
                        std::span<const double> next_obs, bool done,
                        const std::vector<bool>& legal_mask_next) {
  if (static_cast<int>(obs.size()) != obs_dim_ || static_cast<int>(next_obs.size()) != obs_dim_ ||
      static_cast<int>(legal_mask_next.size()) != n_actions_) {
    throw ShapeError("replay entry does not match the buffer's shapes");
  }
  const auto i = static_cast<size_t>(next_);
  const auto d = static_cast<size_t>(obs_dim_);
  std::copy(obs.begin(), obs.end(), obs_.begin() + static_cast<long>(i * d));
  std::copy(next_obs.begin(), next_obs.end(), next_obs_.begin() + static_cast<long>(i * d));
  action_[i] = action;
  reward_[i] = reward;
  done_[i] = done ? 1 : 0;
  for (int k = 0; k < n_actions_; ++k) {
    mask_[i * static_cast<size_t>(n_actions_) + static_cast<size_t>(k)] = legal_mask_next[k] ? 1 : 0;
  }
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

ReplayEntry ReplayBuffer::at(int i) const {
  if (i < 0 || i >= size_) throw StateError("replay index out of range");
  const auto u = static_cast<size_t>(i);
  const auto d = static_cast<size_t>(obs_dim_);
  ReplayEntry e;
  e.obs.assign(obs_.begin() + static_cast<long>(u * d), obs_.begin() + static_cast<long>((u + 1) * d));
  e.next_obs.assign(next_obs_.begin() + static_cast<long>(u * d),
                    next_obs_.begin() + static_cast<long>((u + 1) * d));
  e.action = action_[u];
  e.reward = reward_[u];
  e.done = done_[u] != 0;
  for (int k = 0; k < n_actions_; ++k) {
    e.legal_mask_next.push_back(mask_[u * static_cast<size_t>(n_actions_) + static_cast<size_t>(k)] != 0);
  }
  return e;
}

std::vector<int> ReplayBuffer::sample_indices(int batch, Rng& rng) const {
  if (size_ == 0) throw StateError("cannot sample an empty replay buffer");
  std::vector<int> out(static_cast<size_t>(batch));
  for (auto& i : out) i = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(size_)));
  return out;
}

Batch Batch::from_entries(std::span<const ReplayEntry> entries) {
  if (entries.empty()) throw ShapeError("empty batch");
  const auto dim = static_cast<Eigen::Index>(entries[0].obs.size());
  const auto n = static_cast<Eigen::Index>(entries.size());
  Batch b;
  b.obs.resize(dim, n);
  b.next_obs.resize(dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& e = entries[static_cast<size_t>(i)];
    if (static_cast<Eigen::Index>(e.obs.size()) != dim ||
        static_cast<Eigen::Index>(e.next_obs.size()) != dim) {
      throw ShapeError("batch entries differ in observation length");
    }
    for (Eigen::Index r = 0; r < dim; ++r) {
      b.obs(r, i) = e.obs[static_cast<size_t>(r)];
      b.next_obs(r, i) = e.next_obs[static_cast<size_t>(r)];
    }
    b.actions.push_back(e.action);
    b.rewards.push_back(e.reward);
    b.done.push_back(e.done ? 1 : 0);
    b.legal_next.push_back(e.legal_mask_next);
  }
  return b;
}

Batch Batch::gather(const ReplayBuffer& buf, std::span<const int> indices) {
  Batch b;
  b.gather_into(buf, indices);
  return b;
}

void Batch::gather_into(const ReplayBuffer& buf, std::span<const int> indices) {
  const auto dim = static_cast<Eigen::Index>(buf.obs_dim_);
  const auto n = static_cast<Eigen::Index>(indices.size());
  const auto na = static_cast<size_t>(buf.n_actions_);
  obs.resize(dim, n);
  next_obs.resize(dim, n);
  actions.resize(static_cast<size_t>(n));
  rewards.resize(static_cast<size_t>(n));
  done.resize(static_cast<size_t>(n));
  legal_next.resize(static_cast<size_t>(n));
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto i = static_cast<size_t>(indices[static_cast<size_t>(c)]);
    const float* o = buf.obs_.data() + i * static_cast<size_t>(dim);
    const float* no = buf.next_obs_.data() + i * static_cast<size_t>(dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      obs(r, c) = o[r];
      next_obs(r, c) = no[r];
    }
    const auto u = static_cast<size_t>(c);
    actions[u] = buf.action_[i];
    rewards[u] = buf.reward_[i];
    done[u] = buf.done_[i];
    legal_next[u].resize(na);
    for (size_t k = 0; k < na; ++k) legal_next[u][k] = buf.mask_[i * na + k] != 0;
  }
}

// ---------------------------------------------------------------- acting

int masked_argmax(std::span<const double> q, const std::vector<bool>& mask) {
  if (q.size() != mask.size()) throw ShapeError("q-values and mask differ in length");
  int best = -1;
  for (int k = 0; k < static_cast<int>(q.size()); ++k) {
    if (mask[k] && (best < 0 || q[k] > q[best])) best = k;
  }
  if (best < 0) throw StateError("no legal action");
  return best;
}

int act_epsilon_greedy(std::span<const double> q, const std::vector<bool>& mask,
                       double epsilon, Rng& rng) {
  const int greedy = masked_argmax(q, mask);
  if (epsilon > 0.0 && uniform_unit(rng) < epsilon) {
    std::vector<int> legal;
    for (int k = 0; k < static_cast<int>(mask.size()); ++k) {
      if (mask[k]) legal.push_back(k);
    }
    return legal[uniform_below(rng, legal.size())];
  }
  return greedy;
}

double td_target(const ReplayEntry& e, const QNetwork& target, double gamma) {
  if (e.done) return e.reward;
  const Eigen::VectorXd q = target.forward(e.next_obs);
  return e.reward + gamma * q(masked_argmax(std::span<const double>(q.data(), q.size()), e.legal_mask_next));
}

std::vector<double> td_targets(const Batch& b, const QNetwork& target, double gamma) {
  const Eigen::MatrixXd q = target.forward_batch(b.next_obs);
  std::vector<double> y(static_cast<size_t>(b.size()));
  for (int i = 0; i < b.size(); ++i) {
    y[i] = b.rewards[i];
    if (b.done[i]) continue;
    const auto col = q.col(i);
    y[i] += gamma * col(masked_argmax(std::span<const double>(col.data(), col.size()), b.legal_next[i]));
  }
  return y;
}

double train_step(QNetwork& net, const QNetwork& target, const Batch& batch,
                  double gamma, double huber_delta, Optimizer& optimizer,
                  BackpropWorkspace* workspace) {
  if (batch.size() == 0) throw ShapeError("empty batch");
  const auto y = td_targets(batch, target, gamma);
  thread_local std::vector<DenseLayer> grads;
  const double loss = net.huber_loss(batch.obs, batch.actions, y, huber_delta, &grads, workspace);
  if (!std::isfinite(loss)) {
    double max_abs_target = 0.0;
    for (double v : y) max_abs_target = std::max(max_abs_target, std::abs(v));
    std::ostringstream msg;
    msg << "non-finite loss (" << loss << ") on a batch of " << batch.size()
        << "; largest |target| " << max_abs_target << ", learning rate " << optimizer.lr();
    throw TrainingError(msg.str());
  }
  optimizer.step(net, grads);
  return loss;
}

std::vector<double> policy_distribution(std::span<const double> q, const std::vector<bool>& mask,
                                        double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be > 0");
  const int best = masked_argmax(q, mask);
  std::vector<double> p(q.size(), 0.0);
  double total = 0.0;
  for (size_t k = 0; k < q.size(); ++k) {
    if (!mask[k]) continue;
    p[k] = std::exp((q[k] - q[static_cast<size_t>(best)]) / temperature);
    total += p[k];
  }
  for (auto& v : p) v /= total;
  return p;
}

std::vector<double> policy_distribution(const QNetwork& net, std::span<const double> features,
                                        const std::vector<bool>& mask, double temperature) {
  const Eigen::VectorXd q = net.forward(features);
  return policy_distribution(std::span<const double>(q.data(), q.size()), mask, temperature);
}

// ---------------------------------------------------------------- checkpoint

namespace {

json stats_json(const EpochStats& s) {
  return json{{"epoch", s.epoch},           {"games", s.games},
              {"env_steps", s.env_steps},   {"grad_steps", s.grad_steps},
              {"epsilon", s.epsilon},       {"mean_loss", s.mean_loss},
              {"mean_reward", s.mean_reward}, {"mean_score", s.mean_score}};
}

EpochStats stats_from_json(const json& j) {
  EpochStats s;
  s.epoch = j.at("epoch").get<int>();
  s.games = j.at("games").get<long>();
  s.env_steps = j.at("env_steps").get<long>();
  s.grad_steps = j.at("grad_steps").get<long>();
  s.epsilon = j.at("epsilon").get<double>();
  s.mean_loss = j.at("mean_loss").get<double>();
  s.mean_reward = j.at("mean_reward").get<double>();
  s.mean_score = j.at("mean_score").get<double>();
  return s;
}

}  // namespace

json Checkpoint::to_json() const {
  json j{{"format", "sushidraft.checkpoint"},
         {"version", 1},
         {"epoch", epoch},
         {"network", net.to_json()},
         {"feature_layout", layout.to_json()},
         {"train_config", train.to_json()},
         {"game_config", game.to_json()}};
  if (stats) j["stats"] = stats_json(*stats);
  return j;
}

Checkpoint Checkpoint::from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != "sushidraft.checkpoint") {
    throw ConfigError("not a checkpoint (format tag missing)");
  }
  if (j.value("version", 0) != 1) {
    throw ConfigError("unsupported checkpoint version " + j.at("version").dump());
  }
  Checkpoint c;
  try {
    c.epoch = j.at("epoch").get<int>();
    c.net = QNetwork::from_json(j.at("network"));
    c.layout = FeatureLayout::from_json(j.at("feature_layout"));
    c.train = TrainConfig::from_json(j.at("train_config"));
    c.game = GameConfig::from_json(j.at("game_config"));
    if (j.contains("stats")) c.stats = stats_from_json(j.at("stats"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("checkpoint: ") + e.what());
  }
  if (c.net.input_dim() != c.layout.input_dim() || c.net.output_dim() != c.layout.n()) {
    throw ShapeError("checkpoint network shape does not match its feature layout");
  }
  return c;
}

void Checkpoint::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out << to_json().dump() << '\n';
  if (!out) throw Error("failed writing checkpoint " + path.string());
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

// ---------------------------------------------------------------- agent

DqnAgent::DqnAgent(std::shared_ptr<const QNetwork> net, FeatureLayout layout, std::string name)
    : net_(std::move(net)), layout_(std::move(layout)), name_(std::move(name)) {
  if (net_->input_dim() != layout_.input_dim() || net_->output_dim() != layout_.n()) {
    throw ShapeError("network shape does not match the feature layout");
  }
}

DqnAgent::DqnAgent(const Checkpoint& c, std::string name)
    : DqnAgent(std::make_shared<const QNetwork>(c.net), c.layout, std::move(name)) {}

KindId DqnAgent::act(const PlayerView& view, std::span<const KindId>, Rng&) const {
  const ObservationEncoder enc(layout_, view.menu());
  const auto obs = enc.observe(view);
  const Eigen::VectorXd q = net_->forward(enc.features(obs));
  const int slot = masked_argmax(std::span<const double>(q.data(), q.size()), obs.legal_mask);
  return *enc.kind_at(slot);
}

// ---------------------------------------------------------------- training

Checkpoint self_play_train(const TrainConfig& config, const GameConfig& game,
                           const EpochCallback& on_epoch,
                           const TransitionCallback& on_transition) {
  config.validate();
  game.validate();
  const auto cfg = std::make_shared<const GameConfig>(game);
  const auto layout = FeatureLayout::for_game(game, config.memory, config.universe);
  const ObservationEncoder enc(layout, game.menu);
  const int p = game.players;
  const int dim = layout.input_dim();
  const int n_out = layout.n();

  Rng init_rng(derive_seed(config.seed, 0));
  Rng act_rng(derive_seed(config.seed, 1));
  Rng sample_rng(derive_seed(config.seed, 2));
  QNetwork net(QNetwork::default_sizes(dim, n_out, config.hidden), init_rng);
  QNetwork target = net;
  Optimizer opt(config.optimizer == "adam" ? Optimizer::Kind::kAdam : Optimizer::Kind::kSgd,
                config.learning_rate);
  ReplayBuffer buffer(config.buffer_capacity, dim, n_out);

  struct Pending {
    bool has = false;
    std::vector<double> obs;
    int action = 0;
    double reward = 0.0;
  };
  const std::vector<double> zeros(static_cast<size_t>(dim), 0.0);
  const std::vector<bool> no_actions(static_cast<size_t>(n_out), false);
  Eigen::MatrixXd xs(dim, p);
  std::vector<Observation> obs(static_cast<size_t>(p));
  std::vector<KindId> actions(static_cast<size_t>(p));
  std::vector<int> slots(static_cast<size_t>(p));
  long env_steps = 0;
  long grad_steps = 0;
  Batch batch;
  BackpropWorkspace ws;

  Checkpoint ckpt{net, layout, config, game, 0, std::nullopt};
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    double loss_sum = 0.0, reward_sum = 0.0, score_sum = 0.0;
    long losses = 0;
    for (int g = 0; g < config.games_per_epoch; ++g) {
      GameState s = new_game(cfg, derive_seed(config.seed, static_cast<std::uint64_t>(epoch),
                                              static_cast<std::uint64_t>(g)));
      std::vector<Pending> pending(static_cast<size_t>(p));
      while (!s.finished) {
        for (int seat = 0; seat < p; ++seat) {
          obs[seat] = enc.observe(PlayerView(s, seat));
          enc.write_features(obs[seat], std::span<double>(xs.col(seat).data(), static_cast<size_t>(dim)));
          auto& pd = pending[seat];
          if (pd.has) {
            buffer.push(pd.obs, pd.action, pd.reward,
                        std::span<const double>(xs.col(seat).data(), static_cast<size_t>(dim)), false,
                        obs[seat].legal_mask);
          }
        }
        const double eps = config.epsilon_at(env_steps, game);
        const Eigen::MatrixXd q = net.forward_batch(xs);
        for (int seat = 0; seat < p; ++seat) {
          const auto col = q.col(seat);
          slots[seat] = act_epsilon_greedy(std::span<const double>(col.data(), col.size()),
                                           obs[seat].legal_mask, eps, act_rng);
          actions[seat] = *enc.kind_at(slots[seat]);
        }
        const int round = s.round;
        apply_step(s, actions);
        const bool round_over = s.finished || s.round != round;
        std::optional<FinalResult> result;
        if (s.finished) result = finalize(s);
        for (int seat = 0; seat < p; ++seat) {
          double r = round_over ? s.last_round_deltas[seat] : 0.0;
          auto& pd = pending[seat];
          const std::span<const double> x(xs.col(seat).data(), static_cast<size_t>(dim));
          if (result) {
            r += result->dessert_points[seat] + (result->is_winner(seat) ? kWinBonus : 0);
            buffer.push(x, slots[seat], r, zeros, true, no_actions);
            pd.has = false;
          } else {
            pd.has = true;
            pd.obs.assign(x.begin(), x.end());
            pd.action = slots[seat];
            pd.reward = r;
          }
          if (on_transition) {
            on_transition({epoch, g, seat, slots[seat], r, result.has_value(),
                           result ? &*result : nullptr});
          }
        }
        if (result) {
          for (int seat = 0; seat < p; ++seat) {
            reward_sum += result->scores[seat] + (result->is_winner(seat) ? kWinBonus : 0);
            score_sum += result->scores[seat];
          }
        }
        ++env_steps;
        if (buffer.size() >= std::max(config.warmup, config.batch_size) &&
            env_steps % config.train_every == 0) {
          const auto idx = buffer.sample_indices(config.batch_size, sample_rng);
          batch.gather_into(buffer, idx);
          loss_sum += train_step(net, target, batch, config.gamma, config.huber_delta, opt, &ws);
          ++losses;
          ++grad_steps;
          if (grad_steps % config.target_sync == 0) target = net;
        }
      }
    }
    EpochStats st;
    st.epoch = epoch;
    st.games = static_cast<long>(epoch) * config.games_per_epoch;
    st.env_steps = env_steps;
    st.grad_steps = grad_steps;
    st.epsilon = config.epsilon_at(env_steps, game);
    st.mean_loss = losses > 0 ? loss_sum / static_cast<double>(losses) : 0.0;
    const double seat_games = static_cast<double>(config.games_per_epoch) * p;
    st.mean_reward = reward_sum / seat_games;
    st.mean_score = score_sum / seat_games;
    ckpt = Checkpoint{net, layout, config, game, epoch, st};
    if (on_epoch) on_epoch(ckpt, st);
  }
  return ckpt;
}

}  // namespace sushi
