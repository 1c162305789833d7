#include "sushi/observation.hpp"

#include "sushi/error.hpp"

namespace sushi {

using nlohmann::json;

int PlayerView::opponent(int j) const {
  const int p = players();
  const int sign = config().pass == PassDirection::kLeft ? 1 : -1;
  return ((seat_ + sign * j) % p + p) % p;
}

std::optional<int> FeatureLayout::slot_of(std::string_view card) const {
  for (int i = 0; i < n(); ++i) {
    if (universe[i] == card) return i;
  }
  return std::nullopt;
}

std::string FeatureLayout::feature_name(int i) const {
  if (i < 0 || i >= input_dim()) return "feature[" + std::to_string(i) + "]";
  if (i < own_board_offset()) return "own_hand[" + universe[i] + "]";
  if (i < opponent_board_offset(1)) {
    return "own_board[" + universe[i - own_board_offset()] + "]";
  }
  if (i < round_offset()) {
    const int rel = i - opponent_board_offset(1);
    return "opp" + std::to_string(rel / n() + 1) + "_board[" + universe[rel % n()] + "]";
  }
  if (i < turn_offset()) return "round==" + std::to_string(i - round_offset());
  if (i < memory_offset()) return "turn==" + std::to_string(i - turn_offset());
  const int rel = i - memory_offset();
  const int j = rel / (1 + n()) + 1;
  const int k = rel % (1 + n());
  if (k == 0) return "mem" + std::to_string(j) + "_known";
  return "mem" + std::to_string(j) + "[" + universe[k - 1] + "]";
}

std::vector<int> FeatureLayout::slots_for(const Menu& menu) const {
  std::vector<int> slots;
  std::string missing;
  for (const auto& k : menu.kinds) {
    const auto s = slot_of(k.name);
    if (!s) {
      missing += (missing.empty() ? "" : ", ") + k.name;
      slots.push_back(-1);
    } else {
      slots.push_back(*s);
    }
  }
  if (!missing.empty()) {
    std::string have;
    for (const auto& u : universe) have += (have.empty() ? "" : ", ") + u;
    throw RemapError("menu '" + menu.name + "' has cards outside the feature layout: " +
                     missing + " (layout universe: " + have + ")");
  }
  return slots;
}

void FeatureLayout::check_compatible(const GameConfig& c) const {
  if (c.players != players || c.hand_size != hand_size || c.rounds != rounds) {
    throw RemapError("feature layout expects " + std::to_string(players) +
                     " players, hand size " + std::to_string(hand_size) + ", " +
                     std::to_string(rounds) + " rounds; game has " +
                     std::to_string(c.players) + ", " + std::to_string(c.hand_size) +
                     ", " + std::to_string(c.rounds));
  }
  slots_for(c.menu);
}

FeatureLayout FeatureLayout::for_game(const GameConfig& c, bool memory,
                                      std::vector<std::string> universe) {
  FeatureLayout l;
  l.universe = universe.empty() ? c.menu.names() : std::move(universe);
  l.players = c.players;
  l.hand_size = c.hand_size;
  l.rounds = c.rounds;
  l.memory = memory;
  l.check_compatible(c);
  return l;
}

json FeatureLayout::to_json() const {
  return json{{"format", "sushidraft.features"},
              {"version", 1},
              {"universe", universe},
              {"players", players},
              {"hand_size", hand_size},
              {"rounds", rounds},
              {"memory", memory},
              {"input_dim", input_dim()},
              {"blocks",
               json::array({json{{"name", "own_hand"}, {"offset", own_hand_offset()}, {"size", n()}},
                            json{{"name", "own_board"}, {"offset", own_board_offset()}, {"size", n()}},
                            json{{"name", "opponent_boards"},
                                 {"offset", opponent_board_offset(1)},
                                 {"size", opponents() * n()}},
                            json{{"name", "round_onehot"}, {"offset", round_offset()}, {"size", rounds}},
                            json{{"name", "turn_onehot"}, {"offset", turn_offset()}, {"size", hand_size}},
                            json{{"name", "memory"},
                                 {"offset", memory_offset()},
                                 {"size", memory ? opponents() * (1 + n()) : 0}}})}};
}

FeatureLayout FeatureLayout::from_json(const json& j) {
  FeatureLayout l;
  try {
    l.universe = j.at("universe").get<std::vector<std::string>>();
    l.players = j.at("players").get<int>();
    l.hand_size = j.at("hand_size").get<int>();
    l.rounds = j.at("rounds").get<int>();
    l.memory = j.at("memory").get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("feature layout: ") + e.what());
  }
  if (j.contains("input_dim") && j.at("input_dim").get<int>() != l.input_dim()) {
    throw ConfigError("feature layout: input_dim does not match its blocks");
  }
  return l;
}

ObservationEncoder::ObservationEncoder(FeatureLayout layout, const Menu& menu)
    : layout_(std::move(layout)), slots_(layout_.slots_for(menu)) {
  kind_of_slot_.assign(static_cast<size_t>(layout_.n()), -1);
  for (int k = 0; k < menu.size(); ++k) kind_of_slot_[slots_[k]] = k;
}

std::optional<KindId> ObservationEncoder::kind_at(int slot) const {
  if (slot < 0 || slot >= layout_.n() || kind_of_slot_[slot] < 0) return std::nullopt;
  return kind_of_slot_[slot];
}

Observation ObservationEncoder::observe(const PlayerView& view) const {
  const int n = layout_.n();
  const int p = view.players();
  if (p != layout_.players) throw RemapError("player count differs from the feature layout");
  const auto to_slots = [&](const Hand& h) {
    Hand out(n);
    for (int k = 0; k < h.kinds(); ++k) out[slots_[k]] += h[k];
    return out;
  };
  Observation obs;
  obs.own_hand = to_slots(view.hand());
  obs.own_board = to_slots(view.board(view.seat()).counts);
  for (int j = 1; j < p; ++j) {
    obs.opponent_boards.push_back(to_slots(view.board(view.opponent(j)).counts));
  }
  obs.round = view.round();
  obs.turn = view.turn();
  if (layout_.memory) {
    for (int j = 1; j < p; ++j) {
      MemorySlot m;
      const auto known = view.sleuth(view.opponent(j));
      m.known = known.has_value();
      m.counts = known ? to_slots(*known) : Hand(n);
      obs.memory.push_back(std::move(m));
    }
  }
  obs.legal_mask.assign(static_cast<size_t>(n), false);
  obs.menu_mask.assign(static_cast<size_t>(n), false);
  for (int k = 0; k < static_cast<int>(slots_.size()); ++k) {
    obs.menu_mask[slots_[k]] = true;
    obs.legal_mask[slots_[k]] = view.hand()[k] > 0;
  }
  return obs;
}

void ObservationEncoder::write_features(const Observation& obs, std::span<double> out) const {
  const auto& l = layout_;
  if (static_cast<int>(out.size()) != l.input_dim()) {
    throw ShapeError("feature buffer has " + std::to_string(out.size()) +
                     " entries, layout needs " + std::to_string(l.input_dim()));
  }
  std::fill(out.begin(), out.end(), 0.0);
  const int n = l.n();
  for (int k = 0; k < n; ++k) {
    out[l.own_hand_offset() + k] = obs.own_hand[k];
    out[l.own_board_offset() + k] = obs.own_board[k];
  }
  for (int j = 1; j <= l.opponents(); ++j) {
    for (int k = 0; k < n; ++k) {
      out[l.opponent_board_offset(j) + k] = obs.opponent_boards[j - 1][k];
    }
  }
  if (obs.round >= 0 && obs.round < l.rounds) out[l.round_offset() + obs.round] = 1.0;
  if (obs.turn >= 0 && obs.turn < l.hand_size) out[l.turn_offset() + obs.turn] = 1.0;
  if (l.memory) {
    for (int j = 1; j <= l.opponents(); ++j) {
      const auto& m = obs.memory[j - 1];
      const int off = l.memory_slot_offset(j);
      out[off] = m.known ? 1.0 : 0.0;
      for (int k = 0; k < n; ++k) out[off + 1 + k] = m.counts[k];
    }
  }
}

std::vector<double> ObservationEncoder::features(const Observation& obs) const {
  std::vector<double> out(static_cast<size_t>(layout_.input_dim()));
  write_features(obs, out);
  return out;
}

std::vector<double> ObservationEncoder::encode(const PlayerView& view) const {
  return features(observe(view));
}

std::vector<double> encode(const GameState& state, int seat, const FeatureLayout& layout) {
  return ObservationEncoder(layout, state.menu()).encode(PlayerView(state, seat));
}

Observation perturb_memory(const Observation& obs, Rng& rng) {
  if (obs.memory.empty()) throw PerturbationError("memory is not enabled");
  const auto& upstream = obs.memory[0];
  if (!upstream.known) throw PerturbationError("upstream hand is not known");
  const int m = upstream.counts.size();
  if (m == 0) throw PerturbationError("upstream hand is empty");
  std::vector<int> targets;
  for (int k = 0; k < static_cast<int>(obs.menu_mask.size()); ++k) {
    if (obs.menu_mask[k]) targets.push_back(k);
  }
  if (targets.size() < 2) throw PerturbationError("menu has a single kind");

  // Uniform over (remembered copy, replacement kind) pairs.
  int pick = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(m)));
  int source = 0;
  while (pick >= upstream.counts[source]) pick -= upstream.counts[source++];
  std::vector<int> others;
  for (int t : targets) {
    if (t != source) others.push_back(t);
  }
  const int target = others[uniform_below(rng, others.size())];

  Observation out = obs;
  --out.memory[0].counts[source];
  ++out.memory[0].counts[target];
  return out;
}

}  // namespace sushi
