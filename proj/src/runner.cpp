#include "sushi/runner.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "sushi/error.hpp"

namespace sushi {

using nlohmann::json;

namespace {

json hand_json(const Hand& h, const Menu& menu) {
  json out = json::object();
  for (int k = 0; k < h.kinds(); ++k) {
    if (h[k] > 0) out[menu[k].name] = h[k];
  }
  return out;
}

}  // namespace

double game_reward(const FinalResult& result, int seat) {
  return result.scores[seat] + (result.is_winner(seat) ? kWinBonus : 0);
}

GameRecord run_game(const std::shared_ptr<const GameConfig>& config,
                    std::span<const Agent* const> seats, std::uint64_t seed,
                    const RunOptions& options) {
  const int p = config->players;
  if (static_cast<int>(seats.size()) != p) {
    throw ConfigError("run_game: " + std::to_string(seats.size()) + " agents for " +
                      std::to_string(p) + " seats");
  }
  GameState s = new_game(config, seed);
  const Menu& menu = s.menu();
  std::vector<Rng> rngs;
  for (int i = 0; i < p; ++i) rngs.emplace_back(derive_seed(seed, 1, static_cast<std::uint64_t>(i)));

  GameRecord rec;
  const int g = options.game_index;
  if (options.log) {
    json names = json::array();
    for (const Agent* a : seats) names.push_back(a->name());
    rec.events.push_back({{"event", "game_start"},
                          {"game", g},
                          {"seed", seed},
                          {"players", p},
                          {"hand_size", config->hand_size},
                          {"rounds", config->rounds},
                          {"pass", config->pass == PassDirection::kLeft ? "left" : "right"},
                          {"menu", menu.to_json()},
                          {"agents", names}});
  }

  std::vector<KindId> actions(static_cast<size_t>(p));
  while (!s.finished) {
    for (int seat = 0; seat < p; ++seat) {
      const auto legal = legal_actions(s, seat);
      const KindId a = seats[seat]->act(PlayerView(s, seat), legal, rngs[seat]);
      if (s.hands[seat][a] <= 0) {
        throw ActionError(seat, "agent '" + seats[seat]->name() + "' chose '" +
                                    menu[a].name + "', which is not in hand");
      }
      actions[seat] = a;
    }
    if (options.log) {
      for (int seat = 0; seat < p; ++seat) {
        rec.events.push_back({{"event", "pick"},
                              {"game", g},
                              {"round", s.round},
                              {"turn", s.turn},
                              {"seat", seat},
                              {"card", menu[actions[seat]].name},
                              {"hand", hand_json(s.hands[seat], menu)}});
      }
    }
    const int round = s.round;
    apply_step(s, actions);
    if (options.log && (s.round != round || s.finished)) {
      rec.events.push_back({{"event", "round_end"},
                            {"game", g},
                            {"round", round},
                            {"deltas", s.last_round_deltas},
                            {"scores", s.scores}});
    }
  }
  rec.result = finalize(s);
  if (options.log) {
    json desserts = json::array();
    for (const auto& d : s.desserts) desserts.push_back(hand_json(d, menu));
    rec.events.push_back({{"event", "game_end"},
                          {"game", g},
                          {"final_scores", rec.result.scores},
                          {"dessert_points", rec.result.dessert_points},
                          {"desserts", desserts},
                          {"winners", rec.result.winners}});
  }
  return rec;
}

void write_events(std::ostream& out, std::span<const json> events) {
  for (const auto& e : events) out << e.dump() << '\n';
}

std::vector<json> read_events(std::istream& in) {
  std::vector<json> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw InputError("game log line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sushi
