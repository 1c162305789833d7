#include "sushi/game.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "sushi/error.hpp"
#include "sushi/scoring.hpp"

namespace sushi {

using nlohmann::json;

namespace {

bool is_nigiri(const CardKind& k) {
  return k.category == Category::kNigiri && k.has_rule<rule::Face>();
}

int pass_sign(PassDirection d) { return d == PassDirection::kLeft ? 1 : -1; }

void deal_round(GameState& s) {
  const GameConfig& cfg = *s.config;
  const Menu& menu = cfg.menu;
  const int n = menu.size();

  // Inject this round's desserts, cycling over the dessert kinds.
  int inject = s.round < static_cast<int>(cfg.deck.dessert_schedule.size())
                   ? cfg.deck.dessert_schedule[s.round]
                   : 0;
  while (inject > 0) {
    bool any = false;
    for (int k = 0; k < n && inject > 0; ++k) {
      if (menu[k].is_dessert() && s.dessert_reserve[k] > 0) {
        --s.dessert_reserve[k];
        ++s.dessert_pile[k];
        --inject;
        any = true;
      }
    }
    if (!any) break;
  }

  std::vector<KindId> deck;
  for (int k = 0; k < n; ++k) {
    const int copies = menu[k].is_dessert() ? s.dessert_pile[k] : cfg.deck.copies[k];
    deck.insert(deck.end(), static_cast<size_t>(copies), k);
  }
  const int players = cfg.players;
  if (static_cast<int>(deck.size()) < players * cfg.hand_size) {
    throw ConfigError("round " + std::to_string(s.round + 1) + " deck has " +
                      std::to_string(deck.size()) + " cards, " +
                      std::to_string(players * cfg.hand_size) + " needed");
  }
  shuffle(deck.begin(), deck.end(), s.rng);

  for (int p = 0; p < players; ++p) {
    Hand h(n);
    for (int i = 0; i < cfg.hand_size; ++i) {
      const KindId k = deck[static_cast<size_t>(p * cfg.hand_size + i)];
      ++h[k];
      if (menu[k].is_dessert()) --s.dessert_pile[k];
    }
    s.hands[p] = std::move(h);
    s.boards[p] = Board(n);
  }
  s.turn = 0;
  s.tracker.begin_round(s.hands);
}

}  // namespace

void Board::play(int turn, KindId kind, const Menu& menu) {
  const int index = static_cast<int>(play_order.size());
  ++counts[kind];
  play_order.push_back({turn, kind});
  if (!is_nigiri(menu[kind])) return;
  for (int i = 0; i < index; ++i) {
    if (!menu[play_order[i].kind].has_rule<rule::Wasabi>()) continue;
    const bool paired =
        std::any_of(wasabi_pairings.begin(), wasabi_pairings.end(),
                    [i](const auto& p) { return p.first == i; });
    if (!paired) {
      wasabi_pairings.emplace_back(i, index);
      return;
    }
  }
}

bool Board::voided(int play_index) const {
  return std::find(miso_voided.begin(), miso_voided.end(), play_index) !=
         miso_voided.end();
}

void resolve_collisions(std::vector<Board>& boards, int turn, const Menu& menu) {
  for (const auto& kind : menu.kinds) {
    if (!kind.has_rule<rule::EachCollision>()) continue;
    std::vector<std::pair<int, int>> plays;  // (seat, play index)
    for (int s = 0; s < static_cast<int>(boards.size()); ++s) {
      const auto& order = boards[s].play_order;
      for (int i = 0; i < static_cast<int>(order.size()); ++i) {
        if (order[i].turn == turn && order[i].kind == kind.id) {
          plays.emplace_back(s, i);
        }
      }
    }
    if (plays.size() < 2) continue;
    for (const auto& [s, i] : plays) {
      if (!boards[s].voided(i)) boards[s].miso_voided.push_back(i);
    }
  }
}

void GameConfig::validate() const {
  validate_menu(menu, enforce_menu_structure);
  if (players < 2 || players > 8) {
    throw ConfigError("players must be in [2, 8], got " +
                      std::to_string(players));
  }
  if (hand_size < 1) throw ConfigError("hand_size must be >= 1");
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (static_cast<int>(deck.copies.size()) != menu.size()) {
    throw ConfigError("deck lists " + std::to_string(deck.copies.size()) +
                      " copy counts for a menu of " +
                      std::to_string(menu.size()) + " kinds");
  }
  for (int k = 0; k < menu.size(); ++k) {
    if (deck.copies[k] < 0) {
      throw ConfigError("negative copy count for '" + menu[k].name + "'");
    }
  }
  int scheduled = 0;
  for (int r = 0; r < static_cast<int>(deck.dessert_schedule.size()); ++r) {
    if (deck.dessert_schedule[r] < 0) {
      throw ConfigError("negative dessert schedule entry");
    }
    if (r < rounds) scheduled += deck.dessert_schedule[r];
  }
  if (scheduled > deck.dessert_total(menu)) {
    throw ConfigError("dessert schedule injects " + std::to_string(scheduled) +
                      " desserts but the deck holds " +
                      std::to_string(deck.dessert_total(menu)));
  }
  // Played cards return to the deck between rounds; desserts from earlier
  // rounds may all have been dealt, so only this round's injection counts.
  const int needed = players * hand_size;
  for (int r = 0; r < rounds; ++r) {
    const int injected =
        r < static_cast<int>(deck.dessert_schedule.size()) ? deck.dessert_schedule[r] : 0;
    const int available = deck.non_dessert_total(menu) + injected;
    if (available < needed) {
      throw ConfigError("deck too small: round " + std::to_string(r + 1) +
                        " may have only " + std::to_string(available) +
                        " cards but " + std::to_string(players) + " x " +
                        std::to_string(hand_size) + " = " +
                        std::to_string(needed) + " are needed");
    }
  }
}

json GameConfig::to_json() const {
  return json{{"menu", menu.to_json()},
              {"copies", deck.copies},
              {"dessert_schedule", deck.dessert_schedule},
              {"players", players},
              {"hand_size", hand_size},
              {"rounds", rounds},
              {"pass", pass == PassDirection::kLeft ? "left" : "right"},
              {"seed", seed},
              {"enforce_menu_structure", enforce_menu_structure}};
}

namespace {

void read_common(GameConfig& c, const json& j) {
  try {
    c.players = j.value("players", 4);
    c.hand_size = j.value("hand_size", 9);
    c.rounds = j.value("rounds", 3);
    c.seed = j.value("seed", std::uint64_t{0});
    c.enforce_menu_structure = j.value("enforce_menu_structure", true);
    const auto pass = j.value("pass", std::string("left"));
    if (pass == "left") {
      c.pass = PassDirection::kLeft;
    } else if (pass == "right") {
      c.pass = PassDirection::kRight;
    } else {
      throw ConfigError("pass must be 'left' or 'right'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("game config: ") + e.what());
  }
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path.string() + "': " + e.what());
  }
}

}  // namespace

GameConfig GameConfig::from_json(const json& j) {
  GameConfig c;
  try {
    c.menu = Menu::from_json(j.at("menu"));
    c.deck.copies = j.at("copies").get<std::vector<int>>();
    c.deck.dessert_schedule = j.at("dessert_schedule").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("game config: ") + e.what());
  }
  read_common(c, j);
  return c;
}

GameConfig GameConfig::from_file_json(const json& j,
                                      const std::filesystem::path& base_dir) {
  // Self-contained form, as written into checkpoints.
  if (j.contains("menu") && j.at("menu").is_object() &&
      j.at("menu").contains("kinds") && !j.at("menu").at("kinds").empty() &&
      j.at("menu").at("kinds")[0].is_object()) {
    return from_json(j);
  }
  if (!j.contains("catalog")) throw ConfigError("game config: missing 'catalog'");
  Catalog catalog;
  if (j.at("catalog").is_string()) {
    catalog = Catalog::load(base_dir / j.at("catalog").get<std::string>());
  } else {
    catalog = Catalog::from_json(j.at("catalog"));
  }
  if (!j.contains("menu")) throw ConfigError("game config: missing 'menu'");
  const auto& mj = j.at("menu");
  GameConfig c;
  if (mj.is_string()) {
    c.menu = Menu::load(catalog, base_dir / mj.get<std::string>());
  } else if (mj.is_array()) {
    c.menu = Menu::from_names(catalog, "custom", mj.get<std::vector<std::string>>());
  } else if (mj.is_object()) {
    c.menu = Menu::from_names(catalog, mj.value("name", std::string("custom")),
                              mj.at("kinds").get<std::vector<std::string>>());
  } else {
    throw ConfigError("game config: 'menu' must be a path, list, or object");
  }
  c.deck = DeckSpec::defaults(c.menu, catalog);
  if (j.contains("copies")) {
    for (const auto& [name, count] : j.at("copies").items()) {
      c.deck.copies[c.menu.id_of(name)] = count.get<int>();
    }
  }
  if (j.contains("dessert_schedule")) {
    c.deck.dessert_schedule = j.at("dessert_schedule").get<std::vector<int>>();
  }
  read_common(c, j);
  return c;
}

GameConfig GameConfig::load(const std::filesystem::path& path) {
  const auto j = read_file(path);
  try {
    return from_file_json(j, path.parent_path());
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.find(path.string()) != std::string::npos) throw;
    throw ConfigError("'" + path.string() + "': " + msg);
  }
}

GameConfig GameConfig::with_menu(const Menu& m) const {
  GameConfig c = *this;
  c.menu = m;
  c.deck.copies.clear();
  for (const auto& k : m.kinds) c.deck.copies.push_back(k.default_copies);
  return c;
}

bool GameState::operator==(const GameState& o) const {
  const bool same_config =
      config == o.config ||
      (config && o.config && config->to_json() == o.config->to_json());
  return same_config && hands == o.hands && boards == o.boards &&
         round == o.round && turn == o.turn && scores == o.scores &&
         last_round_deltas == o.last_round_deltas && desserts == o.desserts &&
         dessert_pile == o.dessert_pile &&
         dessert_reserve == o.dessert_reserve && rng == o.rng &&
         tracker == o.tracker && finished == o.finished;
}

GameState new_game(std::shared_ptr<const GameConfig> config) {
  const auto seed = config->seed;
  return new_game(std::move(config), seed);
}

GameState new_game(std::shared_ptr<const GameConfig> config, std::uint64_t seed) {
  config->validate();
  GameState s;
  s.config = std::move(config);
  const auto& cfg = *s.config;
  const int n = cfg.menu.size();
  const int p = cfg.players;
  s.hands.assign(p, Hand(n));
  s.boards.assign(p, Board(n));
  s.scores.assign(p, 0);
  s.last_round_deltas.assign(p, 0);
  s.desserts.assign(p, Hand(n));
  s.dessert_pile.assign(n, 0);
  s.dessert_reserve.assign(n, 0);
  for (int k = 0; k < n; ++k) {
    if (cfg.menu[k].is_dessert()) s.dessert_reserve[k] = cfg.deck.copies[k];
  }
  s.rng.seed(seed);
  s.tracker = MemoryTracker(p, n, pass_sign(cfg.pass));
  deal_round(s);
  return s;
}

GameState new_game(const GameConfig& config) {
  return new_game(std::make_shared<const GameConfig>(config));
}

std::vector<KindId> legal_actions(const GameState& state, int seat) {
  if (state.finished) throw StateError("game is finished");
  if (seat < 0 || seat >= state.players()) {
    throw StateError("no seat " + std::to_string(seat));
  }
  const auto& hand = state.hands[seat];
  if (hand.empty()) throw StateError("hand is empty; the round must be dealt");
  return hand.present();
}

void apply_step(GameState& s, std::span<const KindId> actions) {
  if (s.finished) throw StateError("game is finished");
  const int p = s.players();
  if (static_cast<int>(actions.size()) != p) {
    throw StateError("expected " + std::to_string(p) + " actions, got " +
                     std::to_string(actions.size()));
  }
  const Menu& menu = s.menu();
  for (int seat = 0; seat < p; ++seat) {
    const KindId a = actions[seat];
    if (a < 0 || a >= menu.size()) {
      throw ActionError(seat, "card index " + std::to_string(a) + " out of range");
    }
    if (s.hands[seat][a] <= 0) {
      throw ActionError(seat, "'" + menu[a].name + "' is not in hand");
    }
  }
  for (int seat = 0; seat < p; ++seat) {
    const KindId a = actions[seat];
    --s.hands[seat][a];
    s.boards[seat].play(s.turn, a, menu);
    s.tracker.reveal(s.turn, seat, a);
  }
  resolve_collisions(s.boards, s.turn, menu);

  std::vector<Hand> rotated(static_cast<size_t>(p));
  const int sign = pass_sign(s.config->pass);
  for (int seat = 0; seat < p; ++seat) {
    rotated[seat] = std::move(s.hands[((seat + sign) % p + p) % p]);
  }
  s.hands = std::move(rotated);
  ++s.turn;

  if (!s.hands[0].empty()) {
    for (int seat = 0; seat < p; ++seat) {
      s.tracker.observe(s.turn, seat, s.hands[seat]);
    }
    return;
  }
  score_round(s);
  ++s.round;
  if (s.round >= s.config->rounds) {
    s.finished = true;
    return;
  }
  deal_round(s);
}

GameState step(GameState state, std::span<const KindId> actions) {
  apply_step(state, actions);
  return state;
}

std::vector<int> score_round(GameState& s) {
  for (const auto& h : s.hands) {
    if (!h.empty()) throw StateError("round is not over: hands are not empty");
  }
  if (s.turn == 0) throw StateError("round has no plays to score");
  const Menu& menu = s.menu();
  const int p = s.players();
  std::vector<int> deltas(static_cast<size_t>(p));
  for (int seat = 0; seat < p; ++seat) {
    deltas[seat] = score_board(s.boards, seat, menu);
  }
  for (int seat = 0; seat < p; ++seat) {
    s.scores[seat] += deltas[seat];
    for (int k = 0; k < menu.size(); ++k) {
      if (menu[k].is_dessert()) s.desserts[seat][k] += s.boards[seat].counts[k];
    }
  }
  s.last_round_deltas = deltas;
  // Marks the round as scored; the boards stay visible until the next deal.
  s.turn = 0;
  return deltas;
}

bool FinalResult::is_winner(int seat) const {
  return std::find(winners.begin(), winners.end(), seat) != winners.end();
}

FinalResult finalize(const GameState& s) {
  if (!s.finished) throw StateError("game is not finished");
  FinalResult r;
  r.dessert_points = score_desserts(s.desserts, s.menu());
  const int p = s.players();
  r.scores.resize(static_cast<size_t>(p));
  for (int seat = 0; seat < p; ++seat) {
    r.scores[seat] = s.scores[seat] + r.dessert_points[seat];
  }
  const int best = *std::max_element(r.scores.begin(), r.scores.end());
  int best_desserts = -1;
  for (int seat = 0; seat < p; ++seat) {
    if (r.scores[seat] == best) {
      best_desserts = std::max(best_desserts, s.dessert_count(seat));
    }
  }
  for (int seat = 0; seat < p; ++seat) {
    if (r.scores[seat] == best && s.dessert_count(seat) == best_desserts) {
      r.winners.push_back(seat);
    }
  }
  return r;
}

std::vector<Menu> config_path(const Menu& a, const Menu& b) {
  if (a.size() != b.size()) {
    throw ConfigError("config_path: menus '" + a.name + "' and '" + b.name +
                      "' have different sizes (" + std::to_string(a.size()) +
                      " vs " + std::to_string(b.size()) + ")");
  }
  std::set<std::string> in_a;
  std::set<std::string> in_b;
  for (const auto& k : a.kinds) in_a.insert(k.name);
  for (const auto& k : b.kinds) in_b.insert(k.name);
  std::vector<CardKind> removed;
  std::vector<CardKind> added;
  for (const auto& k : a.kinds) {
    if (!in_b.count(k.name)) removed.push_back(k);
  }
  for (const auto& k : b.kinds) {
    if (!in_a.count(k.name)) added.push_back(k);
  }
  const auto by_gid = [](const CardKind& x, const CardKind& y) {
    return x.global_id < y.global_id;
  };
  std::sort(removed.begin(), removed.end(), by_gid);
  std::sort(added.begin(), added.end(), by_gid);

  std::vector<Menu> path{a};
  Menu current = a;
  for (size_t i = 0; i < removed.size(); ++i) {
    auto& ks = current.kinds;
    ks.erase(std::find_if(ks.begin(), ks.end(), [&](const CardKind& k) {
      return k.name == removed[i].name;
    }));
    ks.push_back(added[i]);
    std::sort(ks.begin(), ks.end(), by_gid);
    for (int id = 0; id < current.size(); ++id) ks[id].id = id;
    current.name = i + 1 == removed.size()
                       ? b.name
                       : a.name + "~" + b.name + "#" + std::to_string(i + 1);
    path.push_back(current);
  }
  return path;
}

}  // namespace sushi
