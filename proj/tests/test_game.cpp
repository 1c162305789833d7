#include <algorithm>
#include <set>

#include "doctest.h"
#include "scoring_fixtures.hpp"
#include "sushi/error.hpp"
#include "sushi/game.hpp"
#include "sushi/scoring.hpp"

using namespace sushi;

namespace {

GameConfig mfm_config(std::uint64_t seed = 7) {
  auto c = GameConfig::load(std::string(SUSHI_CONFIG_DIR) + "/game_my_first_meal.json");
  c.seed = seed;
  return c;
}

int total_cards(const GameState& s) {
  int total = 0;
  for (const auto& h : s.hands) total += h.size();
  for (const auto& b : s.boards) total += b.counts.size();
  return total;
}

std::vector<KindId> random_actions(const GameState& s, Rng& rng) {
  std::vector<KindId> actions;
  for (int seat = 0; seat < s.players(); ++seat) {
    const auto legal = legal_actions(s, seat);
    actions.push_back(legal[uniform_below(rng, legal.size())]);
  }
  return actions;
}

}  // namespace

TEST_CASE("menus load in catalog order with contiguous ids") {
  const auto c = mfm_config();
  CHECK(c.menu.size() == 10);
  for (int i = 0; i < c.menu.size(); ++i) CHECK(c.menu[i].id == i);
  CHECK(c.menu[0].name == "Egg Nigiri");
  CHECK(c.menu.id_of("Green Tea Ice Cream") == 9);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("menu structure checks") {
  const auto catalog = fixtures::load_catalog();
  CHECK_THROWS_AS(Menu::from_names(catalog, "dup", {"Tempura", "Tempura"}), ConfigError);
  CHECK_THROWS_AS(Menu::from_names(catalog, "bad", {"Dumpling"}), ConfigError);
  const auto two_rolls = Menu::from_names(
      catalog, "two rolls", {"Maki", "Temaki", "Tempura", "Pudding"});
  CHECK_THROWS_AS(validate_menu(two_rolls, true), ConfigError);
  CHECK_NOTHROW(validate_menu(two_rolls, false));
}

TEST_CASE("new_game deals equal hands") {
  const auto s = new_game(mfm_config());
  REQUIRE(s.players() == 4);
  for (const auto& h : s.hands) CHECK(h.size() == 9);
  CHECK(s.round == 0);
  CHECK(s.turn == 0);
  CHECK(s.scores == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("new_game is deterministic under the seed") {
  CHECK(new_game(mfm_config(11)) == new_game(mfm_config(11)));
  CHECK_FALSE(new_game(mfm_config(11)).hands == new_game(mfm_config(12)).hands);
}

TEST_CASE("new_game rejects a deck that is too small") {
  auto c = mfm_config();
  // 20 non-dessert cards plus 5 round-1 desserts cannot fill 4 x 9 hands.
  std::fill(c.deck.copies.begin(), c.deck.copies.end(), 0);
  c.deck.copies[c.menu.id_of("Tempura")] = 20;
  c.deck.copies[c.menu.id_of("Green Tea Ice Cream")] = 15;
  CHECK_THROWS_AS(new_game(c), ConfigError);
}

TEST_CASE("config validation") {
  auto c = mfm_config();
  c.players = 9;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = mfm_config();
  c.players = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = mfm_config();
  c.deck.dessert_schedule = {20, 0, 0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("legal_actions lists nonzero kinds") {
  auto s = new_game(mfm_config());
  s.hands[0] = Hand(std::vector<int>{0, 2, 1, 0, 0, 0, 0, 0, 0, 0});
  CHECK(legal_actions(s, 0) == std::vector<KindId>{1, 2});
  s.hands[0] = Hand(std::vector<int>{0, 0, 0, 0, 1, 0, 0, 0, 0, 0});
  CHECK(legal_actions(s, 0) == std::vector<KindId>{4});
  s.hands[0] = Hand(10);
  CHECK_THROWS_AS(legal_actions(s, 0), StateError);
}

TEST_CASE("step moves picks to boards and rotates hands left") {
  Rng rng(3);
  auto s = new_game(mfm_config());
  const auto before = s;
  const auto actions = random_actions(s, rng);
  apply_step(s, actions);
  for (int seat = 0; seat < 4; ++seat) {
    CHECK(s.hands[seat].size() == 8);
    Hand expected = before.hands[(seat + 1) % 4];
    --expected[actions[(seat + 1) % 4]];
    CHECK(s.hands[seat] == expected);
    CHECK(s.boards[seat].counts[actions[seat]] == 1);
  }
  CHECK(s.turn == 1);
  CHECK(total_cards(s) == total_cards(before));
}

TEST_CASE("right passing rotates the other way") {
  auto c = mfm_config();
  c.pass = PassDirection::kRight;
  Rng rng(4);
  auto s = new_game(c);
  const auto before = s;
  const auto actions = random_actions(s, rng);
  apply_step(s, actions);
  for (int seat = 0; seat < 4; ++seat) {
    Hand expected = before.hands[(seat + 3) % 4];
    --expected[actions[(seat + 3) % 4]];
    CHECK(s.hands[seat] == expected);
  }
}

TEST_CASE("illegal action names the seat") {
  auto s = new_game(mfm_config());
  Rng rng(5);
  auto actions = random_actions(s, rng);
  const auto missing = std::find(s.hands[2].counts.begin(), s.hands[2].counts.end(), 0);
  REQUIRE(missing != s.hands[2].counts.end());
  actions[2] = static_cast<KindId>(missing - s.hands[2].counts.begin());
  try {
    apply_step(s, actions);
    FAIL("expected ActionError");
  } catch (const ActionError& e) {
    CHECK(e.seat() == 2);
  }
}

TEST_CASE("a full game takes 27 steps and finishes") {
  Rng rng(9);
  auto s = new_game(mfm_config());
  int steps = 0;
  while (!s.finished) {
    apply_step(s, random_actions(s, rng));
    ++steps;
  }
  CHECK(steps == 27);
  CHECK_THROWS_AS(legal_actions(s, 0), StateError);
  CHECK_THROWS_AS(apply_step(s, std::vector<KindId>{0, 0, 0, 0}), StateError);
  const auto result = finalize(s);
  CHECK_FALSE(result.winners.empty());
}

TEST_CASE("identical action sequences give identical trajectories") {
  Rng a(21);
  Rng b(21);
  auto s1 = new_game(mfm_config(5));
  auto s2 = new_game(mfm_config(5));
  while (!s1.finished) {
    apply_step(s1, random_actions(s1, a));
    apply_step(s2, random_actions(s2, b));
    CHECK(s1 == s2);
  }
}

TEST_CASE("hand-scored board fixtures") {
  const auto catalog = fixtures::load_catalog();
  const auto menu = fixtures::full_menu(catalog);
  for (const auto& f : fixtures::round_fixtures()) {
    CAPTURE(f.name);
    const auto boards = fixtures::build_boards(f, menu);
    for (size_t seat = 0; seat < boards.size(); ++seat) {
      CAPTURE(seat);
      CHECK(score_board(boards, static_cast<int>(seat), menu) == f.expected[seat]);
      // Pure: a second call agrees.
      CHECK(score_board(boards, static_cast<int>(seat), menu) == f.expected[seat]);
    }
  }
}

TEST_CASE("hand-scored dessert fixtures") {
  const auto catalog = fixtures::load_catalog();
  const auto menu = fixtures::full_menu(catalog);
  for (const auto& f : fixtures::dessert_fixtures()) {
    CAPTURE(f.name);
    std::vector<Hand> desserts(f.counts.size(), Hand(menu.size()));
    for (size_t s = 0; s < f.counts.size(); ++s) desserts[s][menu.id_of(f.kind)] = f.counts[s];
    CHECK(score_desserts(desserts, menu) == f.expected);
  }
}

TEST_CASE("score_round on a two-player toy round") {
  // Two players, three cards each, one round; hands are set by hand.
  const auto catalog = fixtures::load_catalog();
  GameConfig c;
  c.menu = Menu::from_names(catalog, "toy",
                            {"Squid Nigiri", "Maki", "Tempura", "Wasabi", "Pudding"});
  c.deck = DeckSpec::defaults(c.menu, catalog);
  c.deck.dessert_schedule = {0};
  c.players = 2;
  c.hand_size = 3;
  c.rounds = 1;
  auto s = new_game(c);
  const KindId squid = c.menu.id_of("Squid Nigiri");
  const KindId maki = c.menu.id_of("Maki");
  const KindId tempura = c.menu.id_of("Tempura");
  const KindId wasabi = c.menu.id_of("Wasabi");
  s.hands[0] = Hand(5);
  s.hands[1] = Hand(5);
  s.hands[0][wasabi] = 1;
  s.hands[0][tempura] = 1;
  s.hands[0][maki] = 1;
  s.hands[1][squid] = 1;
  s.hands[1][tempura] = 2;
  s.tracker.begin_round(s.hands);

  // Turn 0: seat0 Wasabi, seat1 Tempura.
  apply_step(s, std::vector<KindId>{wasabi, tempura});
  // Seat0 now holds {Squid, Tempura}; seat1 holds {Tempura, Maki}.
  apply_step(s, std::vector<KindId>{squid, tempura});
  // Seat0 holds {Maki}; seat1 holds {Tempura}.
  apply_step(s, std::vector<KindId>{maki, tempura});
  REQUIRE(s.finished);
  // Seat0: wasabi squid 9, maki uncontested 6 -> 15.
  // Seat1: three tempura -> one pair -> 5.
  CHECK(s.last_round_deltas == std::vector<int>{15, 5});
  CHECK(s.scores == std::vector<int>{15, 5});
}

TEST_CASE("score_round preconditions and symmetry") {
  auto s = new_game(mfm_config());
  CHECK_THROWS_AS(score_round(s), StateError);
  for (auto& h : s.hands) h = Hand(s.menu().size());
  s.turn = 9;
  CHECK(score_round(s) == std::vector<int>{0, 0, 0, 0});

  auto t = new_game(mfm_config());
  const auto& menu = t.menu();
  for (int seat = 0; seat < 4; ++seat) {
    t.hands[seat] = Hand(menu.size());
    t.boards[seat] = Board(menu.size());
    t.boards[seat].play(0, menu.id_of("Tempura"), menu);
    t.boards[seat].play(1, menu.id_of("Tempura"), menu);
    t.boards[seat].play(2, menu.id_of("Maki"), menu);
  }
  t.turn = 3;
  const auto deltas = score_round(t);
  CHECK(deltas == std::vector<int>(4, deltas[0]));
}

TEST_CASE("finalize picks the winner set") {
  Rng rng(1);
  auto s = new_game(mfm_config());
  CHECK_THROWS_AS(finalize(s), StateError);
  while (!s.finished) apply_step(s, random_actions(s, rng));
  for (auto& d : s.desserts) d = Hand(s.menu().size());

  s.scores = {10, 20, 15, 5};
  CHECK(finalize(s).winners == std::vector<int>{1});

  const KindId gtic = s.menu().id_of("Green Tea Ice Cream");
  s.scores = {10, 10, 5, 5};
  s.desserts[0][gtic] = 4;
  auto r = finalize(s);
  CHECK(r.scores[0] == 22);
  CHECK(r.winners == std::vector<int>{0});

  s.scores = {10, 10, 5, 5};
  s.desserts[0][gtic] = 1;
  s.desserts[1][gtic] = 1;
  CHECK(finalize(s).winners == std::vector<int>{0, 1});

  s.desserts[0][gtic] = 2;
  CHECK(finalize(s).winners == std::vector<int>{0});
}

TEST_CASE("config_path swaps one card per step") {
  const auto catalog = fixtures::load_catalog();
  const auto a = Menu::load(catalog, std::string(SUSHI_CONFIG_DIR) + "/menus/my_first_meal.json");
  const auto b = Menu::load(catalog, std::string(SUSHI_CONFIG_DIR) + "/menus/cutthroat_combo.json");
  CHECK(config_path(a, a).size() == 1);

  const auto path = config_path(a, b);
  REQUIRE(path.size() == 6);
  CHECK(path.front().names() == a.names());
  CHECK(path.back().names() == b.names());
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const auto xn = path[i].names();
    std::set<std::string> x(xn.begin(), xn.end());
    const auto yn = path[i + 1].names();
    std::set<std::string> y(yn.begin(), yn.end());
    std::vector<std::string> diff;
    std::set_symmetric_difference(x.begin(), x.end(), y.begin(), y.end(),
                                  std::back_inserter(diff));
    CHECK(diff.size() == 2);
    CHECK_NOTHROW(validate_menu(path[i + 1], true));
  }
  // Lowest catalog ids swap first: Maki -> Temaki.
  CHECK(path[1].find("Temaki"));
  CHECK_FALSE(path[1].find("Maki"));

  // Menus differing in four kinds give five configurations.
  const auto four = config_path(a, path[4]);
  CHECK(four.size() == 5);

  const auto small = Menu::from_names(catalog, "small", {"Tempura"});
  CHECK_THROWS_AS(config_path(a, small), ConfigError);
}
