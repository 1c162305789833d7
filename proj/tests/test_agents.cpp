#include <sstream>

#include "doctest.h"
#include "sushi/agents.hpp"
#include "sushi/error.hpp"
#include "sushi/runner.hpp"

using namespace sushi;

namespace {

std::shared_ptr<const GameConfig> load_config(const std::string& name) {
  return std::make_shared<const GameConfig>(
      GameConfig::load(std::string(SUSHI_CONFIG_DIR) + "/" + name));
}

Hand random_hand(int n, Rng& rng) {
  Hand h(n);
  const int cards = 1 + static_cast<int>(uniform_below(rng, 9));
  for (int i = 0; i < cards; ++i) ++h[static_cast<int>(uniform_below(rng, n))];
  return h;
}

}  // namespace

TEST_CASE("priority_act follows rank order") {
  // kinds: 0 Tempura, 1 Soy Sauce, 2 Squid
  const std::vector<KindId> order = {2, 0, 1};
  CHECK(priority_act(Hand({1, 1, 0}), order) == 0);
  CHECK(priority_act(Hand({0, 3, 0}), order) == 1);
  CHECK(priority_act(Hand({4, 2, 1}), order) == 2);
  CHECK_THROWS_AS(priority_act(Hand(3), order), StateError);
}

TEST_CASE("priority_act only looks at presence") {
  Rng rng(3);
  const std::vector<KindId> order = {4, 1, 0, 3, 2};
  for (int i = 0; i < 500; ++i) {
    const Hand h = random_hand(5, rng);
    Hand presence(5);
    for (int k = 0; k < 5; ++k) presence[k] = h[k] > 0 ? 1 : 0;
    CHECK(priority_act(h, order) == priority_act(presence, order));
  }
}

TEST_CASE("swapping two ranks only matters when both lead the hand") {
  Rng rng(4);
  const std::vector<KindId> order = {0, 1, 2, 3, 4, 5};
  for (int i = 0; i < 500; ++i) {
    const Hand h = random_hand(6, rng);
    const int a = static_cast<int>(uniform_below(rng, 5));
    auto swapped = order;
    std::swap(swapped[a], swapped[a + 1]);
    bool higher_present = false;
    for (int r = 0; r < a; ++r) higher_present = higher_present || h[order[r]] > 0;
    const bool both = h[order[a]] > 0 && h[order[a + 1]] > 0;
    const bool differs = priority_act(h, order) != priority_act(h, swapped);
    CHECK(differs == (both && !higher_present));
  }
}

TEST_CASE("random_act is uniform over kinds") {
  Rng rng(11);
  CHECK(random_act(Hand({0, 2, 0}), rng) == 1);
  int a = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) a += random_act(Hand({5, 1}), rng) == 0 ? 1 : 0;
  CHECK(static_cast<double>(a) / draws == doctest::Approx(0.5).epsilon(0.03));
  CHECK_THROWS_AS(random_act(Hand(2), rng), StateError);

  Rng r1(99), r2(99);
  for (int i = 0; i < 50; ++i) {
    CHECK(random_act(Hand({1, 1, 1, 1}), r1) == random_act(Hand({1, 1, 1, 1}), r2));
  }
}

TEST_CASE("priority list json and menu checks") {
  const auto c = load_config("game_my_first_meal.json");
  const auto list = PriorityList::from_json(nlohmann::json::parse(
      R"(["Squid Nigiri", "Pudding", "Tempura", "Sashimi", "Maki", "Salmon Nigiri",
          "Wasabi", "Miso Soup", "Green Tea Ice Cream", "Tea", "Egg Nigiri"])"));
  CHECK(list.covers(c->menu));
  const auto order = list.order_for(c->menu);
  CHECK(order.size() == 10u);
  CHECK(c->menu[order[0]].name == "Squid Nigiri");
  CHECK(list.restricted_to(c->menu).ranking.size() == 10u);
  CHECK(PriorityList::from_json(list.to_json()) == list);
  CHECK(PriorityList::from_json(nlohmann::json{{"ranking", list.ranking}}) == list);

  PriorityList short_list{{"Squid Nigiri", "Tempura"}};
  CHECK_FALSE(short_list.covers(c->menu));
  CHECK_THROWS_AS(short_list.order_for(c->menu), ConfigError);
  CHECK_THROWS_AS(PriorityList::from_json(nlohmann::json::parse(R"(["Tea", "Tea"])")), ConfigError);
  CHECK_THROWS_AS(PriorityList::from_json(nlohmann::json(3)), ConfigError);
}

TEST_CASE("priority agent plays its top card across menus") {
  PriorityAgent agent(PriorityList{{"Squid Nigiri", "Salmon Nigiri", "Egg Nigiri", "Maki",
                                    "Temaki", "Tempura", "Sashimi", "Eel", "Tofu", "Miso Soup",
                                    "Wasabi", "Tea", "Soy Sauce", "Green Tea Ice Cream",
                                    "Pudding"}});
  for (const auto* file : {"game_my_first_meal.json", "game_cutthroat_combo.json"}) {
    auto s = new_game(load_config(file));
    Rng rng(1);
    for (int seat = 0; seat < 4; ++seat) {
      const auto legal = legal_actions(s, seat);
      const auto a = agent.act(PlayerView(s, seat), legal, rng);
      CHECK(std::find(legal.begin(), legal.end(), a) != legal.end());
      const auto order = agent.list().order_for(s.menu());
      CHECK(a == priority_act(s.hands[seat], order));
    }
  }
}

TEST_CASE("run_game is reproducible and logs every pick") {
  const auto c = load_config("game_my_first_meal.json");
  RandomAgent random;
  const std::vector<const Agent*> seats(4, &random);
  const auto a = run_game(c, seats, 42, {7, true});
  const auto b = run_game(c, seats, 42, {7, true});
  CHECK(a.events == b.events);
  CHECK(a.result.scores == b.result.scores);

  int picks = 0, rounds = 0, ends = 0;
  for (const auto& e : a.events) {
    CHECK(e["game"] == 7);
    const auto kind = e["event"].get<std::string>();
    if (kind == "pick") ++picks;
    if (kind == "round_end") ++rounds;
    if (kind == "game_end") ++ends;
  }
  CHECK(picks == 4 * 9 * 3);
  CHECK(rounds == 3);
  CHECK(ends == 1);
  CHECK(a.events.front()["event"] == "game_start");
  CHECK(a.events.back()["final_scores"].get<std::vector<int>>() == a.result.scores);

  std::stringstream io;
  write_events(io, a.events);
  CHECK(read_events(io) == a.events);
  std::stringstream bad("{\"event\":\n");
  CHECK_THROWS_AS(read_events(bad), InputError);

  const auto unlogged = run_game(c, seats, 42);
  CHECK(unlogged.events.empty());
  CHECK(unlogged.result.scores == a.result.scores);
}

TEST_CASE("game reward adds the bonus for every winner") {
  FinalResult r{{40, 52, 52, 10}, {0, 0, 0, 0}, {1, 2}};
  CHECK(game_reward(r, 0) == 40);
  CHECK(game_reward(r, 1) == 152);
  CHECK(game_reward(r, 2) == 152);
}
