#pragma once

// Boards scored by hand from the default scoring table in configs/cards.json.
// plays[seat][t] is the card revealed on turn t ("" = no play that turn), so
// equal indices across seats are simultaneous plays.

#include <string>
#include <vector>

#include "sushi/cards.hpp"
#include "sushi/game.hpp"
#include "sushi/scoring.hpp"

namespace fixtures {

struct RoundFixture {
  const char* name;
  std::vector<std::vector<std::string>> plays;
  std::vector<int> expected;
};

struct DessertFixture {
  const char* name;
  const char* kind;
  std::vector<int> counts;  // per seat
  std::vector<int> expected;
};

inline const std::vector<RoundFixture>& round_fixtures() {
  static const std::vector<RoundFixture> f = {
      {"empty boards", {{}, {}}, {0, 0}},
      {"single tempura", {{"Tempura"}, {}}, {0, 0}},
      {"tempura pair", {{"Tempura", "Tempura"}, {}}, {5, 0}},
      {"three tempura", {{"Tempura", "Tempura", "Tempura"}, {}}, {5, 0}},
      {"four tempura", {{"Tempura", "Tempura", "Tempura", "Tempura"}, {}}, {10, 0}},
      {"two sashimi", {{"Sashimi", "Sashimi"}, {}}, {0, 0}},
      {"sashimi triple", {{"Sashimi", "Sashimi", "Sashimi"}, {}}, {10, 0}},
      {"five sashimi", {{"Sashimi", "Sashimi", "Sashimi", "Sashimi", "Sashimi"}, {}}, {10, 0}},
      {"six sashimi",
       {{"Sashimi", "Sashimi", "Sashimi", "Sashimi", "Sashimi", "Sashimi"}, {}},
       {20, 0}},
      {"squid alone", {{"Squid Nigiri"}, {}}, {3, 0}},
      {"egg alone", {{"Egg Nigiri"}, {}}, {1, 0}},
      {"salmon alone", {{"Salmon Nigiri"}, {}}, {2, 0}},
      {"three nigiri", {{"Egg Nigiri", "Salmon Nigiri", "Squid Nigiri"}, {}}, {6, 0}},
      {"wasabi then squid", {{"Wasabi", "Squid Nigiri"}, {}}, {9, 0}},
      {"squid then wasabi", {{"Squid Nigiri", "Wasabi"}, {}}, {3, 0}},
      {"two wasabi two nigiri", {{"Wasabi", "Wasabi", "Egg Nigiri", "Salmon Nigiri"}, {}}, {9, 0}},
      {"one wasabi two nigiri", {{"Wasabi", "Egg Nigiri", "Salmon Nigiri"}, {}}, {5, 0}},
      {"unused wasabi", {{"Wasabi"}, {}}, {0, 0}},
      {"interleaved wasabi", {{"Wasabi", "Egg Nigiri", "Wasabi", "Squid Nigiri"}, {}}, {12, 0}},
      {"wasabi queue",
       {{"Wasabi", "Wasabi", "Squid Nigiri", "Egg Nigiri", "Salmon Nigiri"}, {}},
       {14, 0}},
      {"miso alone", {{"Miso Soup"}, {"Egg Nigiri"}}, {3, 1}},
      {"miso collision", {{"Miso Soup"}, {"Miso Soup"}}, {0, 0}},
      {"miso different turns",
       {{"Miso Soup", "Egg Nigiri"}, {"Egg Nigiri", "Miso Soup"}},
       {4, 4}},
      {"miso three-way collision", {{"Miso Soup"}, {"Miso Soup"}, {"Miso Soup"}}, {0, 0, 0}},
      {"miso two of three collide", {{"Miso Soup"}, {"Miso Soup"}, {"Egg Nigiri"}}, {0, 0, 1}},
      {"two miso no collision", {{"Miso Soup", "Miso Soup"}, {"Egg Nigiri", "Egg Nigiri"}}, {6, 2}},
      {"miso four players", {{"Miso Soup"}, {"Miso Soup"}, {"Egg Nigiri"}, {"Miso Soup"}}, {0, 0, 1, 0}},
      {"maki uncontested", {{"Maki"}, {}}, {6, 0}},
      {"maki tied first", {{"Maki"}, {"Maki"}}, {3, 3}},
      {"maki first and second", {{"Maki", "Maki"}, {"Maki"}}, {6, 3}},
      {"maki tied second", {{"Maki", "Maki"}, {"Maki"}, {"Maki"}}, {6, 1, 1}},
      {"maki tied first cancels second", {{"Maki", "Maki"}, {"Maki", "Maki"}, {"Maki"}}, {3, 3, 0}},
      {"maki four players",
       {{"Maki", "Maki", "Maki"}, {"Maki", "Maki"}, {"Maki"}, {}},
       {6, 3, 0, 0}},
      {"maki no second without icons", {{"Maki"}, {}, {}}, {6, 0, 0}},
      {"maki three players", {{"Maki", "Maki"}, {"Maki"}, {}}, {6, 3, 0}},
      {"maki split second four players",
       {{"Maki"}, {"Maki"}, {"Maki", "Maki"}, {}},
       {1, 1, 6, 0}},
      {"temaki most and fewest", {{"Temaki", "Temaki"}, {"Temaki"}, {}}, {4, 0, -4}},
      {"temaki two players no penalty", {{"Temaki"}, {}}, {4, 0}},
      {"temaki all equal", {{"Temaki"}, {"Temaki"}, {"Temaki"}}, {0, 0, 0}},
      {"temaki tied most", {{"Temaki"}, {"Temaki"}, {}}, {4, 4, -4}},
      {"temaki tied fewest",
       {{"Temaki", "Temaki"}, {}, {}, {"Temaki"}},
       {4, -4, -4, 0}},
      {"temaki lone holder", {{}, {}, {}, {"Temaki"}}, {-4, -4, -4, 4}},
      {"one eel", {{"Eel"}, {}}, {-3, 0}},
      {"two eel", {{"Eel", "Eel"}, {}}, {7, 0}},
      {"three eel", {{"Eel", "Eel", "Eel"}, {}}, {7, 0}},
      {"one tofu", {{"Tofu"}, {}}, {2, 0}},
      {"two tofu", {{"Tofu", "Tofu"}, {}}, {6, 0}},
      {"three tofu", {{"Tofu", "Tofu", "Tofu"}, {}}, {0, 0}},
      {"four tofu", {{"Tofu", "Tofu", "Tofu", "Tofu"}, {}}, {0, 0}},
      {"eel and tofu pairs", {{"Eel", "Tofu", "Eel", "Tofu"}, {}}, {13, 0}},
      {"two eel three tofu", {{"Eel", "Eel", "Tofu", "Tofu", "Tofu"}, {}}, {7, 0}},
      {"tea alone", {{"Tea"}, {}}, {1, 0}},
      {"tea with nigiri set",
       {{"Tea", "Egg Nigiri", "Salmon Nigiri", "Squid Nigiri"}, {}},
       {9, 0}},
      {"two tea with appetizers",
       {{"Tea", "Tea", "Tempura", "Sashimi", "Miso Soup"}, {}},
       {9, 0}},
      {"tea ignores voided miso",
       {{"Tea", "Miso Soup", "Miso Soup"}, {"Egg Nigiri", "Miso Soup", "Egg Nigiri"}},
       {4, 2}},
      {"tea all categories single", {{"Tea", "Maki", "Tempura"}, {}}, {7, 0}},
      {"soy uncontested", {{"Soy Sauce"}, {}}, {4, 0}},
      {"soy outnumbered", {{"Soy Sauce"}, {"Egg Nigiri", "Tempura"}}, {0, 1}},
      {"soy tied categories", {{"Soy Sauce", "Egg Nigiri"}, {"Tempura", "Wasabi"}}, {5, 0}},
      {"two soy with maki tie",
       {{"Soy Sauce", "Soy Sauce", "Egg Nigiri", "Tempura", "Maki"}, {"Maki"}},
       {12, 3}},
      {"dessert not scored in round", {{"Green Tea Ice Cream"}, {}}, {0, 0}},
      {"soy counts dessert category",
       {{"Soy Sauce", "Green Tea Ice Cream"}, {"Egg Nigiri", "Tempura"}},
       {4, 1}},
      {"combined board",
       {{"Wasabi", "Sashimi", "Sashimi", "Sashimi", "Squid Nigiri", "Tempura",
         "Tempura", "Miso Soup"},
        {"Egg Nigiri", "Egg Nigiri", "Egg Nigiri", "Egg Nigiri", "Egg Nigiri",
         "Egg Nigiri", "Egg Nigiri", "Egg Nigiri"}},
       {27, 8}},
      {"set cards without sets", {{"Wasabi", "Tempura", "Sashimi"}, {}}, {0, 0}},
  };
  return f;
}

inline const std::vector<DessertFixture>& dessert_fixtures() {
  static const std::vector<DessertFixture> f = {
      {"gtic four", "Green Tea Ice Cream", {4, 0}, {12, 0}},
      {"gtic three", "Green Tea Ice Cream", {3, 0}, {0, 0}},
      {"gtic eight", "Green Tea Ice Cream", {8, 1}, {24, 0}},
      {"gtic seven", "Green Tea Ice Cream", {7, 5}, {12, 12}},
      {"pudding most and fewest", "Pudding", {3, 1, 1, 0}, {6, 0, 0, -6}},
      {"pudding split both ends", "Pudding", {2, 2, 0, 0}, {3, 3, -3, -3}},
      {"pudding two players", "Pudding", {2, 0}, {6, 0}},
      {"pudding all equal", "Pudding", {1, 1, 1}, {0, 0, 0}},
      {"pudding three players", "Pudding", {4, 0, 0}, {6, -3, -3}},
      {"pudding three-way fewest", "Pudding", {2, 1, 1, 1}, {6, -2, -2, -2}},
  };
  return f;
}

inline sushi::Catalog load_catalog() {
  return sushi::Catalog::load(std::string(SUSHI_CONFIG_DIR) + "/cards.json");
}

// Every catalog kind on one menu, so any fixture card can be played.
inline sushi::Menu full_menu(const sushi::Catalog& catalog) {
  std::vector<std::string> names;
  for (const auto& k : catalog.kinds) names.push_back(k.name);
  return sushi::Menu::from_names(catalog, "all", names);
}

inline std::vector<sushi::Board> build_boards(const RoundFixture& f, const sushi::Menu& menu) {
  std::vector<sushi::Board> boards(f.plays.size(), sushi::Board(menu.size()));
  size_t turns = 0;
  for (const auto& p : f.plays) turns = std::max(turns, p.size());
  for (size_t t = 0; t < turns; ++t) {
    for (size_t s = 0; s < f.plays.size(); ++s) {
      if (t < f.plays[s].size() && !f.plays[s][t].empty()) {
        boards[s].play(static_cast<int>(t), menu.id_of(f.plays[s][t]), menu);
      }
    }
    sushi::resolve_collisions(boards, static_cast<int>(t), menu);
  }
  return boards;
}

}  // namespace fixtures
