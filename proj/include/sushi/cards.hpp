#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace sushi {

using KindId = int;

enum class Category { kNigiri, kRoll, kAppetizer, kSpecial, kDessert };
inline constexpr int kNumCategories = 5;

std::string_view to_string(Category c);
Category category_from_string(std::string_view s);

// Scoring rules. Each card kind carries exactly one; constants come from the
// card data file.
namespace rule {

// Fixed points per card; eligible for a wasabi multiplier.
struct Face {
  int points = 0;
};
// Multiplies the next nigiri played by the same player.
struct Wasabi {
  int multiplier = 3;
};
// `points` for every complete group of `size` copies.
struct Set {
  int size = 2;
  int points = 5;
};
// `points` per card unless another player played the same kind on the same
// turn, in which case every colliding play is voided.
struct EachCollision {
  int points = 3;
};
// Round-end majority on summed icons: places[0] to the most, places[1] to
// the second most. Ties split the award (rounded down); a tie for first
// cancels second place.
struct IconMajority {
  std::vector<int> places{6, 3};
};
// `per_card` for each card in the player's largest same-category set, per
// copy of this card.
struct LargestCategory {
  int per_card = 1;
};
// `points` per copy if the player has the most (or tied most) distinct
// categories on the board.
struct CategoryMajority {
  int points = 4;
};
// Round-end card-count majority: `most` to every player tied for most,
// `fewest` to every player tied for fewest (not with 2 players).
struct MostFewest {
  int most = 4;
  int fewest = -4;
};
// Total points for a count c of this kind: table[min(c, size - 1)].
struct CountTable {
  std::vector<int> table;
};
// End of game: `points` per complete group of `size` copies.
struct DessertSet {
  int size = 4;
  int points = 12;
};
// End of game: most splits `most`, fewest splits `fewest` (not with 2
// players, and not when everyone is tied).
struct DessertMajority {
  int most = 6;
  int fewest = -6;
};

}  // namespace rule

using ScoringRule =
    std::variant<rule::Face, rule::Wasabi, rule::Set, rule::EachCollision,
                 rule::IconMajority, rule::LargestCategory,
                 rule::CategoryMajority, rule::MostFewest, rule::CountTable,
                 rule::DessertSet, rule::DessertMajority>;

nlohmann::json scoring_to_json(const ScoringRule& r);
ScoringRule scoring_from_json(const nlohmann::json& j);

struct CardKind {
  KindId id = 0;         // index within the owning menu (or catalog)
  int global_id = 0;     // index within the catalog
  std::string name;
  Category category = Category::kNigiri;
  ScoringRule scoring = rule::Face{};
  int icon_count = 0;
  int default_copies = 0;

  bool is_dessert() const { return category == Category::kDessert; }
  template <typename R>
  bool has_rule() const {
    return std::holds_alternative<R>(scoring);
  }
};

// Every card kind the engine knows about, in a fixed order.
struct Catalog {
  std::vector<CardKind> kinds;
  std::vector<int> dessert_schedule;

  const CardKind& at(std::string_view name) const;
  std::optional<int> find(std::string_view name) const;

  static Catalog from_json(const nlohmann::json& j);
  static Catalog load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

// The card kinds in play for one game configuration. Kinds are stored in
// catalog order and re-indexed 0..n-1.
struct Menu {
  std::string name;
  std::vector<CardKind> kinds;

  int size() const { return static_cast<int>(kinds.size()); }
  const CardKind& operator[](KindId k) const { return kinds[k]; }
  std::optional<KindId> find(std::string_view name) const;
  KindId id_of(std::string_view name) const;
  std::vector<std::string> names() const;

  // Builds a menu from catalog kind names; rejects unknown and duplicate
  // names.
  static Menu from_names(const Catalog& catalog, std::string name,
                         const std::vector<std::string>& kind_names);
  static Menu load(const Catalog& catalog, const std::filesystem::path& path);

  // Full, self-contained description (kind definitions inlined).
  nlohmann::json to_json() const;
  static Menu from_json(const nlohmann::json& j);
};

// Structural checks: unique names, contiguous ids, icons only on rolls, and
// (when `enforce_structure`) exactly one roll kind and one dessert kind.
void validate_menu(const Menu& menu, bool enforce_structure);

struct DeckSpec {
  std::vector<int> copies;            // per menu kind
  std::vector<int> dessert_schedule;  // dessert cards injected per round

  static DeckSpec defaults(const Menu& menu, const Catalog& catalog);
  int non_dessert_total(const Menu& menu) const;
  int dessert_total(const Menu& menu) const;
};

}  // namespace sushi
