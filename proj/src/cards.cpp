#include "sushi/cards.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "sushi/error.hpp"

namespace sushi {

using nlohmann::json;

std::string_view to_string(Category c) {
  switch (c) {
    case Category::kNigiri:
      return "nigiri";
    case Category::kRoll:
      return "roll";
    case Category::kAppetizer:
      return "appetizer";
    case Category::kSpecial:
      return "special";
    case Category::kDessert:
      return "dessert";
  }
  return "?";
}

Category category_from_string(std::string_view s) {
  for (int i = 0; i < kNumCategories; ++i) {
    const auto c = static_cast<Category>(i);
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown card category '" + std::string(s) + "'");
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <typename T>
T field(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) {
    throw ConfigError(ctx + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(ctx + ": bad field '" + key + "': " + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path.string() + "': " + e.what());
  }
}

CardKind kind_from_json(const json& j, int index) {
  const std::string ctx = "card kind #" + std::to_string(index);
  CardKind k;
  k.id = index;
  k.global_id = j.value("global_id", index);
  k.name = field<std::string>(j, "name", ctx);
  k.category = category_from_string(field<std::string>(j, "category", ctx));
  k.icon_count = j.value("icons", 0);
  k.default_copies = j.value("copies", 0);
  if (!j.contains("scoring")) {
    throw ConfigError(ctx + " (" + k.name + "): missing field 'scoring'");
  }
  try {
    k.scoring = scoring_from_json(j.at("scoring"));
  } catch (const ConfigError& e) {
    throw ConfigError(ctx + " (" + k.name + "): " + e.what());
  }
  if (k.icon_count < 0 || k.default_copies < 0) {
    throw ConfigError(ctx + " (" + k.name + "): negative icons or copies");
  }
  return k;
}

json kind_to_json(const CardKind& k) {
  return json{{"name", k.name},
              {"global_id", k.global_id},
              {"category", std::string(to_string(k.category))},
              {"icons", k.icon_count},
              {"copies", k.default_copies},
              {"scoring", scoring_to_json(k.scoring)}};
}

}  // namespace

json scoring_to_json(const ScoringRule& r) {
  return std::visit(
      Overloaded{
          [](const rule::Face& f) {
            return json{{"type", "face"}, {"points", f.points}};
          },
          [](const rule::Wasabi& w) {
            return json{{"type", "wasabi"}, {"multiplier", w.multiplier}};
          },
          [](const rule::Set& s) {
            return json{{"type", "set"}, {"size", s.size}, {"points", s.points}};
          },
          [](const rule::EachCollision& e) {
            return json{{"type", "each_collision"}, {"points", e.points}};
          },
          [](const rule::IconMajority& m) {
            return json{{"type", "icon_majority"}, {"places", m.places}};
          },
          [](const rule::LargestCategory& t) {
            return json{{"type", "largest_category"},
                        {"per_card", t.per_card}};
          },
          [](const rule::CategoryMajority& c) {
            return json{{"type", "category_majority"}, {"points", c.points}};
          },
          [](const rule::MostFewest& m) {
            return json{
                {"type", "most_fewest"}, {"most", m.most}, {"fewest", m.fewest}};
          },
          [](const rule::CountTable& t) {
            return json{{"type", "count_table"}, {"table", t.table}};
          },
          [](const rule::DessertSet& d) {
            return json{
                {"type", "dessert_set"}, {"size", d.size}, {"points", d.points}};
          },
          [](const rule::DessertMajority& d) {
            return json{{"type", "dessert_majority"},
                        {"most", d.most},
                        {"fewest", d.fewest}};
          },
      },
      r);
}

ScoringRule scoring_from_json(const json& j) {
  const std::string ctx = "scoring";
  const auto type = field<std::string>(j, "type", ctx);
  if (type == "face") return rule::Face{field<int>(j, "points", ctx)};
  if (type == "wasabi") return rule::Wasabi{j.value("multiplier", 3)};
  if (type == "set") {
    rule::Set s{field<int>(j, "size", ctx), field<int>(j, "points", ctx)};
    if (s.size < 1) throw ConfigError("set size must be >= 1");
    return s;
  }
  if (type == "each_collision") {
    return rule::EachCollision{field<int>(j, "points", ctx)};
  }
  if (type == "icon_majority") {
    rule::IconMajority m{field<std::vector<int>>(j, "places", ctx)};
    if (m.places.empty()) throw ConfigError("icon_majority needs places");
    return m;
  }
  if (type == "largest_category") {
    return rule::LargestCategory{j.value("per_card", 1)};
  }
  if (type == "category_majority") {
    return rule::CategoryMajority{field<int>(j, "points", ctx)};
  }
  if (type == "most_fewest") {
    return rule::MostFewest{field<int>(j, "most", ctx),
                            field<int>(j, "fewest", ctx)};
  }
  if (type == "count_table") {
    rule::CountTable t{field<std::vector<int>>(j, "table", ctx)};
    if (t.table.empty()) throw ConfigError("count_table needs a table");
    return t;
  }
  if (type == "dessert_set") {
    rule::DessertSet d{field<int>(j, "size", ctx), field<int>(j, "points", ctx)};
    if (d.size < 1) throw ConfigError("dessert_set size must be >= 1");
    return d;
  }
  if (type == "dessert_majority") {
    return rule::DessertMajority{field<int>(j, "most", ctx),
                                 field<int>(j, "fewest", ctx)};
  }
  throw ConfigError("unknown scoring type '" + type + "'");
}

const CardKind& Catalog::at(std::string_view name) const {
  const auto i = find(name);
  if (!i) throw ConfigError("unknown card '" + std::string(name) + "'");
  return kinds[*i];
}

std::optional<int> Catalog::find(std::string_view name) const {
  for (const auto& k : kinds) {
    if (k.name == name) return k.global_id;
  }
  return std::nullopt;
}

Catalog Catalog::from_json(const json& j) {
  Catalog c;
  if (!j.contains("kinds") || !j.at("kinds").is_array()) {
    throw ConfigError("card catalog: missing 'kinds' array");
  }
  int i = 0;
  std::set<std::string> names;
  for (const auto& kj : j.at("kinds")) {
    auto k = kind_from_json(kj, i);
    k.global_id = i;
    if (!names.insert(k.name).second) {
      throw ConfigError("card catalog: duplicate kind '" + k.name + "'");
    }
    c.kinds.push_back(std::move(k));
    ++i;
  }
  c.dessert_schedule = j.value("dessert_schedule", std::vector<int>{5, 3, 2});
  return c;
}

Catalog Catalog::load(const std::filesystem::path& path) {
  try {
    return from_json(read_json_file(path));
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.find(path.string()) != std::string::npos) throw;
    throw ConfigError("'" + path.string() + "': " + msg);
  }
}

json Catalog::to_json() const {
  json kj = json::array();
  for (const auto& k : kinds) kj.push_back(kind_to_json(k));
  return json{{"kinds", kj}, {"dessert_schedule", dessert_schedule}};
}

std::optional<KindId> Menu::find(std::string_view n) const {
  for (const auto& k : kinds) {
    if (k.name == n) return k.id;
  }
  return std::nullopt;
}

KindId Menu::id_of(std::string_view n) const {
  const auto id = find(n);
  if (!id) {
    throw ConfigError("card '" + std::string(n) + "' is not on menu '" +
                      name + "'");
  }
  return *id;
}

std::vector<std::string> Menu::names() const {
  std::vector<std::string> out;
  out.reserve(kinds.size());
  for (const auto& k : kinds) out.push_back(k.name);
  return out;
}

Menu Menu::from_names(const Catalog& catalog, std::string name,
                      const std::vector<std::string>& kind_names) {
  Menu m;
  m.name = std::move(name);
  std::set<std::string> seen;
  for (const auto& n : kind_names) {
    if (!seen.insert(n).second) {
      throw ConfigError("menu '" + m.name + "': duplicate card '" + n + "'");
    }
    const auto gid = catalog.find(n);
    if (!gid) {
      throw ConfigError("menu '" + m.name + "': unknown card '" + n + "'");
    }
    m.kinds.push_back(catalog.kinds[*gid]);
  }
  std::sort(m.kinds.begin(), m.kinds.end(),
            [](const CardKind& a, const CardKind& b) {
              return a.global_id < b.global_id;
            });
  for (int i = 0; i < m.size(); ++i) m.kinds[i].id = i;
  return m;
}

Menu Menu::load(const Catalog& catalog, const std::filesystem::path& path) {
  const auto j = read_json_file(path);
  try {
    return from_names(catalog,
                      j.value("name", path.stem().string()),
                      field<std::vector<std::string>>(j, "kinds", "menu"));
  } catch (const ConfigError& e) {
    throw ConfigError("'" + path.string() + "': " + e.what());
  }
}

json Menu::to_json() const {
  json kj = json::array();
  for (const auto& k : kinds) kj.push_back(kind_to_json(k));
  return json{{"name", name}, {"kinds", kj}};
}

Menu Menu::from_json(const json& j) {
  Menu m;
  m.name = j.value("name", std::string("menu"));
  int i = 0;
  for (const auto& kj : j.at("kinds")) {
    auto k = kind_from_json(kj, i);
    m.kinds.push_back(std::move(k));
    ++i;
  }
  return m;
}

void validate_menu(const Menu& menu, bool enforce_structure) {
  const std::string ctx = "menu '" + menu.name + "': ";
  if (menu.kinds.empty()) throw ConfigError(ctx + "no card kinds");
  std::set<std::string> names;
  int rolls = 0;
  int desserts = 0;
  for (int i = 0; i < menu.size(); ++i) {
    const auto& k = menu.kinds[i];
    if (k.id != i) throw ConfigError(ctx + "kind ids are not contiguous");
    if (!names.insert(k.name).second) {
      throw ConfigError(ctx + "duplicate card '" + k.name + "'");
    }
    if (k.icon_count > 0 && k.category != Category::kRoll) {
      throw ConfigError(ctx + "'" + k.name + "' has icons but is not a roll");
    }
    const bool dessert_rule = k.has_rule<rule::DessertSet>() ||
                              k.has_rule<rule::DessertMajority>();
    if (dessert_rule != k.is_dessert()) {
      throw ConfigError(ctx + "'" + k.name +
                        "': dessert scoring rules require the dessert "
                        "category and vice versa");
    }
    rolls += k.category == Category::kRoll;
    desserts += k.is_dessert();
  }
  if (enforce_structure && (rolls != 1 || desserts != 1)) {
    throw ConfigError(ctx + "needs exactly one roll and one dessert kind (has " +
                      std::to_string(rolls) + " and " +
                      std::to_string(desserts) + ")");
  }
}

DeckSpec DeckSpec::defaults(const Menu& menu, const Catalog& catalog) {
  DeckSpec d;
  for (const auto& k : menu.kinds) d.copies.push_back(k.default_copies);
  d.dessert_schedule = catalog.dessert_schedule;
  return d;
}

int DeckSpec::non_dessert_total(const Menu& menu) const {
  int total = 0;
  for (int i = 0; i < menu.size(); ++i) {
    if (!menu[i].is_dessert()) total += copies[i];
  }
  return total;
}

int DeckSpec::dessert_total(const Menu& menu) const {
  int total = 0;
  for (int i = 0; i < menu.size(); ++i) {
    if (menu[i].is_dessert()) total += copies[i];
  }
  return total;
}

}  // namespace sushi
