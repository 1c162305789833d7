#include "sushi/agents.hpp"

#include <fstream>
#include <set>

#include "sushi/error.hpp"

namespace sushi {

using nlohmann::json;

void PriorityList::validate() const {
  std::set<std::string> seen;
  for (const auto& n : ranking) {
    if (n.empty()) throw ConfigError("priority list: empty card name");
    if (!seen.insert(n).second) throw ConfigError("priority list: duplicate card '" + n + "'");
  }
}

std::vector<KindId> PriorityList::order_for(const Menu& menu) const {
  std::vector<KindId> order;
  std::vector<bool> placed(static_cast<size_t>(menu.size()), false);
  for (const auto& n : ranking) {
    if (const auto k = menu.find(n)) {
      if (placed[*k]) throw ConfigError("priority list: duplicate card '" + n + "'");
      placed[*k] = true;
      order.push_back(*k);
    }
  }
  std::string missing;
  for (int k = 0; k < menu.size(); ++k) {
    if (!placed[k]) missing += (missing.empty() ? "" : ", ") + menu[k].name;
  }
  if (!missing.empty()) {
    throw ConfigError("priority list does not rank menu '" + menu.name + "' cards: " + missing);
  }
  return order;
}

PriorityList PriorityList::restricted_to(const Menu& menu) const {
  PriorityList out;
  for (const auto& n : ranking) {
    if (menu.find(n)) out.ranking.push_back(n);
  }
  return out;
}

bool PriorityList::covers(const Menu& menu) const {
  try {
    order_for(menu);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

PriorityList PriorityList::from_json(const json& j) {
  PriorityList out;
  try {
    const json& arr = j.is_object() ? j.at("ranking") : j;
    out.ranking = arr.get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("priority list: ") + e.what());
  }
  out.validate();
  return out;
}

PriorityList PriorityList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open priority list " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

KindId priority_act(const Hand& hand, std::span<const KindId> order) {
  if (hand.empty()) throw StateError("priority_act: empty hand");
  for (KindId k : order) {
    if (k >= 0 && k < hand.kinds() && hand[k] > 0) return k;
  }
  throw ConfigError("priority list ranks none of the cards in hand");
}

KindId random_act(const Hand& hand, Rng& rng) {
  const auto kinds = hand.present();
  if (kinds.empty()) throw StateError("random_act: empty hand");
  return kinds[uniform_below(rng, kinds.size())];
}

KindId RandomAgent::act(const PlayerView& view, std::span<const KindId>, Rng& rng) const {
  return random_act(view.hand(), rng);
}

PriorityAgent::PriorityAgent(PriorityList list, std::string name)
    : list_(std::move(list)), name_(std::move(name)) {
  list_.validate();
  for (int i = 0; i < static_cast<int>(list_.ranking.size()); ++i) rank_[list_.ranking[i]] = i;
}

KindId PriorityAgent::act(const PlayerView& view, std::span<const KindId> legal, Rng&) const {
  if (legal.empty()) throw StateError("priority agent: no legal action");
  const Menu& menu = view.menu();
  KindId best = -1;
  int best_rank = 0;
  for (KindId k : legal) {
    const auto it = rank_.find(menu[k].name);
    if (it == rank_.end()) {
      throw ConfigError("priority list '" + name_ + "' does not rank " + menu[k].name);
    }
    if (best < 0 || it->second < best_rank) {
      best = k;
      best_rank = it->second;
    }
  }
  return best;
}

}  // namespace sushi
