#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "sushi/hand.hpp"
#include "sushi/observation.hpp"
#include "sushi/rng.hpp"

namespace sushi {

// Something that picks a card for one seat. Implementations are immutable
// after construction so one instance can play every seat of many games at
// once; all randomness comes from the caller's rng.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  // `legal` is the ascending list of kinds in the seat's hand. The result
  // is always one of them.
  virtual KindId act(const PlayerView& view, std::span<const KindId> legal,
                     Rng& rng) const = 0;
};

using AgentPtr = std::shared_ptr<const Agent>;

// Card names, best first. A list may rank more kinds than a menu holds; it
// must rank every kind of any menu it is used on.
struct PriorityList {
  std::vector<std::string> ranking;

  // ConfigError on duplicates or empty names.
  void validate() const;
  // Menu kind ids in list order; ConfigError naming the missing kinds.
  std::vector<KindId> order_for(const Menu& menu) const;
  // The list with kinds outside the menu dropped.
  PriorityList restricted_to(const Menu& menu) const;
  bool covers(const Menu& menu) const;

  nlohmann::json to_json() const { return ranking; }
  // Accepts a bare array of names or an object with a "ranking" array.
  static PriorityList from_json(const nlohmann::json& j);
  static PriorityList load(const std::filesystem::path& path);
  bool operator==(const PriorityList&) const = default;
};

// Highest-ranked kind present in the hand. StateError on an empty hand.
KindId priority_act(const Hand& hand, std::span<const KindId> order);
// Uniform over the kinds present (not over copies).
KindId random_act(const Hand& hand, Rng& rng);

class RandomAgent : public Agent {
 public:
  std::string name() const override { return "random"; }
  KindId act(const PlayerView& view, std::span<const KindId> legal,
             Rng& rng) const override;
};

class PriorityAgent : public Agent {
 public:
  explicit PriorityAgent(PriorityList list, std::string name = "priority");
  std::string name() const override { return name_; }
  const PriorityList& list() const { return list_; }
  KindId act(const PlayerView& view, std::span<const KindId> legal,
             Rng& rng) const override;

 private:
  PriorityList list_;
  std::string name_;
  std::unordered_map<std::string, int> rank_;
};

}  // namespace sushi
