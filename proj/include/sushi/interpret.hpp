#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sushi/agents.hpp"
#include "sushi/game.hpp"
#include "sushi/observation.hpp"

namespace sushi {

// A pick from a two-card hand holding two different kinds. Kinds are
// layout universe slots.
struct PreferenceSample {
  std::vector<double> features;
  int chosen = 0;
  int alternative = 0;
  int game = 0;
  int round = 0;
  int turn = 0;
  int seat = 0;
};

struct PreferenceDataset {
  FeatureLayout layout;
  std::vector<PreferenceSample> samples;
};

// Plays n_games with the agent in every seat (game g dealt with
// derive_seed(seed, g)) and keeps the picks made from two distinct cards.
// `only_round` keeps a single round (0-based).
PreferenceDataset collect_pairwise_dataset(const Agent& agent, const GameConfig& game,
                                           int n_games, std::uint64_t seed,
                                           const FeatureLayout& layout,
                                           std::optional<int> only_round = {},
                                           int workers = 1);

struct Condition {
  int feature = 0;
  bool greater = false;  // feature > threshold, else feature <= threshold
  double threshold = 0;
  bool operator==(const Condition&) const = default;
};

struct Rule {
  std::vector<Condition> conditions;
  int target = 0;  // universe slot
  double precision = 0;
  double recall = 0;
  int support = 0;  // out-of-bag samples the rule covers
};

struct RuleParams {
  int trees = 30;
  int max_depth = 3;
  double bootstrap = 0.7;
  double min_precision = 0.5;
  double min_recall = 0.01;
  int max_rules_per_kind = 5;
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static RuleParams from_json(const nlohmann::json& j);
};

// Bagged one-vs-rest Gini trees per chosen kind. Each path to a positive
// leaf is a candidate rule scored on the tree's out-of-bag samples.
// Candidates under the thresholds are dropped, rules over the same feature
// set keep the most precise, and the best max_rules_per_kind survive.
// FittingError unless at least two kinds are chosen in the data.
std::vector<Rule> fit_rules(const PreferenceDataset& data, const RuleParams& params);

bool rule_matches(const Rule& rule, std::span<const double> features);
// "IF own_hand[Tempura] > 0.5 AND ... THEN play Tempura [precision 0.93, recall 0.41]"
std::string format_rule(const Rule& rule, const FeatureLayout& layout);
nlohmann::json rules_to_json(std::span<const Rule> rules, const FeatureLayout& layout);

struct PreferenceMatrix {
  std::vector<std::string> kinds;
  std::vector<std::vector<int>> wins;    // wins[a][b]: a chosen over b
  std::vector<std::vector<int>> trials;  // symmetric

  explicit PreferenceMatrix(std::vector<std::string> names = {});
  int size() const { return static_cast<int>(kinds.size()); }
  int total() const;  // samples tallied
  void add(int chosen, int alternative);
};

PreferenceMatrix preference_matrix(const PreferenceDataset& data);

// Closest ranking to the pairwise preferences: the order with the fewest
// disagreements (each sample ranked against its choice counts once), exact
// for up to kExactRankingLimit compared kinds and a Borda sort beyond.
// Among equally close orders, kinds with fewer trials come first, then
// higher Borda score, then slot order; kinds never compared go last.
// ReconstructionError on an empty matrix.
inline constexpr int kExactRankingLimit = 20;
PriorityList reconstruct_priority(const PreferenceMatrix& m);
// Mean win fraction over the kinds each kind was compared with.
std::vector<double> borda_scores(const PreferenceMatrix& m);

// 1 - 2 * discordant / C(n, 2). ComparisonError unless both lists rank the
// same kinds.
double kendall_tau(const PriorityList& a, const PriorityList& b);

struct KindPoints {
  std::string kind;
  double points = 0;   // attributed over all logged games
  int copies = 0;      // copies played
  double mean = 0;     // points per copy played
  bool played = false;
};

struct LogPriority {
  PriorityList list;
  std::vector<KindPoints> kinds;  // in list order
  int games = 0;
};

// Replays JSON-lines game logs and attributes every scored point to the
// cards that earned it: set points split evenly, roll points by icons,
// wasabi-boosted nigiri 2:1 between nigiri and wasabi. Kinds rank by mean
// points per copy played; kinds never played go last with mean 0.
// InputError on empty or inconsistent logs.
LogPriority priority_from_logs(std::span<const nlohmann::json> events);

void write_rank_table_csv(std::ostream& out, std::span<const std::string> names,
                          std::span<const PriorityList> lists);

}  // namespace sushi
