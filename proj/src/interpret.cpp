#include "sushi/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "sushi/error.hpp"
#include "sushi/parallel.hpp"
#include "sushi/scoring.hpp"

namespace sushi {

using nlohmann::json;

// ---------------------------------------------------------------- dataset

PreferenceDataset collect_pairwise_dataset(const Agent& agent, const GameConfig& game,
                                           int n_games, std::uint64_t seed,
                                           const FeatureLayout& layout,
                                           std::optional<int> only_round, int workers) {
  if (n_games < 0) throw ConfigError("n_games must be non-negative");
  if (only_round && (*only_round < 0 || *only_round >= game.rounds)) {
    throw ConfigError("round filter " + std::to_string(*only_round) + " is outside 0.." +
                      std::to_string(game.rounds - 1));
  }
  const auto cfg = std::make_shared<const GameConfig>(game);
  const ObservationEncoder enc(layout, game.menu);
  std::vector<std::vector<PreferenceSample>> per_game(static_cast<size_t>(n_games));
  parallel_for(n_games, workers, [&](int g) {
    const std::uint64_t gs = derive_seed(seed, static_cast<std::uint64_t>(g));
    GameState s = new_game(cfg, gs);
    const int p = s.players();
    std::vector<Rng> rngs;
    for (int i = 0; i < p; ++i) rngs.emplace_back(derive_seed(gs, 1, static_cast<std::uint64_t>(i)));
    std::vector<KindId> actions(static_cast<size_t>(p));
    auto& out = per_game[static_cast<size_t>(g)];
    while (!s.finished) {
      for (int seat = 0; seat < p; ++seat) {
        const PlayerView view(s, seat);
        const auto legal = legal_actions(s, seat);
        const KindId a = agent.act(view, legal, rngs[seat]);
        if (s.hands[seat][a] <= 0) throw ActionError(seat, "agent chose a card not in hand");
        actions[seat] = a;
        if (s.hands[seat].size() != 2 || legal.size() != 2) continue;
        if (only_round && s.round != *only_round) continue;
        const KindId other = legal[0] == a ? legal[1] : legal[0];
        out.push_back({enc.encode(view), enc.slot(a), enc.slot(other), g, s.round, s.turn, seat});
      }
      apply_step(s, actions);
    }
  });
  PreferenceDataset d{layout, {}};
  for (auto& v : per_game) {
    for (auto& x : v) d.samples.push_back(std::move(x));
  }
  return d;
}

// ---------------------------------------------------------------- rules

void RuleParams::validate() const {
  if (trees < 1) throw ConfigError("rules.trees must be >= 1");
  if (max_depth < 1) throw ConfigError("rules.max_depth must be >= 1");
  if (!(bootstrap > 0 && bootstrap <= 1)) throw ConfigError("rules.bootstrap must be in (0, 1]");
  if (min_precision < 0) throw ConfigError("rules.min_precision must be >= 0");
  if (min_recall < 0) throw ConfigError("rules.min_recall must be >= 0");
  if (max_rules_per_kind < 1) throw ConfigError("rules.max_rules_per_kind must be >= 1");
  if (workers < 1) throw ConfigError("rules.workers must be >= 1");
}

json RuleParams::to_json() const {
  return {{"trees", trees},
          {"max_depth", max_depth},
          {"bootstrap", bootstrap},
          {"min_precision", min_precision},
          {"min_recall", min_recall},
          {"max_rules_per_kind", max_rules_per_kind},
          {"seed", seed}};
}

RuleParams RuleParams::from_json(const json& j) {
  RuleParams p;
  if (!j.is_object()) throw ConfigError("rule parameters must be an object");
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "trees") p.trees = v.get<int>();
      else if (k == "max_depth") p.max_depth = v.get<int>();
      else if (k == "bootstrap") p.bootstrap = v.get<double>();
      else if (k == "min_precision") p.min_precision = v.get<double>();
      else if (k == "min_recall") p.min_recall = v.get<double>();
      else if (k == "max_rules_per_kind") p.max_rules_per_kind = v.get<int>();
      else if (k == "seed") p.seed = v.get<std::uint64_t>();
      else if (k == "workers") p.workers = v.get<int>();
      else throw ConfigError("rules: unknown key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("rules: ") + e.what());
  }
  p.validate();
  return p;
}

namespace {

constexpr int kMaxBins = 64;

// Features discretised once: bins[f][i] is sample i's bin, and a split
// after bin b uses threshold cuts[f][b].
struct Binned {
  int n = 0, f = 0;
  std::vector<std::vector<std::uint8_t>> bins;
  std::vector<std::vector<double>> cuts;
};

Binned bin_features(const PreferenceDataset& d) {
  Binned b;
  b.n = static_cast<int>(d.samples.size());
  b.f = d.layout.input_dim();
  b.bins.assign(static_cast<size_t>(b.f), std::vector<std::uint8_t>(static_cast<size_t>(b.n)));
  b.cuts.resize(static_cast<size_t>(b.f));
  std::vector<double> col(static_cast<size_t>(b.n));
  for (int f = 0; f < b.f; ++f) {
    for (int i = 0; i < b.n; ++i) col[i] = d.samples[i].features[f];
    std::vector<double> vals = col;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (static_cast<int>(vals.size()) > kMaxBins) {
      // Quantile representatives.
      std::vector<double> q;
      std::vector<double> sorted = col;
      std::sort(sorted.begin(), sorted.end());
      for (int k = 1; k <= kMaxBins; ++k) {
        q.push_back(sorted[static_cast<size_t>(std::min<long>(b.n - 1, static_cast<long>(k) * b.n / kMaxBins))]);
      }
      q.erase(std::unique(q.begin(), q.end()), q.end());
      vals = q;
    }
    auto& cuts = b.cuts[f];
    for (size_t k = 0; k + 1 < vals.size(); ++k) cuts.push_back(0.5 * (vals[k] + vals[k + 1]));
    for (int i = 0; i < b.n; ++i) {
      b.bins[f][i] = static_cast<std::uint8_t>(std::lower_bound(cuts.begin(), cuts.end(), col[i]) - cuts.begin());
    }
  }
  return b;
}

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  int bin = 0;
  int left = -1, right = -1;
  bool positive = false;
};

double gini(double w, double pos) {
  if (w <= 0) return 0;
  const double p = pos / w;
  return 2 * p * (1 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(const Binned& b, const std::vector<char>& y, const std::vector<int>& weight, int max_depth)
      : b_(b), y_(y), w_(weight), max_depth_(max_depth) {}

  std::vector<TreeNode> build(std::vector<int> idx) {
    nodes_.clear();
    grow(std::move(idx), 0);
    return nodes_;
  }

 private:
  int grow(std::vector<int> idx, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double w = 0, pos = 0;
    for (int i : idx) {
      w += w_[i];
      if (y_[i]) pos += w_[i];
    }
    nodes_[id].positive = pos > 0.5 * w;
    if (depth >= max_depth_ || pos == 0 || pos == w) return id;

    const double parent = gini(w, pos);
    double best = parent - 1e-12;
    int best_f = -1, best_bin = 0;
    std::vector<double> hw(kMaxBins), hp(kMaxBins);
    for (int f = 0; f < b_.f; ++f) {
      const int nb = static_cast<int>(b_.cuts[f].size()) + 1;
      if (nb < 2) continue;
      std::fill_n(hw.begin(), nb, 0.0);
      std::fill_n(hp.begin(), nb, 0.0);
      const auto& col = b_.bins[f];
      for (int i : idx) {
        hw[col[i]] += w_[i];
        if (y_[i]) hp[col[i]] += w_[i];
      }
      double lw = 0, lp = 0;
      for (int k = 0; k + 1 < nb; ++k) {
        lw += hw[k];
        lp += hp[k];
        const double rw = w - lw;
        if (lw <= 0 || rw <= 0) continue;
        const double g = (lw * gini(lw, lp) + rw * gini(rw, pos - lp)) / w;
        if (g < best) {
          best = g;
          best_f = f;
          best_bin = k;
        }
      }
    }
    if (best_f < 0) return id;
    std::vector<int> left, right;
    for (int i : idx) (b_.bins[best_f][i] <= best_bin ? left : right).push_back(i);
    idx.clear();
    idx.shrink_to_fit();
    nodes_[id].feature = best_f;
    nodes_[id].bin = best_bin;
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  const Binned& b_;
  const std::vector<char>& y_;
  const std::vector<int>& w_;
  int max_depth_;
  std::vector<TreeNode> nodes_;
};

// Merges repeated conditions on one feature and direction into the
// tightest one, ordered by feature.
std::vector<Condition> simplify(const std::vector<Condition>& conds) {
  std::map<std::pair<int, bool>, double> tight;
  for (const auto& c : conds) {
    const auto key = std::make_pair(c.feature, c.greater);
    auto it = tight.find(key);
    if (it == tight.end()) tight[key] = c.threshold;
    else it->second = c.greater ? std::max(it->second, c.threshold) : std::min(it->second, c.threshold);
  }
  std::vector<Condition> out;
  for (const auto& [key, t] : tight) out.push_back({key.first, key.second, t});
  return out;
}

void collect_paths(const std::vector<TreeNode>& nodes, const Binned& b, int id,
                   std::vector<Condition>& path, std::vector<std::vector<Condition>>& out) {
  const auto& n = nodes[id];
  if (n.feature < 0) {
    if (n.positive && !path.empty()) out.push_back(simplify(path));
    return;
  }
  const double t = b.cuts[n.feature][n.bin];
  path.push_back({n.feature, false, t});
  collect_paths(nodes, b, n.left, path, out);
  path.back().greater = true;
  collect_paths(nodes, b, n.right, path, out);
  path.pop_back();
}

std::set<int> feature_set(const Rule& r) {
  std::set<int> s;
  for (const auto& c : r.conditions) s.insert(c.feature);
  return s;
}

bool better(const Rule& a, const Rule& b) {
  if (a.precision != b.precision) return a.precision > b.precision;
  if (a.recall != b.recall) return a.recall > b.recall;
  return a.conditions.size() < b.conditions.size();
}

}  // namespace

bool rule_matches(const Rule& rule, std::span<const double> x) {
  for (const auto& c : rule.conditions) {
    const double v = x[static_cast<size_t>(c.feature)];
    if (c.greater ? !(v > c.threshold) : !(v <= c.threshold)) return false;
  }
  return true;
}

std::vector<Rule> fit_rules(const PreferenceDataset& data, const RuleParams& params) {
  params.validate();
  std::vector<int> targets;
  for (const auto& s : data.samples) targets.push_back(s.chosen);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  if (targets.size() < 2) {
    throw FittingError("rule fitting needs at least two chosen kinds, the dataset has " +
                       std::to_string(targets.size()));
  }
  const Binned b = bin_features(data);
  const int n = b.n;
  const int m = std::max(1, static_cast<int>(std::lround(params.bootstrap * n)));
  const int n_targets = static_cast<int>(targets.size());

  // Candidates per (target, tree) task.
  std::vector<std::vector<Rule>> candidates(static_cast<size_t>(n_targets * params.trees));
  parallel_for(n_targets * params.trees, params.workers, [&](int task) {
    const int t = task / params.trees, tree = task % params.trees;
    const int target = targets[t];
    std::vector<char> y(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) y[i] = data.samples[i].chosen == target;
    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(target), static_cast<std::uint64_t>(tree)));
    std::vector<int> weight(static_cast<size_t>(n), 0);
    for (int k = 0; k < m; ++k) ++weight[uniform_below(rng, static_cast<std::uint64_t>(n))];
    std::vector<int> in_bag, oob;
    for (int i = 0; i < n; ++i) (weight[i] > 0 ? in_bag : oob).push_back(i);
    int oob_pos = 0;
    for (int i : oob) oob_pos += y[i];
    if (oob_pos == 0) return;
    const auto nodes = TreeBuilder(b, y, weight, params.max_depth).build(in_bag);
    std::vector<std::vector<Condition>> paths;
    std::vector<Condition> path;
    collect_paths(nodes, b, 0, path, paths);
    for (auto& conds : paths) {
      Rule r{std::move(conds), target, 0, 0, 0};
      int covered = 0, tp = 0;
      for (int i : oob) {
        if (!rule_matches(r, data.samples[i].features)) continue;
        ++covered;
        tp += y[i];
      }
      if (covered == 0) continue;
      r.precision = static_cast<double>(tp) / covered;
      r.recall = static_cast<double>(tp) / oob_pos;
      r.support = covered;
      if (r.precision < params.min_precision || r.recall < params.min_recall) continue;
      candidates[static_cast<size_t>(task)].push_back(std::move(r));
    }
  });

  std::vector<Rule> out;
  for (int t = 0; t < n_targets; ++t) {
    std::map<std::set<int>, Rule> best;
    for (int tree = 0; tree < params.trees; ++tree) {
      for (const auto& r : candidates[static_cast<size_t>(t * params.trees + tree)]) {
        const auto key = feature_set(r);
        auto it = best.find(key);
        if (it == best.end()) best.emplace(key, r);
        else if (better(r, it->second)) it->second = r;
      }
    }
    std::vector<Rule> kept;
    for (auto& [key, r] : best) kept.push_back(std::move(r));
    std::stable_sort(kept.begin(), kept.end(), better);
    if (static_cast<int>(kept.size()) > params.max_rules_per_kind) kept.resize(static_cast<size_t>(params.max_rules_per_kind));
    for (auto& r : kept) out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

std::string threshold_text(double t) {
  std::ostringstream s;
  s.precision(6);
  s << t;
  return s.str();
}

}  // namespace

std::string format_rule(const Rule& rule, const FeatureLayout& layout) {
  std::string s = "IF ";
  for (size_t i = 0; i < rule.conditions.size(); ++i) {
    const auto& c = rule.conditions[i];
    if (i) s += " AND ";
    s += layout.feature_name(c.feature) + (c.greater ? " > " : " <= ") + threshold_text(c.threshold);
  }
  s += " THEN play " + layout.universe[static_cast<size_t>(rule.target)] + " [precision " +
       fixed(rule.precision, 2) + ", recall " + fixed(rule.recall, 2) + "]";
  return s;
}

json rules_to_json(std::span<const Rule> rules, const FeatureLayout& layout) {
  json arr = json::array();
  for (const auto& r : rules) {
    json conds = json::array();
    for (const auto& c : r.conditions) {
      conds.push_back({{"feature", c.feature},
                       {"name", layout.feature_name(c.feature)},
                       {"op", c.greater ? ">" : "<="},
                       {"threshold", c.threshold}});
    }
    arr.push_back({{"target", layout.universe[static_cast<size_t>(r.target)]},
                   {"conditions", conds},
                   {"precision", r.precision},
                   {"recall", r.recall},
                   {"support", r.support},
                   {"text", format_rule(r, layout)}});
  }
  return arr;
}

// ---------------------------------------------------------------- priorities

PreferenceMatrix::PreferenceMatrix(std::vector<std::string> names) : kinds(std::move(names)) {
  const size_t n = kinds.size();
  wins.assign(n, std::vector<int>(n, 0));
  trials.assign(n, std::vector<int>(n, 0));
}

int PreferenceMatrix::total() const {
  int t = 0;
  for (int a = 0; a < size(); ++a) {
    for (int b = a + 1; b < size(); ++b) t += trials[a][b];
  }
  return t;
}

void PreferenceMatrix::add(int chosen, int alternative) {
  if (chosen == alternative) throw StateError("a preference needs two different kinds");
  ++wins[chosen][alternative];
  ++trials[chosen][alternative];
  ++trials[alternative][chosen];
}

PreferenceMatrix preference_matrix(const PreferenceDataset& data) {
  PreferenceMatrix m(data.layout.universe);
  for (const auto& s : data.samples) m.add(s.chosen, s.alternative);
  return m;
}

std::vector<double> borda_scores(const PreferenceMatrix& m) {
  std::vector<double> score(static_cast<size_t>(m.size()), 0.0);
  for (int a = 0; a < m.size(); ++a) {
    int compared = 0;
    double sum = 0;
    for (int b = 0; b < m.size(); ++b) {
      if (m.trials[a][b] == 0) continue;
      ++compared;
      sum += static_cast<double>(m.wins[a][b]) / m.trials[a][b];
    }
    score[a] = compared ? sum / compared : 0.0;
  }
  return score;
}

PriorityList reconstruct_priority(const PreferenceMatrix& m) {
  if (m.total() == 0) throw ReconstructionError("preference matrix has no comparisons");
  const auto score = borda_scores(m);
  std::vector<int> total(static_cast<size_t>(m.size()), 0);
  for (int a = 0; a < m.size(); ++a) total[a] = std::accumulate(m.trials[a].begin(), m.trials[a].end(), 0);
  std::vector<int> tested, untested;
  for (int a = 0; a < m.size(); ++a) (total[a] > 0 ? tested : untested).push_back(a);
  // Preference among equally good choices: kinds that rarely survive to
  // the last two cards first, then Borda score, then slot order.
  const auto before = [&](int a, int b) {
    if (total[a] != total[b]) return total[a] < total[b];
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  };
  std::vector<int> order;
  const int n = static_cast<int>(tested.size());
  if (n <= kExactRankingLimit) {
    // cost[S]: fewest disagreements when the kinds outside S are ranked
    // below S in the best order. Placing k next disagrees with every
    // unplaced j that beat k.
    const std::uint32_t full = (1u << n) - 1;
    std::vector<long> cost(static_cast<size_t>(full) + 1, 0);
    const auto step = [&](std::uint32_t placed, int k) {
      long c = 0;
      for (int j = 0; j < n; ++j) {
        if (j != k && !(placed >> j & 1u)) c += m.wins[tested[j]][tested[k]];
      }
      return c;
    };
    for (std::uint32_t s = full; s-- > 0;) {
      long best = -1;
      for (int k = 0; k < n; ++k) {
        if (s >> k & 1u) continue;
        const long c = step(s, k) + cost[s | (1u << k)];
        if (best < 0 || c < best) best = c;
      }
      cost[s] = best;
    }
    std::uint32_t placed = 0;
    for (int pos = 0; pos < n; ++pos) {
      int pick = -1;
      for (int k = 0; k < n; ++k) {
        if (placed >> k & 1u) continue;
        if (step(placed, k) + cost[placed | (1u << k)] != cost[placed]) continue;
        if (pick < 0 || before(tested[k], tested[pick])) pick = k;
      }
      placed |= 1u << pick;
      order.push_back(tested[pick]);
    }
  } else {
    order = tested;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (score[a] != score[b]) return score[a] > score[b];
      return before(a, b);
    });
  }
  order.insert(order.end(), untested.begin(), untested.end());
  PriorityList out;
  for (int k : order) out.ranking.push_back(m.kinds[k]);
  return out;
}

double kendall_tau(const PriorityList& a, const PriorityList& b) {
  std::map<std::string, int> pos;
  for (size_t i = 0; i < b.ranking.size(); ++i) pos[b.ranking[i]] = static_cast<int>(i);
  std::set<std::string> sa(a.ranking.begin(), a.ranking.end());
  if (sa.size() != a.ranking.size() || pos.size() != b.ranking.size() || sa.size() != pos.size() ||
      !std::all_of(sa.begin(), sa.end(), [&](const std::string& k) { return pos.count(k) > 0; })) {
    throw ComparisonError("rankings must order the same kinds exactly once");
  }
  const int n = static_cast<int>(a.ranking.size());
  if (n < 2) throw ComparisonError("rankings need at least two kinds");
  long discordant = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (pos[a.ranking[i]] > pos[a.ranking[j]]) ++discordant;
    }
  }
  const double pairs = 0.5 * n * (n - 1);
  return 1.0 - 2.0 * static_cast<double>(discordant) / pairs;
}

// ---------------------------------------------------------------- logs

namespace {

struct Tally {
  double points = 0;
  int copies = 0;
};

void attribute(const std::vector<Contribution>& contributions, const Menu& menu,
               std::map<std::string, Tally>& tally) {
  for (const auto& c : contributions) {
    double total = 0;
    for (const auto& s : c.shares) total += s.weight;
    if (c.shares.empty() || total <= 0) continue;
    for (const auto& s : c.shares) tally[menu[s.kind].name].points += c.points * s.weight / total;
  }
}

int sum_points(const std::vector<Contribution>& cs) {
  int t = 0;
  for (const auto& c : cs) t += c.points;
  return t;
}

}  // namespace

LogPriority priority_from_logs(std::span<const json> events) {
  if (events.empty()) throw InputError("game log is empty");
  std::map<std::string, Tally> tally;
  std::vector<std::string> seen_order;  // every menu kind, first appearance order
  LogPriority out;

  std::optional<Menu> menu;
  int players = 0, round = -1, pending_turn = -1;
  std::vector<Board> boards;
  std::vector<Hand> desserts;
  const auto flush_turn = [&] {
    if (pending_turn >= 0) resolve_collisions(boards, pending_turn, *menu);
    pending_turn = -1;
  };
  const auto fail = [](size_t i, const std::string& what) {
    throw InputError("game log event " + std::to_string(i + 1) + ": " + what);
  };

  for (size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    try {
      const auto type = e.at("event").get<std::string>();
      if (type == "game_start") {
        menu = Menu::from_json(e.at("menu"));
        players = e.at("players").get<int>();
        boards.assign(static_cast<size_t>(players), Board(menu->size()));
        desserts.assign(static_cast<size_t>(players), Hand(menu->size()));
        round = -1;
        pending_turn = -1;
        for (const auto& k : menu->kinds) {
          if (!tally.count(k.name)) {
            tally[k.name];
            seen_order.push_back(k.name);
          }
        }
      } else if (type == "pick") {
        if (!menu) fail(i, "pick before game_start");
        const int r = e.at("round").get<int>(), t = e.at("turn").get<int>();
        const int seat = e.at("seat").get<int>();
        if (seat < 0 || seat >= players) fail(i, "seat out of range");
        if (r != round) {
          flush_turn();
          boards.assign(static_cast<size_t>(players), Board(menu->size()));
          round = r;
        }
        if (t != pending_turn) flush_turn();
        pending_turn = t;
        const auto k = menu->find(e.at("card").get<std::string>());
        if (!k) fail(i, "card '" + e.at("card").get<std::string>() + "' is not on the menu");
        boards[seat].play(t, *k, *menu);
        ++tally[(*menu)[*k].name].copies;
      } else if (type == "round_end") {
        if (!menu) fail(i, "round_end before game_start");
        flush_turn();
        const auto deltas = e.at("deltas").get<std::vector<int>>();
        for (int seat = 0; seat < players; ++seat) {
          const auto cs = board_contributions(boards, seat, *menu);
          if (sum_points(cs) != deltas.at(static_cast<size_t>(seat))) {
            fail(i, "replayed round score of seat " + std::to_string(seat) + " is " +
                        std::to_string(sum_points(cs)) + ", the log says " +
                        std::to_string(deltas[static_cast<size_t>(seat)]));
          }
          attribute(cs, *menu, tally);
          for (int k = 0; k < menu->size(); ++k) {
            if ((*menu)[k].is_dessert()) desserts[seat][k] += boards[seat].counts[k];
          }
        }
      } else if (type == "game_end") {
        if (!menu) fail(i, "game_end before game_start");
        const auto dp = e.at("dessert_points").get<std::vector<int>>();
        for (int seat = 0; seat < players; ++seat) {
          const auto cs = dessert_contributions(desserts, seat, *menu);
          if (sum_points(cs) != dp.at(static_cast<size_t>(seat))) {
            fail(i, "replayed dessert score of seat " + std::to_string(seat) + " differs from the log");
          }
          attribute(cs, *menu, tally);
        }
        ++out.games;
        menu.reset();
      } else {
        fail(i, "unknown event '" + type + "'");
      }
    } catch (const json::exception& ex) {
      fail(i, ex.what());
    } catch (const ConfigError& ex) {
      fail(i, ex.what());
    }
  }
  if (out.games == 0) throw InputError("game log has no completed game");

  for (const auto& name : seen_order) {
    const auto& t = tally[name];
    out.kinds.push_back({name, t.points, t.copies, t.copies ? t.points / t.copies : 0.0, t.copies > 0});
  }
  std::stable_sort(out.kinds.begin(), out.kinds.end(), [](const KindPoints& a, const KindPoints& b) {
    if (a.played != b.played) return a.played;
    return a.mean > b.mean;
  });
  for (const auto& k : out.kinds) out.list.ranking.push_back(k.kind);
  return out;
}

void write_rank_table_csv(std::ostream& out, std::span<const std::string> names,
                          std::span<const PriorityList> lists) {
  if (names.size() != lists.size()) throw ShapeError("one name per ranking");
  out << "rank";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  size_t rows = 0;
  for (const auto& l : lists) rows = std::max(rows, l.ranking.size());
  for (size_t r = 0; r < rows; ++r) {
    out << r + 1;
    for (const auto& l : lists) out << ',' << (r < l.ranking.size() ? l.ranking[r] : "");
    out << '\n';
  }
}

}  // namespace sushi
