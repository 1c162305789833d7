#include "sushi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include <boost/math/special_functions/beta.hpp>

#include "sushi/dqn.hpp"
#include "sushi/error.hpp"
#include "sushi/parallel.hpp"
#include "sushi/runner.hpp"

namespace sushi {

namespace {

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample variance (n - 1 denominator).
double variance(std::span<const double> v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double stddev_or_zero(std::span<const double> v) {
  return v.size() < 2 ? 0.0 : std::sqrt(variance(v));
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (size_t i = 0; i < idx.size();) {
    size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

int envsim(const Menu& a, const Menu& b) {
  const auto an = a.names();
  const auto bn = b.names();
  const std::set<std::string> sa(an.begin(), an.end());
  const std::set<std::string> sb(bn.begin(), bn.end());
  std::vector<std::string> diff;
  std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                std::back_inserter(diff));
  return static_cast<int>(diff.size());
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ShapeError("kl_divergence: lengths " + std::to_string(p.size()) + " and " +
                     std::to_string(q.size()));
  }
  const auto check = [](std::span<const double> v, const char* name) {
    double total = 0;
    for (double x : v) {
      if (!(x >= 0.0)) throw StatsError(std::string("kl_divergence: negative entry in ") + name);
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw StatsError(std::string("kl_divergence: ") + name + " sums to " + std::to_string(total));
    }
  };
  check(p, "p");
  check(q, "q");
  double kl = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0) kl += p[i] * std::log(p[i] / std::max(q[i], 1e-12));
  }
  return kl;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0)) throw StatsError("degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(boost::math::ibeta(df / 2.0, 0.5, x), 0.0, 1.0);
}

TTestReport welch_t_test(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() < 2 || ys.size() < 2) {
    throw StatsError("welch_t_test needs at least two values per sample (got " +
                     std::to_string(xs.size()) + " and " + std::to_string(ys.size()) + ")");
  }
  TTestReport r;
  r.n_a = static_cast<int>(xs.size());
  r.n_b = static_cast<int>(ys.size());
  r.mean_a = mean(xs);
  r.mean_b = mean(ys);
  r.mean_diff = r.mean_a - r.mean_b;
  const double ea = variance(xs) / r.n_a;
  const double eb = variance(ys) / r.n_b;
  const double se2 = ea + eb;
  if (!(se2 > 0)) throw StatsError("welch_t_test: both samples have zero variance");
  r.t_statistic = r.mean_diff / std::sqrt(se2);
  r.degrees_of_freedom = se2 * se2 / (ea * ea / (r.n_a - 1) + eb * eb / (r.n_b - 1));
  r.p_value = student_t_two_sided_p(r.t_statistic, r.degrees_of_freedom);
  return r;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("spearman: samples differ in length");
  if (x.size() < 3) throw StatsError("spearman needs at least three pairs");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mx = mean(rx), my = mean(ry);
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) throw StatsError("spearman: a sample is constant");
  Correlation c;
  c.n = static_cast<int>(x.size());
  c.rho = sxy / std::sqrt(sxx * syy);
  const double df = c.n - 2;
  if (std::abs(c.rho) >= 1.0) {
    c.p_value = 0.0;
  } else {
    c.p_value = student_t_two_sided_p(c.rho * std::sqrt(df / (1 - c.rho * c.rho)), df);
  }
  return c;
}

Interval wilson_interval(double successes, int n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double p = successes / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

WinRateReport evaluate_win_rate(const Agent& agent, std::span<const Agent* const> opponents,
                                const std::shared_ptr<const GameConfig>& config, int n_games,
                                std::uint64_t seed, int workers) {
  const int p = config->players;
  if (static_cast<int>(opponents.size()) != p - 1) {
    throw ConfigError("evaluate_win_rate: need " + std::to_string(p - 1) + " opponents, got " +
                      std::to_string(opponents.size()));
  }
  if (n_games < 1) throw ConfigError("evaluate_win_rate: n_games must be >= 1");
  WinRateReport r;
  r.games = n_games;
  std::vector<double> credit(static_cast<size_t>(n_games));
  r.rewards.resize(static_cast<size_t>(n_games));
  r.scores.resize(static_cast<size_t>(n_games));
  parallel_for(n_games, workers, [&](int g) {
    const int seat = g % p;
    std::vector<const Agent*> seats;
    for (int s = 0, o = 0; s < p; ++s) seats.push_back(s == seat ? &agent : opponents[o++]);
    const auto rec = run_game(config, seats, derive_seed(seed, static_cast<std::uint64_t>(g)));
    const auto& res = rec.result;
    credit[g] = res.is_winner(seat) ? 1.0 / static_cast<double>(res.winners.size()) : 0.0;
    r.rewards[g] = game_reward(res, seat);
    r.scores[g] = res.scores[seat];
  });
  r.wins = std::accumulate(credit.begin(), credit.end(), 0.0);
  r.win_rate = r.wins / n_games;
  r.ci = wilson_interval(r.wins, n_games);
  return r;
}

// ---------------------------------------------------------------- sweep

std::vector<SweepCell> generalization_sweep(std::span<const SweepModel> models,
                                            std::span<const SweepTest> tests,
                                            const Agent& opponent, int games_per_batch,
                                            int batches, std::uint64_t seed, int workers) {
  if (models.empty() || tests.empty()) throw ConfigError("sweep needs models and test configs");
  if (games_per_batch < 1 || batches < 1) throw ConfigError("sweep needs games and batches >= 1");
  const int nm = static_cast<int>(models.size());
  const int nt = static_cast<int>(tests.size());
  for (const auto& t : tests) {
    if (t.config->players < 2) throw ConfigError("sweep test config needs players >= 2");
  }
  std::vector<double> rates(static_cast<size_t>(nm * nt * batches));
  parallel_for(nm * nt * batches, workers, [&](int task) {
    const int b = task % batches;
    const int t = (task / batches) % nt;
    const int m = task / (batches * nt);
    const auto& cfg = tests[t].config;
    std::vector<const Agent*> opp(static_cast<size_t>(cfg->players - 1), &opponent);
    rates[task] = evaluate_win_rate(*models[m].agent, opp, cfg, games_per_batch,
                                    derive_seed(seed, static_cast<std::uint64_t>(b)))
                      .win_rate;
  });

  std::vector<std::string> train_names;
  for (const auto& m : models) {
    if (std::find(train_names.begin(), train_names.end(), m.train_name) == train_names.end()) {
      train_names.push_back(m.train_name);
    }
  }
  std::vector<SweepCell> cells;
  for (const auto& tn : train_names) {
    for (int t = 0; t < nt; ++t) {
      SweepCell c;
      c.train_name = tn;
      c.test_name = tests[t].name;
      for (int m = 0; m < nm; ++m) {
        if (models[m].train_name != tn) continue;
        const int d = envsim(models[m].train_menu, tests[t].config->menu);
        if (c.models > 0 && d != c.envsim) {
          throw ConfigError("models named '" + tn + "' were trained on different menus");
        }
        c.envsim = d;
        ++c.models;
        for (int b = 0; b < batches; ++b) c.batch_win_rates.push_back(rates[(m * nt + t) * batches + b]);
      }
      c.swaps = c.envsim / 2;
      c.batches = batches;
      c.games = c.models * batches * games_per_batch;
      c.mean_win_rate = mean(c.batch_win_rates);
      c.std_win_rate = stddev_or_zero(c.batch_win_rates);
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

std::vector<SweepGroup> group_by_envsim(std::span<const SweepCell> cells) {
  std::set<int> keys;
  for (const auto& c : cells) keys.insert(c.envsim);
  std::vector<SweepGroup> out;
  for (int k : keys) {
    std::vector<double> means;
    for (const auto& c : cells) {
      if (c.envsim == k) means.push_back(c.mean_win_rate);
    }
    out.push_back({k, k / 2, static_cast<int>(means.size()), mean(means), stddev_or_zero(means)});
  }
  return out;
}

Correlation envsim_trend(std::span<const SweepCell> cells) {
  std::vector<double> x, y;
  for (const auto& c : cells) {
    x.push_back(c.envsim);
    y.push_back(c.mean_win_rate);
  }
  return spearman(x, y);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "train_config,test_config,envsim,swaps,models,batches,games,mean_win_rate,std_win_rate\n";
  out.precision(10);
  for (const auto& c : cells) {
    out << c.train_name << ',' << c.test_name << ',' << c.envsim << ',' << c.swaps << ','
        << c.models << ',' << c.batches << ',' << c.games << ',' << c.mean_win_rate << ','
        << c.std_win_rate << '\n';
  }
}

void write_groups_csv(std::ostream& out, std::span<const SweepGroup> groups) {
  out << "envsim,swaps,cells,mean_win_rate,std_win_rate\n";
  out.precision(10);
  for (const auto& g : groups) {
    out << g.envsim << ',' << g.swaps << ',' << g.cells << ',' << g.mean_win_rate << ','
        << g.std_win_rate << '\n';
  }
}

// ---------------------------------------------------------------- memory

namespace {

// Greedy self-play of `net` up to a random (round, turn >= ceil(H/2)) and
// the observation of a random seat there.
std::optional<MemInfluenceState> sample_state(const QNetwork& net, const ObservationEncoder& enc,
                                         const std::shared_ptr<const GameConfig>& cfg,
                                         std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  const int h = cfg->hand_size;
  const int first_turn = (h + 1) / 2;
  const int round = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(cfg->rounds)));
  const int turn = first_turn + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(h - first_turn)));
  const int seat = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(cfg->players)));
  GameState s = new_game(cfg, derive_seed(seed, 1));
  const int p = s.players();
  std::vector<KindId> actions(static_cast<size_t>(p));
  while (!(s.round == round && s.turn == turn)) {
    for (int i = 0; i < p; ++i) {
      const auto o = enc.observe(PlayerView(s, i));
      const Eigen::VectorXd q = net.forward(enc.features(o));
      actions[i] = *enc.kind_at(masked_argmax(std::span<const double>(q.data(), q.size()), o.legal_mask));
    }
    apply_step(s, actions);
  }
  MemInfluenceState out{enc.observe(PlayerView(s, seat)), round, turn, seat};
  if (out.obs.memory.empty() || !out.obs.memory[0].known || out.obs.memory[0].counts.empty()) {
    return std::nullopt;
  }
  return out;
}

void check_mem_influence_args(const QNetwork& net, const FeatureLayout& layout, int n_states) {
  if (!layout.memory) throw ConfigError("mem_influence needs a network trained with memory");
  if (n_states < 1) throw ConfigError("mem_influence needs n_states >= 1");
  if (net.input_dim() != layout.input_dim() || net.output_dim() != layout.n()) {
    throw ShapeError("network shape does not match the feature layout");
  }
}

}  // namespace

std::vector<MemInfluenceState> mem_influence_states(const QNetwork& net, const FeatureLayout& layout,
                                                    const GameConfig& game, int n_states,
                                                    std::uint64_t seed) {
  check_mem_influence_args(net, layout, n_states);
  const auto cfg = std::make_shared<const GameConfig>(game);
  const ObservationEncoder enc(layout, game.menu);
  std::vector<MemInfluenceState> out;
  for (int i = 0; i < n_states; ++i) {
    std::optional<MemInfluenceState> st;
    for (int attempt = 0; attempt < 1000 && !st; ++attempt) {
      st = sample_state(net, enc, cfg, derive_seed(seed, static_cast<std::uint64_t>(i),
                                                    static_cast<std::uint64_t>(attempt)));
    }
    if (!st) throw StateError("no state with a known upstream hand was found");
    out.push_back(std::move(*st));
  }
  return out;
}

MemInfluenceReport mem_influence(const QNetwork& net, const FeatureLayout& layout,
                                 const GameConfig& game, int n_states, int n_pert,
                                 std::uint64_t seed, double temperature) {
  check_mem_influence_args(net, layout, n_states);
  if (n_pert < 1) throw ConfigError("mem_influence needs n_pert >= 1");
  const ObservationEncoder enc(layout, game.menu);
  const auto states = mem_influence_states(net, layout, game, n_states, seed);
  MemInfluenceReport r;
  r.states = n_states;
  r.perturbations_per_state = n_pert;
  double total = 0;
  for (int i = 0; i < n_states; ++i) {
    const MemInfluenceState* st = &states[static_cast<size_t>(i)];
    const auto x = enc.features(st->obs);
    const auto p0 = policy_distribution(net, x, st->obs.legal_mask, temperature);
    const int a0 = masked_argmax(p0, st->obs.legal_mask);
    Rng prng(derive_seed(seed, 0x7065727475ULL, static_cast<std::uint64_t>(i)));
    double state_kl = 0;
    for (int j = 0; j < n_pert; ++j) {
      const auto pert = perturb_memory(st->obs, prng);
      const auto p1 = policy_distribution(net, enc.features(pert), pert.legal_mask, temperature);
      PerturbationRecord rec;
      rec.state = i;
      rec.perturbation = j;
      for (int k = 0; k < layout.n(); ++k) {
        const int d = pert.memory[0].counts[k] - st->obs.memory[0].counts[k];
        if (d < 0) rec.source_slot = k;
        if (d > 0) rec.target_slot = k;
      }
      rec.kl = kl_divergence(p1, p0);
      rec.original_action = a0;
      rec.perturbed_action = masked_argmax(p1, pert.legal_mask);
      rec.top_shift = p1[a0] - p0[a0];
      state_kl += rec.kl;
      if (r.records.empty() || std::abs(rec.top_shift) > std::abs(r.max_shift.top_shift)) {
        r.max_shift = rec;
      }
      if (rec.perturbed_action != rec.original_action) r.argmax_shifts.push_back(rec);
      r.records.push_back(rec);
    }
    state_kl /= n_pert;
    r.per_state.push_back({i, st->round, st->turn, st->seat, state_kl});
    total += state_kl;
  }
  r.mean_kl = total / n_states;
  return r;
}

void write_meminfluence_csv(std::ostream& out, const MemInfluenceReport& r,
                            const FeatureLayout& layout) {
  out << "state,perturbation,removed,added,kl,original_action,perturbed_action,top_shift\n";
  out.precision(10);
  for (const auto& rec : r.records) {
    out << rec.state << ',' << rec.perturbation << ',' << layout.universe[rec.source_slot] << ','
        << layout.universe[rec.target_slot] << ',' << rec.kl << ','
        << layout.universe[rec.original_action] << ',' << layout.universe[rec.perturbed_action]
        << ',' << rec.top_shift << '\n';
  }
}

}  // namespace sushi
