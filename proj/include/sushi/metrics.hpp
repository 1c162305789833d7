#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sushi/agents.hpp"
#include "sushi/cards.hpp"
#include "sushi/game.hpp"
#include "sushi/observation.hpp"
#include "sushi/qnetwork.hpp"

namespace sushi {

// Size of the symmetric difference of the two menus' card names.
int envsim(const Menu& a, const Menu& b);
// One swap changes two cards, so this is envsim / 2.
inline int swap_distance(const Menu& a, const Menu& b) { return envsim(a, b) / 2; }

// KL(p || q) in nats, q clamped below at 1e-12. ShapeError on length
// mismatch, StatsError when either vector is not a distribution.
double kl_divergence(std::span<const double> p, std::span<const double> q);

struct TTestReport {
  double mean_a = 0, mean_b = 0, mean_diff = 0;
  double t_statistic = 0, degrees_of_freedom = 0, p_value = 1;
  int n_a = 0, n_b = 0;
};

// Welch's unequal-variance t-test, two-sided. StatsError when a sample has
// fewer than two values or both variances are zero.
TTestReport welch_t_test(std::span<const double> xs, std::span<const double> ys);

// Two-sided p-value of a t statistic with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct Correlation {
  double rho = 0;
  double p_value = 1;
  int n = 0;
};

// Spearman rank correlation with average ranks for ties; the p-value uses
// the t approximation with n - 2 degrees of freedom.
Correlation spearman(std::span<const double> x, std::span<const double> y);

struct Interval {
  double low = 0, high = 0;
};
// Wilson score interval for `successes` out of `n` (successes may be
// fractional).
Interval wilson_interval(double successes, int n, double z = 1.959963984540054);

struct WinRateReport {
  int games = 0;
  double wins = 0;  // tied wins credit 1/|winners|
  double win_rate = 0;
  Interval ci;
  std::vector<double> rewards;  // agent's score + win bonus, per game
  std::vector<int> scores;      // agent's final score, per game
};

// Plays n_games with the agent in seat g mod P and the opponents, in
// order, in the remaining seats. Game g uses derive_seed(seed, g).
WinRateReport evaluate_win_rate(const Agent& agent, std::span<const Agent* const> opponents,
                                const std::shared_ptr<const GameConfig>& config, int n_games,
                                std::uint64_t seed, int workers = 1);

// ---------------------------------------------------------------- sweep

struct SweepModel {
  std::string train_name;
  Menu train_menu;
  std::uint64_t seed = 0;  // training seed, reported only
  AgentPtr agent;
};

struct SweepTest {
  std::string name;
  std::shared_ptr<const GameConfig> config;
};

// One (train config, test config) pair, pooled over models and batches.
struct SweepCell {
  std::string train_name;
  std::string test_name;
  int envsim = 0;
  int swaps = 0;
  int models = 0;
  int batches = 0;
  int games = 0;
  double mean_win_rate = 0;
  double std_win_rate = 0;  // over (model, batch) win rates
  std::vector<double> batch_win_rates;
};

struct SweepGroup {
  int envsim = 0;
  int swaps = 0;
  int cells = 0;
  double mean_win_rate = 0;  // mean of the cell means
  double std_win_rate = 0;   // over the cell means
};

// Every model against every test config, `batches` batches of
// `games_per_batch` games each against copies of `opponent`. Batch b uses
// seed derive_seed(seed, b) for every cell.
std::vector<SweepCell> generalization_sweep(std::span<const SweepModel> models,
                                            std::span<const SweepTest> tests,
                                            const Agent& opponent, int games_per_batch,
                                            int batches, std::uint64_t seed, int workers = 1);
std::vector<SweepGroup> group_by_envsim(std::span<const SweepCell> cells);
// Spearman correlation between envsim and cell mean win rate.
Correlation envsim_trend(std::span<const SweepCell> cells);

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells);
void write_groups_csv(std::ostream& out, std::span<const SweepGroup> groups);

// ---------------------------------------------------------------- memory

struct PerturbationRecord {
  int state = 0;
  int perturbation = 0;
  int source_slot = 0;  // remembered card removed
  int target_slot = 0;  // card put in its place
  double kl = 0;
  int original_action = 0;   // argmax slot before
  int perturbed_action = 0;  // argmax slot after
  double top_shift = 0;      // change in probability of the original argmax
};

struct StateRecord {
  int state = 0;
  int round = 0;
  int turn = 0;
  int seat = 0;
  double mean_kl = 0;
};

struct MemInfluenceReport {
  double mean_kl = 0;
  int states = 0;
  int perturbations_per_state = 0;
  std::vector<StateRecord> per_state;
  std::vector<PerturbationRecord> records;
  std::vector<PerturbationRecord> argmax_shifts;  // records whose argmax changed
  PerturbationRecord max_shift;                   // largest |top_shift|
};

struct MemInfluenceState {
  Observation obs;
  int round = 0;
  int turn = 0;
  int seat = 0;
};

// The n_states observations mem_influence perturbs: greedy self-play of
// `net` stopped at turn >= ceil(H/2) with a known, nonempty upstream hand.
std::vector<MemInfluenceState> mem_influence_states(const QNetwork& net, const FeatureLayout& layout,
                                                    const GameConfig& game, int n_states,
                                                    std::uint64_t seed);

// Samples n_states observations from self-play games of the network (turn
// >= ceil(H/2), upstream memory known and nonempty), applies n_pert
// memory perturbations to each, and averages KL(perturbed || original)
// of the softmax policy. ConfigError when the layout has no memory block.
MemInfluenceReport mem_influence(const QNetwork& net, const FeatureLayout& layout,
                                 const GameConfig& game, int n_states, int n_pert,
                                 std::uint64_t seed, double temperature = 1.0);

void write_meminfluence_csv(std::ostream& out, const MemInfluenceReport& r,
                            const FeatureLayout& layout);

}  // namespace sushi
