#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sushi/agents.hpp"
#include "sushi/dqn.hpp"
#include "sushi/metrics.hpp"

namespace sushi {

nlohmann::json read_json_file(const std::filesystem::path& path);

// Opponent reference in experiment files: "random", or a priority list
// path resolved against the referring file.
struct OpponentSpec {
  std::string kind = "random";  // "random" or "priority"
  PriorityList list;
  std::string source;

  AgentPtr make() const;
  static OpponentSpec from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  nlohmann::json to_json() const;
};

// Trains one model per (menu, seed) and cross-evaluates every model on
// every menu.
//
//   {"format": "sushidraft.sweep", "version": 1,
//    "game": "game_my_first_meal.json",
//    "menus": {"from": "menus/a.json", "to": "menus/b.json", "count": 5}
//             | ["menus/a.json", ...],
//    "train": "train_desk.json" | {...},
//    "seeds": [1, 2, 3], "games_per_batch": 200, "batches": 1,
//    "eval_seed": 7, "opponent": "random" | "priority.json"}
struct SweepSpec {
  GameConfig base;
  std::vector<Menu> menus;
  TrainConfig train;  // universe is the union of the menus
  std::vector<std::uint64_t> seeds;
  int games_per_batch = 100;
  int batches = 100;
  std::uint64_t eval_seed = 0;
  OpponentSpec opponent;

  static SweepSpec load(const std::filesystem::path& path);
  static SweepSpec from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  // Fully resolved form, recorded in manifests.
  nlohmann::json to_json() const;

  GameConfig game(int menu) const { return base.with_menu(menus[static_cast<size_t>(menu)]); }
  TrainConfig train_for(std::uint64_t seed) const;
  // "<dir>/<index>_<menu name>/seed_<seed>.json"
  std::filesystem::path checkpoint_path(const std::filesystem::path& dir, int menu,
                                        std::uint64_t seed) const;
};

// Kinds of all menus in catalog order.
std::vector<std::string> menu_union(const std::vector<Menu>& menus);

struct TrainJob {
  TrainConfig config;
  GameConfig game;
  std::filesystem::path path;
};

// Trains the jobs whose checkpoint file is missing (all of them when
// `force`), up to `workers` at a time; returns the paths written.
std::vector<std::filesystem::path> train_jobs(const std::vector<TrainJob>& jobs, int workers,
                                              bool force = false);

// TrainingError listing every missing file.
void require_checkpoints(const std::vector<std::filesystem::path>& paths);

std::vector<TrainJob> sweep_jobs(const SweepSpec& spec, const std::filesystem::path& dir);
std::vector<SweepCell> run_sweep(const SweepSpec& spec, const std::filesystem::path& dir,
                                 int workers);

// Memory-on versus memory-off cohorts trained with the same seeds and
// evaluated on the same games.
//
//   {"format": "sushidraft.ablation", "version": 1,
//    "game": "game_my_first_meal.json", "train": "train_desk.json",
//    "seeds": [1, 2, 3, 4, 5], "eval_games": 500, "eval_seed": 11,
//    "opponent": "random" | "priority.json"}
struct AblationSpec {
  GameConfig game;
  TrainConfig train;
  std::vector<std::uint64_t> seeds;
  int eval_games = 500;
  std::uint64_t eval_seed = 0;
  OpponentSpec opponent;

  static AblationSpec load(const std::filesystem::path& path);
  static AblationSpec from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  nlohmann::json to_json() const;

  TrainConfig train_for(bool memory, std::uint64_t seed) const;
  // "<dir>/memory_<on|off>/seed_<seed>.json"
  std::filesystem::path checkpoint_path(const std::filesystem::path& dir, bool memory,
                                        std::uint64_t seed) const;
};

struct CohortResult {
  bool memory = false;
  std::vector<std::uint64_t> seeds;
  std::vector<WinRateReport> reports;  // per model
  std::vector<double> rewards;         // pooled per-game rewards
};

struct AblationResult {
  CohortResult on, off;
  TTestReport test;  // on versus off
};

std::vector<TrainJob> ablation_jobs(const AblationSpec& spec, const std::filesystem::path& dir);
AblationResult run_ablation(const AblationSpec& spec, const std::filesystem::path& dir,
                            int workers);

}  // namespace sushi
