#include "sushi/experiments.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "sushi/error.hpp"
#include "sushi/parallel.hpp"

namespace sushi {

using nlohmann::json;
namespace fs = std::filesystem;

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path.string() + "': " + e.what());
  }
}

namespace {

void check_format(const json& j, const std::string& format) {
  if (!j.is_object()) throw ConfigError(format + ": expected an object");
  if (j.value("format", std::string()) != format) {
    throw ConfigError("expected format '" + format + "', got '" + j.value("format", std::string()) + "'");
  }
  if (j.value("version", 0) != 1) throw ConfigError(format + ": unsupported version");
}

void reject_unknown(const json& j, const std::string& what, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; })) {
      throw ConfigError(what + ": unknown key '" + k + "'");
    }
  }
}

TrainConfig load_train(const json& j, const fs::path& base) {
  if (j.is_string()) return TrainConfig::load(base / j.get<std::string>());
  return TrainConfig::from_json(j);
}

std::vector<std::uint64_t> load_seeds(const json& j, const std::string& what) {
  auto s = j.get<std::vector<std::uint64_t>>();
  if (s.empty()) throw ConfigError(what + ": seeds must not be empty");
  auto sorted = s;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError(what + ": duplicate seeds");
  }
  return s;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ? c : '_';
  return out;
}

Catalog catalog_of(const json& game_file, const fs::path& base) {
  const auto& c = game_file.at("catalog");
  return c.is_string() ? Catalog::load(base / c.get<std::string>()) : Catalog::from_json(c);
}

}  // namespace

// ---------------------------------------------------------------- opponent

AgentPtr OpponentSpec::make() const {
  if (kind == "random") return std::make_shared<RandomAgent>();
  return std::make_shared<PriorityAgent>(list, "human_like");
}

OpponentSpec OpponentSpec::from_json(const json& j, const fs::path& base_dir) {
  OpponentSpec o;
  if (!j.is_string()) throw ConfigError("opponent must be \"random\" or a priority list path");
  const auto s = j.get<std::string>();
  if (s == "random") return o;
  o.kind = "priority";
  o.list = PriorityList::load(base_dir / s);
  o.source = s;
  return o;
}

json OpponentSpec::to_json() const {
  if (kind == "random") return "random";
  return {{"priority", list.to_json()}, {"source", source}};
}

// ---------------------------------------------------------------- sweep

std::vector<std::string> menu_union(const std::vector<Menu>& menus) {
  std::map<int, std::string> by_id;
  for (const auto& m : menus) {
    for (const auto& k : m.kinds) by_id[k.global_id] = k.name;
  }
  std::vector<std::string> out;
  for (const auto& [id, name] : by_id) out.push_back(name);
  return out;
}

SweepSpec SweepSpec::load(const fs::path& path) {
  const auto j = read_json_file(path);
  try {
    return from_json(j, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError("'" + path.string() + "': " + e.what());
  }
}

SweepSpec SweepSpec::from_json(const json& j, const fs::path& base) {
  check_format(j, "sushidraft.sweep");
  reject_unknown(j, "sweep", {"format", "version", "game", "menus", "train", "seeds",
                              "games_per_batch", "batches", "eval_seed", "opponent"});
  SweepSpec s;
  try {
    const fs::path game_path = base / j.at("game").get<std::string>();
    s.base = GameConfig::load(game_path);
    const auto game_file = read_json_file(game_path);
    const auto catalog = catalog_of(game_file, game_path.parent_path());
    const auto& mj = j.at("menus");
    if (mj.is_object()) {
      reject_unknown(mj, "sweep.menus", {"from", "to", "count"});
      const auto a = Menu::load(catalog, base / mj.at("from").get<std::string>());
      const auto b = Menu::load(catalog, base / mj.at("to").get<std::string>());
      auto path = config_path(a, b);
      const int count = mj.value("count", static_cast<int>(path.size()));
      if (count < 1 || count > static_cast<int>(path.size())) {
        throw ConfigError("sweep.menus.count must be in 1.." + std::to_string(path.size()));
      }
      path.resize(static_cast<size_t>(count));
      s.menus = path;
    } else {
      for (const auto& p : mj) s.menus.push_back(Menu::load(catalog, base / p.get<std::string>()));
    }
    if (s.menus.empty()) throw ConfigError("sweep needs at least one menu");
    for (const auto& m : s.menus) s.base.with_menu(m).validate();
    s.train = load_train(j.at("train"), base);
    s.train.universe = menu_union(s.menus);
    s.seeds = load_seeds(j.at("seeds"), "sweep");
    s.games_per_batch = j.value("games_per_batch", s.games_per_batch);
    s.batches = j.value("batches", s.batches);
    s.eval_seed = j.value("eval_seed", s.eval_seed);
    s.opponent = OpponentSpec::from_json(j.value("opponent", json("random")), base);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep: ") + e.what());
  }
  if (s.games_per_batch < 1 || s.batches < 1) throw ConfigError("sweep: games_per_batch and batches must be >= 1");
  if (s.opponent.kind == "priority") {
    for (const auto& m : s.menus) {
      if (!s.opponent.list.covers(m)) throw ConfigError("sweep: opponent list does not rank every kind of menu '" + m.name + "'");
    }
  }
  return s;
}

json SweepSpec::to_json() const {
  json menus_j = json::array();
  for (const auto& m : menus) menus_j.push_back({{"name", m.name}, {"kinds", m.names()}});
  return {{"format", "sushidraft.sweep.resolved"},
          {"game", base.to_json()},
          {"menus", menus_j},
          {"train", train.to_json()},
          {"seeds", seeds},
          {"games_per_batch", games_per_batch},
          {"batches", batches},
          {"eval_seed", eval_seed},
          {"opponent", opponent.to_json()}};
}

TrainConfig SweepSpec::train_for(std::uint64_t seed) const {
  TrainConfig t = train;
  t.seed = seed;
  return t;
}

fs::path SweepSpec::checkpoint_path(const fs::path& dir, int menu, std::uint64_t seed) const {
  return dir / (std::to_string(menu) + "_" + sanitize(menus[static_cast<size_t>(menu)].name)) /
         ("seed_" + std::to_string(seed) + ".json");
}

std::vector<fs::path> train_jobs(const std::vector<TrainJob>& jobs, int workers, bool force) {
  std::vector<size_t> todo;
  for (size_t i = 0; i < jobs.size(); ++i) {
    if (force || !fs::exists(jobs[i].path)) todo.push_back(i);
  }
  parallel_for(static_cast<int>(todo.size()), workers, [&](int t) {
    const auto& job = jobs[todo[static_cast<size_t>(t)]];
    const auto ck = self_play_train(job.config, job.game);
    fs::create_directories(job.path.parent_path());
    ck.save(job.path);
  });
  std::vector<fs::path> out;
  for (size_t i : todo) out.push_back(jobs[i].path);
  return out;
}

void require_checkpoints(const std::vector<fs::path>& paths) {
  std::string missing;
  int n = 0;
  for (const auto& p : paths) {
    if (fs::exists(p)) continue;
    missing += "\n  " + p.string();
    ++n;
  }
  if (n) throw TrainingError(std::to_string(n) + " checkpoint(s) missing:" + missing);
}

std::vector<TrainJob> sweep_jobs(const SweepSpec& spec, const fs::path& dir) {
  std::vector<TrainJob> jobs;
  for (int m = 0; m < static_cast<int>(spec.menus.size()); ++m) {
    for (auto seed : spec.seeds) jobs.push_back({spec.train_for(seed), spec.game(m), spec.checkpoint_path(dir, m, seed)});
  }
  return jobs;
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec, const fs::path& dir, int workers) {
  const auto jobs = sweep_jobs(spec, dir);
  std::vector<fs::path> paths;
  for (const auto& j : jobs) paths.push_back(j.path);
  require_checkpoints(paths);
  std::vector<SweepModel> models;
  for (int m = 0; m < static_cast<int>(spec.menus.size()); ++m) {
    for (auto seed : spec.seeds) {
      const auto ck = Checkpoint::load(spec.checkpoint_path(dir, m, seed));
      models.push_back({spec.menus[static_cast<size_t>(m)].name, spec.menus[static_cast<size_t>(m)], seed,
                        std::make_shared<DqnAgent>(ck)});
    }
  }
  std::vector<SweepTest> tests;
  for (int m = 0; m < static_cast<int>(spec.menus.size()); ++m) {
    tests.push_back({spec.menus[static_cast<size_t>(m)].name, std::make_shared<const GameConfig>(spec.game(m))});
  }
  const auto opponent = spec.opponent.make();
  return generalization_sweep(models, tests, *opponent, spec.games_per_batch, spec.batches,
                              spec.eval_seed, workers);
}

// ---------------------------------------------------------------- ablation

AblationSpec AblationSpec::load(const fs::path& path) {
  const auto j = read_json_file(path);
  try {
    return from_json(j, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError("'" + path.string() + "': " + e.what());
  }
}

AblationSpec AblationSpec::from_json(const json& j, const fs::path& base) {
  check_format(j, "sushidraft.ablation");
  reject_unknown(j, "ablation", {"format", "version", "game", "train", "seeds", "eval_games",
                                 "eval_seed", "opponent"});
  AblationSpec s;
  try {
    s.game = GameConfig::load(base / j.at("game").get<std::string>());
    s.train = load_train(j.at("train"), base);
    s.seeds = load_seeds(j.at("seeds"), "ablation");
    s.eval_games = j.value("eval_games", s.eval_games);
    s.eval_seed = j.value("eval_seed", s.eval_seed);
    s.opponent = OpponentSpec::from_json(j.value("opponent", json("random")), base);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("ablation: ") + e.what());
  }
  if (s.seeds.size() < 2) throw StatsError("ablation needs at least two models per cohort");
  if (s.eval_games < 2) throw ConfigError("ablation: eval_games must be >= 2");
  if (s.opponent.kind == "priority" && !s.opponent.list.covers(s.game.menu)) {
    throw ConfigError("ablation: opponent list does not rank every kind of the menu");
  }
  return s;
}

json AblationSpec::to_json() const {
  return {{"format", "sushidraft.ablation.resolved"},
          {"game", game.to_json()},
          {"train", train.to_json()},
          {"seeds", seeds},
          {"eval_games", eval_games},
          {"eval_seed", eval_seed},
          {"opponent", opponent.to_json()}};
}

TrainConfig AblationSpec::train_for(bool memory, std::uint64_t seed) const {
  TrainConfig t = train;
  t.memory = memory;
  t.seed = seed;
  return t;
}

fs::path AblationSpec::checkpoint_path(const fs::path& dir, bool memory, std::uint64_t seed) const {
  return dir / (memory ? "memory_on" : "memory_off") / ("seed_" + std::to_string(seed) + ".json");
}

std::vector<TrainJob> ablation_jobs(const AblationSpec& spec, const fs::path& dir) {
  std::vector<TrainJob> jobs;
  for (bool memory : {true, false}) {
    for (auto seed : spec.seeds) jobs.push_back({spec.train_for(memory, seed), spec.game, spec.checkpoint_path(dir, memory, seed)});
  }
  return jobs;
}

AblationResult run_ablation(const AblationSpec& spec, const fs::path& dir, int workers) {
  const auto jobs = ablation_jobs(spec, dir);
  std::vector<fs::path> paths;
  for (const auto& j : jobs) paths.push_back(j.path);
  require_checkpoints(paths);
  const auto cfg = std::make_shared<const GameConfig>(spec.game);
  const auto opp = spec.opponent.make();
  const std::vector<const Agent*> opponents(static_cast<size_t>(spec.game.players - 1), opp.get());
  AblationResult r;
  for (bool memory : {true, false}) {
    CohortResult& c = memory ? r.on : r.off;
    c.memory = memory;
    c.seeds = spec.seeds;
    for (auto seed : spec.seeds) {
      const DqnAgent agent(Checkpoint::load(spec.checkpoint_path(dir, memory, seed)));
      c.reports.push_back(evaluate_win_rate(agent, opponents, cfg, spec.eval_games, spec.eval_seed, workers));
      const auto& rw = c.reports.back().rewards;
      c.rewards.insert(c.rewards.end(), rw.begin(), rw.end());
    }
  }
  r.test = welch_t_test(r.on.rewards, r.off.rewards);
  return r;
}

}  // namespace sushi
