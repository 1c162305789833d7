// sushidraft: command-line front end for training, evaluation and analysis.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sushi/dqn.hpp"
#include "sushi/error.hpp"
#include "sushi/experiments.hpp"
#include "sushi/interpret.hpp"
#include "sushi/metrics.hpp"
#include "sushi/parallel.hpp"
#include "sushi/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sushi;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Records what a command read and wrote; saved as <out>/manifest.json.
class Manifest {
 public:
  Manifest(std::string command, fs::path out) : command_(std::move(command)), out_(std::move(out)) {}

  void param(const std::string& key, json value) { params_[key] = std::move(value); }
  void input(const fs::path& p) { inputs_[p.generic_string()] = file_hash(p); }
  void seeds(std::vector<std::uint64_t> s) { seeds_ = std::move(s); }

  // Writes `text` to <out>/<rel> and records its hash.
  void write(const fs::path& rel, const std::string& text) {
    const fs::path p = out_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InputError("cannot write '" + p.string() + "'");
    f << text;
    f.close();
    outputs_[rel.generic_string()] = file_hash(p);
  }
  void write_json(const fs::path& rel, const json& j) { write(rel, j.dump(2) + "\n"); }
  // Records a file written by other code.
  void output(const fs::path& rel) { outputs_[rel.generic_string()] = file_hash(out_ / rel); }

  void save() const {
    json j{{"format", "sushidraft.manifest"},
           {"version", 1},
           {"code_version", SUSHI_VERSION},
           {"command", command_},
           {"params", params_},
           {"seeds", seeds_},
           {"inputs", inputs_},
           {"outputs", outputs_}};
    fs::create_directories(out_);
    std::ofstream f(out_ / "manifest.json", std::ios::binary);
    f << j.dump(2) << "\n";
  }

  const fs::path& out() const { return out_; }

 private:
  std::string command_;
  fs::path out_;
  json params_ = json::object();
  std::map<std::string, std::string> inputs_, outputs_;
  std::vector<std::uint64_t> seeds_;
};

std::string csv_number(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

std::vector<std::uint64_t> seed_list(std::uint64_t seed, const std::vector<std::uint64_t>& seeds) {
  return seeds.empty() ? std::vector<std::uint64_t>{seed} : seeds;
}

bool parse_on_off(const std::string& v) {
  if (v == "on") return true;
  if (v == "off") return false;
  throw ConfigError("--memory must be 'on' or 'off'");
}

OpponentSpec opponent_from_flag(const std::string& v) {
  return OpponentSpec::from_json(json(v == "random" ? v : fs::absolute(v).string()), fs::path());
}

json report_json(const WinRateReport& r) {
  double mean_reward = 0;
  for (double x : r.rewards) mean_reward += x;
  mean_reward /= std::max<size_t>(1, r.rewards.size());
  return {{"games", r.games},
          {"wins", r.wins},
          {"win_rate", r.win_rate},
          {"ci95", {r.ci.low, r.ci.high}},
          {"mean_reward", mean_reward}};
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string config, game, memory;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;
  int games = 0, epochs = 0, workers = 1;
};

int run_train(const TrainArgs& a, const fs::path& out) {
  Manifest m("train", out);
  TrainConfig base = a.config.empty() ? TrainConfig{} : TrainConfig::load(a.config);
  if (!a.config.empty()) m.input(a.config);
  const GameConfig game = GameConfig::load(a.game);
  m.input(a.game);
  if (a.games > 0) base.games_per_epoch = a.games;
  if (a.epochs > 0) base.epochs = a.epochs;
  if (!a.memory.empty()) base.memory = parse_on_off(a.memory);
  base.validate();
  const auto seeds = seed_list(a.seed, a.seeds);
  m.seeds(seeds);
  m.param("train", base.to_json());
  m.param("game", game.to_json());

  std::vector<std::string> curves(seeds.size());
  std::vector<std::vector<std::pair<std::string, std::string>>> files(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), a.workers, [&](int i) {
    TrainConfig t = base;
    t.seed = seeds[static_cast<size_t>(i)];
    std::ostringstream curve;
    curve << "epoch,games,env_steps,grad_steps,epsilon,mean_loss,mean_reward,mean_score\n";
    self_play_train(t, game, [&](const Checkpoint& c, const EpochStats& s) {
      curve << s.epoch << ',' << s.games << ',' << s.env_steps << ',' << s.grad_steps << ','
            << csv_number(s.epsilon) << ',' << csv_number(s.mean_loss) << ','
            << csv_number(s.mean_reward) << ',' << csv_number(s.mean_score) << '\n';
      std::ostringstream name;
      name << "checkpoint_epoch_" << std::setw(2) << std::setfill('0') << s.epoch << ".json";
      files[static_cast<size_t>(i)].emplace_back(name.str(), c.to_json().dump() + "\n");
    });
    curves[static_cast<size_t>(i)] = curve.str();
  });
  for (size_t i = 0; i < seeds.size(); ++i) {
    const fs::path dir = "seed_" + std::to_string(seeds[i]);
    for (const auto& [name, text] : files[i]) m.write(dir / name, text);
    m.write(dir / "training_curve.csv", curves[i]);
    std::cout << "seed " << seeds[i] << ": " << files[i].size() << " checkpoints in "
              << (out / dir).string() << "\n";
  }
  m.save();
  return 0;
}

// ---------------------------------------------------------------- eval

int run_eval(const std::string& checkpoint, const std::string& game_path, const std::string& opponent,
             int games, std::uint64_t seed, int workers, const fs::path& out) {
  Manifest m("eval", out);
  const auto ck = Checkpoint::load(checkpoint);
  m.input(checkpoint);
  GameConfig game = ck.game;
  if (!game_path.empty()) {
    game = GameConfig::load(game_path);
    m.input(game_path);
  }
  const auto opp = opponent_from_flag(opponent);
  if (opp.kind == "priority") m.input(opponent);
  m.seeds({seed});
  m.param("games", games);
  m.param("opponent", opp.to_json());
  const DqnAgent agent(ck);
  const auto o = opp.make();
  const std::vector<const Agent*> opponents(static_cast<size_t>(game.players - 1), o.get());
  const auto r = evaluate_win_rate(agent, opponents, std::make_shared<const GameConfig>(game), games,
                                   seed, workers);
  std::ostringstream csv;
  csv << "game,seat,score,reward\n";
  for (int g = 0; g < r.games; ++g) {
    csv << g << ',' << g % game.players << ',' << r.scores[g] << ',' << csv_number(r.rewards[g]) << '\n';
  }
  m.write("eval_games.csv", csv.str());
  m.write_json("eval_summary.json", report_json(r));
  std::cout << "win rate " << r.win_rate << " (95% CI " << r.ci.low << " - " << r.ci.high << ") over "
            << r.games << " games\n";
  m.save();
  return 0;
}

// ---------------------------------------------------------------- sweep

int run_sweep_cmd(const std::string& config, const std::string& checkpoints, bool train, int games,
                  int batches, int workers, const fs::path& out) {
  Manifest m("sweep", out);
  auto spec = SweepSpec::load(config);
  m.input(config);
  if (games > 0) spec.games_per_batch = games;
  if (batches > 0) spec.batches = batches;
  const fs::path dir = checkpoints.empty() ? out / "models" : fs::path(checkpoints);
  m.seeds(spec.seeds);
  m.param("spec", spec.to_json());
  if (train) {
    const auto written = train_jobs(sweep_jobs(spec, dir), workers);
    std::cout << "trained " << written.size() << " model(s)\n";
  }
  for (const auto& j : sweep_jobs(spec, dir)) {
    if (fs::exists(j.path)) m.input(j.path);
  }
  const auto cells = run_sweep(spec, dir, workers);
  const auto groups = group_by_envsim(cells);
  std::ostringstream c, g;
  write_sweep_csv(c, cells);
  write_groups_csv(g, groups);
  m.write("sweep_cells.csv", c.str());
  m.write("sweep_groups.csv", g.str());
  const auto trend = envsim_trend(cells);
  m.write_json("sweep_summary.json", {{"cells", cells.size()},
                                      {"spearman_rho", trend.rho},
                                      {"spearman_p", trend.p_value}});
  for (const auto& gr : groups) {
    std::cout << "envsim " << gr.envsim << ": mean win rate " << gr.mean_win_rate << " over "
              << gr.cells << " cell(s)\n";
  }
  std::cout << "spearman rho " << trend.rho << ", p " << trend.p_value << "\n";
  m.save();
  return 0;
}

// ---------------------------------------------------------------- meminfluence

int run_meminfluence(const std::string& checkpoint, const std::string& game_path, int states,
                     int perturbations, std::uint64_t seed, double temperature, const fs::path& out) {
  Manifest m("meminfluence", out);
  const auto ck = Checkpoint::load(checkpoint);
  m.input(checkpoint);
  GameConfig game = ck.game;
  if (!game_path.empty()) {
    game = GameConfig::load(game_path);
    m.input(game_path);
  }
  m.seeds({seed});
  m.param("states", states);
  m.param("perturbations", perturbations);
  m.param("temperature", temperature);
  const auto r = mem_influence(ck.net, ck.layout, game, states, perturbations, seed, temperature);
  std::ostringstream csv, st;
  write_meminfluence_csv(csv, r, ck.layout);
  st << "state,round,turn,seat,mean_kl\n";
  for (const auto& s : r.per_state) {
    st << s.state << ',' << s.round << ',' << s.turn << ',' << s.seat << ',' << csv_number(s.mean_kl) << '\n';
  }
  m.write("meminfluence.csv", csv.str());
  m.write("meminfluence_states.csv", st.str());
  const auto& u = ck.layout.universe;
  m.write_json("meminfluence_summary.json",
               {{"mean_kl", r.mean_kl},
                {"states", r.states},
                {"perturbations_per_state", r.perturbations_per_state},
                {"argmax_shifts", r.argmax_shifts.size()},
                {"max_shift",
                 {{"state", r.max_shift.state},
                  {"removed", u[static_cast<size_t>(r.max_shift.source_slot)]},
                  {"added", u[static_cast<size_t>(r.max_shift.target_slot)]},
                  {"top_shift", r.max_shift.top_shift},
                  {"kl", r.max_shift.kl}}}});
  std::cout << "MemInfluence " << r.mean_kl << " over " << r.states << " states x "
            << r.perturbations_per_state << " perturbations; " << r.argmax_shifts.size()
            << " argmax change(s)\n";
  m.save();
  return 0;
}

// ---------------------------------------------------------------- ablate-memory

int run_ablation_cmd(const std::string& config, const std::string& checkpoints, bool train, int games,
                     int workers, const fs::path& out) {
  Manifest m("ablate-memory", out);
  auto spec = AblationSpec::load(config);
  m.input(config);
  if (games > 0) spec.eval_games = games;
  const fs::path dir = checkpoints.empty() ? out / "models" : fs::path(checkpoints);
  m.seeds(spec.seeds);
  m.param("spec", spec.to_json());
  if (train) {
    const auto written = train_jobs(ablation_jobs(spec, dir), workers);
    std::cout << "trained " << written.size() << " model(s)\n";
  }
  for (const auto& j : ablation_jobs(spec, dir)) {
    if (fs::exists(j.path)) m.input(j.path);
  }
  const auto r = run_ablation(spec, dir, workers);
  std::ostringstream csv;
  csv << "memory,seed,game,score,reward\n";
  for (const auto* c : {&r.on, &r.off}) {
    for (size_t i = 0; i < c->seeds.size(); ++i) {
      const auto& rep = c->reports[i];
      for (int g = 0; g < rep.games; ++g) {
        csv << (c->memory ? "on" : "off") << ',' << c->seeds[i] << ',' << g << ',' << rep.scores[g]
            << ',' << csv_number(rep.rewards[g]) << '\n';
      }
    }
  }
  m.write("ablation_rewards.csv", csv.str());
  const auto cohort = [](const CohortResult& c) {
    json models = json::array();
    for (size_t i = 0; i < c.seeds.size(); ++i) {
      auto j = report_json(c.reports[i]);
      j["seed"] = c.seeds[i];
      models.push_back(j);
    }
    return models;
  };
  const auto& t = r.test;
  m.write_json("ablation_ttest.json", {{"mean_on", t.mean_a},
                                       {"mean_off", t.mean_b},
                                       {"mean_diff", t.mean_diff},
                                       {"t_statistic", t.t_statistic},
                                       {"degrees_of_freedom", t.degrees_of_freedom},
                                       {"p_value", t.p_value},
                                       {"n_on", t.n_a},
                                       {"n_off", t.n_b},
                                       {"memory_on", cohort(r.on)},
                                       {"memory_off", cohort(r.off)}});
  std::cout << "mean reward on " << t.mean_a << ", off " << t.mean_b << ", diff " << t.mean_diff
            << ", Welch t " << t.t_statistic << ", p " << t.p_value << "\n";
  m.save();
  return 0;
}

// ---------------------------------------------------------------- interpret

struct InterpretArgs {
  std::string checkpoint, priority, game, rules;
  std::vector<std::string> compare;
  int games = 1000, round = -1, workers = 1;
  std::uint64_t seed = 0;
};

int run_interpret(const InterpretArgs& a, const fs::path& out) {
  Manifest m("interpret", out);
  if (a.checkpoint.empty() == a.priority.empty()) {
    throw ConfigError("interpret needs exactly one of --checkpoint and --priority");
  }
  AgentPtr agent;
  std::optional<GameConfig> game;
  FeatureLayout layout;
  if (!a.checkpoint.empty()) {
    const auto ck = Checkpoint::load(a.checkpoint);
    m.input(a.checkpoint);
    agent = std::make_shared<DqnAgent>(ck);
    game = ck.game;
    layout = ck.layout;
  } else {
    agent = std::make_shared<PriorityAgent>(PriorityList::load(a.priority));
    m.input(a.priority);
  }
  if (!a.game.empty()) {
    game = GameConfig::load(a.game);
    m.input(a.game);
  }
  if (!game) throw ConfigError("interpret with --priority needs --game");
  if (a.priority.empty()) {
    layout.check_compatible(*game);
  } else {
    layout = FeatureLayout::for_game(*game, false);
  }
  RuleParams params;
  if (!a.rules.empty()) {
    params = RuleParams::from_json(read_json_file(a.rules));
    m.input(a.rules);
  }
  params.workers = a.workers;
  m.seeds({a.seed});
  m.param("games", a.games);
  m.param("round", a.round);
  m.param("rules", params.to_json());

  const std::optional<int> round = a.round >= 0 ? std::optional<int>(a.round) : std::nullopt;
  const auto data = collect_pairwise_dataset(*agent, *game, a.games, a.seed, layout, round, a.workers);
  const auto pm = preference_matrix(data);
  std::ostringstream mat;
  mat << "chosen,alternative,wins,trials\n";
  for (int x = 0; x < pm.size(); ++x) {
    for (int y = 0; y < pm.size(); ++y) {
      if (pm.trials[x][y] > 0) mat << pm.kinds[x] << ',' << pm.kinds[y] << ',' << pm.wins[x][y] << ',' << pm.trials[x][y] << '\n';
    }
  }
  m.write("preference_matrix.csv", mat.str());

  json summary{{"samples", data.samples.size()}};
  if (pm.total() > 0) {
    const auto reconstructed = reconstruct_priority(pm);
    const auto borda = borda_scores(pm);
    json kinds = json::array();
    for (const auto& k : reconstructed.ranking) {
      const int s = static_cast<int>(std::find(pm.kinds.begin(), pm.kinds.end(), k) - pm.kinds.begin());
      int trials = 0;
      for (int t : pm.trials[s]) trials += t;
      kinds.push_back({{"kind", k}, {"borda", borda[s]}, {"trials", trials}});
    }
    m.write_json("priority.json", {{"ranking", reconstructed.ranking}, {"kinds", kinds}});
    // Comparisons over the kinds both lists rank and the data covers.
    std::vector<std::string> names{"reconstructed"};
    std::vector<PriorityList> lists{reconstructed};
    json taus = json::object();
    for (const auto& path : a.compare) {
      const auto other = PriorityList::load(path);
      m.input(path);
      PriorityList x, y;
      for (const auto& k : reconstructed.ranking) {
        const int s = static_cast<int>(std::find(pm.kinds.begin(), pm.kinds.end(), k) - pm.kinds.begin());
        int trials = 0;
        for (int t : pm.trials[s]) trials += t;
        if (trials > 0 && std::find(other.ranking.begin(), other.ranking.end(), k) != other.ranking.end()) x.ranking.push_back(k);
      }
      for (const auto& k : other.ranking) {
        if (std::find(x.ranking.begin(), x.ranking.end(), k) != x.ranking.end()) y.ranking.push_back(k);
      }
      taus[fs::path(path).filename().string()] = x.ranking.size() >= 2 ? json(kendall_tau(x, y)) : json(nullptr);
      names.push_back(fs::path(path).stem().string());
      lists.push_back(other);
    }
    std::ostringstream table;
    write_rank_table_csv(table, names, lists);
    m.write("rank_table.csv", table.str());
    summary["reconstructed"] = reconstructed.ranking;
    summary["kendall_tau"] = taus;
  }
  std::vector<Rule> rules;
  std::set<int> chosen;
  for (const auto& s : data.samples) chosen.insert(s.chosen);
  if (chosen.size() >= 2) rules = fit_rules(data, params);
  std::string text;
  for (const auto& r : rules) text += format_rule(r, layout) + "\n";
  m.write("rules.txt", text);
  m.write_json("rules.json", rules_to_json(rules, layout));
  summary["rules"] = rules.size();
  m.write_json("interpret_summary.json", summary);
  std::cout << data.samples.size() << " pairwise samples, " << rules.size() << " rule(s)\n" << text;
  m.save();
  return 0;
}

// ---------------------------------------------------------------- stats

int run_stats(const std::vector<std::string>& logs, const std::vector<std::string>& games_paths, int games,
              std::uint64_t seed, int workers, const fs::path& out) {
  Manifest m("stats", out);
  std::vector<json> events;
  if (!logs.empty()) {
    for (const auto& p : logs) {
      std::ifstream in(p);
      if (!in) throw InputError("cannot open '" + p + "'");
      const auto ev = read_events(in);
      events.insert(events.end(), ev.begin(), ev.end());
      m.input(p);
    }
  } else {
    if (games_paths.empty()) throw ConfigError("stats needs --logs or --game");
    m.seeds({seed});
    m.param("games", games);
    // Random self-play on every configuration; game g of config c uses
    // derive_seed(seed, c, g).
    const RandomAgent random;
    std::ostringstream log;
    int index = 0;
    for (size_t c = 0; c < games_paths.size(); ++c) {
      const auto cfg = std::make_shared<const GameConfig>(GameConfig::load(games_paths[c]));
      m.input(games_paths[c]);
      const std::vector<const Agent*> seats(static_cast<size_t>(cfg->players), &random);
      std::vector<std::vector<json>> per(static_cast<size_t>(games));
      parallel_for(games, workers, [&](int g) {
        per[static_cast<size_t>(g)] = run_game(cfg, seats, derive_seed(seed, c, static_cast<std::uint64_t>(g)),
                                               {index + g, true}).events;
      });
      for (auto& ev : per) {
        write_events(log, ev);
        events.insert(events.end(), ev.begin(), ev.end());
      }
      index += games;
    }
    m.write("selfplay_logs.jsonl", log.str());
  }
  const auto lp = priority_from_logs(events);
  std::ostringstream csv;
  csv << "rank,kind,mean_points,points,copies,played\n";
  json kinds = json::array();
  for (size_t i = 0; i < lp.kinds.size(); ++i) {
    const auto& k = lp.kinds[i];
    csv << i + 1 << ',' << k.kind << ',' << csv_number(k.mean) << ',' << csv_number(k.points) << ','
        << k.copies << ',' << (k.played ? "yes" : "no") << '\n';
    kinds.push_back({{"kind", k.kind}, {"mean_points", k.mean}, {"copies", k.copies}, {"played", k.played}});
  }
  m.write("kind_points.csv", csv.str());
  m.write_json("priority.json", {{"ranking", lp.list.ranking},
                                 {"source", logs.empty() ? "random self-play" : "game logs"},
                                 {"games", lp.games},
                                 {"kinds", kinds}});
  for (const auto& k : lp.kinds) {
    std::cout << std::setw(22) << std::left << k.kind << " " << (k.played ? csv_number(k.mean) : "never played") << "\n";
  }
  m.save();
  return 0;
}

// ---------------------------------------------------------------- play

void print_table(const GameState& s, int human) {
  const Menu& menu = s.menu();
  std::cout << "\nround " << s.round + 1 << "/" << s.config->rounds << ", turn " << s.turn + 1 << "/"
            << s.config->hand_size << "\n";
  for (int p = 0; p < s.players(); ++p) {
    std::cout << (p == human ? " you " : " p" + std::to_string(p) + "  ") << " score " << std::setw(3)
              << s.scores[p] << " | ";
    for (int k = 0; k < menu.size(); ++k) {
      if (s.boards[p].counts[k] > 0) std::cout << menu[k].name << " x" << s.boards[p].counts[k] << "  ";
    }
    std::cout << "\n";
  }
}

int run_play(const std::string& checkpoint, const std::string& game_path, int seat, std::uint64_t seed,
             bool show_memory) {
  const auto ck = Checkpoint::load(checkpoint);
  GameConfig game = game_path.empty() ? ck.game : GameConfig::load(game_path);
  if (seat < 0 || seat >= game.players) throw ConfigError("--seat must be in 0.." + std::to_string(game.players - 1));
  const auto cfg = std::make_shared<const GameConfig>(game);
  const DqnAgent agent(ck);
  const ObservationEncoder memory_view(FeatureLayout::for_game(game, true), game.menu);
  const int sign = game.pass == PassDirection::kLeft ? 1 : -1;
  GameState s = new_game(cfg, seed);
  const int p = s.players();
  std::vector<Rng> rngs;
  for (int i = 0; i < p; ++i) rngs.emplace_back(derive_seed(seed, 1, static_cast<std::uint64_t>(i)));
  std::vector<KindId> actions(static_cast<size_t>(p));
  while (!s.finished) {
    print_table(s, seat);
    if (show_memory) {
      const auto obs = memory_view.observe(PlayerView(s, seat));
      for (size_t j = 0; j < obs.memory.size(); ++j) {
        const int who = ((seat + sign * static_cast<int>(j + 1)) % p + p) % p;
        std::cout << " memory p" << who << ": ";
        if (!obs.memory[j].known) {
          std::cout << "unknown\n";
          continue;
        }
        for (int k = 0; k < game.menu.size(); ++k) {
          if (obs.memory[j].counts[memory_view.slot(k)] > 0) {
            std::cout << game.menu[k].name << " x" << obs.memory[j].counts[memory_view.slot(k)] << "  ";
          }
        }
        std::cout << "\n";
      }
    }
    const auto legal = legal_actions(s, seat);
    std::cout << "your hand:\n";
    for (size_t i = 0; i < legal.size(); ++i) {
      std::cout << "  [" << i + 1 << "] " << game.menu[legal[i]].name << " x" << s.hands[seat][legal[i]] << "\n";
    }
    std::optional<KindId> pick;
    while (!pick) {
      std::cout << "pick> " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) {
        std::cout << "\ninput closed, game abandoned\n";
        return 0;
      }
      try {
        const int i = std::stoi(line);
        if (i >= 1 && i <= static_cast<int>(legal.size())) pick = legal[static_cast<size_t>(i - 1)];
      } catch (const std::exception&) {
      }
      if (!pick) std::cout << "enter a number from 1 to " << legal.size() << "\n";
    }
    for (int i = 0; i < p; ++i) {
      actions[i] = i == seat ? *pick : agent.act(PlayerView(s, i), legal_actions(s, i), rngs[i]);
    }
    apply_step(s, actions);
  }
  const auto r = finalize(s);
  std::cout << "\nfinal scores\n";
  for (int i = 0; i < p; ++i) {
    std::cout << (i == seat ? " you " : " p" + std::to_string(i) + "  ") << std::setw(4) << r.scores[i]
              << "  (desserts " << r.dessert_points[i] << ")\n";
  }
  std::cout << "winner:";
  for (int w : r.winners) std::cout << (w == seat ? " you" : " p" + std::to_string(w));
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-drafting card game harness: DQN self-play, generalization, memory and interpretability analyses"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SUSHI_VERSION));

  std::string out = "out";
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;
  int workers = 1;

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Train DQN models by self-play");
  train->add_option("--config", ta.config, "Training config JSON")->check(CLI::ExistingFile);
  train->add_option("--game", ta.game, "Game config JSON")->required()->check(CLI::ExistingFile);
  train->add_option("--seed", ta.seed, "Training seed");
  train->add_option("--seeds", ta.seeds, "Several training seeds")->delimiter(',');
  train->add_option("--memory", ta.memory, "Memory features on|off");
  train->add_option("--games", ta.games, "Games per epoch");
  train->add_option("--epochs", ta.epochs, "Epochs");
  train->add_option("--workers", ta.workers, "Parallel training runs");
  train->add_option("--out", out, "Output directory");

  std::string checkpoint, game, opponent = "random";
  int games = 1000, batches = 0;
  auto* eval = app.add_subcommand("eval", "Win rate of a checkpoint against baseline opponents");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--game", game, "Game config (default: the training game)")->check(CLI::ExistingFile);
  eval->add_option("--opponent", opponent, "'random' or a priority list JSON");
  eval->add_option("--games", games, "Evaluation games");
  eval->add_option("--seed", seed, "Evaluation seed");
  eval->add_option("--workers", workers, "Worker threads");
  eval->add_option("--out", out, "Output directory");

  std::string config, checkpoints;
  bool train_missing = false;
  int sweep_games = 0;
  auto* sweep = app.add_subcommand("sweep", "Cross-evaluate models over game configurations");
  sweep->add_option("--config", config, "Sweep config JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--checkpoints", checkpoints, "Model directory (default <out>/models)");
  sweep->add_flag("--train", train_missing, "Train missing models first");
  sweep->add_option("--games", sweep_games, "Games per batch");
  sweep->add_option("--batches", batches, "Batches per cell");
  sweep->add_option("--workers", workers, "Worker threads");
  sweep->add_option("--out", out, "Output directory");

  int states = 100, perturbations = 10;
  double temperature = 1.0;
  auto* mem = app.add_subcommand("meminfluence", "Policy sensitivity to the remembered upstream hand");
  mem->add_option("--checkpoint", checkpoint, "Checkpoint JSON (memory on)")->required()->check(CLI::ExistingFile);
  mem->add_option("--game", game, "Game config (default: the training game)")->check(CLI::ExistingFile);
  mem->add_option("--states", states, "Sampled states");
  mem->add_option("--perturbations", perturbations, "Perturbations per state");
  mem->add_option("--temperature", temperature, "Softmax temperature");
  mem->add_option("--seed", seed, "Sampling seed");
  mem->add_option("--out", out, "Output directory");

  int ablation_games = 0;
  auto* ablate = app.add_subcommand("ablate-memory", "Memory-on versus memory-off cohorts with a Welch t-test");
  ablate->add_option("--config", config, "Ablation config JSON")->required()->check(CLI::ExistingFile);
  ablate->add_option("--checkpoints", checkpoints, "Model directory (default <out>/models)");
  ablate->add_flag("--train", train_missing, "Train missing models first");
  ablate->add_option("--games", ablation_games, "Evaluation games per model");
  ablate->add_option("--workers", workers, "Worker threads");
  ablate->add_option("--out", out, "Output directory");

  InterpretArgs ia;
  auto* interp = app.add_subcommand("interpret", "Pairwise preferences, decision rules and priority reconstruction");
  interp->add_option("--checkpoint", ia.checkpoint, "Checkpoint JSON")->check(CLI::ExistingFile);
  interp->add_option("--priority", ia.priority, "Priority list JSON (instead of a checkpoint)")->check(CLI::ExistingFile);
  interp->add_option("--game", ia.game, "Game config")->check(CLI::ExistingFile);
  interp->add_option("--config", ia.rules, "Rule mining parameters JSON")->check(CLI::ExistingFile);
  interp->add_option("--compare", ia.compare, "Priority lists to compare with")->check(CLI::ExistingFile);
  interp->add_option("--games", ia.games, "Games to collect from");
  interp->add_option("--round", ia.round, "Keep only this round (0-based)");
  interp->add_option("--seed", ia.seed, "Collection and fitting seed");
  interp->add_option("--workers", ia.workers, "Worker threads");
  interp->add_option("--out", out, "Output directory");

  std::vector<std::string> logs, game_list;
  int stats_games = 1000;
  auto* stats = app.add_subcommand("stats", "Per-card points and a priority list from game logs");
  stats->add_option("--logs", logs, "JSON-lines game logs")->check(CLI::ExistingFile);
  stats->add_option("--game", game_list, "Game configs for random self-play logs")->check(CLI::ExistingFile);
  stats->add_option("--games", stats_games, "Self-play games per config");
  stats->add_option("--seed", seed, "Self-play seed");
  stats->add_option("--workers", workers, "Worker threads");
  stats->add_option("--out", out, "Output directory");

  int seat = 0;
  bool show_memory = false;
  auto* play = app.add_subcommand("play", "Play against a trained agent in the terminal");
  play->add_option("--checkpoint", checkpoint, "Checkpoint JSON")->required()->check(CLI::ExistingFile);
  play->add_option("--game", game, "Game config (default: the training game)")->check(CLI::ExistingFile);
  play->add_option("--seat", seat, "Your seat");
  play->add_option("--seed", seed, "Deal seed");
  play->add_flag("--show-memory", show_memory, "Show the hands you can deduce");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (workers < 1 || ta.workers < 1 || ia.workers < 1) throw ConfigError("--workers must be >= 1");
    if (*train) return run_train(ta, out);
    if (*eval) return run_eval(checkpoint, game, opponent, games, seed, workers, out);
    if (*sweep) return run_sweep_cmd(config, checkpoints, train_missing, sweep_games, batches, workers, out);
    if (*mem) return run_meminfluence(checkpoint, game, states, perturbations, seed, temperature, out);
    if (*ablate) return run_ablation_cmd(config, checkpoints, train_missing, ablation_games, workers, out);
    if (*interp) return run_interpret(ia, out);
    if (*stats) return run_stats(logs, game_list, stats_games, seed, workers, out);
    if (*play) return run_play(checkpoint, game, seat, seed, show_memory);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
