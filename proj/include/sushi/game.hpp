#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "sushi/cards.hpp"
#include "sushi/hand.hpp"
#include "sushi/memory.hpp"
#include "sushi/rng.hpp"

namespace sushi {

struct Play {
  int turn = 0;
  KindId kind = 0;
  bool operator==(const Play&) const = default;
};

// Cards a player has revealed this round.
struct Board {
  Hand counts;
  std::vector<Play> play_order;
  // (wasabi play index, nigiri play index)
  std::vector<std::pair<int, int>> wasabi_pairings;
  // Play indices voided by a same-turn collision (Miso Soup).
  std::vector<int> miso_voided;

  Board() = default;
  explicit Board(int n_kinds) : counts(n_kinds) {}

  // Appends a play; pairs a nigiri with the first unpaired wasabi.
  void play(int turn, KindId kind, const Menu& menu);
  bool voided(int play_index) const;
  bool operator==(const Board&) const = default;
};

// Voids every collision-rule play made on `turn` when two or more boards
// played that kind on that turn.
void resolve_collisions(std::vector<Board>& boards, int turn, const Menu& menu);

enum class PassDirection { kLeft, kRight };

struct GameConfig {
  Menu menu;
  DeckSpec deck;
  int players = 4;
  int hand_size = 9;
  int rounds = 3;
  PassDirection pass = PassDirection::kLeft;
  std::uint64_t seed = 0;
  bool enforce_menu_structure = true;

  // Throws ConfigError describing the first violated invariant.
  void validate() const;

  // Self-contained JSON (menu inlined with full kind definitions).
  nlohmann::json to_json() const;
  static GameConfig from_json(const nlohmann::json& j);

  // Reads a game config file. The file may reference a catalog and a menu
  // file by path (resolved relative to the config file) or inline them.
  static GameConfig load(const std::filesystem::path& path);
  // Same, from an already parsed object whose relative paths resolve
  // against `base_dir`.
  static GameConfig from_file_json(const nlohmann::json& j,
                                   const std::filesystem::path& base_dir);

  // Copy of this config with a different menu and the default deck for it.
  GameConfig with_menu(const Menu& m) const;
};

struct GameState {
  std::shared_ptr<const GameConfig> config;
  std::vector<Hand> hands;
  std::vector<Board> boards;
  int round = 0;
  int turn = 0;
  std::vector<int> scores;
  std::vector<int> last_round_deltas;
  std::vector<Hand> desserts;        // per seat, kept across rounds
  std::vector<int> dessert_pile;     // injected, not yet dealt, per kind
  std::vector<int> dessert_reserve;  // not yet injected, per kind
  Rng rng;
  MemoryTracker tracker;
  bool finished = false;

  int players() const { return static_cast<int>(hands.size()); }
  const Menu& menu() const { return config->menu; }
  int dessert_count(int seat) const { return desserts[seat].size(); }

  bool operator==(const GameState& o) const;
};

GameState new_game(std::shared_ptr<const GameConfig> config);
// Deals with `seed` instead of the config's own seed.
GameState new_game(std::shared_ptr<const GameConfig> config, std::uint64_t seed);
GameState new_game(const GameConfig& config);

// Kinds with a nonzero count in the seat's hand, ascending.
std::vector<KindId> legal_actions(const GameState& state, int seat);

// Applies one simultaneous pick for every seat in place: picks move to the
// boards, hands rotate, and round scoring plus the next deal fire when the
// hands run out.
void apply_step(GameState& state, std::span<const KindId> actions);
GameState step(GameState state, std::span<const KindId> actions);

// Scores the finished round into the running totals and returns the
// per-seat deltas. Desserts are only counted.
std::vector<int> score_round(GameState& state);

struct FinalResult {
  std::vector<int> scores;          // including dessert points
  std::vector<int> dessert_points;
  std::vector<int> winners;         // ascending seats

  bool is_winner(int seat) const;
};

FinalResult finalize(const GameState& state);

// Menus from `a` to `b`, one card swap per step; the lowest
// catalog id of a\b is replaced by the lowest of b\a first.
std::vector<Menu> config_path(const Menu& a, const Menu& b);

}  // namespace sushi
