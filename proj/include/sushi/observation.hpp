#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sushi/game.hpp"
#include "sushi/rng.hpp"

namespace sushi {

// What one seat is allowed to see of a GameState: its own hand, every board,
// the round/turn clock, and what it can sleuth about the other hands.
class PlayerView {
 public:
  PlayerView(const GameState& state, int seat) : state_(&state), seat_(seat) {}

  int seat() const { return seat_; }
  int players() const { return state_->players(); }
  int round() const { return state_->round; }
  int turn() const { return state_->turn; }
  const GameConfig& config() const { return *state_->config; }
  const Menu& menu() const { return state_->menu(); }
  const Hand& hand() const { return state_->hands[seat_]; }
  const Board& board(int seat) const { return state_->boards[seat]; }
  int score(int seat) const { return state_->scores[seat]; }
  std::vector<KindId> legal() const { return legal_actions(*state_, seat_); }

  // j-th opponent (1-based) counted from the upstream neighbour, i.e. the
  // seat whose hand this seat receives next.
  int opponent(int j) const;
  std::optional<Hand> sleuth(int target) const {
    return state_->tracker.sleuth(seat_, target);
  }

 private:
  const GameState* state_;
  int seat_;
};

// Stable description of the feature vector:
//   [own_hand n | own_board n | (P-1) x opponent_board n | round R | turn H |
//    optional (P-1) x (known flag, hand n)]
// where n is the size of the card universe (the menu, or a union of menus
// shared across experiments). Counts are raw integers.
struct FeatureLayout {
  std::vector<std::string> universe;
  int players = 4;
  int hand_size = 9;
  int rounds = 3;
  bool memory = false;

  int n() const { return static_cast<int>(universe.size()); }
  int opponents() const { return players - 1; }
  int own_hand_offset() const { return 0; }
  int own_board_offset() const { return n(); }
  int opponent_board_offset(int j) const { return 2 * n() + (j - 1) * n(); }
  int round_offset() const { return (players + 1) * n(); }
  int turn_offset() const { return round_offset() + rounds; }
  int memory_offset() const { return turn_offset() + hand_size; }
  int memory_slot_offset(int j) const { return memory_offset() + (j - 1) * (1 + n()); }
  int input_dim() const {
    return memory_offset() + (memory ? opponents() * (1 + n()) : 0);
  }
  // Feature indices that belong to the memory block.
  bool is_memory_feature(int i) const { return memory && i >= memory_offset(); }

  std::optional<int> slot_of(std::string_view card) const;
  std::string feature_name(int i) const;

  // Universe slot of every menu kind; RemapError when a kind is missing.
  std::vector<int> slots_for(const Menu& menu) const;
  // RemapError unless the table shape (players, hand size, rounds) matches
  // and every menu kind has a slot.
  void check_compatible(const GameConfig& config) const;

  static FeatureLayout for_game(const GameConfig& config, bool memory,
                                std::vector<std::string> universe = {});

  nlohmann::json to_json() const;
  static FeatureLayout from_json(const nlohmann::json& j);
  bool operator==(const FeatureLayout&) const = default;
};

struct MemorySlot {
  bool known = false;
  Hand counts;  // all zero when unknown
  bool operator==(const MemorySlot&) const = default;
};

// Player-centric observation in universe slots.
struct Observation {
  Hand own_hand;
  Hand own_board;
  std::vector<Hand> opponent_boards;  // upstream first
  int round = 0;
  int turn = 0;
  std::vector<MemorySlot> memory;     // empty unless memory is enabled
  std::vector<bool> legal_mask;
  std::vector<bool> menu_mask;        // slots present on the current menu

  bool operator==(const Observation&) const = default;
};

// Maps one menu into a fixed layout.
class ObservationEncoder {
 public:
  ObservationEncoder(FeatureLayout layout, const Menu& menu);

  const FeatureLayout& layout() const { return layout_; }
  int slot(KindId k) const { return slots_[k]; }
  // Menu kind stored in a universe slot, if the slot is on this menu.
  std::optional<KindId> kind_at(int slot) const;

  Observation observe(const PlayerView& view) const;
  void write_features(const Observation& obs, std::span<double> out) const;
  std::vector<double> features(const Observation& obs) const;
  std::vector<double> encode(const PlayerView& view) const;

 private:
  FeatureLayout layout_;
  std::vector<int> slots_;
  std::vector<int> kind_of_slot_;
};

std::vector<double> encode(const GameState& state, int seat,
                           const FeatureLayout& layout);

// Replaces one remembered card of the upstream opponent's hand with a
// different menu kind. Throws PerturbationError when memory is disabled or
// that hand is unknown or empty.
Observation perturb_memory(const Observation& obs, Rng& rng);

}  // namespace sushi
