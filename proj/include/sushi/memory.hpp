#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sushi/hand.hpp"

namespace sushi {

struct PublicPlay {
  int seat = 0;
  int turn = 0;
  KindId kind = 0;
  bool operator==(const PublicPlay&) const = default;
};

// Exact knowledge each seat has about the circulating hands of the current
// round. Hands are indexed by the seat that was dealt them. Once a seat has
// held a hand, every later pick from it is public, so the tracked contents
// stay exact.
//
// Events for a turn arrive as observe() for the holders, then reveal() for
// the picks; the next turn starts with the next observe().
class MemoryTracker {
 public:
  MemoryTracker() = default;
  // pass_sign is +1 when seat i receives from seat i+1, -1 for i-1.
  MemoryTracker(int players, int n_kinds, int pass_sign);

  // Resets for a new deal; every seat sees its own hand at turn 0.
  void begin_round(std::span<const Hand> dealt);
  // `seat` holds `hand` at the start of `turn` (private to that seat).
  void observe(int turn, int seat, const Hand& hand);
  // `seat` revealed a pick of `kind` on `turn`.
  void reveal(int turn, int seat, KindId kind);

  // Index of the circulating hand held by `seat` at `turn`.
  int hand_at(int seat, int turn) const;
  bool seen(int observer, int hand) const;
  // Current contents of the hand held by `target`, if `observer` can know
  // it exactly.
  std::optional<Hand> sleuth(int observer, int target) const;

  int players() const { return players_; }
  int turn() const { return turn_; }
  const std::vector<PublicPlay>& public_log() const { return log_; }

  bool operator==(const MemoryTracker&) const = default;

 private:
  int players_ = 0;
  int n_kinds_ = 0;
  int pass_sign_ = 1;
  int turn_ = 0;
  std::vector<bool> revealed_;                 // per seat, this turn
  std::vector<std::vector<bool>> seen_;        // [observer][hand]
  std::vector<std::vector<std::optional<Hand>>> known_;  // [observer][hand]
  std::vector<PublicPlay> log_;
};

// sleuth() for a given turn; returns nothing if `turn` is not the tracker's
// current turn.
std::optional<Hand> sleuth(const MemoryTracker& tracker, int observer,
                           int target, int turn);

}  // namespace sushi
