#include "sushi/memory.hpp"

#include <string>

#include "sushi/error.hpp"

namespace sushi {

MemoryTracker::MemoryTracker(int players, int n_kinds, int pass_sign)
    : players_(players), n_kinds_(n_kinds), pass_sign_(pass_sign) {
  revealed_.assign(players, false);
  seen_.assign(players, std::vector<bool>(players, false));
  known_.assign(players, std::vector<std::optional<Hand>>(players));
}

int MemoryTracker::hand_at(int seat, int turn) const {
  return (((seat + pass_sign_ * turn) % players_) + players_) % players_;
}

void MemoryTracker::begin_round(std::span<const Hand> dealt) {
  if (static_cast<int>(dealt.size()) != players_) {
    throw TrackingError("begin_round: expected " + std::to_string(players_) +
                        " hands");
  }
  turn_ = 0;
  revealed_.assign(players_, false);
  seen_.assign(players_, std::vector<bool>(players_, false));
  known_.assign(players_, std::vector<std::optional<Hand>>(players_));
  log_.clear();
  for (int s = 0; s < players_; ++s) {
    seen_[s][s] = true;
    known_[s][s] = dealt[s];
  }
}

void MemoryTracker::observe(int turn, int seat, const Hand& hand) {
  if (seat < 0 || seat >= players_) throw TrackingError("observe: bad seat");
  const bool advance = turn == turn_ + 1;
  if (advance) {
    for (int s = 0; s < players_; ++s) {
      if (!revealed_[s]) {
        throw TrackingError("observe for turn " + std::to_string(turn) +
                            " before seat " + std::to_string(s) +
                            " revealed its turn " + std::to_string(turn_) +
                            " pick");
      }
    }
  } else if (turn != turn_) {
    throw TrackingError("observe out of order: turn " + std::to_string(turn) +
                        " while tracking turn " + std::to_string(turn_));
  } else if (revealed_[seat]) {
    throw TrackingError("observe after seat " + std::to_string(seat) +
                        " already picked on turn " + std::to_string(turn));
  }
  const int h = hand_at(seat, turn);
  if (known_[seat][h] && *known_[seat][h] != hand) {
    throw TrackingError("observed hand disagrees with tracked contents");
  }
  if (advance) {
    turn_ = turn;
    revealed_.assign(players_, false);
  }
  seen_[seat][h] = true;
  known_[seat][h] = hand;
}

void MemoryTracker::reveal(int turn, int seat, KindId kind) {
  if (seat < 0 || seat >= players_) throw TrackingError("reveal: bad seat");
  if (turn != turn_) {
    throw TrackingError("reveal out of order: turn " + std::to_string(turn) +
                        " while tracking turn " + std::to_string(turn_));
  }
  if (revealed_[seat]) {
    throw TrackingError("seat " + std::to_string(seat) +
                        " revealed twice on turn " + std::to_string(turn));
  }
  if (kind < 0 || kind >= n_kinds_) throw TrackingError("reveal: bad kind");
  const int h = hand_at(seat, turn);
  for (int o = 0; o < players_; ++o) {
    if (known_[o][h] && (*known_[o][h])[kind] <= 0) {
      throw TrackingError("revealed pick is absent from the tracked hand");
    }
  }
  revealed_[seat] = true;
  log_.push_back({seat, turn, kind});
  for (int o = 0; o < players_; ++o) {
    if (known_[o][h]) --(*known_[o][h])[kind];
  }
}

bool MemoryTracker::seen(int observer, int hand) const {
  return seen_[observer][hand];
}

std::optional<Hand> MemoryTracker::sleuth(int observer, int target) const {
  if (players_ == 0) return std::nullopt;
  return known_[observer][hand_at(target, turn_)];
}

std::optional<Hand> sleuth(const MemoryTracker& tracker, int observer,
                           int target, int turn) {
  if (turn != tracker.turn()) return std::nullopt;
  return tracker.sleuth(observer, target);
}

}  // namespace sushi
