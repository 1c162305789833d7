#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "json.hpp"
#include "sushi/agents.hpp"
#include "sushi/game.hpp"

namespace sushi {

// Terminal reward of the training objective: final score, plus a bonus for
// every seat in the winner set.
inline constexpr int kWinBonus = 100;
double game_reward(const FinalResult& result, int seat);

struct GameRecord {
  FinalResult result;
  std::vector<nlohmann::json> events;  // empty unless logging was requested
};

struct RunOptions {
  int game_index = 0;
  bool log = false;
};

// Plays one full game. seats[i] controls seat i; the deal uses `seed` and
// each seat draws from its own stream derived from it.
GameRecord run_game(const std::shared_ptr<const GameConfig>& config,
                    std::span<const Agent* const> seats, std::uint64_t seed,
                    const RunOptions& options = {});

// JSON-lines game log events:
//   game_start  {game, seed, players, hand_size, rounds, pass, menu, agents}
//   pick        {game, round, turn, seat, card, hand}  (hand before the pick)
//   round_end   {game, round, deltas, scores}
//   game_end    {game, final_scores, dessert_points, desserts, winners}
void write_events(std::ostream& out, std::span<const nlohmann::json> events);
std::vector<nlohmann::json> read_events(std::istream& in);

}  // namespace sushi
