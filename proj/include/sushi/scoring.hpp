#pragma once

#include <span>
#include <vector>

#include "sushi/game.hpp"

namespace sushi {

// Points earned by a group of cards, with the relative share of each card in
// the group. Shares drive per-card point attribution; a contribution with no
// shares (e.g. a fewest-cards penalty on an empty board) is not attributable.
struct Contribution {
  int points = 0;
  struct Share {
    KindId kind = 0;
    double weight = 1.0;
  };
  std::vector<Share> shares;
};

// Round contributions for `seat`, given every board of the round.
std::vector<Contribution> board_contributions(std::span<const Board> boards,
                                              int seat, const Menu& menu);

// Round points for `seat`; a pure function of the boards.
int score_board(std::span<const Board> boards, int seat, const Menu& menu);

// End-of-game dessert contributions for `seat` from per-seat dessert counts.
std::vector<Contribution> dessert_contributions(std::span<const Hand> desserts,
                                                int seat, const Menu& menu);

std::vector<int> score_desserts(std::span<const Hand> desserts,
                                const Menu& menu);

}  // namespace sushi
