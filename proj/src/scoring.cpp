#include "sushi/scoring.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace sushi {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Counts per kind, skipping voided plays.
Hand active_counts(const Board& b, int n) {
  Hand c(n);
  for (int i = 0; i < static_cast<int>(b.play_order.size()); ++i) {
    if (!b.voided(i)) ++c[b.play_order[i].kind];
  }
  return c;
}

std::array<int, kNumCategories> category_counts(const Hand& active,
                                                const Menu& menu) {
  std::array<int, kNumCategories> out{};
  for (int k = 0; k < menu.size(); ++k) {
    out[static_cast<int>(menu[k].category)] += active[k];
  }
  return out;
}

int distinct_categories(const Hand& active, const Menu& menu) {
  const auto c = category_counts(active, menu);
  return static_cast<int>(std::count_if(c.begin(), c.end(), [](int v) { return v > 0; }));
}

std::vector<Contribution::Share> copies_of(KindId k, int count, double weight = 1.0) {
  return std::vector<Contribution::Share>(static_cast<size_t>(count),
                                          Contribution::Share{k, weight});
}

// Split of `points` among `tied` players, truncated toward zero.
int split(int points, int tied) { return tied > 0 ? points / tied : 0; }

}  // namespace

std::vector<Contribution> board_contributions(std::span<const Board> boards,
                                              int seat, const Menu& menu) {
  const int n = menu.size();
  const int players = static_cast<int>(boards.size());
  std::vector<Hand> active;
  active.reserve(boards.size());
  for (const auto& b : boards) active.push_back(active_counts(b, n));
  const Board& board = boards[seat];
  const Hand& mine = active[seat];

  std::vector<Contribution> out;
  for (const auto& kind : menu.kinds) {
    const KindId k = kind.id;
    std::visit(
        Overloaded{
            [&](const rule::Face& f) {
              for (int i = 0; i < static_cast<int>(board.play_order.size()); ++i) {
                if (board.play_order[i].kind != k || board.voided(i)) continue;
                const auto pair = std::find_if(
                    board.wasabi_pairings.begin(), board.wasabi_pairings.end(),
                    [i](const auto& p) { return p.second == i; });
                if (pair == board.wasabi_pairings.end()) {
                  out.push_back({f.points, {{k, 1.0}}});
                  continue;
                }
                const KindId wasabi = board.play_order[pair->first].kind;
                const int mult = std::get<rule::Wasabi>(menu[wasabi].scoring).multiplier;
                out.push_back({f.points * mult,
                               {{k, static_cast<double>(mult - 1)}, {wasabi, 1.0}}});
              }
            },
            [&](const rule::Wasabi&) {},
            [&](const rule::Set& s) {
              for (int i = 0; i < mine[k] / s.size; ++i) {
                out.push_back({s.points, copies_of(k, s.size)});
              }
            },
            [&](const rule::EachCollision& e) {
              for (int i = 0; i < mine[k]; ++i) out.push_back({e.points, {{k, 1.0}}});
            },
            [&](const rule::IconMajority& m) {
              std::vector<int> icons(static_cast<size_t>(players));
              for (int p = 0; p < players; ++p) icons[p] = active[p][k] * kind.icon_count;
              const int first = *std::max_element(icons.begin(), icons.end());
              if (first <= 0 || icons[seat] <= 0) return;
              const int tied_first = static_cast<int>(std::count(icons.begin(), icons.end(), first));
              int points = 0;
              if (icons[seat] == first) {
                points = split(m.places[0], tied_first);
              } else if (tied_first == 1 && m.places.size() > 1) {
                int second = 0;
                for (int v : icons) {
                  if (v < first) second = std::max(second, v);
                }
                if (second > 0 && icons[seat] == second) {
                  points = split(m.places[1], static_cast<int>(std::count(icons.begin(), icons.end(), second)));
                }
              }
              if (points != 0) {
                out.push_back({points, copies_of(k, mine[k], kind.icon_count)});
              }
            },
            [&](const rule::LargestCategory& t) {
              if (mine[k] == 0) return;
              const auto c = category_counts(mine, menu);
              const int largest = *std::max_element(c.begin(), c.end());
              for (int i = 0; i < mine[k]; ++i) {
                out.push_back({t.per_card * largest, {{k, 1.0}}});
              }
            },
            [&](const rule::CategoryMajority& c) {
              if (mine[k] == 0) return;
              int best = 0;
              for (const auto& a : active) best = std::max(best, distinct_categories(a, menu));
              if (distinct_categories(mine, menu) < best) return;
              for (int i = 0; i < mine[k]; ++i) out.push_back({c.points, {{k, 1.0}}});
            },
            [&](const rule::MostFewest& m) {
              std::vector<int> counts(static_cast<size_t>(players));
              for (int p = 0; p < players; ++p) counts[p] = active[p][k];
              const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
              if (*lo == *hi) return;
              if (counts[seat] == *hi) out.push_back({m.most, copies_of(k, mine[k])});
              if (players > 2 && counts[seat] == *lo) {
                out.push_back({m.fewest, copies_of(k, mine[k])});
              }
            },
            [&](const rule::CountTable& t) {
              const int c = mine[k];
              const int v = t.table[static_cast<size_t>(
                  std::min<int>(c, static_cast<int>(t.table.size()) - 1))];
              if (v != 0) out.push_back({v, copies_of(k, c)});
            },
            [&](const rule::DessertSet&) {},
            [&](const rule::DessertMajority&) {},
        },
        kind.scoring);
  }
  return out;
}

int score_board(std::span<const Board> boards, int seat, const Menu& menu) {
  const auto parts = board_contributions(boards, seat, menu);
  return std::accumulate(parts.begin(), parts.end(), 0,
                         [](int acc, const Contribution& c) { return acc + c.points; });
}

std::vector<Contribution> dessert_contributions(std::span<const Hand> desserts,
                                                int seat, const Menu& menu) {
  const int players = static_cast<int>(desserts.size());
  std::vector<Contribution> out;
  for (const auto& kind : menu.kinds) {
    const KindId k = kind.id;
    const int mine = desserts[seat][k];
    if (const auto* s = std::get_if<rule::DessertSet>(&kind.scoring)) {
      for (int i = 0; i < mine / s->size; ++i) {
        out.push_back({s->points, copies_of(k, s->size)});
      }
    } else if (const auto* m = std::get_if<rule::DessertMajority>(&kind.scoring)) {
      std::vector<int> counts(static_cast<size_t>(players));
      for (int p = 0; p < players; ++p) counts[p] = desserts[p][k];
      const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
      if (*lo == *hi) continue;
      if (mine == *hi) {
        const int tied = static_cast<int>(std::count(counts.begin(), counts.end(), *hi));
        out.push_back({split(m->most, tied), copies_of(k, mine)});
      }
      if (players > 2 && mine == *lo) {
        const int tied = static_cast<int>(std::count(counts.begin(), counts.end(), *lo));
        out.push_back({split(m->fewest, tied), copies_of(k, mine)});
      }
    }
  }
  return out;
}

std::vector<int> score_desserts(std::span<const Hand> desserts, const Menu& menu) {
  std::vector<int> out;
  for (int seat = 0; seat < static_cast<int>(desserts.size()); ++seat) {
    int total = 0;
    for (const auto& c : dessert_contributions(desserts, seat, menu)) total += c.points;
    out.push_back(total);
  }
  return out;
}

}  // namespace sushi
