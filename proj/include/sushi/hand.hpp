#pragma once

#include <numeric>
#include <vector>

#include "sushi/cards.hpp"

namespace sushi {

// Frequency vector over card kinds: counts[k] copies of kind k.
struct Hand {
  std::vector<int> counts;

  Hand() = default;
  explicit Hand(int n_kinds) : counts(static_cast<size_t>(n_kinds), 0) {}
  explicit Hand(std::vector<int> c) : counts(std::move(c)) {}

  int kinds() const { return static_cast<int>(counts.size()); }
  int size() const { return std::accumulate(counts.begin(), counts.end(), 0); }
  bool empty() const { return size() == 0; }
  int operator[](KindId k) const { return counts[k]; }
  int& operator[](KindId k) { return counts[k]; }

  // Kinds with a nonzero count, ascending.
  std::vector<KindId> present() const {
    std::vector<KindId> out;
    for (int k = 0; k < kinds(); ++k) {
      if (counts[k] > 0) out.push_back(k);
    }
    return out;
  }

  bool operator==(const Hand&) const = default;
};

}  // namespace sushi
