#pragma once

// Independent reference implementations used to check the library: plain
// Cayley-graph BFS over the model's generators, and a wreath-product BFS
// for the restricted lamplighter length. These deliberately avoid the
// library's ball machinery.

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "uecomp/group.hpp"

namespace uecomp::test {

// distances from the identity out to the given radius, keyed by
// canonical bytes
inline std::unordered_map<std::string, int64_t> cayley_bfs(
    const GroupModel& model, int64_t radius) {
  std::unordered_map<std::string, int64_t> dist;
  std::deque<Element> frontier;
  Element id = model.identity();
  dist.emplace(canonical_bytes(id), 0);
  frontier.push_back(id);
  std::vector<Element> gens = model.generators();
  for (int64_t layer = 0; layer < radius; ++layer) {
    std::deque<Element> next;
    for (const Element& x : frontier) {
      for (const Element& g : gens) {
        Element y = model.mul(x, g);
        if (dist.emplace(canonical_bytes(y), layer + 1).second)
          next.push_back(y);
      }
    }
    frontier.swap(next);
  }
  return dist;
}

// State of the wreath product: lamp values on positions lo..hi plus the
// cursor. Generators: cursor +/-1, lamp at cursor +/-1 (mod q when q >= 2).
// Lamp values are capped to [-value_cap, value_cap] for Z lamps; optimal
// walks to targets within the cap never leave it, one lamp moving
// monotonically at a time.
struct WreathOracle {
  int64_t q = 2;  // 0 means Z lamps
  int64_t lo = -3, hi = 3;
  int64_t cursor_lo = -4, cursor_hi = 4;
  int64_t value_cap = 2;  // Z lamps only

  std::map<std::vector<int64_t>, int64_t> dist;  // state = lamps..., cursor

  void run() {
    size_t width = static_cast<size_t>(hi - lo + 1);
    std::vector<int64_t> start(width + 1, 0);
    dist.clear();
    dist.emplace(start, 0);
    std::deque<std::vector<int64_t>> frontier{start};
    while (!frontier.empty()) {
      std::vector<int64_t> s = frontier.front();
      frontier.pop_front();
      int64_t d = dist[s];
      auto push = [&](std::vector<int64_t> t) {
        auto [it, fresh] = dist.emplace(std::move(t), d + 1);
        if (fresh) frontier.push_back(it->first);
      };
      int64_t cursor = s[width];
      for (int64_t step : {int64_t{1}, int64_t{-1}}) {
        int64_t c = cursor + step;
        if (c < cursor_lo || c > cursor_hi) continue;
        std::vector<int64_t> t = s;
        t[width] = c;
        push(std::move(t));
      }
      if (cursor >= lo && cursor <= hi) {
        size_t slot = static_cast<size_t>(cursor - lo);
        for (int64_t step : {int64_t{1}, int64_t{-1}}) {
          int64_t v = s[slot] + step;
          if (q >= 2) {
            v = ((v % q) + q) % q;
          } else if (v < -value_cap || v > value_cap) {
            continue;
          }
          std::vector<int64_t> t = s;
          t[slot] = v;
          push(std::move(t));
        }
      }
    }
    // BFS above is by layers only if pushed in distance order; the deque
    // pop order preserves it because every edge has weight one
  }

  // length of (f, 0) for lamps given on lo..hi
  int64_t length(const std::vector<int64_t>& lamps) const {
    std::vector<int64_t> s = lamps;
    s.push_back(0);
    auto it = dist.find(s);
    return it == dist.end() ? -1 : it->second;
  }
};

}  // namespace uecomp::test
