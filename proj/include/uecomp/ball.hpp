#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "uecomp/group.hpp"

namespace uecomp {

struct BallBudget {
  uint64_t max_bytes = uint64_t{2} << 30;  // 2 GiB
  uint64_t max_elements = 80'000'000;
};

struct BallEntry {
  Element x;
  double len;
};

// All elements of length <= radius, sorted by (length, canonical bytes),
// with an index for O(1) membership lookup.
class Ball {
 public:
  Ball(GroupSpec spec, double radius, std::vector<BallEntry> entries);

  const GroupSpec& spec() const { return spec_; }
  double radius() const { return radius_; }
  size_t size() const { return entries_.size(); }
  const std::vector<BallEntry>& entries() const { return entries_; }
  const BallEntry& operator[](size_t i) const { return entries_[i]; }

  std::optional<size_t> find(const Element& x) const;
  std::optional<size_t> find_bytes(const std::string& bytes) const;
  bool contains(const Element& x) const { return find(x).has_value(); }

 private:
  GroupSpec spec_;
  double radius_;
  std::vector<BallEntry> entries_;
  std::unordered_map<std::string, size_t> index_;
};

Ball enumerate_ball(const GroupModel& model, double radius,
                    const BallBudget& budget = {});

// Lazily grown |B_r| table. Uses the model's closed form when present,
// otherwise layered BFS (word-metric models only).
class BallCountCache {
 public:
  explicit BallCountCache(const GroupModel& model,
                          const BallBudget& budget = {});
  uint64_t count(double r);

 private:
  void grow_to(int64_t r);
  const GroupModel& model_;
  BallBudget budget_;
  std::vector<uint64_t> counts_;  // counts_[r] = |B_r|, integer radii
  std::unordered_map<std::string, int> lengths_;
  std::vector<Element> frontier_;
  uint64_t bytes_used_ = 0;
};

struct GrowthProfile {
  std::vector<uint64_t> counts;  // counts[r] = |B_r|, r = 0..Rmax
  double fitted_degree = 0.0;    // log-log least squares on the tail
  double residual = 0.0;
  bool exponential = false;
};

GrowthProfile growth_profile(const GroupModel& model, int64_t rmax,
                             const BallBudget& budget = {});

struct KSearchResult {
  int64_t n = 0;
  double p = 0.0;
  int64_t k = 0;       // minimal integer radius satisfying the ratio bound
  double ratio = 0.0;  // |B_{k+R_n}| / |B_{k-R_n}| at k
  double bound = 0.0;  // 1 + 1/(2 n^{1+2p})
};

// Upward scan over integer radii r >= ceil(sqrt(n)) for the smallest r with
// |B_{r+sqrt(n)}| / |B_{r-sqrt(n)}| <= 1 + 1/(2 n^{1+2p}). Empty denominator
// counts as ratio infinity.
KSearchResult find_k_n(const GroupModel& model, int64_t n, double p,
                       BallCountCache& counts, int64_t scan_limit = 5'000'000);
KSearchResult find_k_n(const GroupModel& model, int64_t n, double p);

void cache_save(const Ball& ball, const std::string& path);
Ball cache_load(const GroupModel& model, const std::string& path);

}  // namespace uecomp
