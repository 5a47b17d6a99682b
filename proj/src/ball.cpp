#include "uecomp/ball.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace uecomp {

namespace {

uint64_t approx_entry_bytes(const Element& x) {
  return 64 + 16 * x.w.size();
}

void sort_entries(std::vector<BallEntry>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const BallEntry& a, const BallEntry& b) {
              if (a.len != b.len) return a.len < b.len;
              return canonical_bytes(a.x) < canonical_bytes(b.x);
            });
}

}  // namespace

Ball::Ball(GroupSpec spec, double radius, std::vector<BallEntry> entries)
    : spec_(std::move(spec)), radius_(radius), entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  for (size_t i = 0; i < entries_.size(); ++i)
    index_.emplace(canonical_bytes(entries_[i].x), i);
}

std::optional<size_t> Ball::find(const Element& x) const {
  return find_bytes(canonical_bytes(x));
}

std::optional<size_t> Ball::find_bytes(const std::string& bytes) const {
  auto it = index_.find(bytes);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Ball enumerate_ball(const GroupModel& model, double radius,
                    const BallBudget& budget) {
  if (radius < 0)
    throw InvalidSpecError("ball radius must be nonnegative");
  std::vector<BallEntry> entries;
  if (!model.has_word_metric()) {
    for (Element& x : model.enumerate_by_length(radius)) {
      double len = model.length(x);
      entries.push_back(BallEntry{std::move(x), len});
    }
  } else {
    auto gens = model.generators();
    std::unordered_map<std::string, int> seen;
    std::vector<Element> frontier{model.identity()};
    seen.emplace(canonical_bytes(model.identity()), 0);
    entries.push_back(BallEntry{model.identity(), 0.0});
    uint64_t bytes_used = approx_entry_bytes(model.identity());
    int rmax = static_cast<int>(std::floor(radius));
    for (int r = 1; r <= rmax; ++r) {
      std::vector<Element> next;
      for (const Element& x : frontier) {
        for (const Element& g : gens) {
          Element y = model.mul(x, g);
          std::string key = canonical_bytes(y);
          if (seen.emplace(key, r).second) {
            bytes_used += 2 * approx_entry_bytes(y);
            if (bytes_used > budget.max_bytes ||
                entries.size() + 1 > budget.max_elements)
              throw ResourceError(
                  "ball enumeration exceeded budget at radius " +
                      std::to_string(r),
                  r - 1);
            entries.push_back(BallEntry{y, static_cast<double>(r)});
            next.push_back(std::move(y));
          }
        }
      }
      frontier = std::move(next);
      if (frontier.empty()) break;
    }
  }
  sort_entries(entries);
  return Ball(model.spec(), radius, std::move(entries));
}

// ---------------------------------------------------------------------------
// BallCountCache

BallCountCache::BallCountCache(const GroupModel& model,
                               const BallBudget& budget)
    : model_(model), budget_(budget) {}

uint64_t BallCountCache::count(double r) {
  if (r < 0) return 0;
  if (auto closed = model_.ball_count_closed(r)) return *closed;
  int64_t R = static_cast<int64_t>(std::floor(r));
  if (!model_.has_word_metric()) {
    // closed-form models without a count formula: enumerate once per radius
    return model_.enumerate_by_length(r).size();
  }
  grow_to(R);
  return counts_[static_cast<size_t>(R)];
}

void BallCountCache::grow_to(int64_t r) {
  if (counts_.empty()) {
    Element id = model_.identity();
    lengths_.emplace(canonical_bytes(id), 0);
    frontier_.push_back(id);
    counts_.push_back(1);
    bytes_used_ = approx_entry_bytes(id);
  }
  auto gens = model_.generators();
  while (static_cast<int64_t>(counts_.size()) - 1 < r) {
    int layer = static_cast<int>(counts_.size());
    std::vector<Element> next;
    for (const Element& x : frontier_) {
      for (const Element& g : gens) {
        Element y = model_.mul(x, g);
        std::string key = canonical_bytes(y);
        if (lengths_.emplace(key, layer).second) {
          bytes_used_ += 2 * approx_entry_bytes(y);
          if (bytes_used_ > budget_.max_bytes ||
              lengths_.size() > budget_.max_elements)
            throw ResourceError("ball counting exceeded budget at radius " +
                                    std::to_string(layer),
                                layer - 1);
          next.push_back(std::move(y));
        }
      }
    }
    counts_.push_back(counts_.back() + next.size());
    frontier_ = std::move(next);
    if (frontier_.empty()) {
      // finite group: pad remaining radii
      while (static_cast<int64_t>(counts_.size()) - 1 < r)
        counts_.push_back(counts_.back());
      return;
    }
  }
}

// ---------------------------------------------------------------------------

GrowthProfile growth_profile(const GroupModel& model, int64_t rmax,
                             const BallBudget& budget) {
  if (rmax < 1) throw InvalidSpecError("growth profile needs rmax >= 1");
  BallCountCache cache(model, budget);
  GrowthProfile profile;
  profile.counts.reserve(static_cast<size_t>(rmax) + 1);
  for (int64_t r = 0; r <= rmax; ++r)
    profile.counts.push_back(cache.count(static_cast<double>(r)));

  int64_t tail_start = std::max<int64_t>(2, rmax / 2);
  // exponential detection: layer ratio bounded away from 1 on the tail
  std::vector<double> ratios;
  for (int64_t r = tail_start; r < rmax; ++r)
    if (profile.counts[r] > 0)
      ratios.push_back(static_cast<double>(profile.counts[r + 1]) /
                       static_cast<double>(profile.counts[r]));
  if (!ratios.empty()) {
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2,
                     ratios.end());
    profile.exponential = ratios[ratios.size() / 2] >= 1.5;
  }

  // log-log least squares on the tail
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int64_t m = 0;
  for (int64_t r = tail_start; r <= rmax; ++r) {
    double x = std::log(static_cast<double>(r));
    double y = std::log(static_cast<double>(profile.counts[r]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2 && sxx * m - sx * sx > 0) {
    profile.fitted_degree = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double intercept = (sy - profile.fitted_degree * sx) / m;
    double ss = 0;
    for (int64_t r = tail_start; r <= rmax; ++r) {
      double x = std::log(static_cast<double>(r));
      double y = std::log(static_cast<double>(profile.counts[r]));
      double e = y - (intercept + profile.fitted_degree * x);
      ss += e * e;
    }
    profile.residual = std::sqrt(ss / m);
  }
  return profile;
}

KSearchResult find_k_n(const GroupModel& model, int64_t n, double p,
                       BallCountCache& counts, int64_t scan_limit) {
  if (n < 1) throw InvalidSpecError("find_k_n needs n >= 1");
  if (p <= 0 || p >= 1) throw InvalidSpecError("find_k_n needs p in (0,1)");
  double rn = std::sqrt(static_cast<double>(n));
  double bound = 1.0 + 1.0 / (2.0 * std::pow(static_cast<double>(n), 1 + 2 * p));
  double worst = 0.0;
  int64_t start = static_cast<int64_t>(std::ceil(rn));
  for (int64_t r = start; r <= start + scan_limit; ++r) {
    uint64_t den = counts.count(static_cast<double>(r) - rn);
    double ratio;
    if (den == 0) {
      ratio = std::numeric_limits<double>::infinity();
    } else {
      uint64_t num = counts.count(static_cast<double>(r) + rn);
      ratio = static_cast<double>(num) / static_cast<double>(den);
    }
    worst = std::max(worst, ratio == std::numeric_limits<double>::infinity()
                                ? worst
                                : ratio);
    if (ratio <= bound)
      return KSearchResult{n, p, r, ratio, bound};
  }
  throw ResourceError("k(n) scan exhausted its radius budget; largest finite "
                      "ratio seen " + std::to_string(worst),
                      static_cast<double>(start + scan_limit));
}

KSearchResult find_k_n(const GroupModel& model, int64_t n, double p) {
  BallCountCache counts(model);
  return find_k_n(model, n, p, counts);
}

// ---------------------------------------------------------------------------
// Cache file: magic, version, canonical spec string, radius, then
// length-prefixed element records. Everything little-endian fixed width.

namespace {

constexpr char kMagic[4] = {'U', 'E', 'C', 'B'};
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  // normalize to little-endian
  if constexpr (sizeof(T) > 1) {
    uint64_t u = 0;
    std::memcpy(&u, &v, sizeof(T));
    for (size_t i = 0; i < sizeof(T); ++i)
      buf[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
  }
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!is) throw IoError("truncated ball cache file");
  uint64_t u = 0;
  for (size_t i = 0; i < sizeof(T); ++i)
    u |= static_cast<uint64_t>(buf[i]) << (8 * i);
  T v;
  std::memcpy(&v, &u, sizeof(T));
  return v;
}

}  // namespace

void cache_save(const Ball& ball, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open cache file for writing: " + path);
  os.write(kMagic, 4);
  put<uint32_t>(os, kVersion);
  std::string spec = ball.spec().canonical();
  put<uint32_t>(os, static_cast<uint32_t>(spec.size()));
  os.write(spec.data(), static_cast<std::streamsize>(spec.size()));
  put<double>(os, ball.radius());
  put<uint64_t>(os, ball.size());
  for (const BallEntry& e : ball.entries()) {
    put<uint32_t>(os, static_cast<uint32_t>(e.x.w.size()));
    for (int64_t v : e.x.w) put<int64_t>(os, v);
    put<double>(os, e.len);
  }
  if (!os) throw IoError("write failure on cache file: " + path);
}

Ball cache_load(const GroupModel& model, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open cache file: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("not a ball cache file: " + path);
  uint32_t version = get<uint32_t>(is);
  if (version != kVersion)
    throw IoError("unsupported ball cache version " + std::to_string(version));
  uint32_t spec_len = get<uint32_t>(is);
  std::string spec(spec_len, '\0');
  is.read(spec.data(), spec_len);
  if (!is) throw IoError("truncated ball cache file");
  if (spec != model.spec().canonical())
    throw IoError("cache spec mismatch: file has '" + spec + "', model is '" +
                  model.spec().canonical() + "'");
  double radius = get<double>(is);
  uint64_t count = get<uint64_t>(is);
  std::vector<BallEntry> entries;
  entries.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    uint32_t n = get<uint32_t>(is);
    Element x;
    x.w.reserve(n);
    for (uint32_t j = 0; j < n; ++j) x.w.push_back(get<int64_t>(is));
    double len = get<double>(is);
    entries.push_back(BallEntry{std::move(x), len});
  }
  return Ball(model.spec(), radius, std::move(entries));
}

}  // namespace uecomp
