#include "uecomp/group.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace uecomp {

std::string canonical_bytes(const Element& x) {
  std::string out;
  out.reserve(x.w.size() * 8);
  for (int64_t v : x.w) {
    uint64_t u = static_cast<uint64_t>(v) ^ (uint64_t{1} << 63);
    for (int shift = 56; shift >= 0; shift -= 8) {
      out.push_back(static_cast<char>((u >> shift) & 0xff));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// GroupSpec

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<int64_t> parse_int_list(const std::string& s) {
  std::vector<int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw InvalidSpecError("empty entry in integer list");
    out.push_back(std::stoll(item));
  }
  return out;
}

}  // namespace

void GroupSpec::validate() const {
  switch (kind) {
    case GroupKind::FreeAbelian:
      if (rank < 1) throw InvalidSpecError("FreeAbelian needs dimension >= 1");
      break;
    case GroupKind::FreeGroup:
      if (rank < 1) throw InvalidSpecError("FreeGroup needs rank >= 1");
      break;
    case GroupKind::Heisenberg:
      break;
    case GroupKind::DirectSumFinite:
      if (orders.empty())
        throw InvalidSpecError("DirectSumFinite needs a nonempty order list");
      if (orders[0] != 1)
        throw InvalidSpecError("DirectSumFinite requires F_0 trivial (orders[0] == 1)");
      for (int64_t q : orders)
        if (q < 1) throw InvalidSpecError("DirectSumFinite orders must be >= 1");
      break;
    case GroupKind::LamplighterRestricted:
      if (lamp_order < 0 || lamp_order == 1)
        throw InvalidSpecError("lamp order must be >= 2, or 0 for Z lamps");
      break;
    case GroupKind::Product:
      if (factors.size() != 2)
        throw InvalidSpecError("product spec needs exactly two factors");
      for (const std::string& f : factors) GroupSpec::parse(f).validate();
      break;
  }
}

GroupSpec GroupSpec::parse(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          t.end());
  if (t.empty()) throw InvalidSpecError("empty group spec");
  GroupSpec spec;
  std::string lt = lower(t);
  if (lt == "z") {
    spec.kind = GroupKind::FreeAbelian;
    spec.rank = 1;
  } else if (lt.rfind("z^", 0) == 0) {
    spec.kind = GroupKind::FreeAbelian;
    spec.rank = std::stoll(t.substr(2));
  } else if (lt == "heisenberg" || lt == "h3") {
    spec.kind = GroupKind::Heisenberg;
  } else if (lt.rfind("dsum:", 0) == 0) {
    spec.kind = GroupKind::DirectSumFinite;
    spec.orders = parse_int_list(t.substr(5));
  } else if (lt.rfind("lamplighter:", 0) == 0) {
    spec.kind = GroupKind::LamplighterRestricted;
    std::string arg = lt.substr(12);
    spec.lamp_order = (arg == "inf" || arg == "z") ? 0 : std::stoll(arg);
  } else if (lt.rfind("product:", 0) == 0) {
    spec.kind = GroupKind::Product;
    std::string rest = t.substr(8);
    auto bar = rest.find('|');
    if (bar == std::string::npos)
      throw InvalidSpecError("product spec wants 'product:<a>|<b>'");
    spec.factors = {GroupSpec::parse(rest.substr(0, bar)).canonical(),
                    GroupSpec::parse(rest.substr(bar + 1)).canonical()};
  } else if (lt[0] == 'f') {
    spec.kind = GroupKind::FreeGroup;
    std::string arg = t.substr(1);
    if (!arg.empty() && arg[0] == '_') arg = arg.substr(1);
    spec.rank = std::stoll(arg);
  } else {
    throw InvalidSpecError("unrecognized group spec: " + text);
  }
  spec.validate();
  return spec;
}

std::string GroupSpec::canonical() const {
  std::ostringstream os;
  switch (kind) {
    case GroupKind::FreeAbelian:
      os << "Z^" << rank;
      break;
    case GroupKind::FreeGroup:
      os << "F" << rank;
      break;
    case GroupKind::Heisenberg:
      os << "heisenberg";
      break;
    case GroupKind::DirectSumFinite: {
      os << "dsum:";
      for (size_t i = 0; i < orders.size(); ++i)
        os << (i ? "," : "") << orders[i];
      break;
    }
    case GroupKind::LamplighterRestricted:
      os << "lamplighter:";
      if (lamp_order == 0)
        os << "inf";
      else
        os << lamp_order;
      break;
    case GroupKind::Product:
      os << "product:" << factors[0] << "|" << factors[1];
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Defaults

std::string GroupModel::format(const Element& x) const {
  std::ostringstream os;
  for (size_t i = 0; i < x.w.size(); ++i) os << (i ? "," : "") << x.w[i];
  return os.str();
}

Element GroupModel::parse_element(const std::string& text) const {
  Element e;
  if (!text.empty()) e.w = parse_int_list(text);
  return e;
}

std::vector<Element> GroupModel::enumerate_by_length(double) const {
  throw UnsupportedModelError(
      "direct length enumeration not available; use BFS ball enumeration");
}

// ---------------------------------------------------------------------------
// Free abelian Z^d, l^1 word length over +/-e_i

namespace {

class FreeAbelianModel final : public GroupModel {
 public:
  using GroupModel::GroupModel;

  Element identity() const override {
    return Element{std::vector<int64_t>(spec().rank, 0)};
  }
  Element mul(const Element& x, const Element& y) const override {
    Element r = x;
    for (size_t i = 0; i < r.w.size(); ++i) r.w[i] += y.w[i];
    return r;
  }
  Element inv(const Element& x) const override {
    Element r = x;
    for (auto& v : r.w) v = -v;
    return r;
  }
  double length(const Element& x) const override {
    int64_t s = 0;
    for (int64_t v : x.w) s += std::llabs(v);
    return static_cast<double>(s);
  }
  std::vector<Element> generators() const override {
    std::vector<Element> gens;
    for (int64_t i = 0; i < spec().rank; ++i) {
      for (int64_t sign : {int64_t{1}, int64_t{-1}}) {
        Element e = identity();
        e.w[i] = sign;
        gens.push_back(e);
      }
    }
    return gens;
  }
  Element sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<int64_t> d(-20, 20);
    Element e = identity();
    for (auto& v : e.w) v = d(rng);
    return e;
  }
  std::optional<uint64_t> ball_count_closed(double r) const override {
    if (r < 0) return uint64_t{0};
    int64_t R = static_cast<int64_t>(std::floor(r));
    int64_t d = spec().rank;
    // sum_i 2^i C(d,i) C(R,i)
    long double total = 0, cd = 1, cr = 1, p2 = 1;
    for (int64_t i = 0; i <= std::min(d, R); ++i) {
      total += p2 * cd * cr;
      cd = cd * (d - i) / (i + 1);
      cr = cr * (R - i) / (i + 1);
      p2 *= 2;
    }
    return static_cast<uint64_t>(std::llroundl(total));
  }
  std::optional<uint64_t> ball_intersection_closed(
      double k, const Element& z) const override {
    if (k < 0) return uint64_t{0};
    int64_t K = static_cast<int64_t>(std::floor(k));
    if (spec().rank == 1) {
      int64_t a = std::llabs(z.w[0]);
      return a > 2 * K ? uint64_t{0} : static_cast<uint64_t>(2 * K + 1 - a);
    }
    if (spec().rank == 2) {
      uint64_t count = 0;
      for (int64_t u2 = -K; u2 <= K; ++u2) {
        int64_t s1 = K - std::llabs(u2);
        int64_t s2 = K - std::llabs(u2 - z.w[1]);
        if (s2 < 0) continue;
        int64_t lo = std::max(-s1, z.w[0] - s2);
        int64_t hi = std::min(s1, z.w[0] + s2);
        if (hi >= lo) count += static_cast<uint64_t>(hi - lo + 1);
      }
      return count;
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Free group F_r, elements as reduced words

class FreeGroupModel final : public GroupModel {
 public:
  using GroupModel::GroupModel;

  Element identity() const override { return Element{}; }
  Element mul(const Element& x, const Element& y) const override {
    Element r = x;
    for (int64_t letter : y.w) {
      if (!r.w.empty() && r.w.back() == -letter)
        r.w.pop_back();
      else
        r.w.push_back(letter);
    }
    return r;
  }
  Element inv(const Element& x) const override {
    Element r;
    r.w.reserve(x.w.size());
    for (auto it = x.w.rbegin(); it != x.w.rend(); ++it) r.w.push_back(-*it);
    return r;
  }
  double length(const Element& x) const override {
    return static_cast<double>(x.w.size());
  }
  std::vector<Element> generators() const override {
    std::vector<Element> gens;
    for (int64_t i = 1; i <= spec().rank; ++i) {
      gens.push_back(Element{{i}});
      gens.push_back(Element{{-i}});
    }
    return gens;
  }
  Element sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<int64_t> len(0, 12);
    std::uniform_int_distribution<int64_t> gen(1, spec().rank);
    std::uniform_int_distribution<int> sign(0, 1);
    Element e;
    int64_t n = len(rng);
    while (static_cast<int64_t>(e.w.size()) < n) {
      int64_t letter = gen(rng) * (sign(rng) ? 1 : -1);
      if (!e.w.empty() && e.w.back() == -letter) continue;
      e.w.push_back(letter);
    }
    return e;
  }
  // words over a..z, inverses as uppercase
  std::string format(const Element& x) const override {
    if (x.w.empty()) return "1";
    std::string s;
    for (int64_t letter : x.w) {
      char base = letter > 0 ? 'a' : 'A';
      s.push_back(static_cast<char>(base + std::llabs(letter) - 1));
    }
    return s;
  }
  Element parse_element(const std::string& text) const override {
    Element e;
    if (text == "1" || text.empty()) return e;
    for (char c : text) {
      int64_t letter;
      if (c >= 'a' && c <= 'z')
        letter = c - 'a' + 1;
      else if (c >= 'A' && c <= 'Z')
        letter = -(c - 'A' + 1);
      else
        throw InvalidSpecError(std::string("bad free-group letter: ") + c);
      if (std::llabs(letter) > spec().rank)
        throw InvalidSpecError("generator index out of range");
      Element g{{letter}};
      e = mul(e, g);
    }
    return e;
  }
};

// ---------------------------------------------------------------------------
// Discrete Heisenberg group, normal form x^a y^b z^c (matrix convention:
// c composes as c + c' + a*b'). Word length over {x,y}^{+-1} via memoized BFS.

class HeisenbergModel final : public GroupModel {
 public:
  explicit HeisenbergModel(GroupSpec spec) : GroupModel(std::move(spec)) {
    Element id = identity();
    lengths_[canonical_bytes(id)] = 0;
    frontier_.push_back(id);
  }

  Element identity() const override { return Element{{0, 0, 0}}; }
  Element mul(const Element& x, const Element& y) const override {
    return Element{{x.w[0] + y.w[0], x.w[1] + y.w[1],
                    x.w[2] + y.w[2] + x.w[0] * y.w[1]}};
  }
  Element inv(const Element& x) const override {
    return Element{{-x.w[0], -x.w[1], x.w[0] * x.w[1] - x.w[2]}};
  }
  double length(const Element& x) const override {
    std::string key = canonical_bytes(x);
    for (;;) {
      auto it = lengths_.find(key);
      if (it != lengths_.end()) return static_cast<double>(it->second);
      if (frontier_.empty() || radius_ >= kMaxRadius)
        throw ResourceError("Heisenberg BFS radius cap reached",
                            static_cast<double>(radius_));
      grow_one_layer();
    }
  }
  std::vector<Element> generators() const override {
    return {Element{{1, 0, 0}}, Element{{-1, 0, 0}}, Element{{0, 1, 0}},
            Element{{0, -1, 0}}};
  }
  Element sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<int64_t> steps(0, 10);
    std::uniform_int_distribution<size_t> pick(0, 3);
    auto gens = generators();
    Element e = identity();
    int64_t n = steps(rng);
    for (int64_t i = 0; i < n; ++i) e = mul(e, gens[pick(rng)]);
    return e;
  }

  int grown_radius() const { return radius_; }

 private:
  static constexpr int kMaxRadius = 128;

  void grow_one_layer() const {
    std::vector<Element> next;
    auto gens = generators();
    for (const Element& x : frontier_) {
      for (const Element& g : gens) {
        Element y = mul(x, g);
        std::string key = canonical_bytes(y);
        if (lengths_.emplace(key, radius_ + 1).second) next.push_back(y);
      }
    }
    frontier_ = std::move(next);
    ++radius_;
  }

  mutable std::unordered_map<std::string, int> lengths_;
  mutable std::vector<Element> frontier_;
  mutable int radius_ = 0;
};

// ---------------------------------------------------------------------------
// Infinite direct sum of finite cyclic groups, truncated to the given order
// list. l(g) = min{n : g in F_0 + ... + F_n} = largest nonzero index.

class DirectSumFiniteModel final : public GroupModel {
 public:
  using GroupModel::GroupModel;

  Element identity() const override {
    return Element{std::vector<int64_t>(spec().orders.size(), 0)};
  }
  Element mul(const Element& x, const Element& y) const override {
    Element r = x;
    for (size_t i = 0; i < r.w.size(); ++i)
      r.w[i] = (r.w[i] + y.w[i]) % spec().orders[i];
    return r;
  }
  Element inv(const Element& x) const override {
    Element r = x;
    for (size_t i = 0; i < r.w.size(); ++i)
      r.w[i] = (spec().orders[i] - r.w[i]) % spec().orders[i];
    return r;
  }
  double length(const Element& x) const override {
    for (size_t i = x.w.size(); i-- > 0;)
      if (x.w[i] != 0) return static_cast<double>(i);
    return 0.0;
  }
  Element sample(std::mt19937_64& rng) const override {
    Element e = identity();
    for (size_t i = 0; i < e.w.size(); ++i) {
      std::uniform_int_distribution<int64_t> d(0, spec().orders[i] - 1);
      e.w[i] = d(rng);
    }
    return e;
  }
  std::optional<uint64_t> ball_count_closed(double r) const override {
    if (r < 0) return uint64_t{0};
    size_t top = std::min(spec().orders.size() - 1,
                          static_cast<size_t>(std::floor(r)));
    uint64_t count = 1;
    for (size_t i = 0; i <= top; ++i)
      count *= static_cast<uint64_t>(spec().orders[i]);
    return count;
  }
  std::vector<Element> enumerate_by_length(double R) const override {
    std::vector<Element> out;
    out.push_back(identity());
    if (R < 0) return {};
    size_t top = std::min(spec().orders.size() - 1,
                          static_cast<size_t>(std::floor(R)));
    for (size_t i = 1; i <= top; ++i) {
      size_t base = out.size();
      for (int64_t v = 1; v < spec().orders[i]; ++v) {
        for (size_t j = 0; j < base; ++j) {
          Element e = out[j];
          e.w[i] = v;
          out.push_back(e);
        }
      }
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Restricted lamplighter: the subgroup {(f, 0)} of (Z/q) wr Z (or Z wr Z)
// with the metric induced by the word length over {t, t^-1, e_0^(+-1)}.
// Closed form: sum of per-lamp toggle costs plus the shortest closed walk
// from 0 covering the support, 2(R - L) with L = min(0, support),
// R = max(0, support).

class LamplighterModel final : public GroupModel {
 public:
  using GroupModel::GroupModel;

  Element identity() const override { return Element{}; }

  Element mul(const Element& x, const Element& y) const override {
    Element r;
    size_t i = 0, j = 0;
    auto push = [&](int64_t pos, int64_t val) {
      val = normalize(val);
      if (val != 0) {
        r.w.push_back(pos);
        r.w.push_back(val);
      }
    };
    while (i < x.w.size() || j < y.w.size()) {
      if (j >= y.w.size() || (i < x.w.size() && x.w[i] < y.w[j])) {
        push(x.w[i], x.w[i + 1]);
        i += 2;
      } else if (i >= x.w.size() || y.w[j] < x.w[i]) {
        push(y.w[j], y.w[j + 1]);
        j += 2;
      } else {
        push(x.w[i], x.w[i + 1] + y.w[j + 1]);
        i += 2;
        j += 2;
      }
    }
    return r;
  }
  Element inv(const Element& x) const override {
    Element r = x;
    for (size_t i = 1; i < r.w.size(); i += 2) r.w[i] = normalize(-r.w[i]);
    return r;
  }
  double length(const Element& x) const override {
    if (x.w.empty()) return 0.0;
    int64_t toggles = 0;
    int64_t lo = 0, hi = 0;
    for (size_t i = 0; i < x.w.size(); i += 2) {
      lo = std::min(lo, x.w[i]);
      hi = std::max(hi, x.w[i]);
      toggles += toggle_cost(x.w[i + 1]);
    }
    return static_cast<double>(toggles + 2 * (hi - lo));
  }
  Element sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<int> count(0, 4);
    std::uniform_int_distribution<int64_t> pos(-5, 5);
    int64_t q = spec().lamp_order;
    std::uniform_int_distribution<int64_t> val(q == 0 ? -6 : 1,
                                               q == 0 ? 6 : q - 1);
    Element e;
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
      Element lamp{{pos(rng), normalize(val(rng))}};
      if (lamp.w[1] != 0) e = mul(e, lamp);
    }
    return e;
  }
  std::vector<Element> enumerate_by_length(double R) const override {
    std::vector<Element> out;
    if (R < 0) return out;
    int64_t window = static_cast<int64_t>(std::floor(R / 2));
    Element current;
    dfs(-window, window, R, current, out);
    return out;
  }
  std::string format(const Element& x) const override {
    if (x.w.empty()) return "e";
    std::ostringstream os;
    for (size_t i = 0; i < x.w.size(); i += 2)
      os << (i ? ";" : "") << x.w[i] << ":" << x.w[i + 1];
    return os.str();
  }
  Element parse_element(const std::string& text) const override {
    Element e;
    if (text == "e" || text.empty()) return e;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
      auto colon = item.find(':');
      if (colon == std::string::npos)
        throw InvalidSpecError("lamplighter element wants pos:val pairs");
      Element lamp{{std::stoll(item.substr(0, colon)),
                    normalize(std::stoll(item.substr(colon + 1)))}};
      if (lamp.w[1] != 0) e = mul(e, lamp);
    }
    return e;
  }

 private:
  int64_t normalize(int64_t v) const {
    int64_t q = spec().lamp_order;
    if (q == 0) return v;
    v %= q;
    return v < 0 ? v + q : v;
  }
  int64_t toggle_cost(int64_t v) const {
    int64_t q = spec().lamp_order;
    return q == 0 ? std::llabs(v) : std::min(v, q - v);
  }
  void dfs(int64_t pos, int64_t window, double budget, Element& current,
           std::vector<Element>& out) const {
    if (length(current) <= budget) out.push_back(current);
    if (pos > window) return;
    // extending the support only increases the length
    for (int64_t next = pos; next <= window; ++next) {
      int64_t q = spec().lamp_order;
      int64_t vmin = q == 0 ? -static_cast<int64_t>(budget) : 1;
      int64_t vmax = q == 0 ? static_cast<int64_t>(budget) : q - 1;
      for (int64_t v = vmin; v <= vmax; ++v) {
        if (v == 0) continue;
        current.w.push_back(next);
        current.w.push_back(v);
        if (length(current) <= budget)
          dfs(next + 1, window, budget, current, out);
        current.w.pop_back();
        current.w.pop_back();
      }
    }
  }
};

}  // namespace

std::shared_ptr<GroupModel> make_group(const GroupSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GroupKind::FreeAbelian:
      return std::make_shared<FreeAbelianModel>(spec);
    case GroupKind::FreeGroup:
      return std::make_shared<FreeGroupModel>(spec);
    case GroupKind::Heisenberg:
      return std::make_shared<HeisenbergModel>(spec);
    case GroupKind::DirectSumFinite:
      return std::make_shared<DirectSumFiniteModel>(spec);
    case GroupKind::LamplighterRestricted:
      return std::make_shared<LamplighterModel>(spec);
    case GroupKind::Product:
      throw InvalidSpecError(
          "product groups are built via make_any_group (extension module)");
  }
  throw InvalidSpecError("unknown group kind");
}

std::shared_ptr<GroupModel> make_group(const std::string& spec_text) {
  return make_group(GroupSpec::parse(spec_text));
}

}  // namespace uecomp
