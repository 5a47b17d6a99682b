#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uecomp/errors.hpp"

namespace uecomp {

// Model-specific normal form. The meaning of the coordinates depends on the
// owning GroupModel:
//   FreeAbelian(d)        : d integer coordinates
//   FreeGroup(r)          : reduced word, letters +/-(i+1) for generator i
//   Heisenberg            : (a, b, c) with x^a y^b z^c, [x,y] = z
//   DirectSumFinite       : one residue per summand
//   LamplighterRestricted : sorted (position, value) pairs, values nonzero
struct Element {
  std::vector<int64_t> w;
  friend bool operator==(const Element&, const Element&) = default;
};

// Injective, order-friendly byte encoding: each coordinate as 8-byte
// big-endian with the sign bit flipped, so lexicographic byte order agrees
// with numeric tuple order for fixed-width encodings.
std::string canonical_bytes(const Element& x);

enum class GroupKind {
  FreeAbelian,
  FreeGroup,
  Heisenberg,
  DirectSumFinite,
  LamplighterRestricted,
  Product,
};

struct GroupSpec {
  GroupKind kind = GroupKind::FreeAbelian;
  int64_t rank = 1;                  // FreeAbelian dimension / FreeGroup rank
  std::vector<int64_t> orders;       // DirectSumFinite; orders[0] must be 1
  int64_t lamp_order = 0;            // 0 means infinite (Z lamps)
  std::vector<std::string> factors;  // Product: canonical factor specs

  // Textual forms accepted (and produced by canonical()):
  //   Z^3   F2   heisenberg   dsum:1,2,2,2   lamplighter:2   lamplighter:inf
  //   product:Z|dsum:1,2,2
  static GroupSpec parse(const std::string& text);
  std::string canonical() const;
  void validate() const;  // throws InvalidSpecError
};

class GroupModel {
 public:
  explicit GroupModel(GroupSpec spec) : spec_(std::move(spec)) {}
  virtual ~GroupModel() = default;

  const GroupSpec& spec() const { return spec_; }

  virtual Element identity() const = 0;
  virtual Element mul(const Element& x, const Element& y) const = 0;
  virtual Element inv(const Element& x) const = 0;
  virtual double length(const Element& x) const = 0;

  // Symmetric generating set; empty when the model carries a closed-form
  // length rather than a word metric (DirectSumFinite, lamplighter).
  virtual std::vector<Element> generators() const { return {}; }
  bool has_word_metric() const { return !generators().empty(); }

  virtual Element sample(std::mt19937_64& rng) const = 0;

  virtual std::string format(const Element& x) const;
  virtual Element parse_element(const std::string& text) const;

  // Exact |B(1,r)| when a closed form exists.
  virtual std::optional<uint64_t> ball_count_closed(double r) const {
    (void)r;
    return std::nullopt;
  }
  // Exact |B(1,k) /\ B(z,k)| when a fast route exists.
  virtual std::optional<uint64_t> ball_intersection_closed(
      double k, const Element& z) const {
    (void)k;
    (void)z;
    return std::nullopt;
  }
  // Direct enumeration of {x : l(x) <= R} for models without generators.
  // Word-metric models are enumerated by BFS in metric-balls instead.
  virtual std::vector<Element> enumerate_by_length(double R) const;

  double dist(const Element& x, const Element& y) const {
    return length(mul(inv(x), y));
  }

 private:
  GroupSpec spec_;
};

// Factory for every GroupSpec variant. Throws InvalidSpecError on bad
// parameters.
std::shared_ptr<GroupModel> make_group(const GroupSpec& spec);
std::shared_ptr<GroupModel> make_group(const std::string& spec_text);

}  // namespace uecomp
