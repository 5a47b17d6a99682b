#include "uecomp/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uecomp {

// ---------------------------------------------------------------------------
// ProductGroupModel

namespace {

GroupSpec product_spec(const GroupModel& a, const GroupModel& b) {
  GroupSpec spec;
  spec.kind = GroupKind::Product;
  spec.factors = {a.spec().canonical(), b.spec().canonical()};
  return spec;
}

}  // namespace

ProductGroupModel::ProductGroupModel(std::shared_ptr<const GroupModel> first,
                                     std::shared_ptr<const GroupModel> second)
    : GroupModel(product_spec(*first, *second)),
      first_(std::move(first)),
      second_(std::move(second)) {}

Element ProductGroupModel::pack(const Element& g, const Element& h) const {
  Element x;
  x.w.reserve(1 + g.w.size() + h.w.size());
  x.w.push_back(static_cast<int64_t>(g.w.size()));
  x.w.insert(x.w.end(), g.w.begin(), g.w.end());
  x.w.insert(x.w.end(), h.w.begin(), h.w.end());
  return x;
}

Element ProductGroupModel::first_part(const Element& x) const {
  size_t n = static_cast<size_t>(x.w[0]);
  return Element{{x.w.begin() + 1, x.w.begin() + 1 + n}};
}

Element ProductGroupModel::second_part(const Element& x) const {
  size_t n = static_cast<size_t>(x.w[0]);
  return Element{{x.w.begin() + 1 + n, x.w.end()}};
}

Element ProductGroupModel::identity() const {
  return pack(first_->identity(), second_->identity());
}

Element ProductGroupModel::mul(const Element& x, const Element& y) const {
  return pack(first_->mul(first_part(x), first_part(y)),
              second_->mul(second_part(x), second_part(y)));
}

Element ProductGroupModel::inv(const Element& x) const {
  return pack(first_->inv(first_part(x)), second_->inv(second_part(x)));
}

double ProductGroupModel::length(const Element& x) const {
  return first_->length(first_part(x)) + second_->length(second_part(x));
}

std::vector<Element> ProductGroupModel::generators() const {
  if (!first_->has_word_metric() || !second_->has_word_metric()) return {};
  std::vector<Element> gens;
  for (const Element& g : first_->generators())
    gens.push_back(pack(g, second_->identity()));
  for (const Element& h : second_->generators())
    gens.push_back(pack(first_->identity(), h));
  return gens;
}

Element ProductGroupModel::sample(std::mt19937_64& rng) const {
  return pack(first_->sample(rng), second_->sample(rng));
}

std::vector<Element> ProductGroupModel::enumerate_by_length(double R) const {
  std::vector<Element> out;
  if (R < 0) return out;
  Ball first_ball = enumerate_ball(*first_, R);
  for (const BallEntry& g : first_ball.entries()) {
    Ball second_ball = enumerate_ball(*second_, R - g.len);
    for (const BallEntry& h : second_ball.entries())
      out.push_back(pack(g.x, h.x));
  }
  return out;
}

std::string ProductGroupModel::format(const Element& x) const {
  return "(" + first_->format(first_part(x)) + " | " +
         second_->format(second_part(x)) + ")";
}

// ---------------------------------------------------------------------------
// ExtensionModel

Element ExtensionModel::project_to_kernel(const Element& gamma) const {
  const GroupModel& t = total();
  Element lift = section(project(gamma));
  return kernel_part(t.mul(gamma, t.inv(lift)));
}

double ExtensionModel::induced_quotient_length(const Element& gamma) const {
  return quotient().length(project(gamma));
}

double ExtensionModel::kernel_induced_length(const Element& h) const {
  return total().length(embed_kernel(h));
}

// ---------------------------------------------------------------------------
// TrivialProductExtension

TrivialProductExtension::TrivialProductExtension(
    std::shared_ptr<const GroupModel> quotient,
    std::shared_ptr<const GroupModel> kernel)
    : quotient_(std::move(quotient)),
      kernel_(std::move(kernel)),
      product_(std::make_shared<ProductGroupModel>(quotient_, kernel_)) {}

Element TrivialProductExtension::project(const Element& gamma) const {
  return product_->first_part(gamma);
}

Element TrivialProductExtension::embed_kernel(const Element& h) const {
  return product_->pack(quotient_->identity(), h);
}

Element TrivialProductExtension::kernel_part(const Element& gamma) const {
  if (!(product_->first_part(gamma) == quotient_->identity()))
    throw InvalidSpecError("kernel_part needs an element of the kernel");
  return product_->second_part(gamma);
}

Element TrivialProductExtension::section(const Element& g) const {
  return product_->pack(g, kernel_->identity());
}

// ---------------------------------------------------------------------------
// HeisenbergCentralExtension

HeisenbergCentralExtension::HeisenbergCentralExtension(int64_t section_radius,
                                                       const BallBudget& budget)
    : total_(make_group("heisenberg")),
      kernel_(make_group("Z")),
      quotient_(make_group("Z^2")),
      section_radius_(section_radius),
      gamma_ball_(enumerate_ball(*total_, static_cast<double>(section_radius),
                                 budget)) {
  // entries come sorted by (length, bytes); first hit per fiber is the
  // minimal-length lift with the canonical tie-break
  for (const BallEntry& e : gamma_ball_.entries()) {
    std::string key = canonical_bytes(project(e.x));
    section_table_.emplace(key, e.x);
  }
}

Element HeisenbergCentralExtension::project(const Element& gamma) const {
  return Element{{gamma.w[0], gamma.w[1]}};
}

Element HeisenbergCentralExtension::embed_kernel(const Element& h) const {
  return Element{{0, 0, h.w[0]}};
}

Element HeisenbergCentralExtension::kernel_part(const Element& gamma) const {
  if (gamma.w[0] != 0 || gamma.w[1] != 0)
    throw InvalidSpecError("kernel_part needs a central element");
  return Element{{gamma.w[2]}};
}

Element HeisenbergCentralExtension::section(const Element& g) const {
  auto it = section_table_.find(canonical_bytes(g));
  if (it == section_table_.end())
    throw ResourceError("section table does not reach this quotient element",
                        static_cast<double>(section_radius_));
  return it->second;
}

double HeisenbergCentralExtension::kernel_induced_length(
    const Element& h) const {
  int64_t c = h.w[0];
  if (c == 0) return 0.0;
  if (center_lengths_.empty()) {
    // l(z^c) = min over midpoints g of l(g) + l(g^-1 z^c); valid whenever
    // l(z^c) <= 2 * section_radius_. One batched pass: group the ball by
    // the (a, b) fiber, pair each fiber with its negation, and record the
    // per-c minimum. g=(a,b,c1), g^-1 z^c = (-a,-b,c2) multiply to
    // z^{c1+c2-ab}.
    std::unordered_map<std::string, std::vector<std::pair<int64_t, double>>>
        fibers;
    for (const BallEntry& e : gamma_ball_.entries())
      fibers[canonical_bytes(Element{{e.x.w[0], e.x.w[1]}})].push_back(
          {e.x.w[2], e.len});
    for (const BallEntry& e : gamma_ball_.entries()) {
      int64_t a = e.x.w[0], b = e.x.w[1];
      if (a < 0 || (a == 0 && b < 0)) continue;
      auto it = fibers.find(canonical_bytes(Element{{a, b}}));
      auto jt = fibers.find(canonical_bytes(Element{{-a, -b}}));
      if (it == fibers.end() || jt == fibers.end()) continue;
      for (const auto& [c1, l1] : it->second) {
        for (const auto& [c2, l2] : jt->second) {
          int64_t cc = c1 + c2 - a * b;
          double len = l1 + l2;
          auto [at, fresh] = center_lengths_.try_emplace(cc, len);
          if (!fresh && len < at->second) at->second = len;
        }
      }
      // visit each fiber pair once
      it->second.clear();
      if (it != jt) jt->second.clear();
    }
  }
  auto it = center_lengths_.find(c);
  if (it == center_lengths_.end())
    throw ResourceError("central element beyond the reach of the section ball",
                        2.0 * static_cast<double>(section_radius_));
  return it->second;
}

std::shared_ptr<GroupModel> make_any_group(const GroupSpec& spec) {
  spec.validate();
  if (spec.kind != GroupKind::Product) return make_group(spec);
  return std::make_shared<ProductGroupModel>(make_any_group(spec.factors[0]),
                                             make_any_group(spec.factors[1]));
}

std::shared_ptr<GroupModel> make_any_group(const std::string& spec_text) {
  return make_any_group(GroupSpec::parse(spec_text));
}

std::shared_ptr<ExtensionModel> make_trivial_extension(
    std::shared_ptr<const GroupModel> quotient,
    std::shared_ptr<const GroupModel> kernel) {
  return std::make_shared<TrivialProductExtension>(std::move(quotient),
                                                   std::move(kernel));
}

std::shared_ptr<ExtensionModel> make_heisenberg_extension(
    int64_t section_radius, const BallBudget& budget) {
  return std::make_shared<HeisenbergCentralExtension>(section_radius, budget);
}

}  // namespace uecomp
