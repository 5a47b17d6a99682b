#pragma once

#include <memory>

#include "uecomp/ball.hpp"
#include "uecomp/group.hpp"

namespace uecomp {

// Direct product with l(g,h) = l_G(g) + l_H(h). Elements are stored as
// [|g|, g..., h...] so variable-width component encodings stay unambiguous.
class ProductGroupModel final : public GroupModel {
 public:
  ProductGroupModel(std::shared_ptr<const GroupModel> first,
                    std::shared_ptr<const GroupModel> second);

  const GroupModel& first_model() const { return *first_; }
  const GroupModel& second_model() const { return *second_; }

  Element pack(const Element& g, const Element& h) const;
  Element first_part(const Element& x) const;
  Element second_part(const Element& x) const;

  Element identity() const override;
  Element mul(const Element& x, const Element& y) const override;
  Element inv(const Element& x) const override;
  double length(const Element& x) const override;
  std::vector<Element> generators() const override;
  Element sample(std::mt19937_64& rng) const override;
  std::vector<Element> enumerate_by_length(double R) const override;
  std::string format(const Element& x) const override;

 private:
  std::shared_ptr<const GroupModel> first_;
  std::shared_ptr<const GroupModel> second_;
};

// 1 -> H -> Gamma -> G -> 1 with the section chosen as the minimal-length
// lift, ties broken by canonical byte order.
class ExtensionModel {
 public:
  virtual ~ExtensionModel() = default;

  virtual const GroupModel& total() const = 0;
  virtual const GroupModel& kernel() const = 0;
  virtual const GroupModel& quotient() const = 0;

  virtual Element project(const Element& gamma) const = 0;
  virtual Element embed_kernel(const Element& h) const = 0;
  // inverse of embed_kernel; gamma must project to the identity
  virtual Element kernel_part(const Element& gamma) const = 0;
  virtual Element section(const Element& g) const = 0;

  // gamma * sigma(pi(gamma))^-1, expressed in H
  Element project_to_kernel(const Element& gamma) const;
  // l_G(pi(gamma)) via the quotient model metric
  double induced_quotient_length(const Element& gamma) const;
  // induced metric on H: l_Gamma restricted
  virtual double kernel_induced_length(const Element& h) const;
};

// Gamma = G x H, sigma(g) = (g, 1).
class TrivialProductExtension final : public ExtensionModel {
 public:
  TrivialProductExtension(std::shared_ptr<const GroupModel> quotient,
                          std::shared_ptr<const GroupModel> kernel);

  const GroupModel& total() const override { return *product_; }
  const GroupModel& kernel() const override { return *kernel_; }
  const GroupModel& quotient() const override { return *quotient_; }
  const ProductGroupModel& product() const { return *product_; }

  Element project(const Element& gamma) const override;
  Element embed_kernel(const Element& h) const override;
  Element kernel_part(const Element& gamma) const override;
  Element section(const Element& g) const override;

 private:
  std::shared_ptr<const GroupModel> quotient_;
  std::shared_ptr<const GroupModel> kernel_;
  std::shared_ptr<ProductGroupModel> product_;
};

// 1 -> Z -> H_3 -> Z^2 -> 1 with the center as kernel. Sections come from a
// BFS table over a Gamma-ball; the induced center length uses a
// meet-in-the-middle split over the same ball, valid up to twice its radius.
class HeisenbergCentralExtension final : public ExtensionModel {
 public:
  explicit HeisenbergCentralExtension(int64_t section_radius,
                                      const BallBudget& budget = {});

  const GroupModel& total() const override { return *total_; }
  const GroupModel& kernel() const override { return *kernel_; }
  const GroupModel& quotient() const override { return *quotient_; }

  Element project(const Element& gamma) const override;
  Element embed_kernel(const Element& h) const override;
  Element kernel_part(const Element& gamma) const override;
  Element section(const Element& g) const override;
  double kernel_induced_length(const Element& h) const override;

  int64_t section_radius() const { return section_radius_; }

 private:
  std::shared_ptr<const GroupModel> total_;
  std::shared_ptr<const GroupModel> kernel_;    // Z, indexing the center
  std::shared_ptr<const GroupModel> quotient_;  // Z^2
  int64_t section_radius_;
  Ball gamma_ball_;
  std::unordered_map<std::string, Element> section_table_;
  mutable std::unordered_map<int64_t, double> center_lengths_;
};

// make_group plus recursive handling of product specs.
std::shared_ptr<GroupModel> make_any_group(const std::string& spec_text);
std::shared_ptr<GroupModel> make_any_group(const GroupSpec& spec);

std::shared_ptr<ExtensionModel> make_trivial_extension(
    std::shared_ptr<const GroupModel> quotient,
    std::shared_ptr<const GroupModel> kernel);
std::shared_ptr<ExtensionModel> make_heisenberg_extension(
    int64_t section_radius, const BallBudget& budget = {});

}  // namespace uecomp
