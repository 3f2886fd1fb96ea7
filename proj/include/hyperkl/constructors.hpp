#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hyperkl/group.hpp"
#include "hyperkl/hypergroup.hpp"

namespace hyperkl {

/// The group itself as a hypergroup: every convolution is a point mass.
FiniteHypergroup group_as_hypergroup(const FiniteGroupTable& g);

/// Hypergroup of normalized conjugacy-class sums. Always commutative.
/// Carries the class partition so callers can map group elements to classes.
struct ConjugacyHypergroup {
  FiniteHypergroup hypergroup;
  std::vector<std::vector<int>> classes;  // classes[c] lists group elements
  std::vector<int> class_of;              // group element -> class index
};
ConjugacyHypergroup conjugacy_hypergroup(const FiniteGroupTable& g);

/// Hypergroup of double cosets H g H. Structure constants come from the
/// group-algebra convolution of the normalized coset indicator measures.
/// Throws PreconditionError when `subgroup` is not a subgroup.
struct DoubleCosetHypergroup {
  FiniteHypergroup hypergroup;
  std::vector<std::vector<int>> cosets;  // cosets[c] lists group elements
  std::vector<int> coset_of;             // group element -> coset index
};
DoubleCosetHypergroup double_coset_hypergroup(const FiniteGroupTable& g,
                                              const std::vector<int>& subgroup);

/// Tensor product: c[(i1,i2)][(j1,j2)][(k1,k2)] = c1[i1][j1][k1] * c2[i2][j2][k2].
/// Pair (i1, i2) maps to index i1 * |K2| + i2.
FiniteHypergroup direct_product(const FiniteHypergroup& a, const FiniteHypergroup& b);

/// Discrete hypergroup Z x F: keys (n, i) with i an element of the finite
/// hypergroup F. Convolution acts as addition on the integer part and as F's
/// convolution on the fiber.
class ZxFHypergroup {
 public:
  using key_type = std::pair<std::int64_t, int>;

  explicit ZxFHypergroup(FiniteHypergroup fiber)
      : fiber_(std::make_shared<FiniteHypergroup>(std::move(fiber))) {}

  const FiniteHypergroup& fiber() const { return *fiber_; }

  key_type identity() const { return {0, 0}; }
  key_type involve(const key_type& x) const { return {-x.first, fiber_->involve(x.second)}; }

  SparseDist<key_type> point_convolve(const key_type& a, const key_type& b) const {
    SparseDist<key_type> out;
    for (const auto& [k, w] : fiber_->point_convolve(a.second, b.second)) {
      out.emplace_back(key_type{a.first + b.first, k}, w);
    }
    return out;
  }

  /// Type-erased view sharing the fiber storage.
  DiscreteHypergroup<key_type> discrete() const;

 private:
  std::shared_ptr<FiniteHypergroup> fiber_;
};

ZxFHypergroup z_cross_f(const FiniteHypergroup& fiber);

/// A desk-scale roster of validated hypergroups used by demos and suites:
/// the builtin groups, their conjugacy-class hypergroups, two double-coset
/// spaces, and a couple of products. Every entry passes the full axiom set.
struct CatalogEntry {
  std::string name;
  FiniteHypergroup hypergroup;
};
std::vector<CatalogEntry> catalog();

/// The commutative members of catalog().
std::vector<CatalogEntry> commutative_catalog();

}  // namespace hyperkl
