#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hyperkl {

/// Multiplication table of a finite group. Identity is always index 0.
/// The factory validates identity, inverses and associativity exactly.
class FiniteGroupTable {
 public:
  static FiniteGroupTable from_table(std::vector<std::vector<int>> table,
                                     std::vector<std::string> labels = {});

  int size() const { return n_; }
  int mul(int i, int j) const { return table_[static_cast<std::size_t>(i) * n_ + j]; }
  int inv(int i) const { return inverse_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  FiniteGroupTable() = default;

  int n_ = 0;
  std::vector<int> table_;  // row-major n*n
  std::vector<int> inverse_;
  std::vector<std::string> labels_;
};

FiniteGroupTable cyclic_group(int n);
FiniteGroupTable klein_four_group();
FiniteGroupTable dihedral_group_d4();
FiniteGroupTable quaternion_group_q8();

/// Symmetric group on {0..n-1}; permutations enumerated in lexicographic
/// one-line order, which puts the identity at index 0. Supports n <= 5.
FiniteGroupTable symmetric_group(int n);

/// Builtin lookup: "z<N>", "s3", "s4", "d4", "q8", "klein".
std::optional<FiniteGroupTable> builtin_group(const std::string& name);

/// Names accepted by builtin_group (the fixed-size ones plus the z<N> family).
std::vector<std::string> builtin_group_names();

bool is_subgroup(const FiniteGroupTable& g, const std::vector<int>& elements);

/// Closure of the generated subgroup, sorted ascending. Always contains 0.
std::vector<int> subgroup_closure(const FiniteGroupTable& g, const std::vector<int>& generators);

/// Conjugacy classes; the class {0} comes first, the rest are ordered by
/// their least element. Each class is sorted ascending.
std::vector<std::vector<int>> conjugacy_classes(const FiniteGroupTable& g);

/// Double cosets HgH for a subgroup H (given as a sorted element list).
/// The coset H itself comes first, the rest are ordered by least element.
/// Throws PreconditionError if H is not a subgroup.
std::vector<std::vector<int>> double_cosets(const FiniteGroupTable& g, const std::vector<int>& subgroup);

/// Subgroup of all permutations fixing the point `fixed` (for symmetric_group outputs).
std::vector<int> stabilizer_in_symmetric_group(int n, int fixed);

}  // namespace hyperkl
