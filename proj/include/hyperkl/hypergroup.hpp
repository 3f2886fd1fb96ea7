#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hyperkl/discrete.hpp"
#include "hyperkl/rational.hpp"

namespace hyperkl {

/// One violated invariant, with the indices that witness it.
struct Violation {
  std::string axiom;
  std::vector<int> where;
  std::string detail;
};

using ValidationReport = std::vector<Violation>;

std::string format_report(const ValidationReport& report);

/// Finite hypergroup as a structure-constant tensor c[i][j][k] of exact
/// rationals: c[i][j][k] is the mass (delta_i * delta_j) gives to {k}.
/// The identity is element 0. Immutable after construction; construction
/// runs the full axiom validation and, when it passes, computes the Haar
/// weights and float views. Invalid tensors are still constructible so that
/// their violation report can be inspected.
class FiniteHypergroup {
 public:
  using key_type = int;

  /// structure is the flattened tensor, index (i*n + j)*n + k.
  /// Throws StructuralError on dimension mismatch or a non-permutation
  /// involution; axiom violations land in validation() instead.
  FiniteHypergroup(std::vector<std::string> elements, std::vector<int> involution,
                   std::vector<Rat> structure);

  int size() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

  const Rat& c(int i, int j, int k) const {
    return structure_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  double c_d(int i, int j, int k) const {
    return structure_d_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  const std::vector<Rat>& structure() const { return structure_; }

  int identity() const { return 0; }
  int involve(int i) const { return involution_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& involution() const { return involution_; }

  /// Nonzero entries of the row (delta_i * delta_j), sorted by element index.
  SparseDist<int> point_convolve(int i, int j) const;

  const ValidationReport& validation() const { return report_; }
  bool valid() const { return report_.empty(); }

  /// Right-invariant Haar weights, normalized to weight 1 at the identity.
  /// Throws AxiomError when the hypergroup is invalid.
  const std::vector<Rat>& haar() const;
  const std::vector<double>& haar_d() const;

 private:
  int n_;
  std::vector<std::string> labels_;
  std::vector<int> involution_;
  std::vector<Rat> structure_;
  std::vector<double> structure_d_;
  ValidationReport report_;
  std::vector<Rat> haar_;
  std::vector<double> haar_d_;
};

template <>
struct is_compact_host<FiniteHypergroup> : std::true_type {};

/// Re-runs the axiom checks (identical to the report computed at
/// construction; exposed as the explicit validation entry point).
ValidationReport validate_axioms(const FiniteHypergroup& h);

/// Haar weights m(k) = 1 / c[k][invol(k)][0], normalized m(0) = 1. Verifies
/// the right-invariance identity sum_x m(x) c[x][j][z] = m(z) for all j, z
/// and throws AxiomError if it fails.
std::vector<Rat> haar_from_structure(const FiniteHypergroup& h);

/// Elements x whose convolution with their involution is exactly delta_e.
/// They form a group; closure under convolution is asserted.
std::vector<int> maximal_subgroup(const FiniteHypergroup& h);

/// Elements commuting with everything: c[x][y][.] = c[y][x][.] for all y.
std::vector<int> center(const FiniteHypergroup& h);

bool is_commutative(const FiniteHypergroup& h);

/// True when every row of the tensor is a point mass (a group table).
bool is_group_structure(const FiniteHypergroup& h);

struct AssociativityCheck {
  bool ok = true;
  long long triples_checked = 0;
  std::optional<std::array<int, 3>> witness;  // first failing (i, j, k)
};

/// Exact spot-check of (delta_i * delta_j) * delta_k = delta_i * (delta_j * delta_k).
/// With exhaustive=true all n^3 triples are checked (meant for n <= 12).
AssociativityCheck check_associativity(const FiniteHypergroup& h, long long trials = 200,
                                       std::uint64_t seed = 12345, bool exhaustive = false);

}  // namespace hyperkl
