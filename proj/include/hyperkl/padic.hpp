#pragma once

#include <compare>
#include <string>
#include <vector>

#include "hyperkl/discrete.hpp"
#include "hyperkl/measure.hpp"
#include "hyperkl/rational.hpp"

namespace hyperkl {

/// Parameters of the automorphism a |-> p^s a on Q_p. p must be a prime
/// not dividing 6 (so p >= 5) and s >= 1; the factory enforces both.
struct PadicParams {
  long long p = 5;
  long long s = 3;

  static PadicParams create(long long p, long long s);
};

/// Double coset of the lattice Z_p through the point (n, r): the integer
/// component n and the coset r + p^k Z_p with k = min(0, s*n). The stored r
/// is canonical: a rational with p-power denominator whose p-adic digits sit
/// strictly below position k, i.e. 0 <= r < p^k.
struct PadicCosetElement {
  long long n = 0;
  Rat r = 0;

  friend bool operator==(const PadicCosetElement& a, const PadicCosetElement& b) {
    return a.n == b.n && a.r == b.r;
  }
  friend bool operator<(const PadicCosetElement& a, const PadicCosetElement& b) {
    return a.n != b.n ? a.n < b.n : a.r < b.r;
  }

  std::string to_string() const;
};

/// Digit position cutoff for the fiber n: k(n) = min(0, s*n).
long long lattice_exponent(long long n, const PadicParams& params);

/// Canonical representative of a + p^k(n) Z_p. Throws StructuralError when
/// the denominator of a is not a power of p (a is then not in Z[1/p]).
PadicCosetElement canonicalize(long long n, const Rat& a, const PadicParams& params);

/// The double-coset hypergroup of the lattice inside the p-adic affine
/// group, with exact rational structure weights (always powers of p).
class PadicHypergroup {
 public:
  using key_type = PadicCosetElement;

  explicit PadicHypergroup(const PadicParams& params) : params_(params) {}

  const PadicParams& params() const { return params_; }

  key_type identity() const { return {0, Rat(0)}; }
  key_type involve(const key_type& x) const;
  SparseDist<key_type> point_convolve(const key_type& a, const key_type& b) const;

 private:
  PadicParams params_;
};

/// Type-erased view of PadicHypergroup.
DiscreteHypergroup<PadicCosetElement> counterexample_hypergroup(const PadicParams& params);

/// The driving measure: the involution of
///   1/2 delta_(1, p^-s) + 1/2 delta_(1, 0),
/// supported on the fiber n = -1.
template <class Host>
Measure<Host, Rat> counterexample_measure(const Host& k, const PadicParams& params) {
  const auto x_up = canonicalize(1, rat_pow(params.p, -params.s), params);
  const auto e_up = canonicalize(1, Rat(0), params);
  auto lambda_check = Measure<Host, Rat>(k);
  lambda_check.add(x_up, Rat(1, 2));
  lambda_check.add(e_up, Rat(1, 2));
  return lambda_check.involute();
}

struct CounterexampleAssertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CounterexampleReport {
  PadicParams params;
  int n_max = 0;
  std::vector<std::pair<PadicCosetElement, Rat>> lambda;
  std::vector<std::pair<PadicCosetElement, Rat>> lambda_involuted;
  std::vector<std::pair<PadicCosetElement, Rat>> rho;
  std::vector<std::pair<PadicCosetElement, Rat>> rho_squared;
  std::vector<CounterexampleAssertion> assertions;
  bool all_passed = false;
};

/// Runs the full exact scenario: stationarity of the alternating sequence at
/// rho for n = 1..n_max, non-idempotency of rho with the five-atom square,
/// the contraction side conditions, and the stationarity engine identity.
/// Assertion failures are reported, not thrown.
CounterexampleReport run_counterexample(const PadicParams& params, int n_max = 20);

}  // namespace hyperkl
