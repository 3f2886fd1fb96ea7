#include "hyperkl/padic.hpp"

#include <cmath>
#include <sstream>

#include "hyperkl/errors.hpp"

namespace hyperkl {

namespace {

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

}  // namespace

PadicParams PadicParams::create(long long p, long long s) {
  if (!is_prime(p)) {
    throw PreconditionError("p = " + std::to_string(p) + " is not prime");
  }
  if (p == 2 || p == 3) {
    throw PreconditionError("p = " + std::to_string(p) +
                            " divides 6; the scaled lattice point 6x would not leave the lattice");
  }
  if (s < 1) {
    throw PreconditionError("s must be >= 1 so the automorphism contracts the lattice");
  }
  return PadicParams{p, s};
}

std::string PadicCosetElement::to_string() const {
  std::ostringstream os;
  os << "(" << n << ", " << rat_to_string(r) << ")";
  return os.str();
}

long long lattice_exponent(long long n, const PadicParams& params) {
  const long long sn = params.s * n;
  return sn < 0 ? sn : 0;
}

PadicCosetElement canonicalize(long long n, const Rat& a, const PadicParams& params) {
  const long long k = lattice_exponent(n, params);
  if (a == 0) return {n, Rat(0)};

  BigInt den = denominator(a);
  const BigInt pp(params.p);
  long long d = 0;
  while (den % pp == 0) {
    den /= pp;
    ++d;
  }
  if (den != 1) {
    throw StructuralError("canonicalize: denominator of " + rat_to_string(a) +
                          " is not a power of p = " + std::to_string(params.p));
  }

  // a = u / p^d; a + p^k Z_p meets Z[1/p] in a + p^k Z, so the canonical
  // representative is (u mod p^(k+d)) / p^d, which lies in [0, p^k).
  const long long e = k + d;
  if (e <= 0) return {n, Rat(0)};
  const BigInt mod = boost::multiprecision::pow(pp, static_cast<unsigned>(e));
  BigInt w = numerator(a) % mod;
  if (w < 0) w += mod;
  return {n, Rat(w, boost::multiprecision::pow(pp, static_cast<unsigned>(d)))};
}

PadicCosetElement PadicHypergroup::involve(const key_type& x) const {
  // Inverse of (n, a) in the affine group is (-n, -p^(-s n) a).
  return canonicalize(-x.n, -x.r * rat_pow(params_.p, -params_.s * x.n), params_);
}

SparseDist<PadicCosetElement> PadicHypergroup::point_convolve(const key_type& x,
                                                              const key_type& y) const {
  const long long shift = params_.s * x.n;
  const long long k_res = lattice_exponent(x.n + y.n, params_);
  const Rat c = x.r + rat_pow(params_.p, shift) * y.r;

  SparseDist<key_type> out;
  if (shift >= k_res) {
    out.emplace_back(canonicalize(x.n + y.n, c, params_), Rat(1));
    return out;
  }
  // The product set is c + p^shift Z_p, a union of p^(k_res - shift) cosets
  // of p^k_res Z_p carrying equal mass.
  const long long split = k_res - shift;
  if (static_cast<double>(split) * std::log10(static_cast<double>(params_.p)) > 7.0) {
    throw BudgetError("point_convolve would split into p^" + std::to_string(split) +
                      " atoms at p = " + std::to_string(params_.p));
  }
  const BigInt count = boost::multiprecision::pow(BigInt(params_.p), static_cast<unsigned>(split));
  const Rat weight = Rat(1, count);
  const Rat step = rat_pow(params_.p, shift);
  Rat offset = c;
  for (BigInt t = 0; t < count; ++t) {
    out.emplace_back(canonicalize(x.n + y.n, offset, params_), weight);
    offset += step;
  }
  return out;
}

DiscreteHypergroup<PadicCosetElement> counterexample_hypergroup(const PadicParams& params) {
  PadicHypergroup k(params);
  return DiscreteHypergroup<PadicCosetElement>(
      k.identity(),
      [k](const PadicCosetElement& a, const PadicCosetElement& b) { return k.point_convolve(a, b); },
      [k](const PadicCosetElement& x) { return k.involve(x); });
}

namespace {

using K = DiscreteHypergroup<PadicCosetElement>;
using M = Measure<K, Rat>;

std::vector<std::pair<PadicCosetElement, Rat>> dump(const M& m) {
  return {m.atoms().begin(), m.atoms().end()};
}

std::string atoms_text(const M& m) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, w] : m.atoms()) {
    if (!first) os << ", ";
    first = false;
    os << k.to_string() << " -> " << rat_to_string(w);
  }
  return os.str();
}

}  // namespace

CounterexampleReport run_counterexample(const PadicParams& params, int n_max) {
  CounterexampleReport rep;
  rep.params = params;
  rep.n_max = n_max;

  const K host = counterexample_hypergroup(params);
  auto check = [&rep](const std::string& name, bool ok, std::string detail) {
    rep.assertions.push_back({name, ok, std::move(detail)});
  };

  const long long p = params.p;
  const long long s = params.s;
  const Rat x_val = rat_pow(p, -s);  // the scaled lattice point, |x| = p^s

  const M lambda = counterexample_measure(host, params);
  const M lambda_check = lambda.involute();
  rep.lambda = dump(lambda);
  rep.lambda_involuted = dump(lambda_check);

  {
    M expect(host);
    expect.add(canonicalize(1, x_val, params), Rat(1, 2));
    expect.add(canonicalize(1, Rat(0), params), Rat(1, 2));
    check("driving measure sits on the n=1 fiber with weights 1/2, 1/2",
          lambda_check == expect, atoms_text(lambda_check));
  }

  // Expected stationary value: 1/2 at e, 1/4 at the x coset, 1/4 at its involution.
  M rho_expect(host);
  rho_expect.add(host.identity(), Rat(1, 2));
  rho_expect.add(canonicalize(0, x_val, params), Rat(1, 4));
  rho_expect.add(canonicalize(0, -x_val, params), Rat(1, 4));

  const auto seq = alternating_sequence(lambda, n_max);
  bool stationary = !seq.truncated && static_cast<int>(seq.entries.size()) == n_max;
  int first_bad = -1;
  for (int i = 0; i < static_cast<int>(seq.entries.size()); ++i) {
    if (seq.entries[static_cast<std::size_t>(i)] != rho_expect) {
      stationary = false;
      first_bad = i + 1;
      break;
    }
  }
  check("alternating sequence is stationary at rho for n = 1.." + std::to_string(n_max),
        stationary,
        stationary ? atoms_text(rho_expect)
                   : (first_bad > 0 ? "first deviation at n = " + std::to_string(first_bad) + ": " +
                                          atoms_text(seq.entries[static_cast<std::size_t>(first_bad - 1)])
                                    : "sequence truncated"));

  const M rho = seq.entries.empty() ? rho_expect : seq.entries.back();
  rep.rho = dump(rho);

  const auto idem = is_idempotent(rho);
  const M rho_sq = rho.convolve(rho);
  rep.rho_squared = dump(rho_sq);
  check("rho is not idempotent", !idem.idempotent,
        "l1(rho*rho, rho) = " + rat_to_string(idem.residual));

  {
    // rho*rho spreads to exactly five atoms with weights 3/8, 1/4, 1/4, 1/16, 1/16.
    M expect(host);
    expect.add(host.identity(), Rat(3, 8));
    expect.add(canonicalize(0, x_val, params), Rat(1, 4));
    expect.add(canonicalize(0, -x_val, params), Rat(1, 4));
    expect.add(canonicalize(0, 2 * x_val, params), Rat(1, 16));
    expect.add(canonicalize(0, -2 * x_val, params), Rat(1, 16));
    check("rho*rho has exactly the five expected atoms", rho_sq == expect, atoms_text(rho_sq));
  }

  {
    // alpha(L) inside L: scaling by p^s keeps valuations >= 0.
    bool ok = s >= 1;
    for (long long l : {1LL, 2LL, p - 1, p, p + 1, 3 * p * p}) {
      ok = ok && padic_valuation(Rat(l) * rat_pow(p, s), p) >= 0;
    }
    check("the automorphism maps the lattice into itself", ok, "s = " + std::to_string(s));
  }

  {
    // |alpha^n(g)| = p^(-s n) |g| -> 0: valuations grow by s each step.
    bool ok = true;
    for (const Rat& g : {Rat(1), rat_pow(p, -2), Rat(3, p), Rat(17)}) {
      const long long v0 = padic_valuation(g, p);
      for (long long n = 1; n <= 5; ++n) {
        ok = ok && padic_valuation(g * rat_pow(p, s * n), p) == v0 + s * n;
      }
    }
    check("iterating the automorphism contracts every sample point", ok, "");
  }

  {
    const Rat six_x = 6 * x_val;
    const long long v = padic_valuation(six_x, p);
    check("6x stays outside the lattice (|6x| = p^s > 1)", v == -s && v < 0,
          "v_p(6x) = " + std::to_string(v));
  }

  {
    // Stationarity engine: convolving the squared driving measure back by
    // two automorphism steps reproduces one step, exactly.
    const M lc2 = lambda_check.convolve(lambda_check);
    const M g_m1 = M::point(host, canonicalize(-1, Rat(0), params));
    const M g_m2 = M::point(host, canonicalize(-2, Rat(0), params));
    const M left = lc2.convolve(g_m2);
    const M right = lambda_check.convolve(g_m1);
    check("two-step pullback equals one-step pullback", left == right,
          atoms_text(left) + " vs " + atoms_text(right));
  }

  rep.all_passed = true;
  for (const auto& a : rep.assertions) rep.all_passed = rep.all_passed && a.passed;
  return rep;
}

}  // namespace hyperkl
