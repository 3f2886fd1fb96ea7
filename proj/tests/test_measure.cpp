#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "hyperkl/constructors.hpp"
#include "hyperkl/errors.hpp"
#include "hyperkl/group.hpp"
#include "hyperkl/hypergroup.hpp"
#include "hyperkl/measure.hpp"
#include "support/walk_oracles.hpp"

using hyperkl::FiniteHypergroup;
using hyperkl::LimitKind;
using hyperkl::Measure;
using hyperkl::Rat;
using hyperkl::ZxFHypergroup;

using ZKey = ZxFHypergroup::key_type;
using ZMeasure = Measure<ZxFHypergroup, Rat>;

namespace {

// The integers as a hypergroup: Z x (trivial fiber).
ZxFHypergroup integer_line() {
  return hyperkl::z_cross_f(hyperkl::group_as_hypergroup(hyperkl::cyclic_group(1)));
}

ZMeasure pm_one_walk(const ZxFHypergroup& z) {
  ZMeasure lambda(z);
  lambda.add({1, 0}, Rat(1, 2));
  lambda.add({-1, 0}, Rat(1, 2));
  return lambda;
}

}  // namespace

TEST_CASE("measure basics: atoms, mass, distance, involution") {
  const auto h = hyperkl::group_as_hypergroup(hyperkl::cyclic_group(6));
  auto mu = Measure<FiniteHypergroup, Rat>::from_atoms(h, {{1, Rat(1, 3)}, {5, Rat(2, 3)}});
  CHECK(mu.mass() == 1);
  CHECK(mu.is_probability());
  CHECK(mu.support_size() == 2);
  CHECK(mu(1) == Rat(1, 3));
  CHECK(mu(2) == 0);
  CHECK(mu.max_atom() == Rat(2, 3));
  CHECK(mu.mass_on({0, 1, 2}) == Rat(1, 3));

  const auto flipped = mu.involute();
  CHECK(flipped(5) == Rat(1, 3));
  CHECK(flipped(1) == Rat(2, 3));
  CHECK(mu.l1_distance(flipped) == Rat(2, 3));
  CHECK(flipped.involute() == mu);

  // add with an exact cancellation removes the atom.
  mu.add(1, Rat(-1, 3));
  CHECK(mu.support_size() == 1);
  CHECK(mu(1) == 0);

  const auto delta = Measure<FiniteHypergroup, Rat>::point(h, 2);
  CHECK(delta.mass() == 1);
  CHECK(delta.max_atom() == 1);
  CHECK(delta.support() == std::set<int>{2});
}

TEST_CASE("convolution is exact, mass-multiplicative and associative") {
  const auto conj = hyperkl::conjugacy_hypergroup(hyperkl::symmetric_group(3)).hypergroup;

  const auto t = Measure<FiniteHypergroup, Rat>::point(conj, 1);
  const auto tt = t.convolve(t);
  CHECK(tt(0) == Rat(1, 3));
  CHECK(tt(2) == Rat(2, 3));

  std::mt19937_64 rng(7);
  for (int round = 0; round < 25; ++round) {
    const auto a = hyperkl::random_probability(conj, rng);
    const auto b = hyperkl::random_probability(conj, rng);
    const auto c = hyperkl::random_probability(conj, rng);
    CHECK(a.convolve(b).mass() == 1);
    CHECK(a.convolve(b).convolve(c) == a.convolve(b.convolve(c)));
    // Involution anti-homomorphism at the measure level.
    CHECK(a.convolve(b).involute() == b.involute().convolve(a.involute()));
  }

  const auto z6 = hyperkl::group_as_hypergroup(hyperkl::cyclic_group(6));
  const auto other = Measure<FiniteHypergroup, Rat>::point(z6, 1);
  CHECK_THROWS_AS((void)t.convolve(other), hyperkl::PreconditionError);
}

TEST_CASE("group translations give exactly stationary delta sequences") {
  const auto s3 = hyperkl::group_as_hypergroup(hyperkl::symmetric_group(3));
  for (int g = 0; g < s3.size(); ++g) {
    const auto lambda = Measure<FiniteHypergroup, Rat>::point(s3, g);
    const auto seq = hyperkl::alternating_sequence(lambda, 8);
    REQUIRE(seq.entries.size() == 8);
    CHECK_FALSE(seq.truncated);
    for (const auto& entry : seq.entries) {
      CHECK(entry == Measure<FiniteHypergroup, Rat>::point(s3, 0));
    }
    const auto verdict = hyperkl::limit_detect(seq.entries);
    CHECK(verdict.kind == LimitKind::Converged);
    CHECK(verdict.exact_stationary);
    CHECK(verdict.settled_at == 2);
    REQUIRE(verdict.rho.has_value());
    CHECK(verdict.rho->max_atom() == 1);
  }
}

TEST_CASE("integer walk reproduces the binomial law exactly") {
  const auto z = integer_line();
  const auto lambda = pm_one_walk(z);
  const auto seq = hyperkl::alternating_sequence(lambda, 20);
  REQUIRE(seq.entries.size() == 20);
  for (int n = 1; n <= 20; ++n) {
    const auto& entry = seq.entries[static_cast<std::size_t>(n - 1)];
    const auto expect = oracle::simple_walk_distribution(2 * n);
    // Odd positions carry no mass at even times; compare the even ones.
    std::size_t atoms = 0;
    for (const auto& [m, w] : expect) {
      if (w == 0) continue;
      CHECK(entry({m, 0}) == w);
      ++atoms;
    }
    CHECK(entry.support_size() == atoms);
    CHECK(entry.mass() == 1);
    CHECK(entry.max_atom() == oracle::central_binomial_mass(n));
  }
}

TEST_CASE("escape to zero: detected on the line, impossible on finite hosts") {
  const auto z = integer_line();
  const auto lambda = pm_one_walk(z);
  const auto seq = hyperkl::alternating_sequence(lambda, 40);
  const auto verdict = hyperkl::limit_detect(seq.entries);
  CHECK(verdict.kind == LimitKind::EscapesToZero);
  CHECK_FALSE(verdict.rho.has_value());
  CHECK(verdict.last_gap > 1e-10);

  // The two quantities the verdict relies on, checked exactly: the peak atom
  // and the mass left on support(entry 1) + {identity} both strictly fall.
  std::set<ZKey> ref = seq.entries.front().support();
  ref.insert(z.identity());
  for (std::size_t i = 0; i + 1 < seq.entries.size(); ++i) {
    CHECK(seq.entries[i + 1].max_atom() < seq.entries[i].max_atom());
    CHECK(seq.entries[i + 1].mass_on(ref) < seq.entries[i].mass_on(ref));
  }

  // Same recipe on z6: compact, so the sequence must settle instead.
  const auto z6 = hyperkl::group_as_hypergroup(hyperkl::cyclic_group(6));
  auto walk = Measure<FiniteHypergroup, Rat>::from_atoms(z6, {{1, Rat(1, 2)}, {5, Rat(1, 2)}});
  const auto fseq = hyperkl::alternating_sequence(walk, 40);
  const auto fverdict = hyperkl::limit_detect(fseq.entries);
  CHECK(fverdict.kind == LimitKind::Converged);
  CHECK_FALSE(fverdict.exact_stationary);
  CHECK(fverdict.settled_at > 2);
  REQUIRE(fverdict.rho.has_value());
  // Limit is uniform on the even subgroup, up to the detection tolerance.
  for (int k : {0, 2, 4}) {
    CHECK(hyperkl::to_double((*fverdict.rho)(k)) == doctest::Approx(1.0 / 3).epsilon(1e-9));
  }
  CHECK((*fverdict.rho)(1) == 0);

  // Short prefixes decide nothing.
  const std::vector<Measure<ZxFHypergroup, Rat>> prefix(seq.entries.begin(),
                                                        seq.entries.begin() + 3);
  CHECK(hyperkl::limit_detect(prefix).kind == LimitKind::Undecided);
}

TEST_CASE("idempotency: subgroup measures pass, shifted points fail") {
  const auto z6 = hyperkl::group_as_hypergroup(hyperkl::cyclic_group(6));

  auto omega = Measure<FiniteHypergroup, Rat>::from_atoms(
      z6, {{0, Rat(1, 2)}, {3, Rat(1, 2)}});
  auto res = hyperkl::is_idempotent(omega);
  CHECK(res.idempotent);
  CHECK(res.residual == 0);

  auto uniform = Measure<FiniteHypergroup, Rat>(z6);
  for (int i = 0; i < 6; ++i) uniform.add(i, Rat(1, 6));
  CHECK(hyperkl::is_idempotent(uniform).idempotent);

  const auto delta1 = Measure<FiniteHypergroup, Rat>::point(z6, 1);
  res = hyperkl::is_idempotent(delta1);
  CHECK_FALSE(res.idempotent);
  CHECK(res.residual == 2);  // delta_2 vs delta_1

  auto half = Measure<FiniteHypergroup, Rat>::point(z6, 0, Rat(1, 2));
  CHECK_THROWS_AS((void)hyperkl::is_idempotent(half), hyperkl::PreconditionError);

  // Float route tolerates rounding-scale deviations only.
  auto nearly = uniform.to_float();
  CHECK(hyperkl::is_idempotent(nearly, 1e-10).idempotent);
}

TEST_CASE("random probabilities are exact, seeded and symmetric on request") {
  const auto conj = hyperkl::conjugacy_hypergroup(hyperkl::symmetric_group(4)).hypergroup;

  std::mt19937_64 a(42), b(42);
  const auto mu1 = hyperkl::random_probability(conj, a);
  const auto mu2 = hyperkl::random_probability(conj, b);
  CHECK(mu1 == mu2);
  CHECK(mu1.mass() == 1);

  for (int size = 1; size <= conj.size(); ++size) {
    const auto mu = hyperkl::random_probability(conj, a, size);
    CHECK(static_cast<int>(mu.support_size()) == size);
    CHECK(mu.mass() == 1);
  }

  const auto s3 = hyperkl::group_as_hypergroup(hyperkl::symmetric_group(3));
  for (int round = 0; round < 10; ++round) {
    const auto sym = hyperkl::random_symmetric_probability(s3, a);
    CHECK(sym.mass() == 1);
    CHECK(sym.involute() == sym);
  }
}

TEST_CASE("discrete axiom suite accepts Z x F and flags a broken host") {
  const auto conj = hyperkl::conjugacy_hypergroup(hyperkl::symmetric_group(3)).hypergroup;
  const auto zxf = hyperkl::z_cross_f(conj);
  std::vector<ZKey> sample;
  for (std::int64_t n = -2; n <= 2; ++n)
    for (int i = 0; i < conj.size(); ++i) sample.push_back({n, i});
  const auto rep = hyperkl::check_discrete_axioms(zxf, sample, 300, 11);
  CHECK(rep.ok);
  CHECK(rep.failures.empty());
  CHECK(rep.pairs_checked == static_cast<long long>(sample.size() * sample.size()));
  CHECK(rep.triples_checked == 300);

  // A shifted identity breaks the suite in the expected ways.
  const hyperkl::DiscreteHypergroup<int> broken(
      1,
      [](const int& x, const int& y) {
        return hyperkl::SparseDist<int>{{(x + y) % 7, Rat(1)}};
      },
      [](const int& x) { return (7 - x) % 7; });
  std::vector<int> ints{0, 1, 2, 3, 4, 5, 6};
  const auto bad = hyperkl::check_discrete_axioms(broken, ints, 50, 11);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.failures.empty());
}

TEST_CASE("support caps truncate politely") {
  const auto z = integer_line();
  const auto lambda = pm_one_walk(z);

  // Entry n lives on 2n+1 levels; a cap of 12 dies around n = 6.
  const auto seq = hyperkl::alternating_sequence(lambda, 30, 12);
  CHECK(seq.truncated);
  CHECK(seq.entries.size() < 30);
  CHECK_FALSE(seq.entries.empty());
  for (const auto& entry : seq.entries) CHECK(entry.mass() == 1);

  auto wide = ZMeasure(z);
  for (std::int64_t i = 0; i < 40; ++i) wide.add({i, 0}, Rat(1, 40));
  CHECK_THROWS_AS((void)wide.convolve(wide, 50), hyperkl::BudgetError);

  auto sub = ZMeasure::point(z, {1, 0}, Rat(1, 2));
  CHECK_THROWS_AS((void)hyperkl::alternating_sequence(sub, 5), hyperkl::PreconditionError);
}

TEST_CASE("float views stay close to the exact measures") {
  const auto conj = hyperkl::conjugacy_hypergroup(hyperkl::symmetric_group(4)).hypergroup;
  std::mt19937_64 rng(3);
  const auto mu = hyperkl::random_probability(conj, rng);
  const auto nu = hyperkl::random_probability(conj, rng);

  const auto exact = mu.convolve(nu);
  const auto approx = mu.to_float().convolve(nu.to_float());
  CHECK(approx.is_probability());
  for (const auto& [k, w] : exact.atoms()) {
    CHECK(approx(k) == doctest::Approx(hyperkl::to_double(w)).epsilon(1e-12));
  }
}
