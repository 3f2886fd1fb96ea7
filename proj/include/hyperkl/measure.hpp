#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "hyperkl/discrete.hpp"
#include "hyperkl/errors.hpp"
#include "hyperkl/hypergroup.hpp"

namespace hyperkl {

namespace detail {

template <class S>
constexpr bool is_exact_scalar = std::is_same_v<S, Rat>;

inline double scalar_to_double(const Rat& v) { return to_double(v); }
inline double scalar_to_double(double v) { return v; }

}  // namespace detail

/// Finitely supported measure on a hypergroup. Stored atoms are strictly
/// positive; in float mode atoms below 1e-15 of the total mass are pruned
/// after every convolution. Measures keep a pointer to their host and may
/// not outlive it.
template <class Host, class S = Rat>
class Measure {
 public:
  using key_type = typename Host::key_type;
  using scalar_type = S;
  using atom_map = std::map<key_type, S>;

  explicit Measure(const Host& host) : host_(&host) {}

  static Measure point(const Host& host, const key_type& x, S w = S(1)) {
    Measure m(host);
    m.add(x, w);
    return m;
  }

  static Measure from_atoms(const Host& host, const std::vector<std::pair<key_type, S>>& atoms) {
    Measure m(host);
    for (const auto& [k, w] : atoms) m.add(k, w);
    return m;
  }

  const Host& host() const { return *host_; }
  const atom_map& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  S operator()(const key_type& x) const {
    auto it = atoms_.find(x);
    return it == atoms_.end() ? S(0) : it->second;
  }

  S mass() const {
    S total(0);
    for (const auto& [k, w] : atoms_) total += w;
    return total;
  }

  bool is_probability() const {
    if constexpr (detail::is_exact_scalar<S>) {
      return mass() == 1;
    } else {
      return std::abs(mass() - 1.0) <= 1e-9;
    }
  }

  S max_atom() const {
    S best(0);
    for (const auto& [k, w] : atoms_) best = std::max(best, w);
    return best;
  }

  S mass_on(const std::set<key_type>& c) const {
    S total(0);
    for (const auto& k : c) total += (*this)(k);
    return total;
  }

  S l1_distance(const Measure& other) const {
    require_same_host(other);
    S total(0);
    auto a = atoms_.begin();
    auto b = other.atoms_.begin();
    while (a != atoms_.end() || b != other.atoms_.end()) {
      if (b == other.atoms_.end() || (a != atoms_.end() && a->first < b->first)) {
        total += a->second;
        ++a;
      } else if (a == atoms_.end() || b->first < a->first) {
        total += b->second;
        ++b;
      } else {
        const S d = a->second >= b->second ? a->second - b->second : b->second - a->second;
        total += d;
        ++a;
        ++b;
      }
    }
    return total;
  }

  bool operator==(const Measure& other) const {
    return host_ == other.host_ && atoms_ == other.atoms_;
  }
  bool operator!=(const Measure& other) const { return !(*this == other); }

  /// Pushforward under the involution: result({z}) = this({involve(z)}).
  Measure involute() const {
    Measure out(*host_);
    for (const auto& [k, w] : atoms_) out.add(host_->involve(k), w);
    return out;
  }

  /// (mu * nu)({z}) = sum_{x,y} mu({x}) nu({y}) (delta_x * delta_y)({z}),
  /// accumulated left measure first. Throws BudgetError when the result
  /// support would exceed support_cap atoms.
  Measure convolve(const Measure& other, std::size_t support_cap = kDefaultSupportCap) const {
    require_same_host(other);
    Measure out(*host_);
    for (const auto& [x, wx] : atoms_) {
      for (const auto& [y, wy] : other.atoms_) {
        const S w = wx * wy;
        for (const auto& [z, cz] : host_->point_convolve(x, y)) {
          if constexpr (detail::is_exact_scalar<S>) {
            out.atoms_[z] += w * cz;
          } else {
            out.atoms_[z] += w * to_double(cz);
          }
          if (out.atoms_.size() > support_cap) {
            throw BudgetError("convolution support exceeds cap of " + std::to_string(support_cap) +
                              " atoms");
          }
        }
      }
    }
    out.normalize_storage();
    return out;
  }

  Measure<Host, double> to_float() const {
    Measure<Host, double> out(*host_);
    for (const auto& [k, w] : atoms_) out.add(k, detail::scalar_to_double(w));
    return out;
  }

  std::set<key_type> support() const {
    std::set<key_type> s;
    for (const auto& [k, w] : atoms_) s.insert(k);
    return s;
  }

  void add(const key_type& x, S w) {
    if (w == S(0)) return;
    atoms_[x] += w;
    if (atoms_[x] == S(0)) atoms_.erase(x);
  }

  static constexpr std::size_t kDefaultSupportCap = 1000000;

 private:
  template <class H2, class S2>
  friend class Measure;

  void require_same_host(const Measure& other) const {
    if (host_ != other.host_) {
      throw PreconditionError("measures live on different hypergroup instances");
    }
  }

  void normalize_storage() {
    if constexpr (detail::is_exact_scalar<S>) {
      for (auto it = atoms_.begin(); it != atoms_.end();) {
        it = it->second == 0 ? atoms_.erase(it) : std::next(it);
      }
    } else {
      double total = 0;
      for (const auto& [k, w] : atoms_) total += std::abs(w);
      const double cutoff = total * 1e-15;
      for (auto it = atoms_.begin(); it != atoms_.end();) {
        it = std::abs(it->second) <= cutoff ? atoms_.erase(it) : std::next(it);
      }
    }
  }

  const Host* host_;
  atom_map atoms_;
};

/// The measure delta_i * delta_j as an exact Measure (finite hosts).
inline Measure<FiniteHypergroup, Rat> convolve_points(const FiniteHypergroup& h, int i, int j) {
  Measure<FiniteHypergroup, Rat> out(h);
  for (const auto& [k, w] : h.point_convolve(i, j)) out.add(k, w);
  return out;
}

template <class Host, class S>
struct IdempotencyResult {
  bool idempotent = false;
  S residual = S(0);  // l1 distance between rho*rho and rho
};

/// Checks rho * rho = rho. Requires mass 0 or 1. Exact scalars compare
/// exactly; float mode accepts an l1 residual up to tol.
template <class Host, class S>
IdempotencyResult<Host, S> is_idempotent(const Measure<Host, S>& rho, double tol = 1e-10) {
  const S m = rho.mass();
  bool mass_ok;
  if constexpr (detail::is_exact_scalar<S>) {
    mass_ok = (m == 0 || m == 1);
  } else {
    mass_ok = std::abs(m) <= tol || std::abs(m - 1.0) <= 1e-6;
  }
  if (!mass_ok) {
    throw PreconditionError("is_idempotent requires mass 0 or 1");
  }
  IdempotencyResult<Host, S> out;
  const auto square = rho.convolve(rho);
  out.residual = square.l1_distance(rho);
  if constexpr (detail::is_exact_scalar<S>) {
    out.idempotent = (out.residual == 0);
  } else {
    out.idempotent = (out.residual <= tol);
  }
  return out;
}

template <class Host, class S>
struct AlternatingSequence {
  /// entry[k] is invol(lambda^(k+1)) * lambda^(k+1), k starting at 0.
  std::vector<Measure<Host, S>> entries;
  bool truncated = false;  // support cap hit; entries hold the computed prefix
};

/// Entries invol(lambda^n) * lambda^n for n = 1..n_max, computed
/// incrementally from lambda^n = lambda^(n-1) * lambda.
template <class Host, class S>
AlternatingSequence<Host, S> alternating_sequence(const Measure<Host, S>& lambda, int n_max,
                                                  std::size_t support_cap = Measure<Host, S>::kDefaultSupportCap) {
  if (!lambda.is_probability()) {
    throw PreconditionError("alternating_sequence requires a probability measure");
  }
  AlternatingSequence<Host, S> out;
  Measure<Host, S> power = lambda;
  for (int n = 1; n <= n_max; ++n) {
    try {
      if (n > 1) power = power.convolve(lambda, support_cap);
      out.entries.push_back(power.involute().convolve(power, support_cap));
    } catch (const BudgetError&) {
      out.truncated = true;
      break;
    }
  }
  return out;
}

enum class LimitKind { Converged, EscapesToZero, Undecided };

inline const char* to_string(LimitKind k) {
  switch (k) {
    case LimitKind::Converged: return "Converged";
    case LimitKind::EscapesToZero: return "EscapesToZero";
    case LimitKind::Undecided: return "Undecided";
  }
  return "?";
}

template <class Host, class S>
struct LimitVerdict {
  LimitKind kind = LimitKind::Undecided;
  std::optional<Measure<Host, S>> rho;  // last entry, when Converged
  int settled_at = -1;                  // first n (1-based) from which gaps stay below tol
  double last_gap = 0;
  bool exact_stationary = false;        // exact mode only: tail is literally constant
};

struct LimitOptions {
  double tol = 1e-10;
  int window = 5;
};

/// Trailing-window diagnostic over the alternating-sequence entries.
///   Converged: the last `window` consecutive l1 gaps are all <= tol
///     (exact stationarity short-circuits this in rational mode).
///   EscapesToZero: only possible on non-compact hosts; max atom and the
///     mass on the fixed window support(entry 1) + {e} both strictly
///     decrease across the trailing window while the gaps stay above tol.
///   Undecided: anything else; a first-class outcome, not an error.
template <class Host, class S>
LimitVerdict<Host, S> limit_detect(const std::vector<Measure<Host, S>>& entries,
                                   const LimitOptions& opts = {}) {
  LimitVerdict<Host, S> out;
  const int count = static_cast<int>(entries.size());
  if (count < 2) return out;

  std::vector<double> gaps;  // gaps[i] = l1(entries[i+1], entries[i])
  std::vector<bool> zero_gap;
  for (int i = 0; i + 1 < count; ++i) {
    const S g = entries[static_cast<std::size_t>(i + 1)].l1_distance(entries[static_cast<std::size_t>(i)]);
    gaps.push_back(detail::scalar_to_double(g));
    zero_gap.push_back(g == S(0));
  }
  out.last_gap = gaps.back();

  const int window = std::max(1, opts.window);
  bool converged = false;
  if (static_cast<int>(gaps.size()) >= window) {
    converged = true;
    for (int i = static_cast<int>(gaps.size()) - window; i < static_cast<int>(gaps.size()); ++i) {
      if (gaps[static_cast<std::size_t>(i)] > opts.tol) {
        converged = false;
        break;
      }
    }
  }
  if constexpr (detail::is_exact_scalar<S>) {
    // Stationary tails are conclusive regardless of window length.
    if (!converged && std::all_of(zero_gap.begin(), zero_gap.end(), [](bool z) { return z; })) {
      converged = true;
    }
  }

  if (converged) {
    out.kind = LimitKind::Converged;
    out.rho = entries.back();
    int settle = static_cast<int>(gaps.size());  // gap index + 2 == entry n
    while (settle > 0 && gaps[static_cast<std::size_t>(settle - 1)] <= opts.tol) --settle;
    out.settled_at = settle + 2;
    if constexpr (detail::is_exact_scalar<S>) {
      out.exact_stationary = true;
      for (std::size_t i = static_cast<std::size_t>(out.settled_at) - 2; i < zero_gap.size(); ++i) {
        if (!zero_gap[i]) {
          out.exact_stationary = false;
          break;
        }
      }
    }
    return out;
  }

  if constexpr (!is_compact_host<Host>::value) {
    // Window of entries [count-window-1, count-1]; need strict decrease of
    // both the max atom and the mass on the fixed reference set.
    if (count >= window + 1) {
      std::set<typename Measure<Host, S>::key_type> ref = entries.front().support();
      ref.insert(entries.front().host().identity());
      bool escaping = true;
      for (int i = count - window - 1; i + 1 < count && escaping; ++i) {
        const auto& a = entries[static_cast<std::size_t>(i)];
        const auto& b = entries[static_cast<std::size_t>(i + 1)];
        if (!(b.max_atom() < a.max_atom()) || !(b.mass_on(ref) < a.mass_on(ref))) {
          escaping = false;
        }
      }
      if (escaping) {
        out.kind = LimitKind::EscapesToZero;
        return out;
      }
    }
  }

  return out;
}

/// Uniformly weighted random probability with exact small-integer weights.
/// support_size 0 draws the size at random from 1..n.
Measure<FiniteHypergroup, Rat> random_probability(const FiniteHypergroup& h, std::mt19937_64& rng,
                                                  int support_size = 0);

/// (mu + invol(mu))/2 for a random mu; always commutes with its involution.
Measure<FiniteHypergroup, Rat> random_symmetric_probability(const FiniteHypergroup& h,
                                                            std::mt19937_64& rng,
                                                            int support_size = 0);

struct DiscreteAxiomReport {
  bool ok = true;
  std::vector<std::string> failures;
  long long pairs_checked = 0;
  long long triples_checked = 0;
};

/// Randomized exact axiom suite for discrete hosts: identity behaviour,
/// probability rows, the involution support rule on all sampled pairs, and
/// associativity on sampled triples.
template <class Host>
DiscreteAxiomReport check_discrete_axioms(const Host& h,
                                          const std::vector<typename Host::key_type>& sample,
                                          long long assoc_triples, std::uint64_t seed) {
  using K = typename Host::key_type;
  DiscreteAxiomReport rep;
  auto fail = [&rep](std::string msg) {
    rep.ok = false;
    if (rep.failures.size() < 20) rep.failures.push_back(std::move(msg));
  };

  const K e = h.identity();
  if (!(h.involve(e) == e)) fail("involve(e) != e");
  for (const auto& x : sample) {
    if (!(h.involve(h.involve(x)) == x)) fail("involve not involutive on sampled key");
    for (const K& side : {e}) {
      const auto left = h.point_convolve(side, x);
      if (left.size() != 1 || !(left[0].first == x) || left[0].second != 1) {
        fail("delta_e * delta_x != delta_x");
      }
      const auto right = h.point_convolve(x, side);
      if (right.size() != 1 || !(right[0].first == x) || right[0].second != 1) {
        fail("delta_x * delta_e != delta_x");
      }
    }
  }

  for (const auto& x : sample) {
    for (const auto& y : sample) {
      ++rep.pairs_checked;
      Rat total = 0;
      bool has_e = false;
      std::set<K> seen;
      for (const auto& [z, w] : h.point_convolve(x, y)) {
        if (w <= 0) fail("non-positive weight in point_convolve");
        if (!seen.insert(z).second) fail("duplicate key in point_convolve");
        total += w;
        if (z == e) has_e = true;
      }
      if (total != 1) fail("point_convolve mass != 1");
      if (has_e != (y == h.involve(x))) fail("involution support rule violated");
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, sample.empty() ? 0 : sample.size() - 1);
  for (long long t = 0; t < assoc_triples && !sample.empty(); ++t) {
    const K& a = sample[pick(rng)];
    const K& b = sample[pick(rng)];
    const K& c = sample[pick(rng)];
    ++rep.triples_checked;
    const auto pa = Measure<Host, Rat>::point(h, a);
    const auto pb = Measure<Host, Rat>::point(h, b);
    const auto pc = Measure<Host, Rat>::point(h, c);
    if (pa.convolve(pb).convolve(pc) != pa.convolve(pb.convolve(pc))) {
      fail("associativity fails on sampled triple");
    }
  }
  return rep;
}

}  // namespace hyperkl
