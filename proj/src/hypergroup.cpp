#include "hyperkl/hypergroup.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hyperkl/errors.hpp"

namespace hyperkl {

namespace {

std::string idx_list(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

ValidationReport run_axiom_checks(const FiniteHypergroup& h) {
  ValidationReport rep;
  const int n = h.size();

  for (int i = 0; i < n; ++i) {
    if (h.involve(h.involve(i)) != i) {
      rep.push_back({"involution-involutive", {i}, "involve(involve(i)) != i"});
    }
  }
  if (h.involve(0) != 0) {
    rep.push_back({"involution-identity", {0}, "involve(0) != 0"});
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Rat sum = 0;
      bool negative = false;
      for (int k = 0; k < n; ++k) {
        const Rat& v = h.c(i, j, k);
        if (v < 0 && !negative) {
          negative = true;
          rep.push_back({"nonnegativity", {i, j, k}, "negative structure constant"});
        }
        sum += v;
      }
      if (sum != 1) {
        rep.push_back({"row-stochastic", {i, j}, "row mass " + rat_to_string(sum)});
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const Rat expect = (i == k) ? 1 : 0;
      if (h.c(0, i, k) != expect) {
        rep.push_back({"identity-left", {i, k}, "delta_e * delta_i != delta_i"});
      }
      if (h.c(i, 0, k) != expect) {
        rep.push_back({"identity-right", {i, k}, "delta_i * delta_e != delta_i"});
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool has_e = h.c(i, j, 0) > 0;
      const bool should = (j == h.involve(i));
      if (has_e != should) {
        rep.push_back({"involution-support", {i, j},
                       should ? "identity missing from delta_i * delta_invol(i)"
                              : "identity appears in delta_i * delta_j with j != involve(i)"});
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (h.c(i, j, k) != h.c(h.involve(j), h.involve(i), h.involve(k))) {
          rep.push_back({"involution-antihomomorphism", {i, j, k},
                         "c[i][j][k] != c[inv j][inv i][inv k]"});
        }
      }
    }
  }

  return rep;
}

}  // namespace

std::string format_report(const ValidationReport& report) {
  if (report.empty()) return "ok: all hypergroup axioms hold\n";
  std::ostringstream os;
  for (const auto& v : report) {
    os << "violation: " << v.axiom << " at " << idx_list(v.where) << ": " << v.detail << "\n";
  }
  return os.str();
}

FiniteHypergroup::FiniteHypergroup(std::vector<std::string> elements, std::vector<int> involution,
                                   std::vector<Rat> structure)
    : n_(static_cast<int>(elements.size())),
      labels_(std::move(elements)),
      involution_(std::move(involution)),
      structure_(std::move(structure)) {
  if (n_ == 0) throw StructuralError("hypergroup needs at least one element");
  if (static_cast<int>(involution_.size()) != n_) {
    throw StructuralError("involution length " + std::to_string(involution_.size()) +
                          " does not match element count " + std::to_string(n_));
  }
  std::vector<bool> hit(static_cast<std::size_t>(n_), false);
  for (int v : involution_) {
    if (v < 0 || v >= n_) throw StructuralError("involution index out of range");
    if (hit[static_cast<std::size_t>(v)]) throw StructuralError("involution is not a permutation");
    hit[static_cast<std::size_t>(v)] = true;
  }
  const std::size_t need = static_cast<std::size_t>(n_) * n_ * n_;
  if (structure_.size() != need) {
    throw StructuralError("structure tensor has " + std::to_string(structure_.size()) +
                          " entries, expected " + std::to_string(need));
  }

  structure_d_.resize(need);
  for (std::size_t t = 0; t < need; ++t) structure_d_[t] = to_double(structure_[t]);

  report_ = run_axiom_checks(*this);
  if (report_.empty()) {
    try {
      haar_ = haar_from_structure(*this);
    } catch (const AxiomError& e) {
      report_.push_back({"haar-right-invariance", {}, e.what()});
    }
    haar_d_.clear();
    for (const Rat& m : haar_) haar_d_.push_back(to_double(m));
  }
}

SparseDist<int> FiniteHypergroup::point_convolve(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw PreconditionError("point_convolve index out of range");
  }
  SparseDist<int> out;
  for (int k = 0; k < n_; ++k) {
    const Rat& v = c(i, j, k);
    if (v != 0) out.emplace_back(k, v);
  }
  return out;
}

const std::vector<Rat>& FiniteHypergroup::haar() const {
  if (!valid() || haar_.empty()) {
    throw AxiomError("haar weights unavailable: hypergroup is invalid:\n" + format_report(report_));
  }
  return haar_;
}

const std::vector<double>& FiniteHypergroup::haar_d() const {
  haar();  // throws when invalid
  return haar_d_;
}

ValidationReport validate_axioms(const FiniteHypergroup& h) { return run_axiom_checks(h); }

std::vector<Rat> haar_from_structure(const FiniteHypergroup& h) {
  const int n = h.size();
  std::vector<Rat> m(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Rat& w = h.c(k, h.involve(k), 0);
    if (w <= 0) {
      throw AxiomError("haar_from_structure: c[" + std::to_string(k) + "][" +
                       std::to_string(h.involve(k)) + "][0] is not positive");
    }
    m[static_cast<std::size_t>(k)] = Rat(1) / w;
  }
  // m(0) = 1/c[0][0][0] = 1 on valid input; normalize defensively.
  const Rat m0 = m[0];
  for (auto& v : m) v /= m0;

  for (int j = 0; j < n; ++j) {
    for (int z = 0; z < n; ++z) {
      Rat sum = 0;
      for (int x = 0; x < n; ++x) sum += m[static_cast<std::size_t>(x)] * h.c(x, j, z);
      if (sum != m[static_cast<std::size_t>(z)]) {
        throw AxiomError("haar right-invariance fails at (j=" + std::to_string(j) +
                         ", z=" + std::to_string(z) + "): sum " + rat_to_string(sum) +
                         " != m(z) " + rat_to_string(m[static_cast<std::size_t>(z)]));
      }
    }
  }
  return m;
}

std::vector<int> maximal_subgroup(const FiniteHypergroup& h) {
  if (!h.valid()) throw PreconditionError("maximal_subgroup requires a valid hypergroup");
  const int n = h.size();
  std::vector<int> g;
  for (int x = 0; x < n; ++x) {
    bool point_identity = true;
    for (int k = 0; k < n; ++k) {
      const Rat expect = (k == 0) ? 1 : 0;
      if (h.c(x, h.involve(x), k) != expect) {
        point_identity = false;
        break;
      }
    }
    if (point_identity) g.push_back(x);
  }
  // The collected elements must form a group under convolution.
  std::set<int> gs(g.begin(), g.end());
  for (int x : g) {
    for (int y : g) {
      const auto row = h.point_convolve(x, y);
      if (row.size() != 1 || row[0].second != 1 || !gs.count(row[0].first)) {
        throw AxiomError("maximal_subgroup: closure fails at (" + std::to_string(x) + "," +
                         std::to_string(y) + ")");
      }
    }
  }
  return g;
}

std::vector<int> center(const FiniteHypergroup& h) {
  const int n = h.size();
  std::vector<int> z;
  for (int x = 0; x < n; ++x) {
    bool central = true;
    for (int y = 0; y < n && central; ++y) {
      for (int k = 0; k < n; ++k) {
        if (h.c(x, y, k) != h.c(y, x, k)) {
          central = false;
          break;
        }
      }
    }
    if (central) z.push_back(x);
  }
  return z;
}

bool is_commutative(const FiniteHypergroup& h) {
  return static_cast<int>(center(h).size()) == h.size();
}

bool is_group_structure(const FiniteHypergroup& h) {
  const int n = h.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int ones = 0;
      for (int k = 0; k < n; ++k) {
        const Rat& v = h.c(i, j, k);
        if (v == 1) {
          ++ones;
        } else if (v != 0) {
          return false;
        }
      }
      if (ones != 1) return false;
    }
  }
  return true;
}

namespace {

// delta_i * delta_j * delta_k, associating as indicated by left_first.
std::map<int, Rat> triple_convolve(const FiniteHypergroup& h, int i, int j, int k, bool left_first) {
  std::map<int, Rat> acc;
  const int n = h.size();
  if (left_first) {
    for (int w = 0; w < n; ++w) {
      const Rat& a = h.c(i, j, w);
      if (a == 0) continue;
      for (int z = 0; z < n; ++z) {
        const Rat& b = h.c(w, k, z);
        if (b != 0) acc[z] += a * b;
      }
    }
  } else {
    for (int w = 0; w < n; ++w) {
      const Rat& a = h.c(j, k, w);
      if (a == 0) continue;
      for (int z = 0; z < n; ++z) {
        const Rat& b = h.c(i, w, z);
        if (b != 0) acc[z] += a * b;
      }
    }
  }
  return acc;
}

}  // namespace

AssociativityCheck check_associativity(const FiniteHypergroup& h, long long trials,
                                       std::uint64_t seed, bool exhaustive) {
  AssociativityCheck result;
  const int n = h.size();
  auto test_one = [&](int i, int j, int k) {
    ++result.triples_checked;
    if (triple_convolve(h, i, j, k, true) != triple_convolve(h, i, j, k, false)) {
      result.ok = false;
      result.witness = std::array<int, 3>{i, j, k};
      return false;
    }
    return true;
  };
  if (exhaustive) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (!test_one(i, j, k)) return result;
    return result;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (long long t = 0; t < trials; ++t) {
    if (!test_one(pick(rng), pick(rng), pick(rng))) return result;
  }
  return result;
}

}  // namespace hyperkl
