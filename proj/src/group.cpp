#include "hyperkl/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "hyperkl/errors.hpp"

namespace hyperkl {

namespace {

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back("g" + std::to_string(i));
  return out;
}

}  // namespace

FiniteGroupTable FiniteGroupTable::from_table(std::vector<std::vector<int>> table,
                                              std::vector<std::string> labels) {
  FiniteGroupTable g;
  const int n = static_cast<int>(table.size());
  if (n == 0) throw StructuralError("group table is empty");
  g.n_ = n;
  g.table_.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(table[i].size()) != n) {
      throw StructuralError("group table row " + std::to_string(i) + " has wrong length");
    }
    for (int j = 0; j < n; ++j) {
      const int v = table[i][j];
      if (v < 0 || v >= n) {
        throw StructuralError("group table entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") out of range");
      }
      g.table_.push_back(v);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (g.mul(0, i) != i || g.mul(i, 0) != i) {
      throw StructuralError("index 0 is not a two-sided identity");
    }
  }
  g.inverse_.assign(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (g.mul(i, j) == 0) {
        if (g.mul(j, i) != 0) {
          throw StructuralError("one-sided inverse at element " + std::to_string(i));
        }
        g.inverse_[i] = j;
      }
    }
    if (g.inverse_[i] < 0) {
      throw StructuralError("element " + std::to_string(i) + " has no inverse");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (g.mul(g.mul(i, j), k) != g.mul(i, g.mul(j, k))) {
          throw StructuralError("group table not associative at (" + std::to_string(i) + "," +
                                std::to_string(j) + "," + std::to_string(k) + ")");
        }
      }
    }
  }
  if (labels.empty()) {
    g.labels_ = default_labels(n);
  } else {
    if (static_cast<int>(labels.size()) != n) {
      throw StructuralError("label count does not match group size");
    }
    g.labels_ = std::move(labels);
  }
  return g;
}

FiniteGroupTable cyclic_group(int n) {
  if (n < 1) throw StructuralError("cyclic_group needs n >= 1");
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    labels.push_back(std::to_string(i));
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  }
  return FiniteGroupTable::from_table(std::move(t), std::move(labels));
}

FiniteGroupTable klein_four_group() {
  std::vector<std::vector<int>> t(4, std::vector<int>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t[i][j] = i ^ j;
  return FiniteGroupTable::from_table(std::move(t), {"e", "a", "b", "ab"});
}

FiniteGroupTable dihedral_group_d4() {
  // Elements r^a s^b with index a + 4b; s r = r^-1 s.
  auto idx = [](int a, int b) { return (a & 3) + 4 * (b & 1); };
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  std::vector<std::string> labels(8);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 2; ++b) {
      labels[static_cast<std::size_t>(idx(a, b))] =
          (b ? "r" + std::to_string(a) + "s" : "r" + std::to_string(a));
    }
  }
  labels[0] = "e";
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 2; ++d) {
          const int aa = b ? (a - c) & 3 : (a + c) & 3;
          t[static_cast<std::size_t>(idx(a, b))][static_cast<std::size_t>(idx(c, d))] =
              idx(aa, b ^ d);
        }
  return FiniteGroupTable::from_table(std::move(t), std::move(labels));
}

FiniteGroupTable quaternion_group_q8() {
  // Order: 1, -1, i, -i, j, -j, k, -k.
  // Encode q = (sign, axis) with axis 0=1, 1=i, 2=j, 3=k.
  auto enc = [](int sign, int axis) { return axis == 0 ? (sign > 0 ? 0 : 1) : 2 * axis + (sign > 0 ? 0 : 1); };
  auto axis_of = [](int e) { return e / 2; };
  auto sign_of = [](int e) { return (e == 0 || (e >= 2 && e % 2 == 0)) ? 1 : -1; };
  // i*j=k, j*k=i, k*i=j; reversed order flips sign; equal axes give -1.
  auto mul_axes = [](int a, int b, int& sign) -> int {
    if (a == 0) { sign = 1; return b; }
    if (b == 0) { sign = 1; return a; }
    if (a == b) { sign = -1; return 0; }
    static const int prod[4][4] = {{0, 0, 0, 0}, {0, 0, 3, 2}, {0, 3, 0, 1}, {0, 2, 1, 0}};
    static const int sgn[4][4] = {{1, 1, 1, 1}, {1, 1, 1, -1}, {1, -1, 1, 1}, {1, 1, -1, 1}};
    sign = sgn[a][b];
    return prod[a][b];
  };
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int x = 0; x < 8; ++x) {
    for (int y = 0; y < 8; ++y) {
      int s = 1;
      const int axis = mul_axes(axis_of(x), axis_of(y), s);
      t[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          enc(sign_of(x) * sign_of(y) * s, axis);
    }
  }
  return FiniteGroupTable::from_table(std::move(t), {"1", "-1", "i", "-i", "j", "-j", "k", "-k"});
}

namespace {

std::vector<std::vector<int>> permutations_lex(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> all;
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return all;
}

std::string one_line(const std::vector<int>& p) {
  std::string s;
  for (int v : p) s += std::to_string(v);
  return s;
}

}  // namespace

FiniteGroupTable symmetric_group(int n) {
  if (n < 1 || n > 5) throw StructuralError("symmetric_group supports 1 <= n <= 5");
  const auto perms = permutations_lex(n);
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);
  const int m = static_cast<int>(perms.size());
  std::vector<std::vector<int>> t(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m)));
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(m));
  for (const auto& p : perms) labels.push_back(one_line(p));
  std::vector<int> comp(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      // Composition (f o g)(x) = f(g(x)).
      for (int x = 0; x < n; ++x) comp[static_cast<std::size_t>(x)] = perms[static_cast<std::size_t>(i)][static_cast<std::size_t>(perms[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)])];
      t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = index.at(comp);
    }
  }
  return FiniteGroupTable::from_table(std::move(t), std::move(labels));
}

std::optional<FiniteGroupTable> builtin_group(const std::string& name) {
  if (name == "s3") return symmetric_group(3);
  if (name == "s4") return symmetric_group(4);
  if (name == "d4") return dihedral_group_d4();
  if (name == "q8") return quaternion_group_q8();
  if (name == "klein") return klein_four_group();
  if (name.size() > 1 && name[0] == 'z') {
    const std::string digits = name.substr(1);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      const int n = std::stoi(digits);
      if (n >= 1 && n <= 1000) return cyclic_group(n);
    }
  }
  return std::nullopt;
}

std::vector<std::string> builtin_group_names() {
  return {"z<N>", "s3", "s4", "d4", "q8", "klein"};
}

bool is_subgroup(const FiniteGroupTable& g, const std::vector<int>& elements) {
  std::set<int> h(elements.begin(), elements.end());
  if (h.empty() || !h.count(0)) return false;
  for (int a : h) {
    if (a < 0 || a >= g.size()) return false;
    if (!h.count(g.inv(a))) return false;
    for (int b : h) {
      if (!h.count(g.mul(a, b))) return false;
    }
  }
  return true;
}

std::vector<int> subgroup_closure(const FiniteGroupTable& g, const std::vector<int>& generators) {
  std::set<int> h{0};
  for (int x : generators) {
    if (x < 0 || x >= g.size()) throw StructuralError("generator index out of range");
    h.insert(x);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<int> cur(h.begin(), h.end());
    for (int a : cur) {
      if (h.insert(g.inv(a)).second) grew = true;
      for (int b : cur) {
        if (h.insert(g.mul(a, b)).second) grew = true;
      }
    }
  }
  return {h.begin(), h.end()};
}

std::vector<std::vector<int>> conjugacy_classes(const FiniteGroupTable& g) {
  const int n = g.size();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<std::vector<int>> classes;
  for (int x = 0; x < n; ++x) {
    if (seen[static_cast<std::size_t>(x)]) continue;
    std::set<int> cls;
    for (int s = 0; s < n; ++s) cls.insert(g.mul(g.mul(s, x), g.inv(s)));
    std::vector<int> c(cls.begin(), cls.end());
    for (int y : c) seen[static_cast<std::size_t>(y)] = true;
    classes.push_back(std::move(c));
  }
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return classes;  // class of the identity holds 0, hence sorts first
}

std::vector<std::vector<int>> double_cosets(const FiniteGroupTable& g, const std::vector<int>& subgroup) {
  if (!is_subgroup(g, subgroup)) {
    throw PreconditionError("double_cosets: the given element set is not a subgroup");
  }
  const int n = g.size();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<std::vector<int>> cosets;
  for (int x = 0; x < n; ++x) {
    if (seen[static_cast<std::size_t>(x)]) continue;
    std::set<int> coset;
    for (int h1 : subgroup)
      for (int h2 : subgroup) coset.insert(g.mul(g.mul(h1, x), h2));
    std::vector<int> c(coset.begin(), coset.end());
    for (int y : c) seen[static_cast<std::size_t>(y)] = true;
    cosets.push_back(std::move(c));
  }
  std::sort(cosets.begin(), cosets.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return cosets;  // HeH = H holds 0, hence sorts first
}

std::vector<int> stabilizer_in_symmetric_group(int n, int fixed) {
  const auto perms = permutations_lex(n);
  std::vector<int> out;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    if (perms[i][static_cast<std::size_t>(fixed)] == fixed) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace hyperkl
