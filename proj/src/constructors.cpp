#include "hyperkl/constructors.hpp"

#include <map>

#include "hyperkl/errors.hpp"

namespace hyperkl {

namespace {

std::vector<Rat> make_tensor(int n) {
  return std::vector<Rat>(static_cast<std::size_t>(n) * n * n, Rat(0));
}

Rat& tensor_at(std::vector<Rat>& t, int n, int i, int j, int k) {
  return t[(static_cast<std::size_t>(i) * n + j) * n + k];
}

FiniteHypergroup finish(std::vector<std::string> labels, std::vector<int> involution,
                        std::vector<Rat> tensor, const char* what) {
  FiniteHypergroup h(std::move(labels), std::move(involution), std::move(tensor));
  if (!h.valid()) {
    throw AxiomError(std::string(what) + " produced an invalid hypergroup:\n" +
                     format_report(h.validation()));
  }
  return h;
}

// Dense exact measure on the group, indexed by group element.
using GroupVec = std::vector<Rat>;

GroupVec group_convolve(const FiniteGroupTable& g, const GroupVec& a, const GroupVec& b) {
  GroupVec out(static_cast<std::size_t>(g.size()), Rat(0));
  for (int x = 0; x < g.size(); ++x) {
    if (a[static_cast<std::size_t>(x)] == 0) continue;
    for (int y = 0; y < g.size(); ++y) {
      if (b[static_cast<std::size_t>(y)] == 0) continue;
      out[static_cast<std::size_t>(g.mul(x, y))] +=
          a[static_cast<std::size_t>(x)] * b[static_cast<std::size_t>(y)];
    }
  }
  return out;
}

GroupVec uniform_on(const FiniteGroupTable& g, const std::vector<int>& set) {
  GroupVec v(static_cast<std::size_t>(g.size()), Rat(0));
  const Rat w(1, static_cast<long long>(set.size()));
  for (int x : set) v[static_cast<std::size_t>(x)] = w;
  return v;
}

}  // namespace

FiniteHypergroup group_as_hypergroup(const FiniteGroupTable& g) {
  const int n = g.size();
  auto tensor = make_tensor(n);
  std::vector<int> involution(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    involution[static_cast<std::size_t>(i)] = g.inv(i);
    for (int j = 0; j < n; ++j) tensor_at(tensor, n, i, j, g.mul(i, j)) = 1;
  }
  return finish(g.labels(), std::move(involution), std::move(tensor), "group_as_hypergroup");
}

ConjugacyHypergroup conjugacy_hypergroup(const FiniteGroupTable& g) {
  auto classes = conjugacy_classes(g);
  const int nc = static_cast<int>(classes.size());
  std::vector<int> class_of(static_cast<std::size_t>(g.size()), -1);
  for (int c = 0; c < nc; ++c) {
    for (int x : classes[static_cast<std::size_t>(c)]) class_of[static_cast<std::size_t>(x)] = c;
  }

  std::vector<GroupVec> uniforms;
  uniforms.reserve(static_cast<std::size_t>(nc));
  for (const auto& cls : classes) uniforms.push_back(uniform_on(g, cls));

  auto tensor = make_tensor(nc);
  std::vector<int> involution(static_cast<std::size_t>(nc));
  std::vector<std::string> labels;
  for (int c = 0; c < nc; ++c) {
    labels.push_back("cl_" + g.labels()[static_cast<std::size_t>(classes[static_cast<std::size_t>(c)].front())]);
    involution[static_cast<std::size_t>(c)] =
        class_of[static_cast<std::size_t>(g.inv(classes[static_cast<std::size_t>(c)].front()))];
    for (int d = 0; d < nc; ++d) {
      const GroupVec prod = group_convolve(g, uniforms[static_cast<std::size_t>(c)], uniforms[static_cast<std::size_t>(d)]);
      for (int x = 0; x < g.size(); ++x) {
        tensor_at(tensor, nc, c, d, class_of[static_cast<std::size_t>(x)]) += prod[static_cast<std::size_t>(x)];
      }
    }
  }
  auto h = finish(std::move(labels), std::move(involution), std::move(tensor),
                  "conjugacy_hypergroup");
  return ConjugacyHypergroup{std::move(h), std::move(classes), std::move(class_of)};
}

DoubleCosetHypergroup double_coset_hypergroup(const FiniteGroupTable& g,
                                              const std::vector<int>& subgroup) {
  auto cosets = double_cosets(g, subgroup);  // PreconditionError if not a subgroup
  const int nc = static_cast<int>(cosets.size());
  std::vector<int> coset_of(static_cast<std::size_t>(g.size()), -1);
  for (int c = 0; c < nc; ++c) {
    for (int x : cosets[static_cast<std::size_t>(c)]) coset_of[static_cast<std::size_t>(x)] = c;
  }

  auto tensor = make_tensor(nc);
  std::vector<int> involution(static_cast<std::size_t>(nc));
  std::vector<std::string> labels;
  for (int c = 0; c < nc; ++c) {
    const int rep = cosets[static_cast<std::size_t>(c)].front();
    labels.push_back("cos_" + g.labels()[static_cast<std::size_t>(rep)]);
    involution[static_cast<std::size_t>(c)] = coset_of[static_cast<std::size_t>(g.inv(rep))];
  }
  for (int c = 0; c < nc; ++c) {
    // omega_H delta_x omega_H is the uniform probability on HxH: it is
    // H-bi-invariant and each double coset is a single (H x H)-orbit.
    const GroupVec uc = uniform_on(g, cosets[static_cast<std::size_t>(c)]);
    for (int d = 0; d < nc; ++d) {
      const GroupVec ud = uniform_on(g, cosets[static_cast<std::size_t>(d)]);
      const GroupVec prod = group_convolve(g, uc, ud);
      for (int x = 0; x < g.size(); ++x) {
        tensor_at(tensor, nc, c, d, coset_of[static_cast<std::size_t>(x)]) += prod[static_cast<std::size_t>(x)];
      }
    }
  }
  auto h = finish(std::move(labels), std::move(involution), std::move(tensor),
                  "double_coset_hypergroup");
  return DoubleCosetHypergroup{std::move(h), std::move(cosets), std::move(coset_of)};
}

FiniteHypergroup direct_product(const FiniteHypergroup& a, const FiniteHypergroup& b) {
  if (!a.valid() || !b.valid()) {
    throw PreconditionError("direct_product requires valid factors");
  }
  const int na = a.size();
  const int nb = b.size();
  const int n = na * nb;
  auto idx = [nb](int i1, int i2) { return i1 * nb + i2; };
  auto tensor = make_tensor(n);
  std::vector<int> involution(static_cast<std::size_t>(n));
  std::vector<std::string> labels(static_cast<std::size_t>(n));
  for (int i1 = 0; i1 < na; ++i1) {
    for (int i2 = 0; i2 < nb; ++i2) {
      labels[static_cast<std::size_t>(idx(i1, i2))] = "(" + a.label(i1) + "," + b.label(i2) + ")";
      involution[static_cast<std::size_t>(idx(i1, i2))] = idx(a.involve(i1), b.involve(i2));
    }
  }
  for (int i1 = 0; i1 < na; ++i1)
    for (int i2 = 0; i2 < nb; ++i2)
      for (int j1 = 0; j1 < na; ++j1)
        for (int j2 = 0; j2 < nb; ++j2)
          for (int k1 = 0; k1 < na; ++k1) {
            const Rat& c1 = a.c(i1, j1, k1);
            if (c1 == 0) continue;
            for (int k2 = 0; k2 < nb; ++k2) {
              const Rat& c2 = b.c(i2, j2, k2);
              if (c2 == 0) continue;
              tensor_at(tensor, n, idx(i1, i2), idx(j1, j2), idx(k1, k2)) = c1 * c2;
            }
          }
  return finish(std::move(labels), std::move(involution), std::move(tensor), "direct_product");
}

DiscreteHypergroup<ZxFHypergroup::key_type> ZxFHypergroup::discrete() const {
  auto fiber = fiber_;
  return DiscreteHypergroup<key_type>(
      key_type{0, 0},
      [fiber](const key_type& a, const key_type& b) {
        SparseDist<key_type> out;
        for (const auto& [k, w] : fiber->point_convolve(a.second, b.second)) {
          out.emplace_back(key_type{a.first + b.first, k}, w);
        }
        return out;
      },
      [fiber](const key_type& x) { return key_type{-x.first, fiber->involve(x.second)}; });
}

ZxFHypergroup z_cross_f(const FiniteHypergroup& fiber) {
  if (!fiber.valid()) throw PreconditionError("z_cross_f requires a valid fiber hypergroup");
  return ZxFHypergroup(fiber);
}

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  const char* group_names[] = {"z2", "z3", "z4", "z6", "klein", "s3", "d4", "q8", "s4"};
  for (const char* name : group_names) {
    out.push_back({std::string("group_") + name, group_as_hypergroup(*builtin_group(name))});
  }
  const char* class_hosts[] = {"s3", "s4", "d4", "q8"};
  for (const char* name : class_hosts) {
    out.push_back({std::string("conj_") + name,
                   conjugacy_hypergroup(*builtin_group(name)).hypergroup});
  }
  {
    // S3 modulo the order-2 subgroup generated by a transposition.
    const auto s3 = *builtin_group("s3");
    const auto sub = stabilizer_in_symmetric_group(3, 2);
    out.push_back({"dc_s3_flip", double_coset_hypergroup(s3, sub).hypergroup});
  }
  {
    // S4 modulo the copy of S3 fixing the last point.
    const auto s4 = *builtin_group("s4");
    const auto sub = stabilizer_in_symmetric_group(4, 3);
    out.push_back({"dc_s4_point", double_coset_hypergroup(s4, sub).hypergroup});
  }
  out.push_back({"prod_z2_conj_s3",
                 direct_product(group_as_hypergroup(*builtin_group("z2")),
                                conjugacy_hypergroup(*builtin_group("s3")).hypergroup)});
  out.push_back({"prod_z3_dc_s3_flip",
                 direct_product(group_as_hypergroup(*builtin_group("z3")),
                                double_coset_hypergroup(
                                    *builtin_group("s3"),
                                    stabilizer_in_symmetric_group(3, 2))
                                    .hypergroup)});
  return out;
}

std::vector<CatalogEntry> commutative_catalog() {
  std::vector<CatalogEntry> out;
  for (auto& entry : catalog()) {
    if (is_commutative(entry.hypergroup)) out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace hyperkl
