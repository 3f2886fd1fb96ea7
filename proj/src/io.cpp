#include "hyperkl/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hyperkl/errors.hpp"

namespace hyperkl {

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw IoError("bad JSON in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

Rat rational_from_json(const Json& v) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rat(v.get<long long>());
    if (v.is_number_float()) return Rat(v.get<double>());  // exact dyadic value
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("bad rational: ") + e.what());
  }
  throw IoError("weight must be a \"num/den\" string or a number, got " + v.dump());
}

Json rational_to_json(const Rat& r) { return rat_to_string(r); }

HypergroupFile hypergroup_from_json(const Json& j) {
  if (!j.is_object()) throw IoError("hypergroup document must be a JSON object");
  for (const char* key : {"elements", "involution", "structure"}) {
    if (!j.contains(key)) throw IoError(std::string("hypergroup document lacks \"") + key + "\"");
  }
  std::vector<std::string> labels;
  for (const auto& e : j.at("elements")) {
    if (!e.is_string()) throw IoError("elements must be label strings");
    labels.push_back(e.get<std::string>());
  }
  const std::size_t n = labels.size();
  std::vector<int> involution;
  for (const auto& e : j.at("involution")) {
    if (!e.is_number_integer()) throw IoError("involution must list element indices");
    involution.push_back(e.get<int>());
  }
  const auto& st = j.at("structure");
  if (!st.is_array() || st.size() != n) throw IoError("structure must be an n x n x n array");
  std::vector<Rat> flat;
  flat.reserve(n * n * n);
  for (const auto& plane : st) {
    if (!plane.is_array() || plane.size() != n) throw IoError("structure must be an n x n x n array");
    for (const auto& row : plane) {
      if (!row.is_array() || row.size() != n) throw IoError("structure must be an n x n x n array");
      for (const auto& v : row) flat.push_back(rational_from_json(v));
    }
  }

  HypergroupFile out;
  try {
    out.hypergroup = std::make_shared<FiniteHypergroup>(std::move(labels), std::move(involution),
                                                        std::move(flat));
  } catch (const StructuralError& e) {
    throw IoError(std::string("hypergroup document is malformed: ") + e.what());
  }

  if (j.contains("haar")) {
    const auto& hj = j.at("haar");
    if (!hj.is_array() || hj.size() != n) {
      throw IoError("haar must list one weight per element");
    }
    if (out.hypergroup->valid()) {
      std::vector<Rat> given;
      for (const auto& v : hj) given.push_back(rational_from_json(v));
      // Compare after scaling the file's weights to m(identity) = 1.
      if (given[0] == 0) {
        out.issues.push_back("haar: identity weight is 0");
      } else {
        const auto& computed = out.hypergroup->haar();
        for (std::size_t k = 0; k < n; ++k) {
          if (given[k] / given[0] != computed[k]) {
            out.issues.push_back("haar: entry " + std::to_string(k) + " is " +
                                 rat_to_string(given[k] / given[0]) + ", expected " +
                                 rat_to_string(computed[k]));
          }
        }
      }
    }
  }
  return out;
}

Json hypergroup_to_json(const FiniteHypergroup& h, bool include_haar) {
  Json j;
  j["elements"] = h.labels();
  j["involution"] = h.involution();
  const int n = h.size();
  Json structure = Json::array();
  for (int i = 0; i < n; ++i) {
    Json plane = Json::array();
    for (int jj = 0; jj < n; ++jj) {
      Json row = Json::array();
      for (int k = 0; k < n; ++k) row.push_back(rational_to_json(h.c(i, jj, k)));
      plane.push_back(std::move(row));
    }
    structure.push_back(std::move(plane));
  }
  j["structure"] = std::move(structure);
  if (include_haar && h.valid()) {
    Json haar = Json::array();
    for (const auto& w : h.haar()) haar.push_back(rational_to_json(w));
    j["haar"] = std::move(haar);
  }
  return j;
}

FiniteGroupTable group_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("size") || !j.contains("table")) {
    throw IoError("group document needs \"size\" and \"table\"");
  }
  const int n = j.at("size").get<int>();
  std::vector<std::vector<int>> table;
  for (const auto& row : j.at("table")) table.push_back(row.get<std::vector<int>>());
  if (static_cast<int>(table.size()) != n) throw IoError("group table has wrong row count");
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  try {
    return FiniteGroupTable::from_table(std::move(table), std::move(labels));
  } catch (const StructuralError& e) {
    throw IoError(std::string("bad group table: ") + e.what());
  }
}

Json group_to_json(const FiniteGroupTable& g) {
  Json j;
  j["size"] = g.size();
  Json table = Json::array();
  for (int i = 0; i < g.size(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < g.size(); ++k) row.push_back(g.mul(i, k));
    table.push_back(std::move(row));
  }
  j["table"] = std::move(table);
  j["labels"] = g.labels();
  return j;
}

namespace {

int element_index(const Json& v, const FiniteHypergroup& h) {
  if (v.is_number_integer()) {
    const int idx = v.get<int>();
    if (idx < 0 || idx >= h.size()) throw IoError("element index out of range: " + v.dump());
    return idx;
  }
  if (v.is_string()) {
    const std::string label = v.get<std::string>();
    for (int i = 0; i < h.size(); ++i) {
      if (h.label(i) == label) return i;
    }
    throw IoError("unknown element label \"" + label + "\"");
  }
  throw IoError("element must be an index or a label, got " + v.dump());
}

}  // namespace

MeasureFile measure_from_json(const Json& j, const std::string& base_dir,
                              std::shared_ptr<FiniteHypergroup> host) {
  if (!j.is_object() || !j.contains("atoms")) throw IoError("measure document needs \"atoms\"");
  std::vector<std::string> issues;
  if (!host) {
    if (!j.contains("hypergroup")) {
      throw IoError("measure document needs a \"hypergroup\" (path or inline) or an external host");
    }
    const auto& hv = j.at("hypergroup");
    Json hj;
    if (hv.is_string()) {
      std::filesystem::path p(hv.get<std::string>());
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      hj = load_json_file(p.string());
    } else {
      hj = hv;
    }
    auto loaded = hypergroup_from_json(hj);
    host = loaded.hypergroup;
    issues = std::move(loaded.issues);
  }

  Measure<FiniteHypergroup, Rat> mu(*host);
  for (const auto& atom : j.at("atoms")) {
    if (!atom.is_object() || !atom.contains("element") || !atom.contains("weight")) {
      throw IoError("each atom needs \"element\" and \"weight\"");
    }
    const Rat w = rational_from_json(atom.at("weight"));
    if (w < 0) throw IoError("negative atom weight " + rat_to_string(w));
    if (w > 0) mu.add(element_index(atom.at("element"), *host), w);
  }

  const Rat mass = mu.mass();
  if (mass != 1 && mass != 0) {
    const double drift = std::abs(to_double(mass) - 1.0);
    if (drift <= 1e-9) {
      Measure<FiniteHypergroup, Rat> scaled(*host);
      for (const auto& [k, w] : mu.atoms()) scaled.add(k, w / mass);
      issues.push_back("mass " + rat_to_string(mass) + " rescaled to an exact probability");
      mu = std::move(scaled);
    }
  }
  return MeasureFile{std::move(host), std::move(mu), std::move(issues)};
}

Json measure_to_json(const Measure<FiniteHypergroup, Rat>& mu) {
  Json atoms = Json::array();
  for (const auto& [k, w] : mu.atoms()) {
    atoms.push_back({{"element", mu.host().label(k)}, {"weight", rational_to_json(w)}});
  }
  return Json{{"atoms", std::move(atoms)}};
}

std::string measure_table(const Measure<FiniteHypergroup, Rat>& mu) {
  std::size_t width = 7;
  for (const auto& [k, w] : mu.atoms()) width = std::max(width, mu.host().label(k).size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width) + 2) << "element"
      << std::setw(16) << "weight" << "float\n";
  for (const auto& [k, w] : mu.atoms()) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << mu.host().label(k)
        << std::setw(16) << rat_to_string(w) << std::setprecision(12) << to_double(w) << "\n";
  }
  return out.str();
}

Json zcross_to_json(const ZxFHypergroup& host) {
  return Json{{"zcross", {{"fiber", hypergroup_to_json(host.fiber())}}}};
}

bool is_zcross_json(const Json& j) { return j.is_object() && j.contains("zcross"); }

ZxFHypergroup zcross_from_json(const Json& j) {
  if (!is_zcross_json(j) || !j.at("zcross").contains("fiber")) {
    throw IoError("expected { \"zcross\": { \"fiber\": ... } }");
  }
  auto fiber = hypergroup_from_json(j.at("zcross").at("fiber"));
  if (!fiber.hypergroup->valid()) {
    throw IoError("zcross fiber fails the hypergroup axioms");
  }
  return ZxFHypergroup(*fiber.hypergroup);
}

Measure<ZxFHypergroup, Rat> zxf_measure_from_json(const Json& j, const ZxFHypergroup& host) {
  if (!j.is_object() || !j.contains("atoms")) throw IoError("measure document needs \"atoms\"");
  Measure<ZxFHypergroup, Rat> mu(host);
  for (const auto& atom : j.at("atoms")) {
    if (!atom.is_object() || !atom.contains("element") || !atom.contains("weight")) {
      throw IoError("each atom needs \"element\" and \"weight\"");
    }
    const auto& ev = atom.at("element");
    if (!ev.is_array() || ev.size() != 2 || !ev[0].is_number_integer()) {
      throw IoError("zcross elements are [level, fiber] pairs, got " + ev.dump());
    }
    const auto level = ev[0].get<std::int64_t>();
    const int f = element_index(ev[1], host.fiber());
    const Rat w = rational_from_json(atom.at("weight"));
    if (w < 0) throw IoError("negative atom weight " + rat_to_string(w));
    if (w > 0) mu.add({level, f}, w);
  }
  return mu;
}

Json validation_report_json(const ValidationReport& report) {
  Json out = Json::array();
  for (const auto& v : report) {
    out.push_back({{"axiom", v.axiom}, {"where", v.where}, {"detail", v.detail}});
  }
  return out;
}

Json decompose_report_json(const CrossCheckResult& r, const FiniteHypergroup& h) {
  Json j;
  j["kl_holds"] = r.dec.kl_holds;
  j["dim_e0"] = static_cast<int>(r.dec.e0_basis.cols());
  j["dim_sigma_d"] = static_cast<int>(r.dec.sigma_d_basis.cols());
  j["partition"] = r.dec.partition;
  j["residual"] = r.dec.residual;
  j["iterations"] = r.dec.iterations;
  if (r.verdict.kind == LimitKind::Converged && r.verdict.rho) {
    Json atoms = Json::array();
    for (const auto& [k, w] : r.verdict.rho->atoms()) {
      atoms.push_back({{"element", h.label(k)},
                       {"weight", to_double(w)},
                       {"weight_exact", rational_to_json(w)}});
    }
    j["rho"] = std::move(atoms);
  } else {
    j["rho"] = nullptr;
  }
  j["criteria_agree"] = r.agree;
  j["limit_kind"] = to_string(r.verdict.kind);
  j["rho_idempotent"] = r.rho_idempotent;
  j["q_vs_rho"] = r.q_vs_rho;
  return j;
}

namespace {

Json padic_atoms_json(const std::vector<std::pair<PadicCosetElement, Rat>>& atoms) {
  Json out = Json::array();
  for (const auto& [k, w] : atoms) {
    out.push_back({{"level", k.n},
                   {"rep", rational_to_json(k.r)},
                   {"weight", rational_to_json(w)},
                   {"weight_float", to_double(w)}});
  }
  return out;
}

}  // namespace

Json counterexample_report_json(const CounterexampleReport& r) {
  Json j;
  j["p"] = r.params.p;
  j["s"] = r.params.s;
  j["n_max"] = r.n_max;
  j["lambda"] = padic_atoms_json(r.lambda);
  j["lambda_involuted"] = padic_atoms_json(r.lambda_involuted);
  j["rho"] = padic_atoms_json(r.rho);
  j["rho_squared"] = padic_atoms_json(r.rho_squared);
  Json asserts = Json::array();
  for (const auto& a : r.assertions) {
    asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  }
  j["assertions"] = std::move(asserts);
  j["all_passed"] = r.all_passed;
  return j;
}

}  // namespace hyperkl
