#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperkl/constructors.hpp"
#include "hyperkl/hypergroup.hpp"
#include "hyperkl/measure.hpp"
#include "hyperkl/operator.hpp"
#include "hyperkl/padic.hpp"

namespace hyperkl {

using Json = nlohmann::json;

/// Reads and parses a JSON file. Missing file or bad JSON throws IoError.
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

/// A weight entry: "num/den" string, bare integer string, JSON integer, or
/// JSON float (converted to its exact dyadic value).
Rat rational_from_json(const Json& v);
Json rational_to_json(const Rat& r);  // "num/den" string

/// Hypergroup files: { "elements": [labels], "involution": [indices],
/// "structure": [[[weight]]], optional "haar": [weight] }. Identity is
/// index 0. Shape problems throw IoError; axiom violations are left in the
/// returned object's validation report. A "haar" entry disagreeing with the
/// computed measure (after scaling to m(identity) = 1) is recorded in
/// `issues`, not thrown.
struct HypergroupFile {
  std::shared_ptr<FiniteHypergroup> hypergroup;
  std::vector<std::string> issues;
};
HypergroupFile hypergroup_from_json(const Json& j);
Json hypergroup_to_json(const FiniteHypergroup& h, bool include_haar = true);

/// Group files: { "size": n, "table": [[index]], optional "labels": [...] }.
FiniteGroupTable group_from_json(const Json& j);
Json group_to_json(const FiniteGroupTable& g);

/// Measure files: { "hypergroup": path-or-inline-object (optional when a
/// host is supplied), "atoms": [ { "element": index-or-label, "weight": w } ] }.
/// Relative hypergroup paths resolve against base_dir. A mass within 1e-9
/// of 1 but not exactly 1 is rescaled to an exact probability and noted in
/// `issues`.
struct MeasureFile {
  std::shared_ptr<FiniteHypergroup> host;
  Measure<FiniteHypergroup, Rat> measure;
  std::vector<std::string> issues;
};
MeasureFile measure_from_json(const Json& j, const std::string& base_dir,
                              std::shared_ptr<FiniteHypergroup> host = nullptr);
Json measure_to_json(const Measure<FiniteHypergroup, Rat>& mu);

/// Sorted atom table: one "label  exact  float" line per atom.
std::string measure_table(const Measure<FiniteHypergroup, Rat>& mu);

/// Integer-times-finite hosts travel as { "zcross": { "fiber": <hypergroup> } }.
Json zcross_to_json(const ZxFHypergroup& host);
bool is_zcross_json(const Json& j);
ZxFHypergroup zcross_from_json(const Json& j);

/// Atoms for such hosts use "element": [level, fiber-index-or-label].
Measure<ZxFHypergroup, Rat> zxf_measure_from_json(const Json& j, const ZxFHypergroup& host);

Json validation_report_json(const ValidationReport& report);
Json decompose_report_json(const CrossCheckResult& r, const FiniteHypergroup& h);
Json counterexample_report_json(const CounterexampleReport& r);

}  // namespace hyperkl
