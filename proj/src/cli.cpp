#include "hyperkl/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "hyperkl/constructors.hpp"
#include "hyperkl/errors.hpp"
#include "hyperkl/group.hpp"
#include "hyperkl/hypergroup.hpp"
#include "hyperkl/io.hpp"
#include "hyperkl/measure.hpp"
#include "hyperkl/operator.hpp"
#include "hyperkl/padic.hpp"

namespace hyperkl {
namespace {

constexpr int kOk = 0;
constexpr int kDomain = 1;  // axiom violation / failed assertion / no convergence
constexpr int kInput = 2;   // unreadable or malformed input
constexpr int kBudget = 3;  // resource cap exceeded

std::string dir_of(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

/// Group lookup order: literal file path, then HYPERKL_CATALOG/<name>.json,
/// then the builtin table.
FiniteGroupTable resolve_group(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (fs::exists(name_or_path)) return group_from_json(load_json_file(name_or_path));
  if (const char* dir = std::getenv("HYPERKL_CATALOG")) {
    const fs::path p = fs::path(dir) / (name_or_path + ".json");
    if (fs::exists(p)) return group_from_json(load_json_file(p.string()));
  }
  if (auto g = builtin_group(name_or_path)) return *g;
  throw IoError("unknown group \"" + name_or_path +
                "\" (not a file, a catalog entry, or a builtin name)");
}

void emit(const Json& j, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    save_json_file(out_path, j);
  }
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& path, bool as_json, bool exhaustive, std::uint64_t seed,
                 std::ostream& out, std::ostream& err) {
  const auto hf = hypergroup_from_json(load_json_file(path));
  const auto& h = *hf.hypergroup;
  if (exhaustive && h.size() > 12) {
    err << "--exhaustive is limited to 12 elements or fewer (got " << h.size() << ")\n";
    return kInput;
  }
  ValidationReport report = h.validation();
  if (report.empty()) {
    const auto assoc = check_associativity(h, 200, seed, exhaustive);
    if (!assoc.ok && assoc.witness) {
      report.push_back({"associativity",
                        {(*assoc.witness)[0], (*assoc.witness)[1], (*assoc.witness)[2]},
                        "convolution is not associative at this triple"});
    }
  }
  const bool ok = report.empty() && hf.issues.empty();
  if (as_json) {
    Json j;
    j["valid"] = ok;
    j["size"] = h.size();
    j["violations"] = validation_report_json(report);
    j["issues"] = hf.issues;
    if (ok) {
      Json haar = Json::array();
      for (const auto& w : h.haar()) haar.push_back(rational_to_json(w));
      j["haar"] = std::move(haar);
    }
    out << j.dump(2) << "\n";
  } else if (ok) {
    out << "valid: " << h.size() << " elements\nhaar:";
    for (const auto& w : h.haar()) out << " " << rat_to_string(w);
    out << "\n";
  } else {
    out << format_report(report);
    for (const auto& issue : hf.issues) out << "issue: " << issue << "\n";
  }
  return ok ? kOk : kDomain;
}

// --------------------------------------------------------------- decompose

int cmd_decompose(const std::string& hg_path, const std::string& m_path, double tol, int n_max,
                  int window, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const auto hf = hypergroup_from_json(load_json_file(hg_path));
  if (!hf.hypergroup->valid()) {
    err << "hypergroup fails the axioms:\n" << format_report(hf.hypergroup->validation());
    return kDomain;
  }
  const auto mf = measure_from_json(load_json_file(m_path), dir_of(m_path), hf.hypergroup);
  for (const auto& issue : mf.issues) err << "note: " << issue << "\n";

  DecomposeOptions opts;
  opts.q_tol = tol;
  opts.n_max = n_max;
  LimitOptions lopts;
  lopts.window = window;
  const auto result = cross_check(*hf.hypergroup, mf.measure, opts, 400, lopts);
  emit(decompose_report_json(result, *hf.hypergroup), out_path, out);
  return kOk;
}

// ----------------------------------------------------------------- iterate

template <class Host>
int iterate_body(const Host& host, const Measure<Host, Rat>& lambda, int n_max, double tol,
                 int window, std::size_t support_cap, std::ostream& out) {
  const auto seq = alternating_sequence(lambda, n_max, support_cap);

  std::set<typename Host::key_type> ref;  // fixed window for the mass column
  if (!seq.entries.empty()) {
    for (const auto& [k, w] : seq.entries.front().atoms()) ref.insert(k);
  }
  ref.insert(host.identity());

  out << "n,support,max_atom,l1_gap,mass_window\n";
  for (std::size_t i = 0; i < seq.entries.size(); ++i) {
    const auto& entry = seq.entries[i];
    const Rat gap = i == 0 ? Rat(0) : entry.l1_distance(seq.entries[i - 1]);
    out << (i + 1) << "," << entry.support_size() << "," << to_double(entry.max_atom()) << ","
        << to_double(gap) << "," << to_double(entry.mass_on(ref)) << "\n";
  }
  LimitOptions lopts;
  lopts.tol = tol;
  lopts.window = window;
  const auto verdict = limit_detect(seq.entries, lopts);
  out << "verdict," << to_string(verdict.kind) << ",settled_at=" << verdict.settled_at
      << ",last_gap=" << verdict.last_gap << "\n";
  if (seq.truncated) {
    out << "truncated,1\n";
    return kBudget;
  }
  return kOk;
}

int cmd_iterate(const std::string& hg_path, const std::string& m_path, int n_max, double tol,
                int window, std::size_t support_cap, const std::string& csv_path,
                std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!csv_path.empty()) {
    file.open(csv_path);
    if (!file) throw IoError("cannot write " + csv_path);
    sink = &file;
  }
  const Json hj = load_json_file(hg_path);
  const Json mj = load_json_file(m_path);
  if (is_zcross_json(hj)) {
    const ZxFHypergroup host = zcross_from_json(hj);
    const auto lambda = zxf_measure_from_json(mj, host);
    if (!lambda.is_probability()) throw PreconditionError("measure is not a probability");
    return iterate_body(host, lambda, n_max, tol, window, support_cap, *sink);
  }
  const auto hf = hypergroup_from_json(hj);
  if (!hf.hypergroup->valid()) {
    err << "hypergroup fails the axioms:\n" << format_report(hf.hypergroup->validation());
    return kDomain;
  }
  const auto mf = measure_from_json(mj, dir_of(m_path), hf.hypergroup);
  for (const auto& issue : mf.issues) err << "note: " << issue << "\n";
  return iterate_body(*hf.hypergroup, mf.measure, n_max, tol, window, support_cap, *sink);
}

// --------------------------------------------------------------- construct

std::shared_ptr<FiniteHypergroup> resolve_hypergroup(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    auto hf = hypergroup_from_json(load_json_file(arg));
    if (!hf.hypergroup->valid()) throw IoError(arg + " fails the hypergroup axioms");
    return hf.hypergroup;
  }
  return std::make_shared<FiniteHypergroup>(group_as_hypergroup(resolve_group(arg)));
}

int cmd_construct(const std::string& kind, const std::string& group_arg,
                  const std::string& subgroup_arg, const std::string& left,
                  const std::string& right, const std::string& fiber_arg,
                  const std::string& out_path, std::ostream& out) {
  Json j;
  if (kind == "group") {
    j = hypergroup_to_json(group_as_hypergroup(resolve_group(group_arg)));
  } else if (kind == "conjugacy") {
    j = hypergroup_to_json(conjugacy_hypergroup(resolve_group(group_arg)).hypergroup);
  } else if (kind == "double-coset") {
    const auto g = resolve_group(group_arg);
    std::vector<int> generators;
    std::stringstream ss(subgroup_arg);
    for (std::string tok; std::getline(ss, tok, ',');) {
      try {
        generators.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw IoError("--subgroup wants comma-separated element indices, got \"" + tok + "\"");
      }
    }
    if (generators.empty()) throw IoError("--subgroup is required for double-coset");
    j = hypergroup_to_json(double_coset_hypergroup(g, subgroup_closure(g, generators)).hypergroup);
  } else if (kind == "product") {
    if (left.empty() || right.empty()) throw IoError("--left and --right are required for product");
    j = hypergroup_to_json(direct_product(*resolve_hypergroup(left), *resolve_hypergroup(right)));
  } else if (kind == "zcross") {
    if (fiber_arg.empty()) throw IoError("--fiber is required for zcross");
    j = zcross_to_json(z_cross_f(*resolve_hypergroup(fiber_arg)));
  } else {
    throw IoError("unknown kind \"" + kind + "\"");
  }
  emit(j, out_path, out);
  return kOk;
}

// ---------------------------------------------------------- counterexample

int cmd_counterexample(long long p, long long s, int n_max, const std::string& json_path,
                       std::ostream& out, std::ostream& err) {
  PadicParams params;
  try {
    params = PadicParams::create(p, s);
  } catch (const PreconditionError& e) {
    err << e.what() << "\n";
    return kInput;
  }
  const auto report = run_counterexample(params, n_max);

  auto table = [&](const char* title, const std::vector<std::pair<PadicCosetElement, Rat>>& atoms) {
    out << title << ":\n";
    for (const auto& [k, w] : atoms) {
      out << "  " << k.to_string() << "  " << rat_to_string(w) << "\n";
    }
  };
  out << "p = " << params.p << ", s = " << params.s << ", n_max = " << report.n_max << "\n";
  table("lambda", report.lambda);
  table("involute(lambda)", report.lambda_involuted);
  table("rho", report.rho);
  table("rho * rho", report.rho_squared);
  for (const auto& a : report.assertions) {
    out << (a.passed ? "PASS " : "FAIL ") << a.name;
    if (!a.detail.empty()) out << "  (" << a.detail << ")";
    out << "\n";
  }
  if (!json_path.empty()) save_json_file(json_path, counterexample_report_json(report));
  return report.all_passed ? kOk : kDomain;
}

// -------------------------------------------------------------------- demo

struct DemoCase {
  std::string name;
  bool passed = false;
  std::string detail;
};

using DemoJob = std::function<DemoCase()>;

std::vector<DemoJob> tortrat_shift_jobs() {
  std::vector<DemoJob> jobs;
  jobs.push_back([] {
    const auto host = std::make_shared<ZxFHypergroup>(
        z_cross_f(group_as_hypergroup(cyclic_group(1))));
    const auto lambda = Measure<ZxFHypergroup, Rat>::point(*host, {1, 0});
    const bool ok = bilateral_shift_check(*host, lambda, {-8, 8, 8});
    return DemoCase{"plain-shift-on-z", ok, "delta_1 moves level indicators by one"};
  });
  jobs.push_back([] {
    const auto host = std::make_shared<ZxFHypergroup>(
        z_cross_f(group_as_hypergroup(cyclic_group(2))));
    const auto lambda = Measure<ZxFHypergroup, Rat>::from_atoms(
        *host, {{{1, 0}, Rat(1, 2)}, {{1, 1}, Rat(1, 2)}});
    const bool ok = bilateral_shift_check(*host, lambda, {-8, 8, 8});
    return DemoCase{"z-x-z2-shift", ok, "level-1 uniform measure shifts the level cosets"};
  });
  jobs.push_back([] {
    const auto host = std::make_shared<ZxFHypergroup>(
        z_cross_f(group_as_hypergroup(cyclic_group(2))));
    const auto lambda = Measure<ZxFHypergroup, Rat>::from_atoms(
        *host, {{{1, 0}, Rat(1, 2)}, {{1, 1}, Rat(1, 2)}});
    const auto blocks = zxf_partition_window(*host, lambda, -8, 8, 2);
    bool ok = blocks.size() == 17;
    for (std::size_t i = 0; ok && i < blocks.size(); ++i) {
      const auto level = static_cast<std::int64_t>(i) - 8;
      ok = blocks[i] == std::vector<ZxFHypergroup::key_type>{{level, 0}, {level, 1}};
    }
    return DemoCase{"z-x-z2-partition", ok, "window blocks are exactly the levels {m} x Z2"};
  });
  jobs.push_back([] {
    const auto host = std::make_shared<ZxFHypergroup>(
        z_cross_f(group_as_hypergroup(cyclic_group(2))));
    const auto lambda = Measure<ZxFHypergroup, Rat>::from_atoms(
        *host, {{{1, 0}, Rat(1, 2)}, {{2, 0}, Rat(1, 2)}});
    bool rejected = false;
    try {
      bilateral_shift_check(*host, lambda, {-2, 2, 2});
    } catch (const PreconditionError&) {
      rejected = true;
    }
    return DemoCase{"two-coset-support-rejected", rejected,
                    "measure spread over two levels is a precondition error"};
  });
  return jobs;
}

std::vector<DemoJob> central_jobs() {
  std::vector<DemoJob> jobs;
  for (const char* name : {"s3", "d4", "q8"}) {
    jobs.push_back([name] {
      const auto g = *builtin_group(name);
      const auto host = std::make_shared<FiniteHypergroup>(group_as_hypergroup(g));
      const auto classes = conjugacy_classes(g);
      bool ok = true;
      std::ostringstream detail;
      for (std::size_t c = 1; c < classes.size() && ok; ++c) {
        Measure<FiniteHypergroup, Rat> lambda(*host);
        const Rat w(1, static_cast<long long>(2 * classes[c].size()));
        lambda.add(0, Rat(1, 2));  // lazy mixture keeps the walk aperiodic
        for (int x : classes[c]) lambda.add(x, w);
        const auto op = operator_of(*host, lambda);
        if (!is_normal(op)) {
          ok = false;
          detail << "class " << c << " measure is not normal";
          break;
        }
        const auto dec = decompose(*host, lambda);
        if (!dec.kl_holds || dec.residual > 1e-8) {
          ok = false;
          detail << "class " << c << " residual " << dec.residual;
        }
      }
      if (ok) detail << "all class mixtures normal with projector residual <= 1e-8";
      return DemoCase{std::string(name) + "-class-measures", ok, detail.str()};
    });
  }
  return jobs;
}

std::vector<DemoJob> commutative_jobs(std::uint64_t seed) {
  auto hosts = std::make_shared<std::vector<CatalogEntry>>(commutative_catalog());
  std::mt19937_64 rng(seed);
  std::vector<DemoJob> jobs;
  for (int i = 0; i < 20; ++i) {
    const auto& entry = (*hosts)[static_cast<std::size_t>(i) % hosts->size()];
    auto lambda = std::make_shared<Measure<FiniteHypergroup, Rat>>(
        random_probability(entry.hypergroup, rng));
    const std::string host_name = entry.name;
    jobs.push_back([hosts, lambda, host_name, i] {
      const auto& h = lambda->host();
      const auto dec = decompose(h, *lambda);
      const bool normal = is_normal(operator_of(h, *lambda));
      const bool ok = dec.kl_holds && dec.residual <= 1e-8 && normal;
      std::ostringstream detail;
      detail << host_name << " residual " << dec.residual;
      return DemoCase{"random-" + std::to_string(i) + "-" + host_name, ok, detail.str()};
    });
  }
  return jobs;
}

std::vector<DemoJob> counterexample_jobs() {
  std::vector<DemoJob> jobs;
  for (const auto& [p, s] : {std::pair<long long, long long>{5, 3}, {7, 2}}) {
    jobs.push_back([p = p, s = s] {
      const auto report = run_counterexample(PadicParams::create(p, s), 20);
      int failed = 0;
      for (const auto& a : report.assertions) failed += a.passed ? 0 : 1;
      std::ostringstream detail;
      detail << report.assertions.size() - static_cast<std::size_t>(failed) << "/"
             << report.assertions.size() << " assertions";
      return DemoCase{"p" + std::to_string(p) + "-s" + std::to_string(s), report.all_passed,
                      detail.str()};
    });
  }
  return jobs;
}

int cmd_demo(const std::string& name, std::uint64_t seed, int jobs_n, std::ostream& out,
             std::ostream& err) {
  std::vector<DemoJob> jobs;
  if (name == "tortrat-shift") {
    jobs = tortrat_shift_jobs();
  } else if (name == "central") {
    jobs = central_jobs();
  } else if (name == "commutative") {
    jobs = commutative_jobs(seed);
  } else if (name == "counterexample") {
    jobs = counterexample_jobs();
  } else {
    err << "unknown demo \"" << name
        << "\"; choose from tortrat-shift, central, commutative, counterexample\n";
    return kInput;
  }

  std::vector<DemoCase> results;
  if (jobs_n > 1) {
    std::vector<std::future<DemoCase>> futures;
    futures.reserve(jobs.size());
    for (auto& job : jobs) futures.push_back(std::async(std::launch::async, std::move(job)));
    for (auto& f : futures) results.push_back(f.get());
  } else {
    for (auto& job : jobs) results.push_back(job());
  }

  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
  }
  out << (all ? "demo passed" : "demo FAILED") << " (" << results.size() << " cases)\n";
  return all ? kOk : kDomain;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite and discrete hypergroup convolution workbench"};
  app.require_subcommand(1);

  // validate
  std::string v_path;
  bool v_json = false, v_exhaustive = false;
  std::uint64_t seed = 12345;
  auto* validate = app.add_subcommand("validate", "check a hypergroup file against the axioms");
  validate->add_option("hypergroup", v_path, "hypergroup JSON file")->required();
  validate->add_flag("--json", v_json, "emit a JSON report");
  validate->add_flag("--exhaustive", v_exhaustive, "check every associativity triple (size <= 12)");
  validate->add_option("--seed", seed, "seed for the associativity spot-check");

  // decompose
  std::string d_hg, d_m, d_out;
  double tol = 1e-10;
  int n_max = 100000, window = 5;
  auto* decompose_cmd =
      app.add_subcommand("decompose", "run both decomposition criteria and report agreement");
  decompose_cmd->add_option("hypergroup", d_hg, "hypergroup JSON file")->required();
  decompose_cmd->add_option("measure", d_m, "measure JSON file")->required();
  decompose_cmd->add_option("--tol", tol, "iteration stopping tolerance");
  decompose_cmd->add_option("--n-max", n_max, "iteration cap");
  decompose_cmd->add_option("--window", window, "trailing window for the measure criterion");
  decompose_cmd->add_option("--out", d_out, "write the JSON report here instead of stdout");

  // iterate
  std::string i_hg, i_m, i_csv;
  int i_n_max = 100;
  double i_tol = 1e-10;
  int i_window = 5;
  std::size_t support_cap = 1000000;
  auto* iterate =
      app.add_subcommand("iterate", "trajectory of the alternating sequence as CSV");
  iterate->add_option("hypergroup", i_hg, "hypergroup JSON file (or a zcross descriptor)")
      ->required();
  iterate->add_option("measure", i_m, "measure JSON file")->required();
  iterate->add_option("--n-max", i_n_max, "sequence length");
  iterate->add_option("--tol", i_tol, "verdict tolerance");
  iterate->add_option("--window", i_window, "verdict trailing window");
  iterate->add_option("--support-cap", support_cap, "atom budget per convolution");
  iterate->add_option("--csv", i_csv, "write the CSV here instead of stdout");

  // construct
  std::string c_kind, c_group, c_subgroup, c_left, c_right, c_fiber, c_out;
  auto* construct = app.add_subcommand("construct", "emit a hypergroup JSON document");
  construct->add_option("--kind", c_kind, "group | conjugacy | double-coset | product | zcross")
      ->required();
  construct->add_option("--group", c_group, "group name or group JSON file");
  construct->add_option("--subgroup", c_subgroup, "comma-separated generator indices");
  construct->add_option("--left", c_left, "left factor (hypergroup file or group name)");
  construct->add_option("--right", c_right, "right factor (hypergroup file or group name)");
  construct->add_option("--fiber", c_fiber, "fiber (hypergroup file or group name)");
  construct->add_option("--out", c_out, "write here instead of stdout");

  // counterexample
  long long p = 5, s = 3;
  int ce_n_max = 20;
  std::string ce_json;
  auto* counterexample = app.add_subcommand(
      "counterexample", "exact non-idempotent limit on the p-adic coset hypergroup");
  counterexample->add_option("--p", p, "prime, not 2 or 3");
  counterexample->add_option("--s", s, "scaling exponent, >= 1");
  counterexample->add_option("--n-max", ce_n_max, "stationarity range to verify");
  counterexample->add_option("--json", ce_json, "write the JSON report here");

  // demo
  std::string demo_name;
  int jobs_n = 1;
  auto* demo = app.add_subcommand("demo", "run a named demo suite");
  demo->add_option("name", demo_name, "tortrat-shift | central | commutative | counterexample")
      ->required();
  demo->add_option("--seed", seed, "seed for randomized cases");
  demo->add_option("--jobs", jobs_n, "run cases concurrently");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("hyperkl");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*validate) return cmd_validate(v_path, v_json, v_exhaustive, seed, out, err);
    if (*decompose_cmd) return cmd_decompose(d_hg, d_m, tol, n_max, window, d_out, out, err);
    if (*iterate)
      return cmd_iterate(i_hg, i_m, i_n_max, i_tol, i_window, support_cap, i_csv, out, err);
    if (*construct)
      return cmd_construct(c_kind, c_group, c_subgroup, c_left, c_right, c_fiber, c_out, out);
    if (*counterexample) return cmd_counterexample(p, s, ce_n_max, ce_json, out, err);
    if (*demo) return cmd_demo(demo_name, seed, jobs_n, out, err);
  } catch (const IoError& e) {
    err << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const StructuralError& e) {
    err << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << " (last gap " << e.last_gap << " after "
        << e.iterations << " iterations)\n";
    return kDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kInput;
}

}  // namespace hyperkl
