#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperkl/cli.hpp"
#include "hyperkl/constructors.hpp"
#include "hyperkl/group.hpp"
#include "hyperkl/io.hpp"

using namespace hyperkl;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "hyperkl_cli_XXXXXX").string();
    char* made = mkdtemp(tmpl.data());
    REQUIRE(made != nullptr);
    path = made;
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

// Two-element document whose second row has mass 3/2.
const char* kOverweightDoc = R"({
  "elements": ["e", "x"],
  "involution": [0, 1],
  "structure": [[["1", "0"], ["0", "1"]], [["0", "1"], ["1", "1/2"]]]
})";

std::string write_conj_s3(const TempDir& dir) {
  const auto q = conjugacy_hypergroup(symmetric_group(3)).hypergroup;
  const std::string path = dir.file("conj_s3.json");
  save_json_file(path, hypergroup_to_json(q));
  return path;
}

}  // namespace

TEST_CASE("validate accepts a catalog host and prints its haar weights") {
  TempDir dir;
  const std::string path = write_conj_s3(dir);

  const auto r = run({"validate", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("valid: 3 elements") != std::string::npos);
  CHECK(r.out.find("haar: 1/1 3/1 2/1") != std::string::npos);

  const auto rj = run({"validate", path, "--json"});
  CHECK(rj.code == 0);
  const Json j = Json::parse(rj.out);
  CHECK(j["valid"] == true);
  CHECK(j["size"] == 3);
  CHECK(j["violations"].empty());
  CHECK(j["issues"].empty());
  CHECK(j["haar"] == Json({"1/1", "3/1", "2/1"}));

  // Exhaustive associativity fits comfortably at this size.
  CHECK(run({"validate", path, "--exhaustive"}).code == 0);
}

TEST_CASE("validate reports violations and issues with exit 1") {
  TempDir dir;
  const std::string bad = dir.file("bad.json");
  std::ofstream(bad) << kOverweightDoc;

  const auto r = run({"validate", bad});
  CHECK(r.code == 1);
  CHECK(r.out.find("row-stochastic") != std::string::npos);

  const auto rj = run({"validate", bad, "--json"});
  CHECK(rj.code == 1);
  const Json j = Json::parse(rj.out);
  CHECK(j["valid"] == false);
  CHECK(!j["violations"].empty());
  CHECK(!j.contains("haar"));

  // A haar column that disagrees with the structure is an issue, not a pass.
  const auto q = conjugacy_hypergroup(symmetric_group(3)).hypergroup;
  Json doc = hypergroup_to_json(q);
  doc["haar"][1] = "7/1";
  const std::string tampered = dir.file("tampered.json");
  save_json_file(tampered, doc);
  const auto ri = run({"validate", tampered});
  CHECK(ri.code == 1);
  CHECK(ri.out.find("issue: haar") != std::string::npos);
}

TEST_CASE("validate rejects unreadable input and oversized exhaustive runs") {
  TempDir dir;
  CHECK(run({"validate", dir.file("absent.json")}).code == 2);

  const std::string garbled = dir.file("garbled.json");
  std::ofstream(garbled) << "{ not json";
  const auto r = run({"validate", garbled});
  CHECK(r.code == 2);
  CHECK(r.err.find("input error") != std::string::npos);

  const std::string s4 = dir.file("s4.json");
  save_json_file(s4, hypergroup_to_json(group_as_hypergroup(symmetric_group(4))));
  const auto re = run({"validate", s4, "--exhaustive"});
  CHECK(re.code == 2);
  CHECK(re.err.find("12 elements or fewer") != std::string::npos);
  CHECK(run({"validate", s4}).code == 0);  // the spot check still passes
}

TEST_CASE("decompose reports both routes and their agreement") {
  TempDir dir;
  const std::string hg = dir.file("z4.json");
  save_json_file(hg, hypergroup_to_json(group_as_hypergroup(cyclic_group(4))));
  const std::string m = dir.file("omega.json");
  std::ofstream(m) << R"({"atoms": [{"element": 0, "weight": "1/2"},
                                    {"element": 2, "weight": "1/2"}]})";

  const auto r = run({"decompose", hg, m});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["kl_holds"] == true);
  CHECK(j["partition"] == Json({{0, 2}, {1, 3}}));
  CHECK(j["criteria_agree"] == true);
  CHECK(j["rho_idempotent"] == true);
  CHECK(j["limit_kind"] == "Converged");

  const std::string report = dir.file("report.json");
  const auto rf = run({"decompose", hg, m, "--out", report});
  CHECK(rf.code == 0);
  CHECK(rf.out.empty());
  CHECK(load_json_file(report) == j);

  // Sub-probability input is a domain error, not a crash.
  const std::string half = dir.file("half.json");
  std::ofstream(half) << R"({"atoms": [{"element": 0, "weight": "1/2"}]})";
  CHECK(run({"decompose", hg, half}).code == 1);

  // An axiom-violating host is refused before any iteration.
  const std::string bad = dir.file("bad.json");
  std::ofstream(bad) << kOverweightDoc;
  const auto rb = run({"decompose", bad, m});
  CHECK(rb.code == 1);
  CHECK(rb.err.find("axioms") != std::string::npos);

  CHECK(run({"decompose", hg, dir.file("absent.json")}).code == 2);
}

TEST_CASE("iterate writes the trajectory as CSV with a verdict line") {
  TempDir dir;
  const std::string hg = dir.file("z6.json");
  save_json_file(hg, hypergroup_to_json(group_as_hypergroup(cyclic_group(6))));
  const std::string m = dir.file("walk.json");
  std::ofstream(m) << R"({"atoms": [{"element": 1, "weight": "1/2"},
                                    {"element": 5, "weight": "1/2"}]})";

  const auto r = run({"iterate", hg, m, "--n-max", "40"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0] == "n,support,max_atom,l1_gap,mass_window");
  // First entry is the symmetrized step: 1/2 at 0, 1/4 at 2 and 4.
  CHECK(lines[1] == "1,3,0.5,0,1");
  CHECK(lines.back().rfind("verdict,Converged", 0) == 0);

  const std::string csv = dir.file("walk.csv");
  const auto rc = run({"iterate", hg, m, "--n-max", "40", "--csv", csv});
  CHECK(rc.code == 0);
  CHECK(rc.out.empty());
  std::ifstream in(csv);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == r.out);
}

TEST_CASE("iterate understands zcross descriptors and budget caps") {
  TempDir dir;
  const std::string hg = dir.file("zxz2.json");
  save_json_file(hg, zcross_to_json(z_cross_f(group_as_hypergroup(cyclic_group(2)))));
  const std::string m = dir.file("shift.json");
  std::ofstream(m) << R"({"atoms": [{"element": [1, 0], "weight": "1/2"},
                                    {"element": [1, 1], "weight": "1/2"}]})";

  // The level-1 shift measure symmetrizes onto level 0 and is stationary there.
  const auto r = run({"iterate", hg, m, "--n-max", "40"});
  REQUIRE(r.code == 0);
  CHECK(lines_of(r.out).back().rfind("verdict,Converged", 0) == 0);

  // The symmetric walk on the plain integer line spreads out instead.
  const std::string line = dir.file("line.json");
  save_json_file(line, zcross_to_json(z_cross_f(group_as_hypergroup(cyclic_group(1)))));
  const std::string pm = dir.file("pm.json");
  std::ofstream(pm) << R"({"atoms": [{"element": [1, 0], "weight": "1/2"},
                                     {"element": [-1, 0], "weight": "1/2"}]})";
  const auto rw = run({"iterate", line, pm, "--n-max", "40"});
  REQUIRE(rw.code == 0);
  CHECK(lines_of(rw.out).back().rfind("verdict,EscapesToZero", 0) == 0);

  const auto rb = run({"iterate", line, pm, "--n-max", "40", "--support-cap", "3"});
  CHECK(rb.code == 3);
  CHECK(lines_of(rb.out).back() == "truncated,1");

  const std::string half = dir.file("half.json");
  std::ofstream(half) << R"({"atoms": [{"element": [1, 0], "weight": "1/2"}]})";
  CHECK(run({"iterate", hg, half}).code == 1);
}

TEST_CASE("construct group and conjugacy kinds validate cleanly") {
  TempDir dir;
  const auto rg = run({"construct", "--kind", "group", "--group", "s3"});
  REQUIRE(rg.code == 0);
  const auto gf = hypergroup_from_json(Json::parse(rg.out));
  CHECK(gf.hypergroup->size() == 6);
  CHECK(gf.hypergroup->valid());

  const std::string out = dir.file("conj_s4.json");
  CHECK(run({"construct", "--kind", "conjugacy", "--group", "s4", "--out", out}).code == 0);
  CHECK(run({"validate", out}).code == 0);
  CHECK(hypergroup_from_json(load_json_file(out)).hypergroup->size() == 5);
}

TEST_CASE("construct double-coset takes subgroup generators") {
  const auto r = run({"construct", "--kind", "double-coset", "--group", "s3",
                      "--subgroup", "2"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["elements"].size() == 2);
  // The flip class renews or returns with equal weight.
  CHECK(j["structure"][1][1] == Json({"1/2", "1/2"}));

  CHECK(run({"construct", "--kind", "double-coset", "--group", "s3"}).code == 2);
  const auto rb = run({"construct", "--kind", "double-coset", "--group", "s3",
                       "--subgroup", "2,x"});
  CHECK(rb.code == 2);
  CHECK(rb.err.find("comma-separated") != std::string::npos);
}

TEST_CASE("construct product and zcross kinds") {
  TempDir dir;
  const auto rp = run({"construct", "--kind", "product", "--left", "z2", "--right", "z3"});
  REQUIRE(rp.code == 0);
  const auto pf = hypergroup_from_json(Json::parse(rp.out));
  CHECK(pf.hypergroup->size() == 6);
  CHECK(pf.hypergroup->valid());
  CHECK(run({"construct", "--kind", "product", "--left", "z2"}).code == 2);

  const auto rz = run({"construct", "--kind", "zcross", "--fiber", "z2"});
  REQUIRE(rz.code == 0);
  const Json zj = Json::parse(rz.out);
  CHECK(is_zcross_json(zj));
  CHECK(zcross_from_json(zj).fiber().size() == 2);
  CHECK(run({"construct", "--kind", "zcross"}).code == 2);

  // A product factor may come from a file emitted by an earlier construct run.
  const std::string conj = dir.file("conj_s3.json");
  CHECK(run({"construct", "--kind", "conjugacy", "--group", "s3", "--out", conj}).code == 0);
  const auto rmix = run({"construct", "--kind", "product", "--left", "z2", "--right", conj});
  REQUIRE(rmix.code == 0);
  CHECK(hypergroup_from_json(Json::parse(rmix.out)).hypergroup->size() == 6);

  CHECK(run({"construct", "--kind", "mystery"}).code == 2);
}

TEST_CASE("group arguments resolve through files, the catalog dir, and builtins") {
  TempDir dir;
  const std::string gpath = dir.file("my_s3.json");
  save_json_file(gpath, group_to_json(symmetric_group(3)));
  const auto rf = run({"construct", "--kind", "group", "--group", gpath});
  CHECK(rf.code == 0);
  CHECK(hypergroup_from_json(Json::parse(rf.out)).hypergroup->size() == 6);

  save_json_file(dir.file("housegroup.json"), group_to_json(*builtin_group("klein")));
  REQUIRE(setenv("HYPERKL_CATALOG", dir.path.string().c_str(), 1) == 0);
  const auto rc = run({"construct", "--kind", "group", "--group", "housegroup"});
  REQUIRE(unsetenv("HYPERKL_CATALOG") == 0);
  REQUIRE(rc.code == 0);
  CHECK(hypergroup_from_json(Json::parse(rc.out)).hypergroup->size() == 4);

  const auto rmiss = run({"construct", "--kind", "group", "--group", "housegroup"});
  CHECK(rmiss.code == 2);
  CHECK(rmiss.err.find("unknown group") != std::string::npos);
}

TEST_CASE("counterexample runs exactly and serializes on request") {
  TempDir dir;
  const auto r = run({"counterexample"});
  CHECK(r.code == 0);
  CHECK(r.out.find("p = 5, s = 3") != std::string::npos);
  CHECK(r.out.find("rho * rho:") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);

  const std::string report = dir.file("report.json");
  const auto r7 = run({"counterexample", "--p", "7", "--s", "2", "--n-max", "6",
                       "--json", report});
  CHECK(r7.code == 0);
  const Json j = load_json_file(report);
  CHECK(j["p"] == 7);
  CHECK(j["s"] == 2);
  CHECK(j["all_passed"] == true);

  for (const char* p : {"4", "2", "3"}) {
    CAPTURE(p);
    const auto rb = run({"counterexample", "--p", p});
    CHECK(rb.code == 2);
    CHECK(!rb.err.empty());
  }
}

TEST_CASE("demo suites pass and fan out over jobs") {
  const auto shift = run({"demo", "tortrat-shift"});
  CHECK(shift.code == 0);
  CHECK(shift.out.find("demo passed (4 cases)") != std::string::npos);
  CHECK(shift.out.find("FAIL") == std::string::npos);

  const auto parallel = run({"demo", "tortrat-shift", "--jobs", "4"});
  CHECK(parallel.code == 0);
  CHECK(parallel.out.find("demo passed (4 cases)") != std::string::npos);

  const auto central = run({"demo", "central"});
  CHECK(central.code == 0);
  CHECK(central.out.find("demo passed (3 cases)") != std::string::npos);

  const auto comm = run({"demo", "commutative", "--seed", "7"});
  CHECK(comm.code == 0);
  CHECK(comm.out.find("demo passed (20 cases)") != std::string::npos);

  const auto ce = run({"demo", "counterexample", "--jobs", "2"});
  CHECK(ce.code == 0);
  CHECK(ce.out.find("demo passed (2 cases)") != std::string::npos);

  const auto unknown = run({"demo", "mystery"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("tortrat-shift") != std::string::npos);
}

TEST_CASE("usage errors exit with the input code") {
  CHECK(run({}).code == 2);
  CHECK(run({"validate"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"validate", "x.json", "--no-such-flag"}).code == 2);

  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("validate") != std::string::npos);
  CHECK(help.out.find("counterexample") != std::string::npos);
}
