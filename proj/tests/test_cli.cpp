#include <doctest.h>

#include "collarext/config.hpp"
#include "collarext/curvature_report.hpp"
#include "collarext/errors.hpp"
#include "collarext/models.hpp"
#include "collarext/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace collarext;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "collarext_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

Config with_output(const std::string& text, const fs::path& dir) {
  return Config::parse(text + "\n[scenario]\noutput = " + dir.string() + "\n", "test.cfg");
}

int run_binary(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(COLLAREXT_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kSphere = R"(kind = curvature
seed = 5
[model]
metric = sphere(1)
[check]
bounds = Sect > 0.5
resolution = 5
planes = 3
)";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config grammar") {
  const Config c = Config::parse(R"(# leading comment
kind = curvature
; another comment
[model]
  metric   =  sphere(2)
[check]
bounds = Sect > 0.1; Sect < 1
)");
  CHECK(c.get_string("scenario.kind") == "curvature");
  CHECK(c.get_string("model.metric") == "sphere(2)");
  CHECK(c.get_list("check.bounds") == std::vector<std::string>{"Sect > 0.1", "Sect < 1"});
  CHECK(c.keys().size() == 3);
  CHECK(c.get_double("model.missing", 2.5) == 2.5);

  CHECK_THROWS_AS(Config::parse("a = 1\na = 2"), UsageError);
  CHECK_THROWS_AS(Config::parse("just words"), UsageError);
  CHECK_THROWS_AS(Config::parse("[open\na = 1"), UsageError);
  CHECK_THROWS_AS(Config::parse("a ="), UsageError);
  CHECK_THROWS_AS(Config::parse("bad key = 1"), UsageError);
  try {
    Config::parse("x = 1\n\ny = 2\nx = 3", "f.cfg");
    FAIL("duplicate accepted");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("f.cfg:4") == 0);
  }
  const Config n = Config::parse("[s]\nd = 1.5x\ni = 2.5\nseed = -3");
  CHECK_THROWS_AS(n.get_double("s.d"), UsageError);
  CHECK_THROWS_AS(n.get_int("s.i", 0), UsageError);
  CHECK_THROWS_AS(n.get_seed("s.seed", 0), UsageError);
}

TEST_CASE("validation rejects unknown keys, kinds and bad values") {
  CHECK_NOTHROW(validate_scenario(Config::parse(kSphere)));
  CHECK_THROWS_AS(validate_scenario(Config::parse(std::string(kSphere) + "colour = red\n")), UsageError);
  CHECK_THROWS_AS(validate_scenario(Config::parse("kind = bake_cake")), UsageError);
  CHECK_THROWS_AS(validate_scenario(Config::parse("seed = 1")), UsageError);
  CHECK_THROWS_AS(validate_scenario(Config::parse("kind = curvature\n[model]\nmetric = torus(1)\n[check]\nbounds = Sect > 0")), UsageError);
  CHECK_THROWS_AS(validate_scenario(Config::parse("kind = curvature\n[model]\nmetric = sphere(1)\n[check]\nbounds = Sect >> 0")), UsageError);
  CHECK_THROWS_AS(validate_scenario(Config::parse("kind = curvature\n[model]\nmetric = sphere(1)\n[check]\nbounds = Sect > 0\nresolution = 2")), UsageError);
  CHECK_THROWS_AS(validate_scenario(Config::parse("kind = completeness\n[completeness]\nmode = shells\ns_star = 1")), UsageError);
  CHECK_THROWS_AS(validate_scenario(Config::parse("kind = obstruction\n[obstruction]\ngroup = free(0)")), UsageError);
  CHECK_THROWS_AS(validate_scenario(Config::parse("kind = extend_lohkamp\n[lohkamp]\ntarget = weyl")), UsageError);
  CHECK_THROWS_AS(validate_scenario(Config::parse("kind = extend_convexify\n[model]\ncollar = sphere(1)")), UsageError);
  for (const auto& k : scenario_kinds()) CHECK_FALSE(k.empty());
}

TEST_CASE("curvature scenario writes row-major CSVs with headers") {
  const fs::path dir = scratch("sphere");
  const RunReport r = run_scenario(with_output(kSphere, dir));
  CHECK(exit_code(r) == 0);
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts[0].str().find("[tensor_core.grid_curvature_report] Sect > 0.5") == 0);
  CHECK(r.verdicts[0].text.find("holds") != std::string::npos);

  const auto pts = lines_of(slurp(dir / "points.csv"));
  REQUIRE(pts.size() == 26);
  CHECK(pts[0] == "index,x0,x1,sect_min,sect_max,ric_min,ric_max,scal");
  const ChartMetric g = models::sphere(1.0);
  const std::vector<Vec> grid = grid_points(g.domain().shrunk(4.0 * g.fd_step()), {5, 5});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::istringstream row(pts[i + 1]);
    std::string cell;
    std::getline(row, cell, ',');
    CHECK(cell == std::to_string(i));
    std::getline(row, cell, ',');
    CHECK(cell == format_double(grid[i][0]));
    std::getline(row, cell, ',');
    CHECK(cell == format_double(grid[i][1]));
    std::getline(row, cell, ',');
    CHECK(std::stod(cell) == doctest::Approx(1.0).epsilon(1e-4));
  }
  // x1 varies fastest
  CHECK(grid[0][0] == grid[1][0]);
  CHECK(grid[0][1] != grid[1][1]);
  const auto planes = lines_of(slurp(dir / "planes.csv"));
  CHECK(planes[0] == "index,plane,sect");
  CHECK(planes.size() == 1 + 25 * 4);  // one coordinate plane plus three random ones
  CHECK(slurp(dir / "report.txt").find("result: ok") != std::string::npos);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("every scenario kind re-runs byte-identically") {
  const std::vector<std::pair<std::string, std::string>> configs = {
      {"curvature", kSphere},
      {"convexify", "kind = extend_convexify\nseed = 3\n[convexify]\nprobes = 4\ns_samples = 24\n"},
      {"negative", "kind = extend_negative_sect\nseed = 4\n[negative_sect]\nresolution = 9\nplanes = 2\n"},
      {"lohkamp", "kind = extend_lohkamp\nseed = 2\n[model]\nhalf_width = 0.03\n[lohkamp]\nresolution = 9\n"},
      {"radial", "kind = completeness\n[completeness]\nmode = radial\nprofile = neglog\nexpect = diverges\n"},
      {"shells", "kind = completeness\n[completeness]\nmode = shells\ncount = 12\n"},
      {"growth", "kind = obstruction\n[obstruction]\ngroup = product(Zm(1), heisenberg)\nR_max = 6\n"},
  };
  for (const auto& [name, text] : configs) {
    CAPTURE(name);
    const fs::path a = scratch(name + "_a"), b = scratch(name + "_b");
    const RunReport ra = run_scenario(with_output(text, a));
    const RunReport rb = run_scenario(with_output(text, b));
    CHECK(ra.csv_files.size() == rb.csv_files.size());
    CHECK_FALSE(ra.csv_files.empty());
    for (const auto& f : ra.csv_files) {
      const fs::path file = fs::path(f).filename();
      const std::string x = slurp(a / file), y = slurp(b / file);
      CHECK_FALSE(x.empty());
      CHECK(x == y);
      CHECK(lines_of(x).size() >= 2);
    }
    CHECK(exit_code(ra) == exit_code(rb));
    for (const auto& v : ra.verdicts) {
      CHECK(v.source.find('.') != std::string::npos);
      CHECK(v.str().rfind("[" + v.source + "] ", 0) == 0);
    }
  }
}

TEST_CASE("exit code 1 iff some verdict fails") {
  const fs::path dir = scratch("fails");
  const RunReport bad = run_scenario(with_output(
      "kind = curvature\n[model]\nmetric = sphere(1)\n[check]\nbounds = Sect > 0.5; Sect < 0.5\nresolution = 3\n", dir));
  CHECK(exit_code(bad) == 1);
  CHECK(bad.verdicts[0].ok);
  CHECK_FALSE(bad.verdicts[1].ok);

  const RunReport shells = run_scenario(with_output(
      "kind = completeness\n[completeness]\nmode = shells\nfactors = unit\nexpect = diverges\n", dir));
  CHECK(exit_code(shells) == 1);

  const RunReport loh = run_scenario(with_output(
      "kind = extend_lohkamp\n[lohkamp]\nresolution = 9\nd_max = 4\n", dir));
  CHECK(exit_code(loh) == 1);
  CHECK(loh.verdicts.back().text.find("failed") != std::string::npos);

  const RunReport neg = run_scenario(with_output(
      "kind = extend_negative_sect\n[model]\ncollar = flat_annulus(1)\n[negative_sect]\ns_star = 0.4\n", dir));
  CHECK(exit_code(neg) == 1);
  CHECK(neg.verdicts.back().text.find("precondition") != std::string::npos);

  const RunReport ok = run_scenario(with_output(
      "kind = extend_negative_sect\n[negative_sect]\nresolution = 9\n", dir));
  CHECK(exit_code(ok) == 0);
  bool sect = false, radial = false;
  for (const auto& v : ok.verdicts) {
    sect = sect || v.text.find("Sect_{g'} < 0: holds") == 0;
    radial = radial || v.text.find("radial length: diverges") == 0;
  }
  CHECK(sect);
  CHECK(radial);
}

TEST_CASE("model catalog") {
  const auto a = models::catalog(), b = models::catalog();
  std::set<std::string> ids;
  for (const auto& e : a) ids.insert(e.id);
  for (const char* id : {"sphere(r)", "hyperbolic_collar", "flat_annulus(r)", "free(N)", "heisenberg", "Zm(m)"})
    CHECK(ids.count(id) == 1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == b[i].id);
  CHECK_THROWS_AS(models::parse_model("sphere"), UsageError);
  CHECK_THROWS_AS(models::parse_model("sphere(1, 2)"), UsageError);
  CHECK(models::parse_model("sphere(2)").args == std::vector<double>{2.0});
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("binary");
  {
    std::ofstream(dir / "ok.cfg") << kSphere << "[scenario]\noutput = out\n";
    std::ofstream(dir / "fail.cfg") << "kind = curvature\n[model]\nmetric = sphere(1)\n[check]\nbounds = Sect < 0\nresolution = 3\n";
    std::ofstream(dir / "unknown.cfg") << kSphere << "[check]\nflavour = mint\n";
    std::ofstream(dir / "kind.cfg") << "kind = nothing\n";
  }
  CHECK(run_binary("run " + (dir / "ok.cfg").string()) == 0);
  CHECK(fs::exists(dir / "out" / "points.csv"));
  CHECK(run_binary("run " + (dir / "ok.cfg").string(), "COLLAREXT_THREADS=1") == 0);
  CHECK(run_binary("run " + (dir / "fail.cfg").string()) == 1);
  CHECK(run_binary("run " + (dir / "unknown.cfg").string()) == 2);
  CHECK(run_binary("run " + (dir / "kind.cfg").string()) == 2);
  CHECK(run_binary("check " + (dir / "ok.cfg").string()) == 0);
  CHECK(run_binary("check " + (dir / "unknown.cfg").string()) == 2);
  CHECK(run_binary("run " + (dir / "missing.cfg").string()) == 2);
  CHECK(run_binary("") == 2);
  CHECK(run_binary("frobnicate") == 2);
  CHECK(run_binary("run") == 2);
  CHECK(run_binary("list-models") == 0);
  CHECK(run_binary("--help") == 0);
}

TEST_CASE("shipped example configs validate") {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(COLLAREXT_CONFIGS)) {
    if (e.path().extension() != ".cfg") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(validate_scenario(Config::load(e.path().string())));
    ++n;
  }
  CHECK(n == 6);
}

}  // TEST_SUITE
