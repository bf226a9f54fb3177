#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nrange/tasks.hpp"

using namespace nrange;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nrange_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> rows(const fs::path& p) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    out.push_back(f);
  }
  return out;
}

const char* kSpec = R"(
[space Y]
expr = lp(3, 3)
[matrix J]
identity = 3
[pair P]
space = Y
embedding = J
[operator T]
pair = P
matrix = J

[task r]
kind = range
operator = T
seed = 2
points = 5
svg = r.svg

[task g]
kind = gap-sweep
family = example34
m = 4 16 64
alpha = 1 0.3 0.1
supw = false
seed = 1

[task a]
kind = absnorm
gauge = l1
delta = 0.5 0.1
eps = 0.1

[task e]
kind = eval
space = Y
vector = 1 2 2
functional = 1 0 0
seed = 1

[task t]
kind = tau
space = Y
point = 1 0 0
direction = 0 1 0
seed = 1

[task c]
kind = convexity
space = Y
eps = 0.5 1
seed = 1

[task b]
kind = bpb-repair
space = Y
x0 = 1 0.1 0
y0 = 1 0 0
eps = 0.3
seed = 1
)";
}  // namespace

TEST_CASE("range with T = J has no gap") {
  const SpecFile s = parse_spec(kSpec);
  const fs::path dir = scratch("range");
  const TaskOutcome o = run_task(s, "r", {std::nullopt, std::nullopt, std::nullopt, dir.string()});
  REQUIRE(o.exit_code == 0);
  const auto t = rows(dir / "r.csv");
  REQUIRE(t.size() == 3);
  CHECK(t[0] == std::vector<std::string>{"direction", "supReW", "maxReV_lower", "maxReV_upper", "gap"});
  CHECK(std::abs(std::stod(t[1][4])) <= 1e-6);
  CHECK(std::stod(t[1][1]) == doctest::Approx(1.0));
  CHECK(fs::exists(dir / "r_points.csv"));
  CHECK(slurp(dir / "r.svg").find("<polyline") != std::string::npos);
}

TEST_CASE("gap-sweep matches the closed form") {
  const SpecFile s = parse_spec(kSpec);
  const fs::path dir = scratch("gap");
  REQUIRE(run_task(s, "g", {std::nullopt, std::nullopt, std::nullopt, dir.string()}).exit_code == 0);
  const auto t = rows(dir / "g.csv");
  REQUIRE(t.size() == 10);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const int m = std::stoi(t[i][1]);
    const double a = std::stod(t[i][2]);
    const double law = std::max(0.0, ((1 + a) * m / (m + 1.0) - 1) / a);
    CHECK(std::stod(t[i][3]) == doctest::Approx(law).epsilon(1e-6));
  }
}

TEST_CASE("golden CSVs for deterministic tasks") {
  const SpecFile s = parse_spec(kSpec);
  const fs::path dir = scratch("golden");
  for (const char* name : {"g", "a", "e", "t", "c"}) {
    REQUIRE(run_task(s, name, {std::nullopt, std::nullopt, std::nullopt, dir.string()}).exit_code == 0);
    const std::string file = std::string(name) + ".csv";
    CHECK_MESSAGE(slurp(dir / file) == slurp(fs::path(NRANGE_GOLDEN_DIR) / file), file);
  }
}

TEST_CASE("bpb repair task reports success") {
  const SpecFile s = parse_spec(kSpec);
  const fs::path dir = scratch("bpb");
  const TaskOutcome o = run_task(s, "b", {std::nullopt, std::nullopt, std::nullopt, dir.string()});
  CHECK(o.exit_code == 0);
  const auto t = rows(dir / "b.csv");
  REQUIRE(t.size() == 2);
  CHECK(t[1].back() == "true");
}

TEST_CASE("exit codes") {
  const SpecFile s = parse_spec(kSpec);
  CHECK(run_task(s, "missing").exit_code == kUsage);
  // Output path under a regular file cannot be created.
  const fs::path dir = scratch("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  CHECK(run_task(s, "a", {std::nullopt, std::nullopt, std::nullopt, (dir / "file").string()}).exit_code ==
        kPostcondition);
  // Hypothesis not met: far-off functional.
  const SpecFile bad = parse_spec(
      "[space Y]\nexpr = l2(2)\n[task b]\nkind = bpb-repair\nspace = Y\nx0 = 1 0\ny0 = 0 1\neps = 0.1\nseed = 1\n");
  CHECK(run_task(bad, "b", {std::nullopt, std::nullopt, std::nullopt, scratch("bad").string()}).exit_code ==
        kPostcondition);
}

TEST_CASE("concurrent runs write the same files as sequential ones") {
  SpecFile s = parse_spec(kSpec);
  const fs::path a = scratch("seq"), b = scratch("par");
  std::vector<TaskOutcome> oa, ob;
  CHECK(run_all_tasks(s, {std::nullopt, std::nullopt, std::nullopt, a.string()}, 1, &oa) == 0);
  CHECK(run_all_tasks(s, {std::nullopt, std::nullopt, std::nullopt, b.string()}, 4, &ob) == 0);
  for (const char* f : {"r.csv", "g.csv", "a.csv", "e.csv", "t.csv", "c.csv", "b.csv"}) CHECK(slurp(a / f) == slurp(b / f));
}
