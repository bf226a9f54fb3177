#include <doctest.h>

#include <cmath>

#include "nrange/spec_file.hpp"

using namespace nrange;

namespace {
const char* kMinimal = R"(# smallest useful file
[space Y]
expr = lp(2, 3)

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
seed = 4
)";

int error_line(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const SpecError& e) {
    return e.line();
  }
  return -1;
}
}  // namespace

TEST_CASE("minimal file parses") {
  const SpecFile s = parse_spec(kMinimal);
  REQUIRE(s.find_space("Y"));
  CHECK(s.find_space("Y")->dim() == 3);
  CHECK(s.find_matrix("J")->isIdentity());
  CHECK(s.find_pair("P")->pair.k() == 3);
  CHECK(s.find_task("r")->get("seed") == "4");
}

TEST_CASE("undefined matrix is reported by name and line") {
  const std::string text = "[space Y]\nexpr = l2(2)\n[pair P]\nspace = Y\nembedding = Q\n";
  try {
    parse_spec(text);
    FAIL("expected an error");
  } catch (const SpecError& e) {
    CHECK(e.line() == 5);
    CHECK(std::string(e.what()).find("'Q'") != std::string::npos);
  }
}

TEST_CASE("strictness: unknown keys, duplicates, missing seed, bad sizes") {
  CHECK(error_line("[space Y]\nexpr = l2(2)\ncolour = red\n") == 3);
  CHECK(error_line("[space Y]\nexpr = l2(2)\nexpr = l1(2)\n") == 3);
  CHECK(error_line("[space Y]\nexpr = l2(2)\n[space Y]\nexpr = l1(2)\n") == 3);
  CHECK(error_line("[space Y]\nexpr = l2(2)\n[task t]\nkind = tau\nspace = Y\npoint = 1 0\ndirection = 0 1\n") == 3);
  CHECK(error_line("[space Y]\nexpr = l2(2)\n[task t]\nkind = eval\nspace = Y\nvector = 1 0 0\nseed = 1\n") == 6);
  CHECK(error_line("[matrix A]\ndata = 1 2; 3\n") == 2);
  CHECK(error_line("[task t]\nkind = dance\nseed = 1\n") == 2);
  // absnorm is deterministic and needs no seed.
  CHECK(error_line("[task t]\nkind = absnorm\ngauge = l1\n") == -1);
}

TEST_CASE("norm expressions") {
  const Norm n = parse_norm_expr("abssum(linf, pullback(matrix(2,2, 1,1, 0,1), l2(2)), max(l1(2), linf(2)))");
  CHECK(n.dim() == 4);
  Vec v(4);
  v << 1, 1, 3, -1;
  CHECK(eval_norm(n, v) == doctest::Approx(4));
  CHECK(eval_norm(parse_norm_expr("lp(3, 2)"), Vec::Ones(2)) == doctest::Approx(std::cbrt(2.0)));
  CHECK(parse_norm_expr("abssum(pwl(0:1,0.5:0.75,1:1), l1(1), l1(1))").dim() == 2);
  try {
    parse_norm_expr("max(l1(2), lq(2))", nullptr, 7, 9);
    FAIL("expected an error");
  } catch (const SpecError& e) {
    CHECK(e.line() == 7);
    CHECK(e.column() == 9 + 11);
  }
}

TEST_CASE("matrix forms") {
  const SpecFile s = parse_spec(
      "[matrix A]\ndiag = 1 2\n[matrix Z]\nzeros = 1 2\n[matrix S]\nvstack = A, Z\n"
      "[matrix D]\nrows = 2\ncols = 2\ndata = 1 -2; 0.5 3e-1\n");
  CHECK(s.find_matrix("S")->rows() == 3);
  CHECK((*s.find_matrix("S"))(1, 1) == 2);
  CHECK((*s.find_matrix("D"))(1, 1) == doctest::Approx(0.3));
}

TEST_CASE("family sections define a pair and an operator") {
  const SpecFile s = parse_spec("[family F]\nid = example34\nm = 4\n[task r]\nkind = range\noperator = F\nseed = 1\n");
  REQUIRE(s.find_pair("F"));
  CHECK(s.find_operator("F")->op.T.rows() == s.find_pair("F")->pair.n());
}

TEST_CASE("emit and re-parse gives the same structure") {
  const std::string text = std::string(kMinimal) +
                           "[space Z]\nexpr = abssum(l2, Y, semi(pullback(matrix(1,2,1,2), l1(1))))\n"
                           "[family F]\nid = remark_case1\nm = 5\n"
                           "[task g]\nkind = gap-sweep\nfamily = example34\nm = 4 16\nalpha = 1 0.1\nseed = 3\n";
  const SpecFile a = parse_spec(text);
  const std::string once = emit_spec(a);
  const SpecFile b = parse_spec(once);
  CHECK(emit_spec(b) == once);
  REQUIRE(b.spaces.size() == a.spaces.size());
  for (std::size_t i = 0; i < a.spaces.size(); ++i) CHECK(a.spaces[i].second.to_string() == b.spaces[i].second.to_string());
  CHECK(b.tasks.size() == a.tasks.size());
  CHECK(b.families.size() == 1);
}

TEST_CASE("shipped example file parses") {
  const SpecFile s = load_spec_file(NRANGE_DATA_DIR "/example34.nrs");
  CHECK(s.find_family("ex34")->m == 16);
  CHECK(s.find_task("range"));
}
