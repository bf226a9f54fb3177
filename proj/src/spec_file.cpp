#include "nrange/spec_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nrange/report.hpp"

namespace nrange {

SpecError::SpecError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

bool TaskRecord::has(const std::string& key) const {
  return std::any_of(params.begin(), params.end(), [&](const auto& p) { return p.first == key; });
}

const std::string& TaskRecord::get(const std::string& key) const {
  for (const auto& p : params)
    if (p.first == key) return p.second;
  throw std::out_of_range("task '" + name + "' has no key '" + key + "'");
}

std::string TaskRecord::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

template <class V>
static const V* find_named(const std::vector<std::pair<std::string, V>>& v, const std::string& name) {
  for (const auto& [n, x] : v)
    if (n == name) return &x;
  return nullptr;
}

template <class V>
static const V* find_by_name(const std::vector<V>& v, const std::string& name) {
  for (const auto& x : v)
    if (x.name == name) return &x;
  return nullptr;
}

const Norm* SpecFile::find_space(const std::string& n) const { return find_named(spaces, n); }
const Mat* SpecFile::find_matrix(const std::string& n) const { return find_named(matrices, n); }
const PairDef* SpecFile::find_pair(const std::string& n) const { return find_by_name(pairs, n); }
const OperatorDef* SpecFile::find_operator(const std::string& n) const { return find_by_name(operators, n); }
const FamilyDef* SpecFile::find_family(const std::string& n) const { return find_by_name(families, n); }
const TaskRecord* SpecFile::find_task(const std::string& n) const { return find_by_name(tasks, n); }

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

bool valid_name(const std::string& s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char);
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::optional<double> to_double(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const char* b = t.data();
  const char* e = t.data() + t.size();
  if (*b == '+') ++b;
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) return std::nullopt;
  return v;
}

std::optional<long> to_int(const std::string& s) {
  const std::string t = trim(s);
  long v = 0;
  auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

// ---- norm expressions -------------------------------------------------------

class ExprParser {
 public:
  ExprParser(const std::string& text, const SpecFile* ctx, int line, int col)
      : s_(text), ctx_(ctx), line_(line), col_(col) {}

  Norm parse_all() {
    Norm n = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing text");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SpecError(line_, col_ + static_cast<int>(pos_), msg); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip_ws();
    const std::size_t a = pos_;
    if (pos_ >= s_.size() || !is_ident_start(s_[pos_])) fail("expected a name");
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(a, pos_ - a);
  }
  // Raw text up to the next ',' or ')' at nesting depth 0.
  std::string raw_arg() {
    skip_ws();
    const std::size_t a = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ',' && depth == 0) break;
      ++pos_;
    }
    return trim(s_.substr(a, pos_ - a));
  }
  double number() {
    const std::size_t at = pos_;
    const std::string t = raw_arg();
    auto v = to_double(t);
    if (!v) {
      pos_ = at;
      skip_ws();
      fail("expected a number, got '" + t + "'");
    }
    return *v;
  }
  int integer() {
    const std::size_t at = pos_;
    const std::string t = raw_arg();
    auto v = to_int(t);
    if (!v) {
      pos_ = at;
      skip_ws();
      fail("expected an integer, got '" + t + "'");
    }
    return static_cast<int>(*v);
  }

  Mat matrix_arg() {
    skip_ws();
    const std::size_t at = pos_;
    const std::string name = ident();
    if (name != "matrix") {
      if (!accept('(')) {
        const Mat* m = ctx_ ? ctx_->find_matrix(name) : nullptr;
        if (!m) {
          pos_ = at;
          fail("undefined matrix '" + name + "'");
        }
        return *m;
      }
      pos_ = at;
      fail("expected matrix(...) or a matrix name");
    }
    expect('(');
    const int r = integer();
    expect(',');
    const int c = integer();
    if (r < 1 || c < 1) fail("matrix dimensions must be positive");
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        expect(',');
        m(i, j) = number();
      }
    expect(')');
    return m;
  }

  Norm expr() {
    skip_ws();
    const std::size_t at = pos_;
    const std::string name = ident();
    if (!accept('(')) {
      const Norm* n = ctx_ ? ctx_->find_space(name) : nullptr;
      if (!n) {
        pos_ = at;
        fail("undefined space '" + name + "'");
      }
      return *n;
    }
    try {
      if (name == "lp") {
        const double p = number();
        expect(',');
        const int d = integer();
        expect(')');
        return Norm::lp(p, d);
      }
      if (name == "l1" || name == "l2" || name == "linf") {
        const int d = integer();
        expect(')');
        return Norm::lp(name == "l1" ? 1.0 : name == "l2" ? 2.0 : INFINITY, d);
      }
      if (name == "abssum") {
        const std::size_t gat = pos_;
        const std::string gtext = raw_arg();
        AbsoluteGauge g = AbsoluteGauge::lp(2);
        try {
          g = AbsoluteGauge::parse(gtext);
        } catch (const std::invalid_argument& e) {
          pos_ = gat;
          skip_ws();
          fail(e.what());
        }
        expect(',');
        Norm l = expr();
        expect(',');
        Norm r = expr();
        expect(')');
        return Norm::absolute_sum(g, l, r);
      }
      if (name == "pullback") {
        Mat m = matrix_arg();
        expect(',');
        Norm in = expr();
        expect(')');
        return Norm::pullback(m, in);
      }
      if (name == "max" || name == "sum") {
        std::vector<Norm> terms{expr()};
        while (accept(',')) terms.push_back(expr());
        expect(')');
        return name == "max" ? Norm::max_of(terms) : Norm::sum_of(terms);
      }
      if (name == "full" || name == "semi") {
        Norm in = expr();
        expect(')');
        return in.declare_full(name == "full");
      }
    } catch (const std::invalid_argument& e) {
      pos_ = at;
      fail(e.what());
    }
    pos_ = at;
    fail("unknown norm constructor '" + name + "'");
  }

  const std::string& s_;
  const SpecFile* ctx_;
  int line_, col_;
  std::size_t pos_ = 0;
};

// ---- sections ---------------------------------------------------------------

struct Entry {
  std::string key, value;
  int line, key_col, value_col;
};

struct Section {
  std::string type, name;
  int line;
  std::vector<Entry> entries;

  const Entry* find(const std::string& k) const {
    for (const auto& e : entries)
      if (e.key == k) return &e;
    return nullptr;
  }
};

struct TaskSchema {
  std::set<std::string> required;
  std::set<std::string> optional;
  bool seeded;
};

const std::map<std::string, TaskSchema>& schemas() {
  static const std::map<std::string, TaskSchema> s = {
      {"eval", {{"space", "vector"}, {"functional"}, true}},
      {"tau", {{"space", "point", "direction"}, {}, true}},
      {"range", {{"operator"}, {"alphas", "points"}, true}},
      {"gap-sweep", {{"family", "m", "alpha"}, {"mode", "supw"}, true}},
      {"bpb-repair", {{"x0", "y0", "eps"}, {"pair", "space", "method"}, true}},
      {"bpb-modulus", {{"pair", "eps"}, {"repair_budget"}, true}},
      {"ssd", {{"space", "point", "eps"}, {}, true}},
      {"convexity", {{"space", "eps"}, {}, true}},
      {"smoothness", {{"space", "t"}, {}, true}},
      {"absnorm", {{"gauge"}, {"delta", "eps"}, false}},
      {"verify", {{}, {}, true}},
  };
  return s;
}

const std::set<std::string> kCommonTaskKeys = {"seed", "budget", "starts", "out", "svg"};

[[noreturn]] void fail_at(const Entry& e, const std::string& msg) { throw SpecError(e.line, e.value_col, msg); }

void require_keys(const Section& s, const std::set<std::string>& allowed, const std::set<std::string>& required) {
  for (const auto& e : s.entries)
    if (!allowed.count(e.key))
      throw SpecError(e.line, e.key_col, "unknown key '" + e.key + "' in [" + s.type + " " + s.name + "]");
  for (const auto& r : required)
    if (!s.find(r)) throw SpecError(s.line, 1, "[" + s.type + " " + s.name + "] is missing required key '" + r + "'");
}

std::vector<double> numbers_at(const Entry& e) {
  try {
    return parse_number_list(e.value);
  } catch (const std::invalid_argument& ex) {
    fail_at(e, ex.what());
  }
}

Mat parse_matrix_section(const Section& s, const SpecFile& spec) {
  const std::set<std::string> forms = {"data", "identity", "diag", "zeros", "vstack"};
  require_keys(s, {"rows", "cols", "data", "identity", "diag", "zeros", "vstack"}, {});
  const Entry* form = nullptr;
  for (const auto& e : s.entries)
    if (forms.count(e.key)) {
      if (form) throw SpecError(e.line, e.key_col, "matrix has more than one of data/identity/diag/zeros/vstack");
      form = &e;
    }
  if (!form) throw SpecError(s.line, 1, "matrix '" + s.name + "' needs data, identity, diag, zeros or vstack");
  Mat m;
  if (form->key == "data") {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(form->value);
    std::string row;
    while (std::getline(ss, row, ';')) {
      if (trim(row).empty()) continue;
      std::vector<double> r;
      std::stringstream rs(row);
      std::string tok;
      while (rs >> tok) {
        auto v = to_double(tok);
        if (!v) fail_at(*form, "bad number '" + tok + "' in matrix data");
        r.push_back(*v);
      }
      rows.push_back(r);
    }
    if (rows.empty()) fail_at(*form, "empty matrix data");
    for (const auto& r : rows)
      if (r.size() != rows[0].size()) fail_at(*form, "matrix rows have different lengths");
    m.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[0].size(); ++j) m(i, j) = rows[i][j];
  } else if (form->key == "identity") {
    auto n = to_int(form->value);
    if (!n || *n < 1) fail_at(*form, "identity needs a positive size");
    m = Mat::Identity(*n, *n);
  } else if (form->key == "diag") {
    const auto d = numbers_at(*form);
    if (d.empty()) fail_at(*form, "empty diagonal");
    m = Mat::Zero(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  } else if (form->key == "zeros") {
    const auto d = numbers_at(*form);
    if (d.size() != 2 || d[0] < 1 || d[1] < 1 || d[0] != std::floor(d[0]) || d[1] != std::floor(d[1]))
      fail_at(*form, "zeros needs two positive integers");
    m = Mat::Zero(static_cast<Eigen::Index>(d[0]), static_cast<Eigen::Index>(d[1]));
  } else {
    std::vector<Mat> parts;
    std::stringstream ss(form->value);
    std::string name;
    while (std::getline(ss, name, ',')) {
      name = trim(name);
      const Mat* p = spec.find_matrix(name);
      if (!p) fail_at(*form, "undefined matrix '" + name + "'");
      parts.push_back(*p);
    }
    if (parts.empty()) fail_at(*form, "vstack needs matrix names");
    Eigen::Index rows = 0;
    for (const auto& p : parts) {
      if (p.cols() != parts[0].cols()) fail_at(*form, "vstack operands have different column counts");
      rows += p.rows();
    }
    m.resize(rows, parts[0].cols());
    Eigen::Index off = 0;
    for (const auto& p : parts) {
      m.middleRows(off, p.rows()) = p;
      off += p.rows();
    }
  }
  if (const Entry* r = s.find("rows"))
    if (to_int(r->value) != std::optional<long>(m.rows())) fail_at(*r, "rows does not match the matrix data");
  if (const Entry* c = s.find("cols"))
    if (to_int(c->value) != std::optional<long>(m.cols())) fail_at(*c, "cols does not match the matrix data");
  return m;
}

void check_vector(const Entry& e, int dim) {
  const auto v = numbers_at(e);
  if (static_cast<int>(v.size()) != dim)
    fail_at(e, "'" + e.key + "' has " + std::to_string(v.size()) + " entries, expected " + std::to_string(dim));
}

void check_positive_list(const Entry& e) {
  const auto v = numbers_at(e);
  if (v.empty()) fail_at(e, "'" + e.key + "' is empty");
  for (double x : v)
    if (!(x > 0.0)) fail_at(e, "'" + e.key + "' entries must be positive");
}

TaskRecord parse_task_section(const Section& s, const SpecFile& spec) {
  const Entry* kind = s.find("kind");
  if (!kind) throw SpecError(s.line, 1, "[task " + s.name + "] is missing required key 'kind'");
  auto it = schemas().find(kind->value);
  if (it == schemas().end()) fail_at(*kind, "unknown task kind '" + kind->value + "'");
  const TaskSchema& sc = it->second;
  std::set<std::string> allowed = kCommonTaskKeys;
  allowed.insert("kind");
  allowed.insert(sc.required.begin(), sc.required.end());
  allowed.insert(sc.optional.begin(), sc.optional.end());
  std::set<std::string> required = sc.required;
  if (sc.seeded) required.insert("seed");
  require_keys(s, allowed, required);

  TaskRecord t;
  t.name = s.name;
  t.kind = kind->value;
  t.line = s.line;
  for (const auto& e : s.entries)
    if (e.key != "kind") t.params.emplace_back(e.key, e.value);

  for (const auto& e : s.entries) {
    if (e.key == "seed") {
      const std::string v = trim(e.value);
      std::uint64_t x = 0;
      auto r = std::from_chars(v.data(), v.data() + v.size(), x);
      if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size())
        fail_at(e, "seed must be a nonnegative integer");
    } else if (e.key == "budget" || e.key == "starts" || e.key == "points" || e.key == "repair_budget") {
      auto v = to_int(e.value);
      if (!v || *v < 1) fail_at(e, "'" + e.key + "' must be a positive integer");
    } else if (e.key == "out" || e.key == "svg") {
      if (trim(e.value).empty()) fail_at(e, "empty output path");
    }
  }

  const Norm* space = nullptr;
  if (const Entry* e = s.find("space")) {
    space = spec.find_space(e->value);
    if (!space) fail_at(*e, "undefined space '" + e->value + "'");
  }
  const PairDef* pair = nullptr;
  if (const Entry* e = s.find("pair")) {
    pair = spec.find_pair(e->value);
    if (!pair) fail_at(*e, "undefined pair '" + e->value + "'");
  }
  if (const Entry* e = s.find("operator"))
    if (!spec.find_operator(e->value)) fail_at(*e, "undefined operator '" + e->value + "'");

  const std::string& k = t.kind;
  if (k == "eval") {
    check_vector(*s.find("vector"), space->dim());
    if (const Entry* f = s.find("functional")) check_vector(*f, space->dim());
  } else if (k == "tau") {
    check_vector(*s.find("point"), space->dim());
    check_vector(*s.find("direction"), space->dim());
  } else if (k == "range") {
    if (const Entry* a = s.find("alphas")) check_positive_list(*a);
  } else if (k == "gap-sweep") {
    const Entry* f = s.find("family");
    try {
      (void)parse_family(trim(f->value));
    } catch (const std::invalid_argument& ex) {
      fail_at(*f, ex.what());
    }
    const Entry* m = s.find("m");
    for (double x : numbers_at(*m))
      if (x < 2 || x != std::floor(x)) fail_at(*m, "m entries must be integers >= 2");
    if (numbers_at(*m).empty()) fail_at(*m, "'m' is empty");
    check_positive_list(*s.find("alpha"));
    if (const Entry* mode = s.find("mode"))
      if (mode->value != "structured-exact" && mode->value != "optimizer")
        fail_at(*mode, "mode must be structured-exact or optimizer");
    if (const Entry* w = s.find("supw"))
      if (w->value != "true" && w->value != "false") fail_at(*w, "supw must be true or false");
  } else if (k == "bpb-repair") {
    if ((space != nullptr) == (pair != nullptr))
      throw SpecError(s.line, 1, "[task " + s.name + "] needs exactly one of 'pair' or 'space'");
    const int n = space ? space->dim() : pair->pair.n();
    const int kk = space ? space->dim() : pair->pair.k();
    check_vector(*s.find("x0"), kk);
    check_vector(*s.find("y0"), n);
    check_positive_list(*s.find("eps"));
    if (const Entry* m = s.find("method"))
      if (m->value != "search" && m->value != "classical" && m->value != "absolute")
        fail_at(*m, "method must be search, classical or absolute");
  } else if (k == "bpb-modulus" || k == "convexity") {
    check_positive_list(*s.find("eps"));
  } else if (k == "ssd") {
    check_vector(*s.find("point"), space->dim());
    check_positive_list(*s.find("eps"));
  } else if (k == "smoothness") {
    check_positive_list(*s.find("t"));
  } else if (k == "absnorm") {
    const Entry* g = s.find("gauge");
    try {
      (void)AbsoluteGauge::parse(trim(g->value));
    } catch (const std::invalid_argument& ex) {
      fail_at(*g, ex.what());
    }
    if (const Entry* d = s.find("delta")) {
      check_positive_list(*d);
      for (double x : numbers_at(*d))
        if (x >= 2.0) fail_at(*d, "delta entries must lie in (0, 2)");
    }
    if (const Entry* e = s.find("eps")) check_positive_list(*e);
  }
  return t;
}

}  // namespace

const std::vector<std::string>& task_kinds() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> v;
    for (const auto& [name, s] : schemas()) v.push_back(name);
    return v;
  }();
  return k;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    auto v = to_double(tok);
    if (!v) throw std::invalid_argument("bad number '" + tok + "'");
    out.push_back(*v);
    tok.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';')
      flush();
    else
      tok += c;
  }
  flush();
  return out;
}

Norm parse_norm_expr(const std::string& text, const SpecFile* context, int line, int column) {
  return ExprParser(text, context, line, column).parse_all();
}

SpecFile parse_spec(const std::string& text) {
  // Split into sections first.
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string t = trim(raw);
    if (t.empty() || t[0] == '#') continue;
    const int indent = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
    if (t[0] == '[') {
      if (t.back() != ']') throw SpecError(lineno, indent, "section header must end with ']'");
      std::istringstream hs(t.substr(1, t.size() - 2));
      std::string type, name, extra;
      hs >> type >> name;
      if (hs >> extra) throw SpecError(lineno, indent, "section header takes a type and a name");
      static const std::set<std::string> types = {"space", "matrix", "pair", "operator", "family", "task"};
      if (!types.count(type)) throw SpecError(lineno, indent + 1, "unknown section type '" + type + "'");
      if (!valid_name(name)) throw SpecError(lineno, indent + 1, "invalid section name '" + name + "'");
      sections.push_back({type, name, lineno, {}});
      continue;
    }
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw SpecError(lineno, indent, "expected 'key = value'");
    if (sections.empty()) throw SpecError(lineno, indent, "key outside of any section");
    const std::string key = trim(raw.substr(0, eq));
    if (!valid_name(key)) throw SpecError(lineno, indent, "invalid key '" + key + "'");
    std::size_t vstart = eq + 1;
    while (vstart < raw.size() && std::isspace(static_cast<unsigned char>(raw[vstart]))) ++vstart;
    const std::string value = trim(raw.substr(eq + 1));
    if (sections.back().find(key)) throw SpecError(lineno, indent, "duplicate key '" + key + "'");
    sections.back().entries.push_back({key, value, lineno, indent, static_cast<int>(vstart) + 1});
  }

  SpecFile spec;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& s : sections) {
    const std::string ns = s.type == "family" ? "pair" : s.type;
    if (!seen.insert({ns, s.name}).second || (s.type == "family" && !seen.insert({"operator", s.name}).second) ||
        (s.type == "pair" && spec.find_family(s.name)) || (s.type == "operator" && spec.find_family(s.name)))
      throw SpecError(s.line, 1, "duplicate " + s.type + " name '" + s.name + "'");
    if (s.type == "space") {
      require_keys(s, {"expr"}, {"expr"});
      const Entry& e = *s.find("expr");
      spec.spaces.emplace_back(s.name, parse_norm_expr(e.value, &spec, e.line, e.value_col));
    } else if (s.type == "matrix") {
      spec.matrices.emplace_back(s.name, parse_matrix_section(s, spec));
    } else if (s.type == "pair") {
      require_keys(s, {"space", "embedding"}, {"space", "embedding"});
      const Entry& se = *s.find("space");
      const Entry& je = *s.find("embedding");
      const Norm* Y = spec.find_space(se.value);
      if (!Y) fail_at(se, "undefined space '" + se.value + "'");
      const Mat* J = spec.find_matrix(je.value);
      if (!J) fail_at(je, "undefined matrix '" + je.value + "'");
      try {
        spec.pairs.push_back({s.name, se.value, je.value, SubspacePair::make(*Y, *J), false});
      } catch (const std::invalid_argument& ex) {
        fail_at(je, ex.what());
      }
    } else if (s.type == "operator") {
      require_keys(s, {"pair", "matrix"}, {"pair", "matrix"});
      const Entry& pe = *s.find("pair");
      const Entry& me = *s.find("matrix");
      const PairDef* p = spec.find_pair(pe.value);
      if (!p) fail_at(pe, "undefined pair '" + pe.value + "'");
      const Mat* T = spec.find_matrix(me.value);
      if (!T) fail_at(me, "undefined matrix '" + me.value + "'");
      OperatorSpec op{*T, s.name};
      try {
        validate_operator(p->pair, op);
      } catch (const std::invalid_argument& ex) {
        fail_at(me, ex.what());
      }
      spec.operators.push_back({s.name, pe.value, me.value, op, false});
    } else if (s.type == "family") {
      require_keys(s, {"id", "m"}, {"id", "m"});
      const Entry& ie = *s.find("id");
      const Entry& me = *s.find("m");
      FamilyId id;
      try {
        id = parse_family(ie.value);
      } catch (const std::invalid_argument& ex) {
        fail_at(ie, ex.what());
      }
      auto m = to_int(me.value);
      if (!m || *m < 2) fail_at(me, "m must be an integer >= 2");
      const FamilyInstance f = make_family(id, static_cast<int>(*m));
      spec.families.push_back({s.name, id, static_cast<int>(*m)});
      spec.pairs.push_back({s.name, "", "", f.pair, true});
      spec.operators.push_back({s.name, s.name, "", f.T, true});
    } else {
      if (spec.find_task(s.name)) throw SpecError(s.line, 1, "duplicate task name '" + s.name + "'");
      spec.tasks.push_back(parse_task_section(s, spec));
    }
  }
  return spec;
}

SpecFile load_spec_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read spec file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_spec(ss.str());
}

std::string emit_spec(const SpecFile& spec) {
  std::ostringstream o;
  for (const auto& [name, n] : spec.spaces) o << "[space " << name << "]\nexpr = " << n.to_string() << "\n\n";
  for (const auto& [name, m] : spec.matrices) {
    o << "[matrix " << name << "]\nrows = " << m.rows() << "\ncols = " << m.cols() << "\ndata =";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) o << " " << format_double(m(i, j));
      if (i + 1 < m.rows()) o << ";";
    }
    o << "\n\n";
  }
  for (const auto& f : spec.families) o << "[family " << f.name << "]\nid = " << to_string(f.id) << "\nm = " << f.m << "\n\n";
  for (const auto& p : spec.pairs)
    if (!p.from_family) o << "[pair " << p.name << "]\nspace = " << p.space << "\nembedding = " << p.embedding << "\n\n";
  for (const auto& op : spec.operators)
    if (!op.from_family) o << "[operator " << op.name << "]\npair = " << op.pair << "\nmatrix = " << op.matrix << "\n\n";
  for (const auto& t : spec.tasks) {
    o << "[task " << t.name << "]\nkind = " << t.kind << "\n";
    for (const auto& [k, v] : t.params) o << k << " = " << v << "\n";
    o << "\n";
  }
  return o.str();
}

}  // namespace nrange
