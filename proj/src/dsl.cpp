#include "hamcheck/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "hamcheck/jetalg.hpp"
#include "hamcheck/render.hpp"

namespace hamcheck::dsl {

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string format_error(SourcePos pos, const std::string& message, const std::vector<std::string>& expected) {
  std::string s = std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message;
  if (!expected.empty()) s += " (expected " + join(expected, ", ") + ")";
  return s;
}

}  // namespace

ParseError::ParseError(SourcePos pos, const std::string& message, std::vector<std::string> expected)
    : std::runtime_error(format_error(pos, message, expected)),
      pos_(pos),
      message_(message),
      expected_(std::move(expected)) {}

const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::reduce: return "reduce";
    case TaskKind::symmetry: return "symmetry";
    case TaskKind::genfn: return "genfn";
    case TaskKind::bivector: return "bivector";
    case TaskKind::schouten: return "schouten";
    case TaskKind::hamiltonian: return "hamiltonian";
    case TaskKind::poisson: return "poisson";
    case TaskKind::magri: return "magri";
    case TaskKind::equivalence: return "equivalence";
    case TaskKind::transport: return "transport";
    case TaskKind::deform: return "deform";
    case TaskKind::lift: return "lift";
  }
  return "?";
}

const EquationDecl* Program::find_equation(std::string_view name) const {
  for (const auto& e : equations)
    if (e.name == name) return &e;
  return nullptr;
}

const EquivalenceDecl* Program::find_equivalence(std::string_view name) const {
  for (const auto& e : equivalences)
    if (e.name == name) return &e;
  return nullptr;
}

const DeformationDecl* Program::find_deformation(std::string_view name) const {
  for (const auto& d : deformations)
    if (d.name == name) return &d;
  return nullptr;
}

namespace {

enum class Tok { ident, number, punct, end };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
  std::size_t offset = 0;
  std::size_t length = 0;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  while (i < src.size()) {
    const unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::punct, "", pos, i, 0};
    std::size_t n = 1;
    if (std::isalpha(c)) {
      t.kind = Tok::ident;
      while (i + n < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i + n])) || src[i + n] == '_'))
        ++n;
    } else if (std::isdigit(c)) {
      t.kind = Tok::number;
      while (i + n < src.size() && std::isdigit(static_cast<unsigned char>(src[i + n]))) ++n;
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      n = 2;
    } else if (std::string_view(";,=()[]{}+-*/^>").find(static_cast<char>(c)) == std::string_view::npos) {
      throw ParseError(pos, std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
    t.text = std::string(src.substr(i, n));
    t.length = n;
    out.push_back(t);
    advance(n);
  }
  out.push_back(Token{Tok::end, "", pos, src.size(), 0});
  return out;
}

bool is_order_zero(const CDiffOp& op) { return op.order() == 0; }

DiffPoly scalar_of(const CDiffOp& op) {
  auto it = op.entry(0, 0).find(MultiIndex{});
  return it == op.entry(0, 0).end() ? DiffPoly() : it->second;
}

VectorFunction column_of(const CDiffOp& op) {
  VectorFunction v(op.rows());
  for (std::size_t i = 0; i < op.rows(); ++i) {
    auto it = op.entry(i, 0).find(MultiIndex{});
    if (it != op.entry(i, 0).end()) v[i] = it->second;
  }
  return v;
}

// Product with a 1x1 factor broadcast over the other operand's entries.
CDiffOp broadcast_compose(const CDiffOp& a, const CDiffOp& b) {
  if (a.cols() == b.rows()) return compose(a, b);
  if (a.rows() == 1 && a.cols() == 1) {
    CDiffOp r(b.rows(), b.cols());
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) {
        CDiffOp e(1, 1);
        e.set_entry(0, 0, b.entry(i, j));
        r.set_entry(i, j, compose(a, e).entry(0, 0));
      }
    return r;
  }
  if (b.rows() == 1 && b.cols() == 1) {
    CDiffOp r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        CDiffOp e(1, 1);
        e.set_entry(0, 0, a.entry(i, j));
        r.set_entry(i, j, compose(e, b).entry(0, 0));
      }
    return r;
  }
  throw Error(ErrorKind::dimension_mismatch, "product of " + std::to_string(a.rows()) + "x" +
                                                 std::to_string(a.cols()) + " and " +
                                                 std::to_string(b.rows()) + "x" +
                                                 std::to_string(b.cols()) + " operators");
}

struct EquationSource {
  VectorFunction equations;
  std::vector<DepId> unknowns;
};

using EquationLookup = std::function<const EquationSource*(std::string_view)>;

class Parser {
 public:
  Parser(std::string_view src, const Frame* frame, const Env* env)
      : src_(src), toks_(lex(src)), frame_(frame), env_(env) {}

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::end; }
  bool is(std::string_view p) const {
    return (peek().kind == Tok::punct || peek().kind == Tok::ident) && peek().text == p;
  }
  bool accept(std::string_view p) {
    if (!is(p)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(const std::string& message, std::vector<std::string> expected = {}) const {
    throw ParseError(peek().pos, message, std::move(expected));
  }

  std::string found() const {
    if (at_end()) return "end of input";
    return "'" + peek().text + "'";
  }

  void expect(std::string_view p) {
    if (!accept(p)) fail("unexpected " + found(), {"'" + std::string(p) + "'"});
  }

  std::string ident(const std::string& what = "identifier") {
    if (peek().kind != Tok::ident) fail("unexpected " + found(), {what});
    return toks_[pos_++].text;
  }

  unsigned number() {
    if (peek().kind != Tok::number) fail("unexpected " + found(), {"number"});
    const auto& t = toks_[pos_++];
    if (t.text.size() > 6) throw ParseError(t.pos, "number too large");
    return static_cast<unsigned>(std::stoul(t.text));
  }

  std::size_t mark() const { return pos_; }
  std::string text_since(std::size_t start) const {
    const auto& a = toks_[start];
    const auto& b = toks_[pos_ - 1];
    return std::string(src_.substr(a.offset, b.offset + b.length - a.offset));
  }

  void set_frame(const Frame* f) { frame_ = f; }
  void set_env(const Env* e) { env_ = e; }
  void set_equations(EquationLookup lookup) { equations_ = std::move(lookup); }

  // expr := term (('+' | '-') term)*
  CDiffOp expression() {
    CDiffOp acc = term();
    while (is("+") || is("-")) {
      const Token op = toks_[pos_++];
      CDiffOp rhs = term();
      if (rhs.rows() != acc.rows() || rhs.cols() != acc.cols())
        throw ParseError(op.pos, "dimension mismatch in '" + op.text + "'");
      if (op.text == "+") acc += rhs;
      else acc -= rhs;
    }
    return acc;
  }

  DiffPoly poly_expression() {
    const SourcePos at = peek().pos;
    CDiffOp v = expression();
    if (v.rows() != 1 || v.cols() != 1 || !is_order_zero(v))
      throw ParseError(at, "expected a differential polynomial");
    return scalar_of(v);
  }

  VectorFunction vector_expression() {
    const SourcePos at = peek().pos;
    CDiffOp v = expression();
    if (v.cols() != 1 || !is_order_zero(v)) throw ParseError(at, "expected a vector function");
    return column_of(v);
  }

  JetVar jet(const std::string& what = "jet variable") {
    const Token& t = peek();
    std::string name = ident(what);
    auto v = frame_->parse_jet(name);
    if (!v) throw ParseError(t.pos, "unknown jet variable '" + name + "'");
    return *v;
  }

 private:
  // term := unary (('*' | '/') unary)*
  CDiffOp term() {
    CDiffOp acc = unary();
    while (is("*") || is("/")) {
      const Token op = toks_[pos_++];
      const SourcePos rhs_pos = peek().pos;
      CDiffOp rhs = unary();
      if (op.text == "*") {
        try {
          acc = broadcast_compose(acc, rhs);
        } catch (const Error& e) {
          throw ParseError(op.pos, e.what());
        }
      } else {
        if (rhs.rows() != 1 || rhs.cols() != 1 || !is_order_zero(rhs) || !scalar_of(rhs).is_constant() ||
            scalar_of(rhs).is_zero())
          throw ParseError(rhs_pos, "division only by a nonzero constant");
        acc = Rational(1 / scalar_of(rhs).constant_term()) * acc;
      }
    }
    return acc;
  }

  CDiffOp unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }

  CDiffOp power() {
    CDiffOp base = primary();
    if (accept("^")) {
      const SourcePos at = peek().pos;
      unsigned k = number();
      if (base.rows() != base.cols()) throw ParseError(at, "power of a non-square operator");
      CDiffOp r = CDiffOp::identity(base.rows());
      for (unsigned i = 0; i < k; ++i) r = compose(r, base);
      return r;
    }
    return base;
  }

  std::vector<std::string> operand_set() const {
    return {"number", "identifier", "'('", "'['", "'-'"};
  }

  CDiffOp primary() {
    const Token t = peek();
    if (t.kind == Tok::number) {
      ++pos_;
      return CDiffOp::multiplication(DiffPoly(Rational(t.text)));
    }
    if (accept("(")) {
      CDiffOp v = expression();
      expect(")");
      return v;
    }
    if (accept("[")) return bracket(t.pos);
    if (t.kind == Tok::ident) {
      ++pos_;
      if (is("(")) return call(t);
      return name(t);
    }
    fail(at_end() ? "unexpected end of input" : "unexpected " + found(), operand_set());
  }

  CDiffOp bracket(SourcePos at) {
    if (is("[")) {
      std::vector<std::vector<CDiffOp>> rows;
      do {
        expect("[");
        rows.push_back(list("]"));
      } while (accept(","));
      expect("]");
      const std::size_t cols = rows.front().size();
      CDiffOp m(rows.size(), cols);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw ParseError(at, "matrix rows have different lengths");
        for (std::size_t j = 0; j < cols; ++j) m.set_entry(i, j, rows[i][j].entry(0, 0));
      }
      return m;
    }
    auto items = list("]");
    CDiffOp col(items.size(), 1);
    for (std::size_t i = 0; i < items.size(); ++i) col.set_entry(i, 0, items[i].entry(0, 0));
    return col;
  }

  // Comma-separated 1x1 entries up to `close`, which is consumed.
  std::vector<CDiffOp> list(std::string_view close) {
    std::vector<CDiffOp> items;
    do {
      const SourcePos at = peek().pos;
      CDiffOp v = expression();
      if (v.rows() != 1 || v.cols() != 1) throw ParseError(at, "matrix entries must be scalar");
      items.push_back(std::move(v));
    } while (accept(","));
    expect(close);
    return items;
  }

  CDiffOp call(const Token& fn) {
    expect("(");
    auto arg = [&]() { return expression(); };
    CDiffOp result;
    if (fn.text == "adj") {
      result = adjoint(arg());
    } else if (fn.text == "transpose") {
      result = transpose(arg());
    } else if (fn.text == "apply") {
      CDiffOp a = arg();
      expect(",");
      const SourcePos at = peek().pos;
      CDiffOp f = arg();
      if (f.cols() != 1 || !is_order_zero(f)) throw ParseError(at, "apply needs a vector function");
      if (a.cols() != f.rows()) throw ParseError(at, "apply: dimension mismatch");
      result = CDiffOp::column(apply(a, column_of(f)));
    } else if (fn.text == "euler") {
      const SourcePos at = peek().pos;
      CDiffOp d = arg();
      if (d.rows() != 1 || d.cols() != 1 || !is_order_zero(d)) throw ParseError(at, "euler needs a density");
      std::vector<DepId> deps;
      while (accept(",")) {
        const Token& t = peek();
        auto dep = frame_->find_dependent(ident("dependent"));
        if (!dep) throw ParseError(t.pos, "unknown dependent '" + t.text + "'");
        deps.push_back(*dep);
      }
      if (deps.empty()) deps = frame_->physical();
      result = CDiffOp::column(euler(scalar_of(d), deps));
    } else if (fn.text == "lin") {
      const Token& t = peek();
      std::string eq = ident("equation name");
      const EquationSource* src = equations_ ? equations_(eq) : nullptr;
      if (!src) throw ParseError(t.pos, "unknown equation '" + eq + "'");
      result = linearize(src->equations, src->unknowns);
    } else {
      throw ParseError(fn.pos, "unknown function '" + fn.text + "'",
                       {"adj", "transpose", "apply", "euler", "lin"});
    }
    expect(")");
    return result;
  }

  CDiffOp name(const Token& t) {
    if (env_) {
      auto it = env_->find(t.text);
      if (it != env_->end()) return it->second;
    }
    if (auto v = frame_->parse_jet(t.text)) return CDiffOp::multiplication(DiffPoly::var(*v));
    if (auto i = frame_->find_independent(t.text)) return CDiffOp::multiplication(DiffPoly::independent(*i));
    if (t.text.size() >= 2 && t.text[0] == 'D') {
      bool ok = true;
      MultiIndex sigma;
      for (std::size_t k = 1; k < t.text.size() && ok; ++k) {
        auto i = frame_->find_independent(std::string(1, t.text[k]));
        if (i) sigma = sigma.plus_unit(*i);
        else ok = false;
      }
      if (ok) return CDiffOp::derivative(sigma);
    }
    throw ParseError(t.pos, "unknown identifier '" + t.text + "'");
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Frame* frame_;
  const Env* env_;
  EquationLookup equations_;
};

template <class F>
auto parse_whole(const Frame& frame, std::string_view text, const Env& env, F body) {
  Parser p(text, &frame, &env);
  auto v = body(p);
  if (!p.at_end()) p.fail("unexpected " + p.found(), {"end of input"});
  return v;
}

}  // namespace

CDiffOp parse_operator(const Frame& frame, std::string_view text, const Env& env) {
  return parse_whole(frame, text, env, [](Parser& p) { return p.expression(); });
}

DiffPoly parse_poly(const Frame& frame, std::string_view text, const Env& env) {
  return parse_whole(frame, text, env, [](Parser& p) { return p.poly_expression(); });
}

VectorFunction parse_vector(const Frame& frame, std::string_view text, const Env& env) {
  return parse_whole(frame, text, env, [](Parser& p) { return p.vector_expression(); });
}

namespace {

class ProgramParser {
 public:
  ProgramParser(std::string_view src, unsigned depth) : p_(src, nullptr, &env_) {
    prog_.passivity_depth = depth;
    p_.set_equations([this](std::string_view name) -> const EquationSource* {
      auto it = sources_.find(std::string(name));
      return it == sources_.end() ? nullptr : &it->second;
    });
  }

  Program run() {
    header();
    while (!p_.at_end()) declaration();
    return std::move(prog_);
  }

 private:
  void header() {
    const SourcePos at = p_.peek().pos;
    p_.expect("independents");
    std::vector<std::string> indeps;
    do indeps.push_back(p_.ident("independent name"));
    while (p_.accept(","));
    p_.expect(";");
    p_.expect("dependents");
    std::vector<Dependent> deps;
    do deps.push_back({p_.ident("dependent name"), DepKind::physical});
    while (p_.accept(","));
    p_.expect(";");
    try {
      prog_.frame = Frame(indeps, deps);
    } catch (const Error& e) {
      throw ParseError(at, e.what());
    }
    p_.set_frame(&prog_.frame);
  }

  void claim(const std::string& name, SourcePos at) {
    if (prog_.frame.find_dependent(name) || prog_.frame.find_independent(name) || !names_.insert(name).second)
      throw ParseError(at, "name '" + name + "' is already defined");
  }

  void declaration() {
    const Token t = p_.peek();
    if (p_.accept("equation")) return equation(t.pos);
    if (p_.accept("operator")) return value(t.pos, false);
    if (p_.accept("function")) return value(t.pos, true);
    if (p_.accept("chain")) return chain_decl(t.pos);
    if (p_.accept("equivalence")) return equivalence(t.pos);
    if (p_.accept("deformation")) return deformation(t.pos);
    if (p_.accept("task")) return task(t.pos);
    p_.fail("unexpected " + p_.found(),
            {"'equation'", "'operator'", "'function'", "'chain'", "'equivalence'", "'deformation'", "'task'"});
  }

  DepId dependent() {
    const Token& t = p_.peek();
    std::string name = p_.ident("dependent name");
    auto d = prog_.frame.find_dependent(name);
    if (!d) throw ParseError(t.pos, "unknown dependent '" + name + "'");
    return *d;
  }

  // ranking [orderly] t > x [> ...]
  Ranking ranking(const std::vector<DepId>& deps) {
    RankingRule rule = RankingRule::lexicographic;
    if (p_.accept("orderly")) rule = RankingRule::orderly;
    else p_.accept("lexicographic");
    std::vector<std::size_t> order;
    std::set<std::size_t> seen;
    do {
      const Token& t = p_.peek();
      std::string name = p_.ident("independent name");
      auto i = prog_.frame.find_independent(name);
      if (!i) throw ParseError(t.pos, "unknown independent '" + name + "'");
      if (!seen.insert(*i).second) throw ParseError(t.pos, "independent '" + name + "' listed twice");
      order.push_back(*i);
    } while (p_.accept(">"));
    return Ranking(order, deps, rule);
  }

  void equation(SourcePos at) {
    EquationDecl decl;
    decl.pos = at;
    decl.name = p_.ident("equation name");
    claim(decl.name, at);
    p_.expect("{");
    std::vector<SolvedForm> solved;
    std::vector<DiffPoly> eqs;
    std::optional<std::vector<DepId>> unknowns;
    std::optional<std::vector<DepId>> precedence;
    std::optional<Ranking> rank;
    unsigned depth = prog_.passivity_depth;
    while (!p_.accept("}")) {
      if (p_.accept("solve")) {
        JetVar lead = p_.jet("leading jet variable");
        if (p_.accept("=")) {
          DiffPoly rhs = p_.poly_expression();
          eqs.push_back(DiffPoly::var(lead) - rhs);
          solved.push_back({lead, rhs});
        } else if (p_.accept("from")) {
          eqs.push_back(p_.poly_expression());
          solved.push_back({lead, std::nullopt});
        } else {
          p_.fail("unexpected " + p_.found(), {"'='", "'from'"});
        }
      } else if (p_.accept("unknowns")) {
        unknowns.emplace();
        do unknowns->push_back(dependent());
        while (p_.accept(","));
      } else if (p_.accept("precedence")) {
        precedence.emplace();
        do precedence->push_back(dependent());
        while (p_.accept(">"));
      } else if (p_.accept("ranking")) {
        rank = ranking({});
      } else if (p_.accept("depth")) {
        depth = p_.number();
      } else {
        p_.fail("unexpected " + p_.found(),
                {"'solve'", "'unknowns'", "'ranking'", "'precedence'", "'depth'", "'}'"});
      }
      p_.expect(";");
    }
    if (eqs.empty()) throw ParseError(at, "equation '" + decl.name + "' has no equations");
    decl.equations = VectorFunction(eqs);
    if (unknowns) {
      decl.unknowns = *unknowns;
    } else {
      std::set<DepId> used;
      for (const auto& f : eqs)
        for (auto d : f.dependents()) used.insert(d);
      decl.unknowns.assign(used.begin(), used.end());
    }
    Ranking r = rank ? Ranking(rank->independent_precedence(), precedence ? *precedence : decl.unknowns,
                               rank->rule())
                     : Ranking({}, precedence ? *precedence : decl.unknowns);
    sources_[decl.name] = EquationSource{decl.equations, decl.unknowns};
    try {
      decl.system = EquationSystem::make(prog_.frame, decl.unknowns, decl.equations, solved, r, depth);
    } catch (const Error& e) {
      decl.error = e;
    }
    prog_.equations.push_back(std::move(decl));
  }

  void value(SourcePos at, bool function) {
    std::string name = p_.ident(function ? "function name" : "operator name");
    claim(name, at);
    p_.expect("=");
    const SourcePos vat = p_.peek().pos;
    CDiffOp v = p_.expression();
    if (function && (v.cols() != 1 || v.order() != 0)) throw ParseError(vat, "expected a vector function");
    p_.expect(";");
    env_[name] = std::move(v);
  }

  std::vector<VectorFunction> chain_items() {
    std::vector<VectorFunction> items;
    p_.expect("(");
    if (p_.accept(")")) return items;
    do items.push_back(p_.vector_expression());
    while (p_.accept(","));
    p_.expect(")");
    return items;
  }

  void chain_decl(SourcePos at) {
    std::string name = p_.ident("chain name");
    claim(name, at);
    p_.expect("=");
    chains_[name] = Chain{name, chain_items()};
    p_.expect(";");
  }

  std::string equation_ref() {
    const Token& t = p_.peek();
    std::string name = p_.ident("equation name");
    if (!prog_.find_equation(name)) throw ParseError(t.pos, "unknown equation '" + name + "'");
    return name;
  }

  void equivalence(SourcePos at) {
    EquivalenceDecl d;
    d.pos = at;
    d.name = p_.ident("equivalence name");
    claim(d.name, at);
    p_.expect("(");
    d.first = equation_ref();
    p_.expect(",");
    d.second = equation_ref();
    p_.expect(")");
    p_.expect("{");
    std::set<std::string> given;
    while (!p_.accept("}")) {
      const Token t = p_.peek();
      if (p_.accept("map")) {
        DepId dep = dependent();
        p_.expect("=");
        d.substitution[dep] = p_.poly_expression();
      } else {
        std::string key = p_.ident("relation operator");
        CDiffOp* slot = key == "alpha"    ? &d.alpha
                        : key == "alphap" ? &d.alphap
                        : key == "beta"   ? &d.beta
                        : key == "betap"  ? &d.betap
                        : key == "s1"     ? &d.s1
                        : key == "s2"     ? &d.s2
                                          : nullptr;
        if (!slot)
          throw ParseError(t.pos, "unknown field '" + key + "'",
                           {"alpha", "alphap", "beta", "betap", "s1", "s2", "map"});
        if (!given.insert(key).second) throw ParseError(t.pos, "field '" + key + "' given twice");
        p_.expect("=");
        *slot = p_.expression();
      }
      p_.expect(";");
    }
    for (const char* k : {"alpha", "alphap", "beta", "betap", "s1", "s2"})
      if (!given.count(k)) throw ParseError(at, std::string("equivalence is missing '") + k + "'");
    prog_.equivalences.push_back(std::move(d));
  }

  NamedOperator operator_arg() {
    const std::size_t start = p_.mark();
    NamedOperator op{"", p_.expression()};
    op.name = p_.text_since(start);
    return op;
  }

  void deformation(SourcePos at) {
    DeformationDecl d;
    d.pos = at;
    d.name = p_.ident("deformation name");
    claim(d.name, at);
    p_.expect("(");
    d.base = equation_ref();
    p_.expect(",");
    auto a1 = operator_arg();
    p_.expect(",");
    auto a2 = operator_arg();
    p_.expect(")");
    d.a1_name = a1.name;
    d.a1 = a1.op;
    d.a2_name = a2.name;
    d.a2 = a2.op;
    p_.expect("{");
    while (!p_.accept("}")) {
      if (p_.accept("fresh")) {
        do d.fresh.push_back(dependent());
        while (p_.accept(","));
      } else if (p_.accept("ranking")) {
        d.ranking = ranking({});
      } else {
        p_.fail("unexpected " + p_.found(), {"'fresh'", "'ranking'", "'}'"});
      }
      p_.expect(";");
    }
    if (d.fresh.empty()) throw ParseError(at, "deformation needs 'fresh' dependents");
    prog_.deformations.push_back(std::move(d));
  }

  Chain chain_arg() {
    if (p_.is("(")) return Chain{"", chain_items()};
    const Token& t = p_.peek();
    std::string name = p_.ident("chain");
    auto it = chains_.find(name);
    if (it == chains_.end()) throw ParseError(t.pos, "unknown chain '" + name + "'");
    return it->second;
  }

  void task(SourcePos at) {
    const Token kt = p_.peek();
    std::string kind = p_.ident("task kind");
    static const std::vector<std::pair<std::string, TaskKind>> kinds = {
        {"reduce", TaskKind::reduce},           {"symmetry", TaskKind::symmetry},
        {"genfn", TaskKind::genfn},             {"bivector", TaskKind::bivector},
        {"schouten", TaskKind::schouten},       {"hamiltonian", TaskKind::hamiltonian},
        {"poisson", TaskKind::poisson},         {"magri", TaskKind::magri},
        {"equivalence", TaskKind::equivalence}, {"transport", TaskKind::transport},
        {"deform", TaskKind::deform},           {"lift", TaskKind::lift},
    };
    auto it = std::find_if(kinds.begin(), kinds.end(), [&](const auto& k) { return k.first == kind; });
    if (it == kinds.end()) {
      std::vector<std::string> names;
      for (const auto& k : kinds) names.push_back(k.first);
      throw ParseError(kt.pos, "unknown task kind '" + kind + "'", names);
    }
    TaskSpec spec;
    spec.kind = it->second;
    spec.pos = at;
    const std::size_t start = p_.mark() - 1;
    p_.expect("(");
    auto comma = [&] { p_.expect(","); };
    switch (spec.kind) {
      case TaskKind::reduce:
        spec.target = equation_ref();
        comma();
        spec.functions.push_back(p_.vector_expression());
        if (p_.accept(",")) spec.functions.push_back(p_.vector_expression());
        break;
      case TaskKind::symmetry:
      case TaskKind::genfn:
        spec.target = equation_ref();
        comma();
        spec.functions.push_back(p_.vector_expression());
        break;
      case TaskKind::bivector:
      case TaskKind::hamiltonian:
        spec.target = equation_ref();
        comma();
        spec.operators.push_back(operator_arg());
        break;
      case TaskKind::schouten:
        spec.target = equation_ref();
        comma();
        spec.operators.push_back(operator_arg());
        comma();
        spec.operators.push_back(operator_arg());
        break;
      case TaskKind::poisson:
        spec.target = equation_ref();
        comma();
        spec.operators.push_back(operator_arg());
        comma();
        spec.functions.push_back(p_.vector_expression());
        comma();
        spec.functions.push_back(p_.vector_expression());
        break;
      case TaskKind::magri:
        spec.target = equation_ref();
        comma();
        spec.operators.push_back(operator_arg());
        comma();
        spec.operators.push_back(operator_arg());
        comma();
        spec.chain = chain_arg();
        break;
      case TaskKind::equivalence:
      case TaskKind::transport: {
        const Token& t = p_.peek();
        spec.target = p_.ident("equivalence name");
        if (!prog_.find_equivalence(spec.target))
          throw ParseError(t.pos, "unknown equivalence '" + spec.target + "'");
        if (spec.kind == TaskKind::equivalence) break;
        comma();
        spec.operators.push_back(operator_arg());
        comma();
        const Token& d = p_.peek();
        unsigned from = p_.number();
        p_.expect("->");
        unsigned to = p_.number();
        if (!((from == 1 && to == 2) || (from == 2 && to == 1)))
          throw ParseError(d.pos, "direction must be 1->2 or 2->1");
        spec.direction = static_cast<int>(from * 10 + to);
        if (p_.accept(",")) spec.operators.push_back(operator_arg());
        break;
      }
      case TaskKind::deform:
      case TaskKind::lift: {
        const Token& t = p_.peek();
        spec.target = p_.ident("deformation name");
        if (!prog_.find_deformation(spec.target))
          throw ParseError(t.pos, "unknown deformation '" + spec.target + "'");
        if (spec.kind == TaskKind::lift) {
          comma();
          spec.chain = chain_arg();
        } else if (p_.accept(",")) {
          p_.expect("schouten");
          spec.with_schouten = true;
        }
        break;
      }
    }
    p_.expect(")");
    spec.label = p_.text_since(start);
    p_.expect(";");
    prog_.tasks.push_back(std::move(spec));
  }

  Env env_;
  Parser p_;
  Program prog_;
  std::set<std::string> names_;
  std::map<std::string, Chain> chains_;
  std::map<std::string, EquationSource> sources_;
};

}  // namespace

Program parse_program(std::string_view source, unsigned passivity_depth) {
  return ProgramParser(source, passivity_depth).run();
}

}  // namespace hamcheck::dsl
