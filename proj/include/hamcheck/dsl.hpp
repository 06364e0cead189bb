#ifndef HAMCHECK_DSL_HPP
#define HAMCHECK_DSL_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hamcheck/cdop.hpp"
#include "hamcheck/eqsys.hpp"
#include "hamcheck/error.hpp"

namespace hamcheck::dsl {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message, std::vector<std::string> expected = {});
  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourcePos pos_;
  std::string message_;
  std::vector<std::string> expected_;
};

// Every expression evaluates to an operator; polynomials are 1x1 of order 0
// and vector functions are n x 1 of order 0.
using Env = std::map<std::string, CDiffOp, std::less<>>;

CDiffOp parse_operator(const Frame& frame, std::string_view text, const Env& env = {});
DiffPoly parse_poly(const Frame& frame, std::string_view text, const Env& env = {});
// Accepts `[a, b]` or a single expression (length 1).
VectorFunction parse_vector(const Frame& frame, std::string_view text, const Env& env = {});

struct EquationDecl {
  std::string name;
  SourcePos pos;
  std::vector<DepId> unknowns;
  VectorFunction equations;
  std::optional<EquationSystem> system;
  std::optional<Error> error;  // set when the system failed validation
};

struct EquivalenceDecl {
  std::string name;
  SourcePos pos;
  std::string first, second;
  CDiffOp alpha, alphap, beta, betap, s1, s2;
  std::map<DepId, DiffPoly> substitution;  // applied after transport 2 -> 1
};

struct DeformationDecl {
  std::string name;
  SourcePos pos;
  std::string base;
  std::string a1_name, a2_name;
  CDiffOp a1, a2;
  std::vector<DepId> fresh;
  std::optional<Ranking> ranking;
};

enum class TaskKind {
  reduce,
  symmetry,
  genfn,
  bivector,
  schouten,
  hamiltonian,
  poisson,
  magri,
  equivalence,
  transport,
  deform,
  lift,
};

const char* to_string(TaskKind k);

struct NamedOperator {
  std::string name;  // declared name, or the source text of an inline expression
  CDiffOp op;
};

struct Chain {
  std::string name;
  std::vector<VectorFunction> entries;
};

struct TaskSpec {
  TaskKind kind;
  SourcePos pos;
  std::string label;    // source text of the call
  std::string target;   // equation, equivalence or deformation name
  std::vector<NamedOperator> operators;
  std::vector<VectorFunction> functions;
  std::optional<Chain> chain;
  int direction = 0;  // transport: 12 or 21
  bool with_schouten = false;
};

struct Program {
  Frame frame;
  unsigned passivity_depth = 4;
  std::vector<EquationDecl> equations;
  std::vector<EquivalenceDecl> equivalences;
  std::vector<DeformationDecl> deformations;
  std::vector<TaskSpec> tasks;

  const EquationDecl* find_equation(std::string_view name) const;
  const EquivalenceDecl* find_equivalence(std::string_view name) const;
  const DeformationDecl* find_deformation(std::string_view name) const;
};

// `passivity_depth` is the default for equations without a `depth` clause.
Program parse_program(std::string_view source, unsigned passivity_depth = 4);

}  // namespace hamcheck::dsl

#endif  // HAMCHECK_DSL_HPP
