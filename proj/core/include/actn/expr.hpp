#pragma once

// Expression front-end. Grammar:
//   expr    := term ('+' term)*
//   term    := factor ('*' factor)*
//   factor  := primary ('^' INT)*
//   primary := NUMBER | IDENT '(' IDENT ')' | '(' expr ')'
// NUMBER may carry a leading '-'. All binary operators are left-associative.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "actn/contraction.hpp"
#include "actn/network.hpp"
#include "actn/quadrature.hpp"

namespace actn::expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct FunctionRef {
  std::string name;
  std::string variable;
};
struct Constant {
  double value = 0.0;
};
struct Add {
  NodePtr left, right;
};
struct Mul {
  NodePtr left, right;
};
struct Pow {
  NodePtr base;
  unsigned exponent = 1;
};

struct Node {
  std::variant<FunctionRef, Constant, Add, Mul, Pow> kind;
};

/// Structural equality.
bool operator==(const Node& a, const Node& b);

NodePtr function(std::string name, std::string variable);
NodePtr constant(double value);
NodePtr add(NodePtr left, NodePtr right);
NodePtr mul(NodePtr left, NodePtr right);
NodePtr pow(NodePtr base, unsigned exponent);

/// Throws ParseError with the byte offset of the offending token.
NodePtr parse(std::string_view text);

/// Fully parenthesized text that parses back to an equal tree.
std::string print(const Node& node);

struct CompilationEnv {
  std::map<std::string, std::vector<double>> bindings;  ///< function name -> samples
  std::map<std::string, QuadratureRule> grids;          ///< variable -> rule
};

struct Compiled {
  TensorNetwork network;
  /// Open control leg of the root, present only when the root is an Add.
  std::optional<std::string> control;
  /// Variables in first-use order; each is an open leg of the same name.
  std::vector<std::string> variables;
};

/// Lowers the tree to a network. Subtrees below an Add keep their control
/// legs; everything else multiplies through with the control fixed to 1.
/// Repeated variables are joined by chains of arity-3 COPY tensors.
Compiled compile(const Node& ast, const CompilationEnv& env);

/// Contracts with every variable fixed to a grid index.
double evaluate_at(const Compiled& c, const std::map<std::string, std::size_t>& point);

/// Integrates every variable with its rule from `env`.
ContractionReport integrate(const Compiled& c, const CompilationEnv& env);

/// Direct recursive evaluation on the sample vectors.
double interpret(const Node& ast, const CompilationEnv& env, const std::map<std::string, std::size_t>& point);

}  // namespace actn::expr
