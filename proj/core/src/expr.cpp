#include "actn/expr.hpp"

#include <cctype>
#include <charconv>
#include <functional>

#include "actn/circuit.hpp"
#include "actn/error.hpp"

namespace actn::expr {

bool operator==(const Node& a, const Node& b) {
  if (a.kind.index() != b.kind.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.kind);
        if constexpr (std::is_same_v<T, FunctionRef>) {
          return x.name == y.name && x.variable == y.variable;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Pow>) {
          return x.exponent == y.exponent && *x.base == *y.base;
        } else {
          return *x.left == *y.left && *x.right == *y.right;
        }
      },
      a.kind);
}

NodePtr function(std::string name, std::string variable) {
  return std::make_shared<const Node>(Node{FunctionRef{std::move(name), std::move(variable)}});
}
NodePtr constant(double value) { return std::make_shared<const Node>(Node{Constant{value}}); }
NodePtr add(NodePtr left, NodePtr right) {
  return std::make_shared<const Node>(Node{Add{std::move(left), std::move(right)}});
}
NodePtr mul(NodePtr left, NodePtr right) {
  return std::make_shared<const Node>(Node{Mul{std::move(left), std::move(right)}});
}
NodePtr pow(NodePtr base, unsigned exponent) {
  if (exponent == 0) throw SpecError("exponent must be positive");
  return std::make_shared<const Node>(Node{Pow{std::move(base), exponent}});
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    auto node = expr();
    skip();
    if (pos_ != text_.size()) throw ParseError(pos_, "'+', '*', '^' or end of input");
    return node;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(pos_, std::string("'") + c + "'");
  }
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string ident() {
    skip();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) throw ParseError(pos_, "identifier");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  NodePtr expr() {
    auto node = term();
    while (accept('+')) node = add(node, term());
    return node;
  }
  NodePtr term() {
    auto node = factor();
    while (accept('*')) node = mul(node, factor());
    return node;
  }
  NodePtr factor() {
    auto node = primary();
    while (accept('^')) {
      skip();
      const std::size_t start = pos_;
      unsigned k = 0;
      const auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), k);
      if (ec != std::errc() || k == 0) throw ParseError(start, "positive integer exponent");
      pos_ = static_cast<std::size_t>(end - text_.data());
      node = pow(node, k);
    }
    return node;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) throw ParseError(pos_, "number, function call or '('");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto node = expr();
      expect(')');
      return node;
    }
    if (ident_start(c)) {
      auto name = ident();
      expect('(');
      auto var = ident();
      expect(')');
      return function(std::move(name), std::move(var));
    }
    if (c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
      double v = 0.0;
      const auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
      if (ec != std::errc()) throw ParseError(pos_, "number");
      pos_ = static_cast<std::size_t>(end - text_.data());
      return constant(v);
    }
    throw ParseError(pos_, "number, function call or '('");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

/// Pow nodes become left-nested Mul chains of the (shared) base.
NodePtr expand(const NodePtr& node) {
  return std::visit(
      [&](const auto& x) -> NodePtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Add>) {
          return add(expand(x.left), expand(x.right));
        } else if constexpr (std::is_same_v<T, Mul>) {
          return mul(expand(x.left), expand(x.right));
        } else if constexpr (std::is_same_v<T, Pow>) {
          const auto base = expand(x.base);
          NodePtr out = base;
          for (unsigned i = 1; i < x.exponent; ++i) out = mul(out, base);
          return out;
        } else {
          return node;
        }
      },
      node->kind);
}

void count_uses(const Node& node, std::map<std::string, std::size_t>& uses, std::vector<std::string>& order) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FunctionRef>) {
          if (uses[x.variable]++ == 0) order.push_back(x.variable);
        } else if constexpr (std::is_same_v<T, Add> || std::is_same_v<T, Mul>) {
          count_uses(*x.left, uses, order);
          count_uses(*x.right, uses, order);
        } else if constexpr (std::is_same_v<T, Pow>) {
          count_uses(*x.base, uses, order);
        }
      },
      node.kind);
}

class Lowering {
 public:
  Lowering(const CompilationEnv& env, Compiled& out) : env_(env), out_(out) {}

  void prepare(const Node& root) {
    std::map<std::string, std::size_t> uses;
    count_uses(root, uses, out_.variables);
    for (const auto& var : out_.variables) {
      const auto rule = env_.grids.find(var);
      if (rule == env_.grids.end()) throw SpecError("variable '" + var + "' has no grid");
      const std::size_t g = rule->second.size();
      auto chain = copy_chain(g, uses[var] + 1, var);
      const std::string tail = chain.legs.back();
      chain.legs.pop_back();
      for (auto& t : chain.copies) out_.network.add(t.has_leg(tail) ? t.renamed(tail, var) : t);
      for (auto& leg : chain.legs)
        if (leg == tail) leg = var;
      legs_[var] = std::move(chain.legs);
    }
  }

  /// Adds the subtree's tensors; returns its control leg when `keep`.
  std::optional<std::string> lower(const Node& node, bool keep) {
    return std::visit([&](const auto& x) { return lower_kind(x, keep); }, node.kind);
  }

 private:
  std::optional<std::string> lower_kind(const FunctionRef& f, bool keep) {
    const auto it = env_.bindings.find(f.name);
    if (it == env_.bindings.end()) throw SpecError("function '" + f.name + "' is not bound");
    const std::size_t g = env_.grids.at(f.variable).size();
    if (it->second.size() != g)
      throw DimensionError("function '" + f.name + "' has " + std::to_string(it->second.size()) +
                           " samples but variable '" + f.variable + "' has a grid of " + std::to_string(g));
    const std::string leg = legs_.at(f.variable).at(next_use_[f.variable]++);
    const std::string ctl = keep ? out_.network.fresh_leg("ctl") : std::string();
    out_.network.add(function_tensor(it->second, keep, leg, ctl));
    if (!keep) return std::nullopt;
    return ctl;
  }
  std::optional<std::string> lower_kind(const Constant& c, bool keep) {
    if (!keep) {
      out_.network.add(Tensor::scalar(c.value));
      return std::nullopt;
    }
    const std::string ctl = out_.network.fresh_leg("ctl");
    out_.network.add(Tensor::vector(ctl, {1.0, c.value}));
    return ctl;
  }
  std::optional<std::string> lower_kind(const Add& a, bool keep) {
    const auto l = lower(*a.left, true);
    const auto r = lower(*a.right, true);
    const std::string ctl = out_.network.fresh_leg("ctl");
    out_.network.add(add_tensor(*l, *r, ctl));
    if (keep) return ctl;
    out_.network.add(Tensor::unit(ctl, 2, 1));
    return std::nullopt;
  }
  std::optional<std::string> lower_kind(const Mul& m, bool keep) {
    const auto l = lower(*m.left, keep);
    const auto r = lower(*m.right, keep);
    if (!keep) return std::nullopt;
    const std::string ctl = out_.network.fresh_leg("ctl");
    out_.network.add(mul_tensor(*l, *r, ctl));
    return ctl;
  }
  std::optional<std::string> lower_kind(const Pow&, bool) { throw Error("Pow must be expanded before lowering"); }

  const CompilationEnv& env_;
  Compiled& out_;
  std::map<std::string, std::vector<std::string>> legs_;
  std::map<std::string, std::size_t> next_use_;
};

void print_to(const Node& node, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FunctionRef>) {
          out += x.name + "(" + x.variable + ")";
        } else if constexpr (std::is_same_v<T, Constant>) {
          char buf[64];
          const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x.value);
          out.append(buf, end);
        } else if constexpr (std::is_same_v<T, Pow>) {
          out += "(";
          print_to(*x.base, out);
          out += "^" + std::to_string(x.exponent) + ")";
        } else {
          out += "(";
          print_to(*x.left, out);
          out += std::is_same_v<T, Add> ? " + " : " * ";
          print_to(*x.right, out);
          out += ")";
        }
      },
      node.kind);
}

}  // namespace

NodePtr parse(std::string_view text) { return Parser(text).run(); }

std::string print(const Node& node) {
  std::string out;
  print_to(node, out);
  return out;
}

Compiled compile(const Node& ast, const CompilationEnv& env) {
  const auto root = expand(std::make_shared<const Node>(ast));
  Compiled out;
  Lowering lowering(env, out);
  lowering.prepare(*root);
  out.control = lowering.lower(*root, std::holds_alternative<Add>(root->kind));
  return out;
}

double evaluate_at(const Compiled& c, const std::map<std::string, std::size_t>& point) {
  TensorNetwork tn = c.network;
  for (const auto& var : c.variables) {
    const auto it = point.find(var);
    if (it == point.end()) throw SpecError("no value given for variable '" + var + "'");
    const auto ends = tn.endpoints(var);
    tn.add(Tensor::unit(var, tn.tensor(ends.at(0)).dim(var), it->second));
  }
  if (c.control) tn.add(Tensor::unit(*c.control, 2, 1));
  return contract_exact(tn).value();
}

ContractionReport integrate(const Compiled& c, const CompilationEnv& env) {
  TensorNetwork tn = c.network;
  for (const auto& var : c.variables) tn.add(Tensor::vector(var, env.grids.at(var).weights));
  if (c.control) tn.add(Tensor::unit(*c.control, 2, 1));
  return contract_exact(tn);
}

double interpret(const Node& ast, const CompilationEnv& env, const std::map<std::string, std::size_t>& point) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FunctionRef>) {
          return env.bindings.at(x.name).at(point.at(x.variable));
        } else if constexpr (std::is_same_v<T, Constant>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Add>) {
          return interpret(*x.left, env, point) + interpret(*x.right, env, point);
        } else if constexpr (std::is_same_v<T, Mul>) {
          return interpret(*x.left, env, point) * interpret(*x.right, env, point);
        } else {
          double v = 1.0;
          const double b = interpret(*x.base, env, point);
          for (unsigned i = 0; i < x.exponent; ++i) v *= b;
          return v;
        }
      },
      ast.kind);
}

}  // namespace actn::expr
