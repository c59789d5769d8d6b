#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hamcert {

// Small expression language for nonlinearities and envelope overrides:
// constants, named variables, + - * / ^, unary minus, abs(.), exp(.).
// Precedence: ^ binds tightest, then unary minus, then * /, then + -.
class ExpressionTree {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  enum class Op { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Abs, Exp };

  struct Node {
    Op op;
    double value = 0.0;  // Constant
    int var = -1;        // Variable slot
    NodePtr a, b;
  };

  ExpressionTree() = default;
  explicit ExpressionTree(NodePtr root, std::vector<std::string> vars)
      : root_(std::move(root)), vars_(std::move(vars)) {}

  bool empty() const { return root_ == nullptr; }
  const std::vector<std::string>& variables() const { return vars_; }

  // Throws EvalError on division by zero / non-finite results, with the
  // offending inputs attached.
  double evaluate(std::span<const double> args) const;

  std::string print() const;

 private:
  NodePtr root_;
  std::vector<std::string> vars_;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t at)
      : std::runtime_error(msg + " at offset " + std::to_string(at)), offset(at) {}
  std::size_t offset;
};

// Parses `text` over the given variable names. Deterministic; standard
// precedence; errors carry the byte offset.
ExpressionTree parse_expression(const std::string& text, const std::vector<std::string>& vars);

}  // namespace hamcert
