#include "hamcert/expression.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "hamcert/errors.hpp"

namespace hamcert {

namespace {

using Node = ExpressionTree::Node;
using NodePtr = ExpressionTree::NodePtr;
using Op = ExpressionTree::Op;

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

double eval_node(const Node& n, std::span<const double> args) {
  switch (n.op) {
    case Op::Constant:
      return n.value;
    case Op::Variable:
      return args[n.var];
    case Op::Add:
      return eval_node(*n.a, args) + eval_node(*n.b, args);
    case Op::Sub:
      return eval_node(*n.a, args) - eval_node(*n.b, args);
    case Op::Mul:
      return eval_node(*n.a, args) * eval_node(*n.b, args);
    case Op::Div: {
      double num = eval_node(*n.a, args);
      double den = eval_node(*n.b, args);
      if (den == 0.0) {
        std::ostringstream os;
        os << "division by zero (inputs:";
        for (double v : args) os << ' ' << v;
        os << ')';
        throw EvalError(os.str());
      }
      return num / den;
    }
    case Op::Pow: {
      double base = eval_node(*n.a, args);
      double expo = eval_node(*n.b, args);
      double r = std::pow(base, expo);
      if (!std::isfinite(r)) {
        std::ostringstream os;
        os << "power out of domain: " << base << '^' << expo << " (inputs:";
        for (double v : args) os << ' ' << v;
        os << ')';
        throw EvalError(os.str());
      }
      return r;
    }
    case Op::Neg:
      return -eval_node(*n.a, args);
    case Op::Abs:
      return std::abs(eval_node(*n.a, args));
    case Op::Exp:
      return std::exp(eval_node(*n.a, args));
  }
  throw std::logic_error("unreachable expression op");
}

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

void print_node(const Node& n, const std::vector<std::string>& vars, std::ostream& os) {
  auto child = [&](const Node& c, bool needs_paren) {
    if (needs_paren) os << '(';
    print_node(c, vars, os);
    if (needs_paren) os << ')';
  };
  switch (n.op) {
    case Op::Constant: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.value;
      std::string text = tmp.str();
      if (n.value < 0) {
        os << '(' << text << ')';
      } else {
        os << text;
      }
      break;
    }
    case Op::Variable:
      os << vars[n.var];
      break;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      char sym = n.op == Op::Add ? '+' : n.op == Op::Sub ? '-' : n.op == Op::Mul ? '*' : '/';
      int p = precedence(n.op);
      child(*n.a, precedence(n.a->op) < p);
      os << sym;
      // Right child needs parens at equal precedence too (left associativity).
      child(*n.b, precedence(n.b->op) <= p);
      break;
    }
    case Op::Pow:
      child(*n.a, precedence(n.a->op) <= precedence(Op::Pow));
      os << '^';
      child(*n.b, precedence(n.b->op) < precedence(Op::Pow));
      break;
    case Op::Neg:
      os << '-';
      child(*n.a, precedence(n.a->op) < precedence(Op::Neg));
      break;
    case Op::Abs:
      os << "abs(";
      print_node(*n.a, vars, os);
      os << ')';
      break;
    case Op::Exp:
      os << "exp(";
      print_node(*n.a, vars, os);
      os << ')';
      break;
  }
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr left = parse_product();
    for (;;) {
      if (eat('+'))
        left = make_node({Op::Add, 0, -1, left, parse_product()});
      else if (eat('-'))
        left = make_node({Op::Sub, 0, -1, left, parse_product()});
      else
        return left;
    }
  }

  NodePtr parse_product() {
    NodePtr left = parse_unary();
    for (;;) {
      if (eat('*'))
        left = make_node({Op::Mul, 0, -1, left, parse_unary()});
      else if (eat('/'))
        left = make_node({Op::Div, 0, -1, left, parse_unary()});
      else
        return left;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return make_node({Op::Neg, 0, -1, parse_unary(), nullptr});
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (eat('^')) {
      // Right associative; exponent may carry a unary sign.
      NodePtr expo = parse_unary_power();
      return make_node({Op::Pow, 0, -1, base, expo});
    }
    return base;
  }

  NodePtr parse_unary_power() {
    if (eat('-')) return make_node({Op::Neg, 0, -1, parse_unary_power(), nullptr});
    return parse_power();
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!eat(')')) throw ParseError("missing ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to something else
      }
    }
    try {
      return make_node({Op::Constant, std::stod(text_.substr(start, pos_ - start)), -1, nullptr,
                        nullptr});
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "exp" || name == "abs") {
      if (!eat('(')) throw ParseError("expected '(' after " + name, pos_);
      NodePtr arg = parse_sum();
      if (!eat(')')) throw ParseError("missing ')'", pos_);
      return make_node({name == "exp" ? Op::Exp : Op::Abs, 0, -1, arg, nullptr});
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name)
        return make_node({Op::Variable, 0, static_cast<int>(i), nullptr, nullptr});
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

double ExpressionTree::evaluate(std::span<const double> args) const {
  if (!root_) throw std::logic_error("evaluate: empty expression");
  if (args.size() < vars_.size()) throw std::logic_error("evaluate: missing arguments");
  return eval_node(*root_, args);
}

std::string ExpressionTree::print() const {
  if (!root_) return "";
  std::ostringstream os;
  print_node(*root_, vars_, os);
  return os.str();
}

ExpressionTree parse_expression(const std::string& text, const std::vector<std::string>& vars) {
  Parser parser(text, vars);
  return ExpressionTree(parser.run(), vars);
}

}  // namespace hamcert
