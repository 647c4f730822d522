// Prefix expression grammar for user-supplied exact solutions:
//
//   expr   := number | "pi" | "x" | "y" | "z" | "(" op expr+ ")"
//   op     := "+" | "-" | "*" | "/" | "pow" | "sin" | "cos" | "exp"
//
// "+" and "*" take one or more arguments, "-" one (negation) or two, "/" and
// "pow" exactly two, the functions one. The exponent of pow must not depend
// on x, y or z.

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "c0ip/error.hpp"
#include "c0ip/jets.hpp"

namespace c0ip {

namespace {

struct Expr {
  enum class Kind { kNumber, kVariable, kAdd, kSub, kMul, kDiv, kPow, kSin, kCos, kExp };
  Kind kind = Kind::kNumber;
  double number = 0.0;
  int variable = 0;
  std::vector<std::shared_ptr<const Expr>> args;

  bool is_constant() const {
    if (kind == Kind::kVariable) return false;
    for (const auto& a : args)
      if (!a->is_constant()) return false;
    return true;
  }

  double constant_value() const {
    switch (kind) {
      case Kind::kNumber: return number;
      case Kind::kAdd: {
        double s = 0.0;
        for (const auto& a : args) s += a->constant_value();
        return s;
      }
      case Kind::kSub:
        return args.size() == 1 ? -args[0]->constant_value() : args[0]->constant_value() - args[1]->constant_value();
      case Kind::kMul: {
        double s = 1.0;
        for (const auto& a : args) s *= a->constant_value();
        return s;
      }
      case Kind::kDiv: return args[0]->constant_value() / args[1]->constant_value();
      case Kind::kPow: return std::pow(args[0]->constant_value(), args[1]->constant_value());
      case Kind::kSin: return std::sin(args[0]->constant_value());
      case Kind::kCos: return std::cos(args[0]->constant_value());
      case Kind::kExp: return std::exp(args[0]->constant_value());
      case Kind::kVariable: break;
    }
    throw EvaluationError("expression: not a constant");
  }

  Jet eval(std::span<const Jet> vars) const {
    const Jet& proto = vars[0];
    switch (kind) {
      case Kind::kNumber: return Jet::constant(proto.space_ptr(), proto.center(), number);
      case Kind::kVariable: return vars[variable];
      case Kind::kAdd: {
        Jet s = args[0]->eval(vars);
        for (size_t i = 1; i < args.size(); ++i) s += args[i]->eval(vars);
        return s;
      }
      case Kind::kSub:
        return args.size() == 1 ? -args[0]->eval(vars) : args[0]->eval(vars) - args[1]->eval(vars);
      case Kind::kMul: {
        Jet s = args[0]->eval(vars);
        for (size_t i = 1; i < args.size(); ++i) s = s * args[i]->eval(vars);
        return s;
      }
      case Kind::kDiv: return args[0]->eval(vars) / args[1]->eval(vars);
      case Kind::kPow: return pow(args[0]->eval(vars), args[1]->constant_value());
      case Kind::kSin: return sin(args[0]->eval(vars));
      case Kind::kCos: return cos(args[0]->eval(vars));
      case Kind::kExp: return exp(args[0]->eval(vars));
    }
    throw EvaluationError("expression: bad node");
  }
};

class Parser {
 public:
  Parser(const std::string& text, int dim) : text_(text), dim_(dim) {}

  std::shared_ptr<const Expr> parse() {
    auto e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw EvaluationError("expression parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string token() {
    skip_space();
    const size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')')
      ++pos_;
    if (start == pos_) fail("expected a token");
    return text_.substr(start, pos_ - start);
  }

  std::shared_ptr<const Expr> parse_expr() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    auto e = std::make_shared<Expr>();
    if (text_[pos_] == '(') {
      ++pos_;
      const std::string op = token();
      using K = Expr::Kind;
      if (op == "+") e->kind = K::kAdd;
      else if (op == "-") e->kind = K::kSub;
      else if (op == "*") e->kind = K::kMul;
      else if (op == "/") e->kind = K::kDiv;
      else if (op == "pow") e->kind = K::kPow;
      else if (op == "sin") e->kind = K::kSin;
      else if (op == "cos") e->kind = K::kCos;
      else if (op == "exp") e->kind = K::kExp;
      else fail("unknown operator '" + op + "'");
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) fail("missing ')'");
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        e->args.push_back(parse_expr());
      }
      const size_t n = e->args.size();
      bool ok = false;
      switch (e->kind) {
        case K::kAdd:
        case K::kMul: ok = n >= 1; break;
        case K::kSub: ok = n == 1 || n == 2; break;
        case K::kDiv:
        case K::kPow: ok = n == 2; break;
        default: ok = n == 1; break;
      }
      if (!ok) fail("wrong number of arguments for '" + op + "'");
      if (e->kind == K::kPow && !e->args[1]->is_constant()) fail("pow exponent must be constant");
      return e;
    }
    const std::string t = token();
    if (t == "pi") {
      e->number = std::numbers::pi;
    } else if (t == "x" || t == "y" || t == "z") {
      e->kind = Expr::Kind::kVariable;
      e->variable = t[0] - 'x';
      if (e->variable >= dim_) fail("variable '" + t + "' not available in dimension " + std::to_string(dim_));
    } else {
      size_t used = 0;
      try {
        e->number = std::stod(t, &used);
      } catch (const std::exception&) {
        fail("bad number '" + t + "'");
      }
      if (used != t.size()) fail("bad number '" + t + "'");
    }
    return e;
  }

  const std::string& text_;
  int dim_;
  size_t pos_ = 0;
};

}  // namespace

ExactSolution make_custom(int dim, const std::string& expression) {
  if (dim < 1 || dim > kMaxDim) throw ConfigError("custom solution: dimension must be 1, 2 or 3");
  auto tree = Parser(expression, dim).parse();
  auto fn = [tree](std::span<const Jet> vars) { return tree->eval(vars); };
  return ExactSolution(SolutionId::kCustom, dim, "custom", fn, [](int) { return false; });
}

}  // namespace c0ip
