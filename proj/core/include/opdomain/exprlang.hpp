#pragma once

// Minimal arithmetic expression language used for entry generators and
// coefficient functions.  Complex-valued, variables are plain identifiers
// (k, l for matrix entries; x1..xm for coefficient functions), `i` is the
// imaginary unit.  Exponents are integer literals only.
//
// Grammar (precedence low to high):
//   expr    := term (('+'|'-') term)*           left associative
//   term    := unary (('*'|'/') unary)*         left associative
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] integer)*
//   primary := number | 'i' | func '(' expr ')' | ident | '(' expr ')'
//   func    := abs | sqrt | exp | sin | cos | conj | re | im

#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace opdomain::exprlang {

using cplx = std::complex<double>;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinOp { Add, Sub, Mul, Div };
enum class Func { Abs, Sqrt, Exp, Sin, Cos, Conj, Re, Im };

struct Expr {
  struct Literal {
    cplx value;
  };
  struct Var {
    std::string name;
  };
  struct Neg {
    ExprPtr operand;
  };
  struct Binary {
    BinOp op;
    ExprPtr lhs, rhs;
  };
  struct Pow {
    ExprPtr base;
    long exponent;
  };
  struct Call {
    Func fn;
    ExprPtr arg;
  };
  std::variant<Literal, Var, Neg, Binary, Pow, Call> node;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& what)
      : std::runtime_error(what), offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Bindings = std::map<std::string, cplx>;

ExprPtr parse(std::string_view src);
std::string print(const Expr& e);
cplx eval(const Expr& e, const Bindings& bindings);

inline cplx eval(const ExprPtr& e, const Bindings& b) { return eval(*e, b); }

bool structurally_equal(const Expr& a, const Expr& b);

// Names of the free variables occurring in the expression, sorted.
std::vector<std::string> free_variables(const Expr& e);

}  // namespace opdomain::exprlang
