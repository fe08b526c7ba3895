#include "opdomain/exprlang.hpp"

#include <cctype>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace opdomain::exprlang {

namespace {

struct Token {
  enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  std::size_t offset;
  double number = 0;
  std::string text;
};

const char* kind_name(Token::Kind k) {
  switch (k) {
    case Token::Kind::Number: return "number";
    case Token::Kind::Ident: return "identifier";
    case Token::Kind::Plus: return "'+'";
    case Token::Kind::Minus: return "'-'";
    case Token::Kind::Star: return "'*'";
    case Token::Kind::Slash: return "'/'";
    case Token::Kind::Caret: return "'^'";
    case Token::Kind::LParen: return "'('";
    case Token::Kind::RParen: return "')'";
    case Token::Kind::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Token::Kind::End, start};
    char c = src_[pos_];
    switch (c) {
      case '+': ++pos_; return {Token::Kind::Plus, start};
      case '-': ++pos_; return {Token::Kind::Minus, start};
      case '*': ++pos_; return {Token::Kind::Star, start};
      case '/': ++pos_; return {Token::Kind::Slash, start};
      case '^': ++pos_; return {Token::Kind::Caret, start};
      case '(': ++pos_; return {Token::Kind::LParen, start};
      case ')': ++pos_; return {Token::Kind::RParen, start};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      Token t{Token::Kind::Ident, start};
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    throw ParseError(start, "token", "unexpected character '" + std::string(1, c) +
                                         "' at byte " + std::to_string(start));
  }

 private:
  Token lex_number(std::size_t start) {
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = save;  // 'e' was an identifier boundary, not an exponent
      }
    }
    Token t{Token::Kind::Number, start};
    t.text = std::string(src_.substr(start, pos_ - start));
    try {
      t.number = std::stod(t.text);
    } catch (const std::exception&) {
      throw ParseError(start, "number", "malformed number at byte " + std::to_string(start));
    }
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::optional<Func> func_by_name(const std::string& name) {
  if (name == "abs") return Func::Abs;
  if (name == "sqrt") return Func::Sqrt;
  if (name == "exp") return Func::Exp;
  if (name == "sin") return Func::Sin;
  if (name == "cos") return Func::Cos;
  if (name == "conj") return Func::Conj;
  if (name == "re") return Func::Re;
  if (name == "im") return Func::Im;
  return std::nullopt;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Abs: return "abs";
    case Func::Sqrt: return "sqrt";
    case Func::Exp: return "exp";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Conj: return "conj";
    case Func::Re: return "re";
    case Func::Im: return "im";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  ExprPtr parse_all() {
    ExprPtr e = parse_expr();
    expect(Token::Kind::End);
    return e;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  void expect(Token::Kind k) {
    if (cur_.kind != k)
      throw ParseError(cur_.offset, kind_name(k),
                       std::string("expected ") + kind_name(k) + " but found " +
                           kind_name(cur_.kind) + " at byte " + std::to_string(cur_.offset));
    if (k != Token::Kind::End) advance();
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    while (cur_.kind == Token::Kind::Plus || cur_.kind == Token::Kind::Minus) {
      BinOp op = cur_.kind == Token::Kind::Plus ? BinOp::Add : BinOp::Sub;
      advance();
      ExprPtr rhs = parse_term();
      lhs = std::make_shared<Expr>(Expr{Expr::Binary{op, lhs, rhs}});
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (cur_.kind == Token::Kind::Star || cur_.kind == Token::Kind::Slash) {
      BinOp op = cur_.kind == Token::Kind::Star ? BinOp::Mul : BinOp::Div;
      advance();
      ExprPtr rhs = parse_unary();
      lhs = std::make_shared<Expr>(Expr{Expr::Binary{op, lhs, rhs}});
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (cur_.kind == Token::Kind::Minus) {
      advance();
      ExprPtr inner = parse_unary();
      return std::make_shared<Expr>(Expr{Expr::Neg{inner}});
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    while (cur_.kind == Token::Kind::Caret) {
      advance();
      bool neg = false;
      if (cur_.kind == Token::Kind::Minus) {
        neg = true;
        advance();
      }
      if (cur_.kind != Token::Kind::Number)
        throw ParseError(cur_.offset, "integer exponent",
                         "expected integer exponent after '^' at byte " +
                             std::to_string(cur_.offset));
      double v = cur_.number;
      long e = static_cast<long>(v);
      if (static_cast<double>(e) != v)
        throw ParseError(cur_.offset, "integer exponent",
                         "exponent must be an integer at byte " + std::to_string(cur_.offset));
      advance();
      base = std::make_shared<Expr>(Expr{Expr::Pow{base, neg ? -e : e}});
    }
    return base;
  }

  ExprPtr parse_primary() {
    switch (cur_.kind) {
      case Token::Kind::Number: {
        cplx v(cur_.number, 0.0);
        advance();
        return std::make_shared<Expr>(Expr{Expr::Literal{v}});
      }
      case Token::Kind::Ident: {
        std::string name = cur_.text;
        std::size_t off = cur_.offset;
        advance();
        if (name == "i") return std::make_shared<Expr>(Expr{Expr::Literal{cplx(0.0, 1.0)}});
        if (auto f = func_by_name(name)) {
          if (cur_.kind != Token::Kind::LParen)
            throw ParseError(cur_.offset, "'('",
                             "function '" + name + "' needs an argument list at byte " +
                                 std::to_string(off));
          advance();
          ExprPtr arg = parse_expr();
          expect(Token::Kind::RParen);
          return std::make_shared<Expr>(Expr{Expr::Call{*f, arg}});
        }
        return std::make_shared<Expr>(Expr{Expr::Var{name}});
      }
      case Token::Kind::LParen: {
        advance();
        ExprPtr e = parse_expr();
        expect(Token::Kind::RParen);
        return e;
      }
      default:
        throw ParseError(cur_.offset, "number, identifier or '('",
                         std::string("expected an operand but found ") + kind_name(cur_.kind) +
                             " at byte " + std::to_string(cur_.offset));
    }
  }

  Lexer lexer_;
  Token cur_{Token::Kind::End, 0};
};

cplx int_pow(cplx base, long e) {
  if (e < 0) {
    if (base == cplx(0.0, 0.0)) throw EvalError("zero raised to a negative exponent");
    return 1.0 / int_pow(base, -e);
  }
  cplx acc(1.0, 0.0);
  cplx b = base;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Expr::Neg>) {
          collect_vars(*n.operand, out);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_vars(*n.lhs, out);
          collect_vars(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, Expr::Pow>) {
          collect_vars(*n.base, out);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          collect_vars(*n.arg, out);
        }
      },
      e.node);
}

}  // namespace

ExprPtr parse(std::string_view src) { return Parser(src).parse_all(); }

cplx eval(const Expr& e, const Bindings& bindings) {
  return std::visit(
      [&](const auto& n) -> cplx {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          auto it = bindings.find(n.name);
          if (it == bindings.end()) throw EvalError("unbound variable '" + n.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<T, Expr::Neg>) {
          return -eval(*n.operand, bindings);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          cplx a = eval(*n.lhs, bindings);
          cplx b = eval(*n.rhs, bindings);
          switch (n.op) {
            case BinOp::Add: return a + b;
            case BinOp::Sub: return a - b;
            case BinOp::Mul: return a * b;
            case BinOp::Div:
              if (b == cplx(0.0, 0.0)) {
                std::ostringstream os;
                os << "division by zero (bindings:";
                for (const auto& [k, v] : bindings) os << ' ' << k << '=' << v;
                os << ')';
                throw EvalError(os.str());
              }
              return a / b;
          }
          return {};
        } else if constexpr (std::is_same_v<T, Expr::Pow>) {
          return int_pow(eval(*n.base, bindings), n.exponent);
        } else {
          cplx a = eval(*n.arg, bindings);
          switch (n.fn) {
            case Func::Abs: return cplx(std::abs(a), 0.0);
            case Func::Sqrt: return std::sqrt(a);
            case Func::Exp: return std::exp(a);
            case Func::Sin: return std::sin(a);
            case Func::Cos: return std::cos(a);
            case Func::Conj: return std::conj(a);
            case Func::Re: return cplx(a.real(), 0.0);
            case Func::Im: return cplx(a.imag(), 0.0);
          }
          return {};
        }
      },
      e.node);
}

std::string print(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          if (n.value == cplx(0.0, 1.0)) return "i";
          if (n.value.imag() == 0.0) {
            double re = n.value.real();
            if (re < 0) return "(-" + format_double(-re) + ")";
            return format_double(re);
          }
          return "(" + format_double(n.value.real()) + "+" + format_double(n.value.imag()) +
                 "*i)";
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, Expr::Neg>) {
          return "(-" + print(*n.operand) + ")";
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          const char* op = n.op == BinOp::Add   ? "+"
                           : n.op == BinOp::Sub ? "-"
                           : n.op == BinOp::Mul ? "*"
                                                : "/";
          return "(" + print(*n.lhs) + op + print(*n.rhs) + ")";
        } else if constexpr (std::is_same_v<T, Expr::Pow>) {
          std::string exp = n.exponent < 0 ? "-" + std::to_string(-n.exponent)
                                           : std::to_string(n.exponent);
          return print(*n.base) + "^" + exp;
        } else {
          return std::string(func_name(n.fn)) + "(" + print(*n.arg) + ")";
        }
      },
      e.node);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Expr::Literal>) {
          return na.value == nb.value;
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return na.name == nb.name;
        } else if constexpr (std::is_same_v<T, Expr::Neg>) {
          return structurally_equal(*na.operand, *nb.operand);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return na.op == nb.op && structurally_equal(*na.lhs, *nb.lhs) &&
                 structurally_equal(*na.rhs, *nb.rhs);
        } else if constexpr (std::is_same_v<T, Expr::Pow>) {
          return na.exponent == nb.exponent && structurally_equal(*na.base, *nb.base);
        } else {
          return na.fn == nb.fn && structurally_equal(*na.arg, *nb.arg);
        }
      },
      a.node);
}

std::vector<std::string> free_variables(const Expr& e) {
  std::set<std::string> vars;
  collect_vars(e, vars);
  return {vars.begin(), vars.end()};
}

}  // namespace opdomain::exprlang
