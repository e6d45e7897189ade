#include "slin/system.hpp"

#include <cctype>
#include <limits>
#include <optional>
#include <sstream>

namespace slin {

PolySystem::PolySystem(SpacePtr v, std::vector<Polynomial> r) : vars(std::move(v)), rhs(std::move(r)) {
  if (!vars) throw PreconditionError("system without variables");
  if (rhs.size() != vars->size()) {
    throw PreconditionError("system has " + std::to_string(vars->size()) + " variables but " +
                            std::to_string(rhs.size()) + " right-hand sides");
  }
  for (const auto& p : rhs) {
    if (!same_space(p.space(), vars)) {
      throw SpaceMismatchError("right-hand side is not over the system's variables");
    }
  }
}

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kSyntax: return "syntax error";
    case ParseErrorKind::kUndeclaredVariable: return "undeclared variable";
    case ParseErrorKind::kDuplicateVariable: return "duplicate variable";
    case ParseErrorKind::kDuplicateEquation: return "duplicate equation";
    case ParseErrorKind::kMissingEquation: return "missing equation";
    case ParseErrorKind::kNonPolynomial: return "non-polynomial expression";
  }
  return "parse error";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, std::string reason)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + to_string(kind) + ": " +
            reason),
      kind_(kind),
      line_(line),
      column_(column),
      reason_(std::move(reason)) {}

bool is_identifier(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '_')) return false;
  }
  return true;
}

namespace {

constexpr std::uint32_t kMaxExponent = 10000;

enum class Tok {
  kIdent,
  kInt,
  kDecimal,
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kCaret,
  kLParen,
  kRParen,
  kPrime,
  kEquals,
  kColon,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string_view text;
  std::size_t column = 1;  // 1-based
};

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

/// Lexes one line lazily; the parser pulls tokens on demand.
class Lexer {
 public:
  Lexer(std::string_view line, std::size_t line_no) : src_(line), line_no_(line_no) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }
  std::size_t line_no() const { return line_no_; }

  [[noreturn]] void fail(ParseErrorKind kind, std::size_t column, const std::string& reason) const {
    throw ParseError(kind, line_no_, column, reason);
  }

 private:
  void advance() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\r')) ++pos_;
    cur_.column = pos_ + 1;
    if (pos_ >= src_.size()) {
      cur_.kind = Tok::kEnd;
      cur_.text = {};
      return;
    }
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (is_ascii_alpha(c)) {
      while (pos_ < src_.size() &&
             (is_ascii_alpha(src_[pos_]) || is_ascii_digit(src_[pos_]) || src_[pos_] == '_')) {
        ++pos_;
      }
      cur_.kind = Tok::kIdent;
    } else if (is_ascii_digit(c)) {
      while (pos_ < src_.size() && is_ascii_digit(src_[pos_])) ++pos_;
      cur_.kind = Tok::kInt;
      if (pos_ < src_.size() && src_[pos_] == '.') {
        ++pos_;
        while (pos_ < src_.size() && is_ascii_digit(src_[pos_])) ++pos_;
        cur_.kind = Tok::kDecimal;
      }
    } else {
      ++pos_;
      switch (c) {
        case '+': cur_.kind = Tok::kPlus; break;
        case '-': cur_.kind = Tok::kMinus; break;
        case '*': cur_.kind = Tok::kStar; break;
        case '/': cur_.kind = Tok::kSlash; break;
        case '^': cur_.kind = Tok::kCaret; break;
        case '(': cur_.kind = Tok::kLParen; break;
        case ')': cur_.kind = Tok::kRParen; break;
        case '\'': cur_.kind = Tok::kPrime; break;
        case '=': cur_.kind = Tok::kEquals; break;
        case ':': cur_.kind = Tok::kColon; break;
        case '.':
          fail(ParseErrorKind::kSyntax, start + 1, "decimal literals are not supported; use a rational such as 3/2");
        default:
          if (static_cast<unsigned char>(c) >= 0x80) {
            fail(ParseErrorKind::kSyntax, start + 1, "non-ASCII character");
          }
          fail(ParseErrorKind::kSyntax, start + 1, std::string("unexpected character '") + c + "'");
      }
    }
    cur_.text = src_.substr(start, pos_ - start);
  }

  std::string_view src_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
  Token cur_;
};

/// expr  := term (('+' | '-') term)*
/// term  := unary (('*' | '/') unary)*
/// unary := ('-' | '+') unary | power
/// power := primary ('^' INT)?
/// primary := INT | IDENT | '(' expr ')'
class ExprParser {
 public:
  ExprParser(Lexer& lex, const SpacePtr& space) : lex_(lex), space_(space) {}

  Polynomial parse_expr() {
    Polynomial acc = parse_term();
    while (lex_.peek().kind == Tok::kPlus || lex_.peek().kind == Tok::kMinus) {
      const bool minus = lex_.take().kind == Tok::kMinus;
      Polynomial rhs = parse_term();
      if (minus) {
        acc -= rhs;
      } else {
        acc += rhs;
      }
    }
    return acc;
  }

 private:
  Polynomial parse_term() {
    Polynomial acc = parse_unary();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Tok::kStar) {
        lex_.take();
        acc = acc * parse_unary();
      } else if (t.kind == Tok::kSlash) {
        const std::size_t col = lex_.take().column;
        Polynomial divisor = parse_unary();
        if (!divisor.is_constant()) {
          lex_.fail(ParseErrorKind::kNonPolynomial, col, "division by a non-constant expression");
        }
        if (divisor.is_zero()) lex_.fail(ParseErrorKind::kNonPolynomial, col, "division by zero");
        const Rational inv = Rational(1) / divisor.constant_term();
        acc = inv * acc;
      } else if (t.kind == Tok::kIdent || t.kind == Tok::kInt || t.kind == Tok::kLParen ||
                 t.kind == Tok::kDecimal) {
        lex_.fail(ParseErrorKind::kSyntax, t.column,
                  "implicit multiplication is not supported; use '*'");
      } else {
        return acc;
      }
    }
  }

  Polynomial parse_unary() {
    if (lex_.peek().kind == Tok::kMinus) {
      lex_.take();
      return -parse_unary();
    }
    if (lex_.peek().kind == Tok::kPlus) {
      lex_.take();
      return parse_unary();
    }
    return parse_power();
  }

  Polynomial parse_power() {
    Polynomial base = parse_primary();
    if (lex_.peek().kind != Tok::kCaret) return base;
    lex_.take();
    const Token e = lex_.take();
    switch (e.kind) {
      case Tok::kInt: break;
      case Tok::kMinus:
        lex_.fail(ParseErrorKind::kNonPolynomial, e.column, "negative exponent");
      case Tok::kDecimal:
        lex_.fail(ParseErrorKind::kNonPolynomial, e.column, "fractional exponent");
      case Tok::kEnd:
        lex_.fail(ParseErrorKind::kSyntax, e.column, "missing exponent after '^'");
      default:
        lex_.fail(ParseErrorKind::kNonPolynomial, e.column,
                  "exponent must be a nonnegative integer literal");
    }
    if (e.text.size() > 6 || std::stoul(std::string(e.text)) > kMaxExponent) {
      lex_.fail(ParseErrorKind::kSyntax, e.column, "exponent too large");
    }
    const auto power = static_cast<std::uint32_t>(std::stoul(std::string(e.text)));
    if (lex_.peek().kind == Tok::kCaret) {
      lex_.fail(ParseErrorKind::kSyntax, lex_.peek().column,
                "chained '^' is ambiguous; use parentheses");
    }
    return pow(base, power);
  }

  Polynomial parse_primary() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Tok::kInt: {
        mpz_class value(std::string(t.text), 10);
        return Polynomial::constant(space_, Rational(mpq_class(value)));
      }
      case Tok::kIdent: {
        const auto idx = space_->index_of(t.text);
        if (!idx) {
          lex_.fail(ParseErrorKind::kUndeclaredVariable, t.column,
                    "variable '" + std::string(t.text) + "' is not declared");
        }
        return Polynomial::variable(space_, *idx);
      }
      case Tok::kLParen: {
        Polynomial inner = parse_expr();
        const Token close = lex_.take();
        if (close.kind != Tok::kRParen) lex_.fail(ParseErrorKind::kSyntax, close.column, "expected ')'");
        return inner;
      }
      case Tok::kDecimal:
        lex_.fail(ParseErrorKind::kSyntax, t.column,
                  "decimal literals are not supported; use a rational such as 3/2");
      case Tok::kEnd:
        lex_.fail(ParseErrorKind::kSyntax, t.column, "unexpected end of expression");
      default:
        lex_.fail(ParseErrorKind::kSyntax, t.column,
                  "unexpected '" + std::string(t.text) + "' in expression");
    }
  }

  Lexer& lex_;
  const SpacePtr& space_;
};

Polynomial parse_full_expression(Lexer& lex, const SpacePtr& space) {
  ExprParser parser(lex, space);
  Polynomial p = parser.parse_expr();
  const Token& rest = lex.peek();
  if (rest.kind != Tok::kEnd) {
    lex.fail(ParseErrorKind::kSyntax, rest.column, "unexpected '" + std::string(rest.text) + "'");
  }
  return p;
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

bool is_blank(std::string_view s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, const SpacePtr& space) {
  Lexer lex(text, 1);
  return parse_full_expression(lex, space);
}

PolySystem parse_system(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start <= text.size();) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }

  SpacePtr space;
  std::vector<std::optional<Polynomial>> rhs;
  std::vector<std::size_t> defined_at;
  std::size_t last_line = 1;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = strip_comment(lines[i]);
    if (is_blank(line)) continue;
    last_line = line_no;
    Lexer lex(line, line_no);

    if (!space) {
      const Token head = lex.take();
      if (head.kind != Tok::kIdent || head.text != "vars" || lex.peek().kind != Tok::kColon) {
        lex.fail(ParseErrorKind::kSyntax, head.column, "expected 'vars:' declaration first");
      }
      lex.take();
      std::vector<std::string> names;
      while (lex.peek().kind != Tok::kEnd) {
        const Token t = lex.take();
        if (t.kind != Tok::kIdent) lex.fail(ParseErrorKind::kSyntax, t.column, "expected variable name");
        for (const auto& n : names) {
          if (n == t.text) {
            lex.fail(ParseErrorKind::kDuplicateVariable, t.column,
                     "variable '" + std::string(t.text) + "' declared twice");
          }
        }
        names.emplace_back(t.text);
      }
      if (names.empty()) lex.fail(ParseErrorKind::kSyntax, lex.peek().column, "no variables declared");
      space = make_space(std::move(names));
      rhs.assign(space->size(), std::nullopt);
      defined_at.assign(space->size(), 0);
      continue;
    }

    const Token head = lex.take();
    if (head.kind != Tok::kIdent) lex.fail(ParseErrorKind::kSyntax, head.column, "expected equation `name' = expr`");
    if (head.text == "vars" && lex.peek().kind == Tok::kColon) {
      lex.fail(ParseErrorKind::kSyntax, head.column, "variables already declared");
    }
    const auto idx = space->index_of(head.text);
    if (lex.peek().kind != Tok::kPrime) lex.fail(ParseErrorKind::kSyntax, lex.peek().column, "expected \"'\" after variable name");
    if (!idx) {
      lex.fail(ParseErrorKind::kUndeclaredVariable, head.column,
               "equation for undeclared variable '" + std::string(head.text) + "'");
    }
    lex.take();
    if (lex.peek().kind != Tok::kEquals) lex.fail(ParseErrorKind::kSyntax, lex.peek().column, "expected '='");
    lex.take();
    if (rhs[*idx]) {
      lex.fail(ParseErrorKind::kDuplicateEquation, head.column,
               "second equation for '" + std::string(head.text) + "' (first on line " +
                   std::to_string(defined_at[*idx]) + ")");
    }
    rhs[*idx] = parse_full_expression(lex, space);
    defined_at[*idx] = line_no;
  }

  if (!space) throw ParseError(ParseErrorKind::kSyntax, last_line, 1, "missing 'vars:' declaration");
  std::vector<Polynomial> out;
  out.reserve(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    if (!rhs[i]) {
      throw ParseError(ParseErrorKind::kMissingEquation, last_line, 1,
                       "no equation for variable '" + space->name(i) + "'");
    }
    out.push_back(std::move(*rhs[i]));
  }
  return PolySystem(space, std::move(out));
}

std::string render_system(const PolySystem& sys) {
  std::ostringstream os;
  os << "vars:";
  for (const auto& n : sys.vars->names()) os << ' ' << n;
  os << '\n';
  for (std::size_t i = 0; i < sys.dimension(); ++i) {
    os << sys.vars->name(i) << "' = " << sys.rhs[i].str() << '\n';
  }
  return os.str();
}

}  // namespace slin
