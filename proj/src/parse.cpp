#include "refineguard/parse.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <vector>

namespace refineguard::lang {

namespace {

enum class Tok {
  Name, Int, Float, Str,
  LParen, RParen, LBracket, RBracket, Comma, Colon, Dot, Backtick,
  Plus, Minus, Star, Slash, Percent, StarStar,
  Lt, Le, Gt, Ge, EqEq, Ne,
  Implies, Iff,
  KwAnd, KwOr, KwNot, KwAll, KwAny, KwFor, KwIn, KwTrue, KwFalse, KwNone,
  End,
};

struct Token {
  Tok kind;
  std::string text;  // names, string bodies, number spellings
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line_, column_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        column_ = 1;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++column_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, column_);
  }

  bool starts_with(const char* s) const { return src_.compare(pos_, std::strlen(s), s) == 0; }

  Token take(Tok kind, std::size_t width) {
    Token t{kind, src_.substr(pos_, width), line_, column_};
    pos_ += width;
    column_ += static_cast<int>(width);
    return t;
  }

  Token next() {
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (c == '_' || std::isalpha(static_cast<unsigned char>(c))) return name();
    if (c == '\'' || c == '"') return string_literal(c);

    if (starts_with("<-->")) return take(Tok::Iff, 4);
    if (starts_with("-->")) return take(Tok::Implies, 3);
    if (starts_with("**")) return take(Tok::StarStar, 2);
    if (starts_with("==")) return take(Tok::EqEq, 2);
    if (starts_with("!=")) return take(Tok::Ne, 2);
    if (starts_with("<=")) return take(Tok::Le, 2);
    if (starts_with(">=")) return take(Tok::Ge, 2);

    switch (c) {
      case '(': return take(Tok::LParen, 1);
      case ')': return take(Tok::RParen, 1);
      case '[': return take(Tok::LBracket, 1);
      case ']': return take(Tok::RBracket, 1);
      case ',': return take(Tok::Comma, 1);
      case ':': return take(Tok::Colon, 1);
      case '.': return take(Tok::Dot, 1);
      case '`': return take(Tok::Backtick, 1);
      case '+': return take(Tok::Plus, 1);
      case '-': return take(Tok::Minus, 1);
      case '*': return take(Tok::Star, 1);
      case '/': return take(Tok::Slash, 1);
      case '%': return take(Tok::Percent, 1);
      case '<': return take(Tok::Lt, 1);
      case '>': return take(Tok::Gt, 1);
      default: fail(fmt::format("unexpected character '{}'", c));
    }
  }

  Token number() {
    std::size_t start = pos_;
    int col = column_;
    bool is_float = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    if (pos_ < src_.size() && src_[pos_] == '.' && pos_ + 1 < src_.size() &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      is_float = true;
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      int mark_col = column_;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        is_float = true;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          advance();
      } else {  // not an exponent after all (e.g. "2e" would be name-adjacent)
        pos_ = mark;
        column_ = mark_col;
      }
    }
    return {is_float ? Tok::Float : Tok::Int, src_.substr(start, pos_ - start), line_, col};
  }

  Token name() {
    std::size_t start = pos_;
    int col = column_;
    while (pos_ < src_.size() &&
           (src_[pos_] == '_' || std::isalnum(static_cast<unsigned char>(src_[pos_]))))
      advance();
    std::string word = src_.substr(start, pos_ - start);
    Tok kind = Tok::Name;
    if (word == "and") kind = Tok::KwAnd;
    else if (word == "or") kind = Tok::KwOr;
    else if (word == "not") kind = Tok::KwNot;
    else if (word == "all") kind = Tok::KwAll;
    else if (word == "any") kind = Tok::KwAny;
    else if (word == "for") kind = Tok::KwFor;
    else if (word == "in") kind = Tok::KwIn;
    else if (word == "True") kind = Tok::KwTrue;
    else if (word == "False") kind = Tok::KwFalse;
    else if (word == "None") kind = Tok::KwNone;
    return {kind, word, line_, col};
  }

  Token string_literal(char quote) {
    int col = column_;
    advance();  // opening quote
    std::string body;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') fail("unterminated string literal");
      char c = src_[pos_];
      if (c == quote) {
        advance();
        return {Tok::Str, body, line_, col};
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) fail("unterminated string literal");
        char esc = src_[pos_];
        switch (esc) {
          case 'n': body += '\n'; break;
          case 't': body += '\t'; break;
          case '\\': body += '\\'; break;
          case '\'': body += '\''; break;
          case '"': body += '"'; break;
          default: fail(fmt::format("unknown escape '\\{}'", esc));
        }
        advance();
      } else {
        body += c;
        advance();
      }
    }
  }

  void advance() {
    ++pos_;
    ++column_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ExprPtr run() {
    ExprPtr e = iff_expr();
    expect(Tok::End, "expected end of condition");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    advance();
    return true;
  }

  const Token& expect(Tok kind, const std::string& message) {
    if (peek().kind != kind) fail(message);
    return advance();
  }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : fmt::format("'{}'", t.text);
    throw ParseError(fmt::format("{} (found {})", message, got), t.line, t.column);
  }

  ExprPtr iff_expr() {
    ExprPtr lhs = implies_expr();
    while (accept(Tok::Iff))
      lhs = make_expr({Binary{BinaryOp::Iff, lhs, implies_expr()}});
    return lhs;
  }

  ExprPtr implies_expr() {
    ExprPtr lhs = or_expr();
    if (accept(Tok::Implies))
      return make_expr({Binary{BinaryOp::Implies, lhs, implies_expr()}});
    return lhs;
  }

  ExprPtr or_expr() {
    ExprPtr lhs = and_expr();
    while (accept(Tok::KwOr)) lhs = make_expr({Binary{BinaryOp::Or, lhs, and_expr()}});
    return lhs;
  }

  ExprPtr and_expr() {
    ExprPtr lhs = not_expr();
    while (accept(Tok::KwAnd)) lhs = make_expr({Binary{BinaryOp::And, lhs, not_expr()}});
    return lhs;
  }

  ExprPtr not_expr() {
    if (accept(Tok::KwNot)) return make_expr({Unary{UnaryOp::Not, not_expr()}});
    return comparison();
  }

  std::optional<BinaryOp> comparison_op() {
    switch (peek().kind) {
      case Tok::Lt: return BinaryOp::Lt;
      case Tok::Le: return BinaryOp::Le;
      case Tok::Gt: return BinaryOp::Gt;
      case Tok::Ge: return BinaryOp::Ge;
      case Tok::EqEq: return BinaryOp::Eq;
      case Tok::Ne: return BinaryOp::Ne;
      default: return std::nullopt;
    }
  }

  ExprPtr comparison() {
    ExprPtr lhs = arith();
    auto op = comparison_op();
    if (!op) return lhs;
    advance();
    ExprPtr rhs = arith();
    if (comparison_op()) fail("comparisons do not chain; parenthesize");
    return make_expr({Binary{*op, lhs, rhs}});
  }

  ExprPtr arith() {
    ExprPtr lhs = term();
    while (true) {
      if (accept(Tok::Plus))
        lhs = make_expr({Binary{BinaryOp::Add, lhs, term()}});
      else if (accept(Tok::Minus))
        lhs = make_expr({Binary{BinaryOp::Sub, lhs, term()}});
      else
        return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (true) {
      if (accept(Tok::Star))
        lhs = make_expr({Binary{BinaryOp::Mul, lhs, factor()}});
      else if (accept(Tok::Slash))
        lhs = make_expr({Binary{BinaryOp::Div, lhs, factor()}});
      else if (accept(Tok::Percent))
        lhs = make_expr({Binary{BinaryOp::Mod, lhs, factor()}});
      else
        return lhs;
    }
  }

  ExprPtr factor() {
    if (accept(Tok::Minus)) return make_expr({Unary{UnaryOp::Neg, factor()}});
    if (accept(Tok::Plus)) return make_expr({Unary{UnaryOp::Pos, factor()}});
    return power();
  }

  ExprPtr power() {
    ExprPtr base = postfix();
    if (accept(Tok::StarStar))
      return make_expr({Binary{BinaryOp::Pow, base, factor()}});
    return base;
  }

  ExprPtr postfix() {
    ExprPtr e = atom();
    while (true) {
      if (accept(Tok::Dot)) {
        const Token& attr = expect(Tok::Name, "expected attribute name after '.'");
        e = make_expr({Attr{e, attr.text}});
      } else if (peek().kind == Tok::LBracket) {
        advance();
        e = subscript(e);
      } else {
        return e;
      }
    }
  }

  // Parses the inside of obj[...] after the opening bracket.
  ExprPtr subscript(ExprPtr object) {
    ExprPtr start, stop, step;
    bool is_slice = false;
    if (peek().kind != Tok::Colon) start = iff_expr();
    if (accept(Tok::Colon)) {
      is_slice = true;
      if (peek().kind != Tok::Colon && peek().kind != Tok::RBracket) stop = iff_expr();
      if (accept(Tok::Colon)) {
        if (peek().kind != Tok::RBracket) step = iff_expr();
      }
    }
    expect(Tok::RBracket, "expected ']'");
    if (is_slice) return make_expr({SliceExpr{std::move(object), start, stop, step}});
    return make_expr({Index{std::move(object), start}});
  }

  ExprPtr quantifier(bool is_all, const Token& keyword) {
    expect(Tok::LParen, fmt::format("expected '(' after {}", keyword.text));
    ExprPtr body = iff_expr();
    if (peek().kind != Tok::KwFor)
      throw ParseError(fmt::format("{}(...) requires a 'for' clause", keyword.text),
                       keyword.line, keyword.column);
    advance();
    const Token& var = expect(Tok::Name, "expected a variable name after 'for'");
    expect(Tok::KwIn, "expected 'in'");
    ExprPtr iterable = iff_expr();
    expect(Tok::RParen, "expected ')'");
    return make_expr({Quantifier{is_all, var.text, iterable, body}});
  }

  ExprPtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        advance();
        return make_expr({Literal{Value::integer(BigInt(t.text))}});
      }
      case Tok::Float: {
        advance();
        // strtod saturates to +inf / 0 on over/underflow, matching how an
        // extreme literal behaves in the host language.
        return make_expr({Literal{Value::real(std::strtod(t.text.c_str(), nullptr))}});
      }
      case Tok::Str: {
        advance();
        return make_expr({Literal{Value::text(t.text)}});
      }
      case Tok::KwTrue:
        advance();
        return make_expr({Literal{Value::boolean(true)}});
      case Tok::KwFalse:
        advance();
        return make_expr({Literal{Value::boolean(false)}});
      case Tok::KwNone:
        advance();
        return make_expr({Literal{Value::none()}});
      case Tok::KwAll:
      case Tok::KwAny: {
        advance();
        return quantifier(t.kind == Tok::KwAll, t);
      }
      case Tok::Name: {
        advance();
        if (peek().kind == Tok::LParen) {
          advance();
          std::vector<ExprPtr> args;
          if (peek().kind != Tok::RParen) {
            args.push_back(iff_expr());
            while (accept(Tok::Comma)) args.push_back(iff_expr());
          }
          expect(Tok::RParen, "expected ')'");
          return make_expr({CallExpr{t.text, std::move(args)}});
        }
        int depth = 0;
        while (accept(Tok::Backtick)) ++depth;
        return make_expr({NameRef{t.text, depth}});
      }
      case Tok::LParen: {
        advance();
        ExprPtr inner = iff_expr();
        expect(Tok::RParen, "expected ')'");
        return inner;
      }
      default:
        fail("expected an expression");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_condition(const std::string& source) {
  Lexer lexer(source);
  Parser parser(lexer.run());
  return parser.run();
}

}  // namespace refineguard::lang
