#include <cctype>

#include "annote/error.hpp"
#include "annote/query.hpp"

namespace annote {
namespace {

enum class Tok { LParen, RParen, LBracket, RBracket, Comma, String, And, Or, Not, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;  // unescaped contents for String
};

bool keyword_is(std::string_view word, std::string_view a, std::string_view b) {
  auto eq = [&](std::string_view k) {
    if (word.size() != k.size()) return false;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(word[i])) != k[i]) return false;
    }
    return true;
  };
  return eq(a) || eq(b);
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t at = i;
    switch (c) {
      case '(': out.push_back({Tok::LParen, at, {}}); ++i; continue;
      case ')': out.push_back({Tok::RParen, at, {}}); ++i; continue;
      case '[': out.push_back({Tok::LBracket, at, {}}); ++i; continue;
      case ']': out.push_back({Tok::RBracket, at, {}}); ++i; continue;
      case ',': out.push_back({Tok::Comma, at, {}}); ++i; continue;
      default: break;
    }
    if (c == '"') {
      std::string s;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        const char d = text[i++];
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\') {
          if (i >= text.size()) break;
          const char e = text[i++];
          if (e != '"' && e != '\\') throw SyntaxError(i - 2, "escape \\\" or \\\\");
          s.push_back(e);
        } else {
          s.push_back(d);
        }
      }
      if (!closed) throw SyntaxError(at, "closing '\"'");
      out.push_back({Tok::String, at, std::move(s)});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
      const auto word = text.substr(at, i - at);
      if (keyword_is(word, "ET", "AND")) {
        out.push_back({Tok::And, at, {}});
      } else if (keyword_is(word, "OU", "OR")) {
        out.push_back({Tok::Or, at, {}});
      } else if (keyword_is(word, "NON", "NOT")) {
        out.push_back({Tok::Not, at, {}});
      } else {
        throw SyntaxError(at, "operator ET/OU/NON or '('");
      }
      continue;
    }
    throw SyntaxError(at, "'(', '[', string or operator");
  }
  out.push_back({Tok::End, text.size(), {}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  QueryExpr parse() {
    auto expr = parse_or();
    if (peek().kind != Tok::End) throw SyntaxError(peek().offset, "end of query or ET/OU");
    return expr;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const auto i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) throw SyntaxError(peek().offset, std::string(what));
    return tokens_[pos_++];
  }

  QueryExpr parse_or() {
    std::vector<QueryExpr> operands;
    operands.push_back(parse_and());
    while (peek().kind == Tok::Or) {
      ++pos_;
      operands.push_back(parse_and());
    }
    return operands.size() == 1 ? std::move(operands.front()) : QueryExpr::any_of(std::move(operands));
  }

  QueryExpr parse_and() {
    std::vector<QueryExpr> operands;
    operands.push_back(parse_unary());
    while (peek().kind == Tok::And) {
      ++pos_;
      operands.push_back(parse_unary());
    }
    return operands.size() == 1 ? std::move(operands.front()) : QueryExpr::all_of(std::move(operands));
  }

  QueryExpr parse_unary() {
    if (peek().kind == Tok::Not) {
      ++pos_;
      return QueryExpr::negate(parse_unary());
    }
    if (peek().kind != Tok::LParen) throw SyntaxError(peek().offset, "'(' or NON");
    const bool criterion_ahead = peek(1).kind == Tok::LBracket ||
                                 (peek(1).kind == Tok::String && peek(2).kind == Tok::Comma);
    if (criterion_ahead) return parse_criterion();
    ++pos_;
    auto inner = parse_or();
    expect(Tok::RParen, "')'");
    return inner;
  }

  QueryExpr parse_criterion() {
    expect(Tok::LParen, "'('");
    Criterion c;
    if (peek().kind == Tok::String) {
      const auto& tok = tokens_[pos_++];
      try {
        c.attribute = normalize_attribute(tok.text);
      } catch (const Error&) {
        throw SyntaxError(tok.offset, "non-empty attribute");
      }
      expect(Tok::Comma, "','");
    }
    expect(Tok::LBracket, "'['");
    if (peek().kind != Tok::String) throw SyntaxError(peek().offset, "at least one value string");
    for (;;) {
      const auto& tok = expect(Tok::String, "value string");
      try {
        c.values.push_back(normalize_term(tok.text));
      } catch (const Error&) {
        throw SyntaxError(tok.offset, "non-empty value");
      }
      if (peek().kind != Tok::Comma) break;
      ++pos_;
    }
    expect(Tok::RBracket, "']' or ','");
    expect(Tok::RParen, "')'");
    return QueryExpr::leaf(std::move(c));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

void append_quoted(std::string& out, std::string_view text) {
  out.push_back('"');
  for (const char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
}

void print_into(std::string& out, const QueryExpr& expr);

void print_operand(std::string& out, const QueryExpr& expr) {
  if (expr.is_leaf()) {
    print_into(out, expr);
    return;
  }
  out.push_back('(');
  print_into(out, expr);
  out.push_back(')');
}

void print_into(std::string& out, const QueryExpr& expr) {
  switch (expr.kind()) {
    case QueryExpr::Kind::Leaf: {
      const auto& c = expr.criterion();
      out.push_back('(');
      if (c.attribute) {
        append_quoted(out, c.attribute->text());
        out += ", ";
      }
      out.push_back('[');
      for (std::size_t i = 0; i < c.values.size(); ++i) {
        if (i > 0) out += ", ";
        append_quoted(out, c.values[i].text());
      }
      out += "])";
      return;
    }
    case QueryExpr::Kind::And:
    case QueryExpr::Kind::Or: {
      const std::string_view op = expr.kind() == QueryExpr::Kind::And ? " ET " : " OU ";
      for (std::size_t i = 0; i < expr.children().size(); ++i) {
        if (i > 0) out += op;
        print_operand(out, expr.children()[i]);
      }
      return;
    }
    case QueryExpr::Kind::Not:
      out += "NON ";
      print_operand(out, expr.children().front());
      return;
  }
}

}  // namespace

QueryExpr parse_query(std::string_view text) { return Parser(tokenize(text)).parse(); }

std::string print_query(const QueryExpr& expr) {
  std::string out;
  print_into(out, expr);
  return out;
}

}  // namespace annote
