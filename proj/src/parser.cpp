#include "dbel/parser.hpp"

#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace dbel {

namespace {

enum class Tok {
  Ident,
  Number,        // digits, optionally preceded by '-'
  Tilde,
  Amp,
  Pipe,
  Arrow,         // ->
  Iff,           // <->
  LParen,
  RParen,
  LBracket,
  RBracket,
  LAngle,
  RAngle,
  Comma,
  End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "integer";
    case Tok::Tilde: return "'~'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LAngle: return "'<'";
    case Tok::RAngle: return "'>'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok tok;
  std::string text;
  int line;
  int column;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto push = [&](Tok t, std::string text, int l, int c) {
    out.push_back(Token{t, std::move(text), l, c});
  };
  while (i < src.size()) {
    char c = src[i];
    int l = line, co = col;
    auto advance = [&](std::size_t n) {
      for (std::size_t k = 0; k < n; ++k) {
        if (src[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
        ++i;
      }
    };
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string text;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        text += src[i];
        advance(1);
      }
      push(Tok::Ident, std::move(text), l, co);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string text;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        text += src[i];
        advance(1);
      }
      push(Tok::Number, std::move(text), l, co);
      continue;
    }
    switch (c) {
      case '~': advance(1); push(Tok::Tilde, "~", l, co); continue;
      case '&': advance(1); push(Tok::Amp, "&", l, co); continue;
      case '|': advance(1); push(Tok::Pipe, "|", l, co); continue;
      case '(': advance(1); push(Tok::LParen, "(", l, co); continue;
      case ')': advance(1); push(Tok::RParen, ")", l, co); continue;
      case '[': advance(1); push(Tok::LBracket, "[", l, co); continue;
      case ']': advance(1); push(Tok::RBracket, "]", l, co); continue;
      case ',': advance(1); push(Tok::Comma, ",", l, co); continue;
      case '>': advance(1); push(Tok::RAngle, ">", l, co); continue;
      case '<':
        if (i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '>') {
          advance(3);
          push(Tok::Iff, "<->", l, co);
        } else {
          advance(1);
          push(Tok::LAngle, "<", l, co);
        }
        continue;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          advance(2);
          push(Tok::Arrow, "->", l, co);
        } else if (i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
          std::string text = "-";
          advance(1);
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
            text += src[i];
            advance(1);
          }
          push(Tok::Number, std::move(text), l, co);
        } else {
          throw ParseError(l, co, "stray '-': expected '->' or a digit");
        }
        continue;
      default:
        throw ParseError(l, co, std::string("unexpected character '") + c + "'");
    }
  }
  push(Tok::End, "", line, col);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Formula run() {
    Formula f = parse_iff();
    expect(Tok::End, "expected end of input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  bool accept(Tok t) {
    if (peek().tok == t) {
      ++pos_;
      return true;
    }
    return false;
  }

  Token expect(Tok t, const std::string& what) {
    if (peek().tok != t)
      throw ParseError(peek().line, peek().column,
                       what + "; got " + tok_name(peek().tok) +
                           (peek().text.empty() ? "" : " '" + peek().text + "'"));
    return take();
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept(Tok::Iff)) f = Formula::iff(f, parse_imp());
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (accept(Tok::Arrow)) return Formula::implies(f, parse_imp());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::Pipe)) f = Formula::disjunction(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept(Tok::Amp)) f = Formula::conjunction(f, parse_unary());
    return f;
  }

  AgentId parse_agent() {
    const Token& t = peek();
    if (t.tok != Tok::Ident && t.tok != Tok::Number)
      throw ParseError(t.line, t.column,
                       std::string("expected agent name; got ") + tok_name(t.tok));
    return AgentId{take().text};
  }

  std::int64_t parse_depth_literal() {
    Token t = expect(Tok::Number, "expected depth integer");
    if (!t.text.empty() && t.text[0] == '-')
      throw ParseError(t.line, t.column, "negative depth literal not allowed in source");
    try {
      return std::stoll(t.text);
    } catch (const std::out_of_range&) {
      throw ParseError(t.line, t.column, "depth literal out of range");
    }
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.tok) {
      case Tok::Tilde:
        take();
        return Formula::negation(parse_unary());
      case Tok::LBracket: {
        take();
        Formula announced = parse_iff();
        expect(Tok::RBracket, "expected ']' closing announcement");
        return Formula::announce(announced, parse_unary());
      }
      case Tok::LAngle: {
        take();
        Formula announced = parse_iff();
        expect(Tok::RAngle, "expected '>' closing announcement");
        return Formula::diamond(announced, parse_unary());
      }
      case Tok::Ident:
        if (t.text == "K" || t.text == "Ki") {
          bool inf = t.text == "Ki";
          take();
          expect(Tok::LBracket, std::string("expected '[' after ") + (inf ? "Ki" : "K"));
          AgentId a = parse_agent();
          expect(Tok::RBracket, "expected ']' after agent name");
          Formula sub = parse_unary();
          return inf ? Formula::knows_inf(a, sub) : Formula::knows(a, sub);
        }
        return parse_atom();
      case Tok::Number:
      case Tok::LParen:
        return parse_atom();
      default:
        throw ParseError(t.line, t.column,
                         std::string("expected formula (one of '~', 'K[', 'Ki[', '[', '<', "
                                     "'(', 'E[', 'P[', identifier); got ") +
                             tok_name(t.tok));
    }
  }

  Formula parse_atom() {
    const Token& t = peek();
    if (t.tok == Tok::LParen) {
      take();
      Formula f = parse_iff();
      expect(Tok::RParen, "expected ')'");
      return f;
    }
    if (t.tok == Tok::Ident) {
      if (t.text == "E" || t.text == "P") {
        bool exact = t.text == "E";
        take();
        expect(Tok::LBracket, std::string("expected '[' after ") + (exact ? "E" : "P"));
        AgentId a = parse_agent();
        expect(Tok::Comma, "expected ',' between agent and depth");
        std::int64_t d = parse_depth_literal();
        expect(Tok::RBracket, "expected ']' closing depth atom");
        return exact ? Formula::exact_depth(a, d) : Formula::at_least_depth(a, d);
      }
      if (t.text == "true") {
        take();
        return Formula::truth();
      }
      if (t.text == "false") {
        take();
        return Formula::falsity();
      }
      if (t.text == "K" || t.text == "Ki")
        throw ParseError(t.line, t.column, "expected '[' after " + t.text);
      return Formula::atom(take().text);
    }
    throw ParseError(t.line, t.column,
                     std::string("expected atom ('true', 'false', 'E[', 'P[', identifier or "
                                 "'('); got ") +
                         tok_name(t.tok));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(const std::string& source) { return Parser(lex(source)).run(); }

}  // namespace dbel
