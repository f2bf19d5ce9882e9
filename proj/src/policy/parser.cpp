#include "gem/policy/parser.hpp"

#include <cctype>
#include <optional>

namespace gem {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { variable, symbol, quoted, lparen, rparen, comma, dot, neck, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::variable: return "variable";
    case Tok::symbol: return "symbol";
    case Tok::quoted: return "quoted symbol";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::dot: return "'.'";
    case Tok::neck: return "':-'";
    case Tok::end: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  Lexer(std::string_view text, std::size_t first_line) : text_(text), line_(first_line) {}

  Token next() {
    skip_blank();
    std::size_t line = line_, col = column_;
    if (pos_ >= text_.size()) return {Tok::end, "", line, col};
    char c = text_[pos_];
    auto single = [&](Tok kind) {
      advance();
      return Token{kind, std::string(1, c), line, col};
    };
    switch (c) {
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      case ',': return single(Tok::comma);
      case '.': return single(Tok::dot);
      case ':':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
          advance();
          advance();
          return {Tok::neck, ":-", line, col};
        }
        throw ParseError(line, col, "expected ':-'");
      case '\'': return quoted(line, col);
      default: break;
    }
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc) || c == '_') {
      std::string word;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        word += text_[pos_];
        advance();
      }
      Tok kind = (std::isupper(uc) || c == '_') ? Tok::variable : Tok::symbol;
      return {kind, word, line, col};
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token quoted(std::size_t line, std::size_t col) {
    advance();
    std::string value;
    while (true) {
      if (pos_ >= text_.size()) throw ParseError(line, col, "unterminated quoted symbol");
      char c = text_[pos_];
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) throw ParseError(line, col, "unterminated quoted symbol");
        value += text_[pos_];
        advance();
      } else if (c == '\'') {
        advance();
        break;
      } else {
        value += c;
        advance();
      }
    }
    if (value.empty()) throw ParseError(line, col, "empty quoted symbol");
    return {Tok::quoted, value, line, col};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, std::size_t first_line) : lexer_(text, first_line) {
    tok_ = lexer_.next();
    ahead_ = lexer_.next();
  }

  bool at_end() const { return tok_.kind == Tok::end; }
  const Token& current() const { return tok_; }

  Clause clause() {
    Clause c;
    c.head = atom();
    if (tok_.kind == Tok::neck) {
      shift();
      c.body.push_back(literal());
      while (tok_.kind == Tok::comma) {
        shift();
        c.body.push_back(literal());
      }
    }
    expect(Tok::dot);
    return c;
  }

  Atom atom() {
    if (tok_.kind != Tok::symbol && tok_.kind != Tok::quoted) fail("predicate symbol");
    Atom a{tok_.text, {}};
    shift();
    expect(Tok::lparen);
    a.args.push_back(term());
    while (tok_.kind == Tok::comma) {
      shift();
      a.args.push_back(term());
    }
    expect(Tok::rparen);
    return a;
  }

  void expect(Tok kind) {
    if (tok_.kind != kind) fail(describe(kind));
    shift();
  }

  [[noreturn]] void fail(const std::string& wanted) const {
    std::string got = tok_.kind == Tok::end ? "end of input" : "'" + tok_.text + "'";
    throw ParseError(tok_.line, tok_.column, "expected " + wanted + ", found " + got);
  }

 private:
  void shift() {
    tok_ = std::move(ahead_);
    ahead_ = tok_.kind == Tok::end ? tok_ : lexer_.next();
  }

  Literal literal() {
    // not(...) is negation only when it wraps an atom; a plain atom may
    // still use "not" as its predicate, e.g. not(c1,x).
    if (tok_.kind == Tok::symbol && tok_.text == "not" && ahead_.kind == Tok::lparen) {
      Token saved_tok = tok_;
      shift();
      shift();
      if ((tok_.kind == Tok::symbol || tok_.kind == Tok::quoted) && ahead_.kind == Tok::lparen) {
        Literal lit{atom(), true};
        expect(Tok::rparen);
        return lit;
      }
      Atom a{saved_tok.text, {}};
      a.args.push_back(term());
      while (tok_.kind == Tok::comma) {
        shift();
        a.args.push_back(term());
      }
      expect(Tok::rparen);
      return Literal{std::move(a), false};
    }
    return Literal{atom(), false};
  }

  Term term() {
    switch (tok_.kind) {
      case Tok::variable: {
        Term t = Term::variable(tok_.text);
        shift();
        return t;
      }
      case Tok::symbol:
      case Tok::quoted: {
        Term t = Term::constant(tok_.text);
        shift();
        return t;
      }
      default:
        fail("term");
    }
  }

  Lexer lexer_;
  Token tok_;
  Token ahead_;
};

}  // namespace

std::vector<Clause> parse_clauses(std::string_view text, std::size_t first_line) {
  Parser p(text, first_line);
  std::vector<Clause> out;
  while (!p.at_end()) out.push_back(p.clause());
  return out;
}

Policy parse_policy(std::string_view text, std::string_view owner, std::size_t first_line) {
  Parser p(text, first_line);
  Policy policy{std::string(owner), {}};
  while (!p.at_end()) {
    Token start = p.current();
    Clause c = p.clause();
    const Term& loc = c.head.location();
    if (loc.is_variable()) {
      throw OwnershipError(start.line, start.column,
                           "head location of " + to_string(c.head) + " is a variable");
    }
    if (loc.name() != owner) {
      throw OwnershipError(start.line, start.column,
                           "head " + to_string(c.head) + " is not located at " + std::string(owner));
    }
    policy.clauses.push_back(std::move(c));
  }
  return policy;
}

Clause parse_clause(std::string_view text) {
  Parser p(text, 1);
  Clause c = p.clause();
  if (!p.at_end()) p.fail("end of input");
  return c;
}

Atom parse_atom(std::string_view text) {
  Parser p(text, 1);
  Atom a = p.atom();
  if (!p.at_end()) p.fail("end of input");
  return a;
}

}  // namespace gem
