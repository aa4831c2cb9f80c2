#include "horn/reader.hpp"

#include <cctype>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "horn/operators.hpp"

namespace horn {

ParseError::ParseError(std::string origin, int line, int column, const std::string& message)
    : std::runtime_error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      origin_(std::move(origin)),
      line_(line),
      column_(column) {}

namespace {

bool is_symbol_char(char c) { return c != '\0' && std::strchr("+-*/\\^<>=~:.?@#&$", c) != nullptr; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

enum class Tok { Name, Var, Int, Punct, End, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  uint64_t magnitude = 0;  // Int tokens are unsigned; a leading '-' is applied by the parser
  int line = 1;
  int col = 1;
  bool layout_before = false;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::string origin) : src_(text), origin_(std::move(origin)) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::Eof) return out;
    }
  }

 private:
  char peek(size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  [[noreturn]] void fail(int line, int col, const std::string& msg) const { throw ParseError(origin_, line, col, msg); }

  bool skip_layout() {
    bool skipped = false;
    for (;;) {
      char c = peek();
      if (c == '\0') return skipped;
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (peek() != '\0' && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        int line = line_, col = col_;
        advance();
        advance();
        while (!(peek() == '*' && peek(1) == '/')) {
          if (peek() == '\0') fail(line, col, "unterminated block comment");
          advance();
        }
        advance();
        advance();
      } else {
        return skipped;
      }
      skipped = true;
    }
  }

  Token next() {
    Token t;
    t.layout_before = skip_layout();
    t.line = line_;
    t.col = col_;
    char c = peek();
    if (c == '\0') {
      t.kind = Tok::Eof;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Int;
      constexpr uint64_t limit = uint64_t{1} << 63;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        uint64_t d = static_cast<uint64_t>(advance() - '0');
        if (t.magnitude > (limit - d) / 10) fail(t.line, t.col, "integer literal out of range");
        t.magnitude = t.magnitude * 10 + d;
        t.text.push_back(static_cast<char>('0' + d));
      }
      return t;
    }
    if (c == '_' || std::isupper(static_cast<unsigned char>(c))) {
      t.kind = Tok::Var;
      while (is_alnum(peek())) t.text.push_back(advance());
      return t;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      t.kind = Tok::Name;
      while (is_alnum(peek())) t.text.push_back(advance());
      return t;
    }
    if (c == '\'') {
      t.kind = Tok::Name;
      advance();
      for (;;) {
        char q = peek();
        if (q == '\0') fail(t.line, t.col, "unterminated quoted atom");
        advance();
        if (q == '\'') {
          if (peek() != '\'') break;
          advance();
        }
        t.text.push_back(q);
      }
      return t;
    }
    if (is_symbol_char(c)) {
      if (c == '.') {
        char after = peek(1);
        if (after == '\0' || after == '%' || std::isspace(static_cast<unsigned char>(after))) {
          advance();
          t.kind = Tok::End;
          t.text = ".";
          return t;
        }
      }
      t.kind = Tok::Name;
      while (is_symbol_char(peek())) t.text.push_back(advance());
      return t;
    }
    if (c == '!' || c == ';') {
      t.kind = Tok::Name;
      t.text = std::string(1, advance());
      return t;
    }
    if (std::strchr("()[]{},|", c)) {
      t.kind = Tok::Punct;
      t.text = std::string(1, advance());
      return t;
    }
    fail(t.line, t.col, std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::string origin_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string origin, VarSerials& serials)
      : toks_(std::move(tokens)), origin_(std::move(origin)), serials_(serials) {}

  bool at_eof() const { return peek().kind == Tok::Eof; }
  const Token& peek(size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

  ParsedTerm read_term() {
    var_index_.clear();
    ParsedTerm out;
    out.term = parse(1200).first;
    out.variables = std::move(named_);
    named_.clear();
    return out;
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail(peek(), "operator expected, found " + describe(peek()));
    ++pos_;
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    throw ParseError(origin_, at.line, at.col, msg);
  }

 private:
  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::Eof:
        return "end of input";
      case Tok::End:
        return "end of clause";
      default:
        return "'" + t.text + "'";
    }
  }

  bool is_punct(const Token& t, char c) const { return t.kind == Tok::Punct && t.text[0] == c; }

  bool ends_operand(const Token& t) const {
    if (t.kind == Tok::End || t.kind == Tok::Eof) return true;
    return t.kind == Tok::Punct && std::strchr(")]},|", t.text[0]);
  }

  void expect_punct(char c) {
    if (!is_punct(peek(), c)) fail(peek(), std::string("expected '") + c + "', found " + describe(peek()));
    ++pos_;
  }

  Term variable(const std::string& name) {
    if (name == "_") return Term::var(serials_);
    auto [it, fresh] = var_index_.try_emplace(name, named_.size());
    if (fresh) named_.emplace_back(name, Term::var(serials_));
    return named_[it->second].second;
  }

  std::vector<Term> arguments(char close) {
    std::vector<Term> args;
    args.push_back(parse(999).first);
    while (is_punct(peek(), ',')) {
      ++pos_;
      args.push_back(parse(999).first);
    }
    expect_punct(close);
    return args;
  }

  Term integer(const Token& t, bool negative) {
    constexpr uint64_t limit = uint64_t{1} << 63;
    if (!negative && t.magnitude == limit) fail(t, "integer literal out of range");
    if (negative) return Term::integer(t.magnitude == limit ? std::numeric_limits<int64_t>::min()
                                                            : -static_cast<int64_t>(t.magnitude));
    return Term::integer(static_cast<int64_t>(t.magnitude));
  }

  std::pair<Term, int> primary(int max) {
    const Token t = peek();
    ++pos_;
    switch (t.kind) {
      case Tok::Int:
        return {integer(t, false), 0};
      case Tok::Var:
        return {variable(t.text), 0};
      case Tok::Punct:
        if (t.text[0] == '(') {
          Term inner = parse(1200).first;
          expect_punct(')');
          return {inner, 0};
        }
        if (t.text[0] == '[') {
          if (is_punct(peek(), ']')) {
            ++pos_;
            return {Term::nil(), 0};
          }
          std::vector<Term> items = {parse(999).first};
          while (is_punct(peek(), ',')) {
            ++pos_;
            items.push_back(parse(999).first);
          }
          Term tail = Term::nil();
          if (is_punct(peek(), '|')) {
            ++pos_;
            tail = parse(999).first;
          }
          expect_punct(']');
          return {Term::list(items, tail), 0};
        }
        if (t.text[0] == '{') {
          if (is_punct(peek(), '}')) {
            ++pos_;
            return {Term::atom(atom::curly), 0};
          }
          Term inner = parse(1200).first;
          expect_punct('}');
          return {Term::compound(atom::curly, {inner}), 0};
        }
        fail(t, "unexpected " + describe(t));
      case Tok::Name:
        return name_primary(t, max);
      case Tok::End:
      case Tok::Eof:
        fail(t, "unexpected " + describe(t));
    }
    fail(t, "unexpected token");
  }

  std::pair<Term, int> name_primary(const Token& t, int max) {
    Symbol name = Symbol::intern(t.text);
    const Token& next = peek();
    if (is_punct(next, '(') && !next.layout_before) {
      ++pos_;
      return {Term::compound(name, arguments(')')), 0};
    }
    if (name == atom::minus && next.kind == Tok::Int && !next.layout_before) {
      ++pos_;
      return {integer(next, true), 0};
    }
    if (auto op = prefix_op(name)) {
      bool operand_follows = !ends_operand(next);
      if (next.kind == Tok::Name) {
        Symbol n = Symbol::intern(next.text);
        if (infix_op(n) && !prefix_op(n) && !(is_punct(peek(1), '(') && !peek(1).layout_before))
          operand_follows = false;
      }
      if (operand_follows) {
        if (op->priority > max) fail(t, "operator priority clash");
        Term operand = parse(op->right_max()).first;
        return {Term::compound(name, {operand}), op->priority};
      }
    }
    return {Term::atom(name), 0};
  }

  std::pair<Term, int> parse(int max) {
    auto [left, left_prec] = primary(max);
    for (;;) {
      const Token& t = peek();
      Symbol name;
      if (t.kind == Tok::Name) {
        name = Symbol::intern(t.text);
      } else if (is_punct(t, ',')) {
        name = atom::comma;
      } else {
        break;
      }
      auto op = infix_op(name);
      if (!op || op->priority > max || left_prec > op->left_max()) break;
      ++pos_;
      Term right = parse(op->right_max()).first;
      left = Term::compound(name, {left, right});
      left_prec = op->priority;
    }
    return {left, left_prec};
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::string origin_;
  VarSerials& serials_;
  std::unordered_map<std::string, size_t> var_index_;
  std::vector<std::pair<std::string, Term>> named_;
};

}  // namespace

ParsedTerm parse_term(std::string_view text, VarSerials& serials) {
  Parser p(Lexer(text, "query").tokenize(), "query", serials);
  if (p.at_eof()) p.fail(p.peek(), "empty input");
  ParsedTerm out = p.read_term();
  if (p.peek().kind == Tok::End) p.expect_end();
  if (!p.at_eof()) p.fail(p.peek(), "unexpected trailing input");
  return out;
}

ParsedTerm parse_term(std::string_view text) {
  VarSerials serials;
  return parse_term(text, serials);
}

std::vector<SourceClause> parse_program(std::string_view text, std::string_view origin, VarSerials& serials) {
  Parser p(Lexer(text, std::string(origin)).tokenize(), std::string(origin), serials);
  std::vector<SourceClause> clauses;
  while (!p.at_eof()) {
    const Token start = p.peek();
    Term t = p.read_term().term;
    p.expect_end();
    SourceClause c;
    c.origin = std::string(origin);
    c.line = start.line;
    if (t.has_functor(atom::neck, 2)) {
      c.head = t.arg(0);
      c.body = t.arg(1);
    } else if (t.has_functor(atom::neck, 1)) {
      p.fail(start, "directives are not supported");
    } else {
      c.head = t;
      c.body = Term::atom(atom::true_);
    }
    if (!c.head.is_callable()) p.fail(start, "clause head must be an atom or compound term");
    clauses.push_back(std::move(c));
  }
  return clauses;
}

std::vector<SourceClause> parse_program(std::string_view text, std::string_view origin) {
  VarSerials serials;
  return parse_program(text, origin, serials);
}

bool has_complete_clause(std::string_view text) {
  try {
    for (const Token& t : Lexer(text, "query").tokenize())
      if (t.kind == Tok::End) return true;
  } catch (const ParseError&) {
    // an unterminated quote may still be closed by a later line
  }
  return false;
}

}  // namespace horn
