#include "dqcert/dqdimacs.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace dqcert {

namespace {

struct Token {
  std::string text;
  int line, col;
};

// Splits the input into whitespace-separated tokens with positions,
// dropping comment lines (first non-blank character 'c' not followed by
// more of the token, i.e. a token that is exactly "c" starts a comment).
class Lexer {
public:
  explicit Lexer(const std::string &text) : text_(text) {}

  bool next(Token &tok) {
    for (;;) {
      skip_space();
      if (pos_ >= text_.size())
        return false;
      tok.line = line_;
      tok.col = col_;
      size_t start = pos_;
      while (pos_ < text_.size() && !std::isspace(uc(text_[pos_]))) {
        ++pos_;
        ++col_;
      }
      tok.text = text_.substr(start, pos_ - start);
      if (tok.text == "c" && tok.col == 1) {
        skip_line();
        continue;
      }
      return true;
    }
  }

private:
  static unsigned char uc(char c) { return static_cast<unsigned char>(c); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(uc(text_[pos_]))) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_line() {
    while (pos_ < text_.size() && text_[pos_] != '\n')
      ++pos_;
  }

  const std::string &text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

int64_t parse_int(const Token &tok) {
  size_t i = 0;
  if (i < tok.text.size() && (tok.text[i] == '-' || tok.text[i] == '+'))
    ++i;
  if (i == tok.text.size())
    throw ParseError("expected integer, got '" + tok.text + "'", tok.line,
                     tok.col);
  for (; i < tok.text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(tok.text[i])))
      throw ParseError("expected integer, got '" + tok.text + "'", tok.line,
                       tok.col);
  try {
    return std::stoll(tok.text);
  } catch (const std::out_of_range &) {
    throw ParseError("integer out of range: '" + tok.text + "'", tok.line,
                     tok.col);
  }
}

Var parse_var(const Token &tok) {
  int64_t n = parse_int(tok);
  if (n <= 0 || n > INT32_MAX)
    throw ParseError("expected variable (positive integer), got '" +
                         tok.text + "'",
                     tok.line, tok.col);
  return static_cast<Var>(n);
}

} // namespace

ParsedDqbf parse_dqdimacs(const std::string &text) {
  Lexer lex(text);
  ParsedDqbf out;
  Dqbf &f = out.formula;
  Token tok;

  if (!lex.next(tok))
    throw ParseError("empty input, expected 'p cnf' header", 1, 1);
  if (tok.text != "p")
    throw ParseError("expected 'p cnf' header, got '" + tok.text + "'",
                     tok.line, tok.col);
  if (!lex.next(tok) || tok.text != "cnf")
    throw ParseError("expected 'cnf' after 'p'", tok.line, tok.col);
  if (!lex.next(tok))
    throw ParseError("expected variable count in header", tok.line, tok.col);
  int64_t header_vars = parse_int(tok);
  if (!lex.next(tok))
    throw ParseError("expected clause count in header", tok.line, tok.col);
  int64_t header_clauses = parse_int(tok);
  if (header_vars < 0 || header_clauses < 0)
    throw ParseError("header counts must be nonnegative", tok.line, tok.col);

  auto require_var = [&](const char *what) {
    if (!lex.next(tok))
      throw ParseError(std::string("unexpected end of input in ") + what,
                       tok.line, tok.col);
    return tok;
  };
  auto check_fresh = [&](Var v, const Token &at) {
    if (f.is_declared(v))
      throw ParseError("variable " + std::to_string(v) + " quantified twice",
                       at.line, at.col);
  };

  bool in_matrix = false;
  int64_t clause_count = 0;
  Clause clause;
  bool clause_open = false;
  std::set<Clause> seen; // clause dedup is part of the parse contract

  while (lex.next(tok)) {
    if (tok.text == "a" || tok.text == "e" || tok.text == "d") {
      if (clause_open)
        throw ParseError("quantifier line inside unterminated clause",
                         tok.line, tok.col);
      if (in_matrix)
        throw ParseError("quantifier line after first clause", tok.line,
                         tok.col);
      if (tok.text == "a") {
        for (;;) {
          Token t = require_var("'a' line");
          if (t.text == "0")
            break;
          Var v = parse_var(t);
          check_fresh(v, t);
          f.add_universal(v);
        }
      } else if (tok.text == "e") {
        VarSet deps(f.universal_order().begin(), f.universal_order().end());
        vs_normalize(deps);
        for (;;) {
          Token t = require_var("'e' line");
          if (t.text == "0")
            break;
          Var v = parse_var(t);
          check_fresh(v, t);
          f.add_existential(v, deps);
        }
      } else {
        Token t = require_var("'d' line");
        if (t.text == "0")
          throw ParseError("'d' line requires a variable", t.line, t.col);
        Var v = parse_var(t);
        check_fresh(v, t);
        VarSet deps;
        for (;;) {
          Token u = require_var("'d' line");
          if (u.text == "0")
            break;
          Var uv = parse_var(u);
          if (!f.is_universal(uv))
            throw ParseError("dependency " + std::to_string(uv) + " of " +
                                 std::to_string(v) +
                                 " is not a declared universal",
                             u.line, u.col);
          deps.push_back(uv);
        }
        f.add_existential(v, std::move(deps));
      }
      continue;
    }

    // Clause token.
    int64_t n = parse_int(tok);
    in_matrix = true;
    if (n == 0) {
      // End of clause; adopt free variables before insertion.
      for (Lit l : clause)
        if (!f.is_declared(l.var())) {
          f.add_existential(l.var(), f.universals());
          out.warnings.push_back(
              "free variable " + std::to_string(l.var()) +
              " treated as existential with full dependency set");
        }
      if (auto norm = normalize_clause(clause); !norm || seen.insert(*norm).second)
        f.add_clause(std::move(clause));
      clause = {};
      clause_open = false;
      ++clause_count;
    } else {
      if (n < INT32_MIN || n > INT32_MAX)
        throw ParseError("literal out of range: '" + tok.text + "'", tok.line,
                         tok.col);
      clause.push_back(Lit::from_dimacs(n));
      clause_open = true;
    }
  }

  if (clause_open)
    throw ParseError("unterminated clause at end of input", tok.line, tok.col);
  if (clause_count != header_clauses)
    out.warnings.push_back("header declares " +
                           std::to_string(header_clauses) + " clauses, found " +
                           std::to_string(clause_count));
  if (f.max_var() > header_vars)
    out.warnings.push_back("header declares " + std::to_string(header_vars) +
                           " variables, largest used is " +
                           std::to_string(f.max_var()));
  return out;
}

std::string write_dqdimacs(const Dqbf &f) {
  std::ostringstream os;
  os << "p cnf " << f.max_var() << ' ' << f.matrix().size() << '\n';
  if (!f.universal_order().empty()) {
    os << 'a';
    for (Var u : f.universal_order())
      os << ' ' << u;
    os << " 0\n";
  }
  for (Var e : f.existential_order()) {
    os << "d " << e;
    for (Var u : f.deps(e))
      os << ' ' << u;
    os << " 0\n";
  }
  for (const Clause &c : f.matrix()) {
    for (Lit l : c)
      os << l.to_dimacs() << ' ';
    os << "0\n";
  }
  return os.str();
}

} // namespace dqcert
