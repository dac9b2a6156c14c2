// Copyright 2026 The mvlog Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file parser.hpp
/// Reader and canonical printer for the `.mvdl` text format.
///
///     % comment
///     0.8 :: label(i1, whale).        fuzzy fact, degree 4/5
///     4/5 :: label(i2, whale).        same, fraction syntax
///     company(acme).                  fact with degree 1
///     orca(X) :- label(X, whale), polar(X).
///     keyPerson(Y, X) :- company(X).  Y is existential
///
/// Lowercase identifiers (and integers) are constants or predicates,
/// uppercase identifiers are variables.

#pragma once

#include "mvlog/core.hpp"

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mvlog {

struct ParseError : Error {
  ParseError(std::size_t line, std::size_t column, std::string message, std::string token)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message +
              (token.empty() ? std::string() : " (at '" + token + "')")),
        line(line),
        column(column),
        message(std::move(message)),
        token(std::move(token)) {}

  std::size_t line;
  std::size_t column;
  std::string message;
  std::string token;
};

/// A query atom that still contains variables.
struct NonGroundQuery : Error {
  using Error::Error;
};

struct ParseOptions {
  /// Treat head-only variables as SafetyError instead of existentials.
  bool strict = false;
  /// Accept labelled nulls written as `_n<id>` (query atoms only).
  bool allow_nulls = false;
};

/// Program and database read from one or more sources.
struct SourceUnit {
  Program program;
  FuzzyDatabase database;

  friend bool operator==(const SourceUnit&, const SourceUnit&) = default;
};

namespace detail {

enum class Tok { Ident, Var, Number, Null, LParen, RParen, Comma, Dot, Implies, DoubleColon, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token tok{Tok::End, "", line_, column_};
    if (pos_ >= text_.size()) return tok;
    char c = text_[pos_];
    auto single = [&](Tok kind) {
      tok.kind = kind;
      tok.text = std::string(1, c);
      advance();
      return tok;
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case ',': return single(Tok::Comma);
      case '.': return single(Tok::Dot);
      default: break;
    }
    if (c == ':') {
      if (peek(1) == '-') {
        advance(), advance();
        tok.kind = Tok::Implies;
        tok.text = ":-";
        return tok;
      }
      if (peek(1) == ':') {
        advance(), advance();
        tok.kind = Tok::DoubleColon;
        tok.text = "::";
        return tok;
      }
      throw ParseError(line_, column_, "unexpected character", std::string(1, c));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      tok.kind = Tok::Number;
      take_digits(tok.text);
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        tok.text += '.';
        advance();
        take_digits(tok.text);
      } else if (peek() == '/' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        tok.text += '/';
        advance();
        take_digits(tok.text);
      }
      return tok;
    }
    if (c == '_' && peek(1) == 'n' && std::isdigit(static_cast<unsigned char>(peek(2)))) {
      tok.kind = Tok::Null;
      tok.text = "_n";
      advance(), advance();
      take_digits(tok.text);
      return tok;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      tok.kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::Var : Tok::Ident;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        tok.text += text_[pos_];
        advance();
      }
      return tok;
    }
    throw ParseError(line_, column_, "unexpected character", std::string(1, c));
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
  void take_digits(std::string& out) {
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      out += text_[pos_];
      advance();
    }
  }
  void skip_space() {
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

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, ParseOptions options) : lexer_(text), options_(options) { shift(); }

  void parse_into(SourceUnit& unit) {
    while (cur_.kind != Tok::End) statement(unit);
  }

  Atom single_atom() {
    Atom a = atom();
    if (cur_.kind == Tok::Dot) shift();
    if (cur_.kind != Tok::End) fail("trailing input after atom");
    return a;
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(cur_.line, cur_.column, message, cur_.text);
  }

  Token expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(std::string("expected ") + what);
    Token t = cur_;
    shift();
    return t;
  }

  std::string where(const Token& t) const { return std::to_string(t.line) + ":" + std::to_string(t.column) + ": "; }

  void statement(SourceUnit& unit) {
    Token start = cur_;
    if (cur_.kind == Tok::Number) {
      Token deg = cur_;
      shift();
      auto value = parse_rational(deg.text);
      if (!value) throw ParseError(deg.line, deg.column, "malformed degree", deg.text);
      expect(Tok::DoubleColon, "'::' after degree");
      Atom a = atom();
      expect(Tok::Dot, "'.' after fact");
      add_fact(unit, a, *value, deg);
      return;
    }
    Atom head = atom();
    if (cur_.kind == Tok::Dot) {
      shift();
      add_fact(unit, head, Rational(1), start);
      return;
    }
    expect(Tok::Implies, "'.' or ':-'");
    Rule rule;
    rule.head = std::move(head);
    rule.body.push_back(atom());
    while (cur_.kind == Tok::Comma) {
      shift();
      rule.body.push_back(atom());
    }
    expect(Tok::Dot, "'.' after rule body");
    if (options_.strict) {
      auto unsafe = head_only_variables(rule.body, rule.head);
      if (!unsafe.empty())
        throw SafetyError(where(start) + "head variable " + *unsafe.begin() + " does not occur in the body");
    }
    try {
      unit.program.add_rule(std::move(rule));
    } catch (const ArityError& e) {
      throw ArityError(where(start) + e.what());
    }
  }

  void add_fact(SourceUnit& unit, const Atom& a, const Rational& degree, const Token& at) {
    if (!a.is_ground()) throw ParseError(at.line, at.column, "fact contains variables", a.str());
    if (sgn(degree) <= 0 || degree > 1)
      throw DomainError(where(at) + "degree " + to_string(degree) + " of " + a.str() + " outside (0,1]");
    try {
      unit.program.declare(a.predicate, a.arity());
      unit.database.set(GroundAtom(a), TruthDegree(degree));
    } catch (const ArityError& e) {
      throw ArityError(where(at) + e.what());
    } catch (const DomainError& e) {
      throw DomainError(where(at) + e.what());
    }
  }

  Atom atom() {
    Token name = expect(Tok::Ident, "predicate name");
    Atom a{name.text, {}};
    if (cur_.kind != Tok::LParen) return a;
    shift();
    a.args.push_back(term());
    while (cur_.kind == Tok::Comma) {
      shift();
      a.args.push_back(term());
    }
    expect(Tok::RParen, "')'");
    return a;
  }

  Term term() {
    Token t = cur_;
    switch (t.kind) {
      case Tok::Ident:
        shift();
        return Term::constant(t.text);
      case Tok::Var:
        shift();
        return Term::variable(t.text);
      case Tok::Number:
        if (t.text.find_first_of("./") != std::string::npos) fail("constants must be identifiers or integers");
        shift();
        return Term::constant(t.text);
      case Tok::Null:
        if (!options_.allow_nulls) fail("labelled nulls cannot appear in programs or databases");
        shift();
        return Term::null(static_cast<std::uint32_t>(std::stoul(t.text.substr(2))));
      default:
        fail("expected a term");
    }
  }

  Lexer lexer_;
  ParseOptions options_;
  Token cur_{Tok::End, "", 1, 1};
};

}  // namespace detail

/// Parses `text` and merges its statements into `unit`. Conflicting fact
/// degrees across calls raise DomainError.
inline void parse_into(SourceUnit& unit, std::string_view text, ParseOptions options = {}) {
  detail::Parser(text, options).parse_into(unit);
}

inline SourceUnit parse(std::string_view text, ParseOptions options = {}) {
  SourceUnit unit;
  parse_into(unit, text, options);
  return unit;
}

/// Parses a single ground atom such as `orca(i1)` or `kp(_n1, acme)`.
inline GroundAtom parse_ground_atom(std::string_view text) {
  ParseOptions options;
  options.allow_nulls = true;
  Atom a = detail::Parser(text, options).single_atom();
  if (!a.is_ground()) throw NonGroundQuery("query atom " + a.str() + " contains variables");
  return GroundAtom(a);
}

/// Canonical text: facts sorted by predicate then arguments with reduced
/// fraction degrees, followed by the rules in program order.
inline std::string format(const Program& program, const FuzzyDatabase& database) {
  std::ostringstream out;
  for (const auto& [atom, degree] : database.entries()) out << to_string(degree) << " :: " << atom.str() << ".\n";
  for (const auto& rule : program.rules()) out << rule.str() << "\n";
  return out.str();
}

inline std::string format(const SourceUnit& unit) { return format(unit.program, unit.database); }

}  // namespace mvlog
