// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncpoly.hpp"

namespace suqcs {

// Columns are 0-based character offsets; end of input reports the text length.
struct ParseError : std::runtime_error {
  std::size_t column;
  ParseError(const std::string& msg, std::size_t col)
      : std::runtime_error(msg + " at column " + std::to_string(col)), column(col) {}
};

struct WordExpr {
  enum class Kind { sum, difference, product, negate, letter, literal };
  Kind kind = Kind::literal;
  Letter letter = Letter::a;
  cplx value = 0.0;
  std::vector<WordExpr> kids;

  bool operator==(const WordExpr& o) const {
    return kind == o.kind && (kind != Kind::letter || letter == o.letter) && (kind != Kind::literal || value == o.value) &&
           kids == o.kids;
  }

  NCPoly eval() const {
    switch (kind) {
      case Kind::letter: return NCPoly::letter(letter);
      case Kind::literal: return NCPoly(value);
      case Kind::negate: return NCPoly(cplx(-1.0)) * kids[0].eval();
      case Kind::sum: {
        NCPoly r;
        for (const auto& k : kids) r = r + k.eval();
        return r;
      }
      case Kind::difference: return kids[0].eval() - kids[1].eval();
      case Kind::product: {
        NCPoly r = NCPoly::one();
        for (const auto& k : kids) r = r * k.eval();
        return r;
      }
    }
    return {};
  }

  std::string print() const {
    auto wrap = [](const WordExpr& e, bool need) { return need ? "(" + e.print() + ")" : e.print(); };
    switch (kind) {
      case Kind::letter: return letter_name(letter);
      case Kind::literal: {
        char buf[64];
        if (value.imag() == 0.0) std::snprintf(buf, sizeof buf, "%.17g", value.real());
        else std::snprintf(buf, sizeof buf, "%.17gi", value.imag());
        return buf;
      }
      case Kind::negate: return "-" + wrap(kids[0], kids[0].kind != Kind::letter && kids[0].kind != Kind::literal);
      case Kind::sum: {
        std::string s;
        for (std::size_t i = 0; i < kids.size(); ++i) s += (i ? " + " : "") + wrap(kids[i], kids[i].kind == Kind::difference);
        return s;
      }
      case Kind::difference:
        return wrap(kids[0], kids[0].kind == Kind::sum || kids[0].kind == Kind::difference) + " - " +
               wrap(kids[1], kids[1].kind == Kind::sum || kids[1].kind == Kind::difference);
      case Kind::product: {
        std::string s;
        for (std::size_t i = 0; i < kids.size(); ++i) {
          const auto k = kids[i].kind;
          s += (i ? " " : "") + wrap(kids[i], k == Kind::sum || k == Kind::difference || k == Kind::negate);
        }
        return s;
      }
    }
    return {};
  }
};

namespace detail {

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := factor ('*'? factor)*
//   factor  := '-' factor | '(' expr ')' | letter | number ['i'] | 'i'
// A letter is a or b, optionally followed without space by + or -, then optionally by *.
class WordParser {
 public:
  explicit WordParser(const std::string& s) : s_(s) {}

  WordExpr parse() {
    WordExpr e = expr();
    skip();
    if (pos_ < s_.size()) {
      if (s_[pos_] == ')') throw ParseError("unbalanced ')'", pos_);
      throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    }
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int depth_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_factor_start() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return c == '(' || c == 'a' || c == 'b' || c == 'i' || c == '.' || std::isdigit(static_cast<unsigned char>(c));
  }

  WordExpr expr() {
    WordExpr lhs = term();
    for (;;) {
      skip();
      if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) return lhs;
      const char op = s_[pos_++];
      WordExpr rhs = term();
      if (op == '+') {
        if (lhs.kind != WordExpr::Kind::sum) {
          WordExpr s;
          s.kind = WordExpr::Kind::sum;
          s.kids.push_back(std::move(lhs));
          lhs = std::move(s);
        }
        lhs.kids.push_back(std::move(rhs));
      } else {
        WordExpr d;
        d.kind = WordExpr::Kind::difference;
        d.kids.push_back(std::move(lhs));
        d.kids.push_back(std::move(rhs));
        lhs = std::move(d);
      }
    }
  }

  WordExpr term() {
    std::vector<WordExpr> fs;
    fs.push_back(factor());
    for (;;) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        fs.push_back(factor());
      } else if (at_factor_start()) {
        fs.push_back(factor());
      } else {
        break;
      }
    }
    if (fs.size() == 1) return std::move(fs[0]);
    WordExpr p;
    p.kind = WordExpr::Kind::product;
    for (auto& f : fs) {
      if (f.kind == WordExpr::Kind::product)
        for (auto& k : f.kids) p.kids.push_back(std::move(k));
      else
        p.kids.push_back(std::move(f));
    }
    return p;
  }

  WordExpr factor() {
    skip();
    if (pos_ >= s_.size()) {
      if (depth_ > 0) throw ParseError("unbalanced '(': expected ')'", s_.size());
      throw ParseError("unexpected end of input", s_.size());
    }
    const char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      WordExpr n;
      n.kind = WordExpr::Kind::negate;
      n.kids.push_back(factor());
      return n;
    }
    if (c == '(') {
      const std::size_t open = pos_++;
      ++depth_;
      WordExpr e = expr();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') {
        if (pos_ >= s_.size()) throw ParseError("unbalanced '(': expected ')'", s_.size());
        throw ParseError("expected ')' to close '(' at column " + std::to_string(open), pos_);
      }
      ++pos_;
      --depth_;
      return e;
    }
    if (c == 'a' || c == 'b') {
      std::string name(1, c);
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) name += s_[pos_++];
      if (pos_ < s_.size() && s_[pos_] == '*') name += s_[pos_++];
      for (int k = 0; k < kLetterCount; ++k)
        if (name == letter_name(static_cast<Letter>(k))) {
          WordExpr e;
          e.kind = WordExpr::Kind::letter;
          e.letter = static_cast<Letter>(k);
          return e;
        }
      throw ParseError("unknown token '" + name + "'", pos_ - name.size());
    }
    if (c == 'i') {
      ++pos_;
      WordExpr e;
      e.value = cplx(0.0, 1.0);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        throw ParseError("malformed number", start);
      }
      pos_ += used;
      WordExpr e;
      e.value = cplx(v, 0.0);
      if (pos_ < s_.size() && s_[pos_] == 'i') {
        ++pos_;
        e.value = cplx(0.0, v);
      }
      return e;
    }
    if (c == ')') throw ParseError("unbalanced ')'", pos_);
    throw ParseError("unknown token '" + std::string(1, c) + "'", pos_);
  }
};

}  // namespace detail

inline WordExpr parse_word(const std::string& text) { return detail::WordParser(text).parse(); }

inline NCPoly parse_poly(const std::string& text) { return parse_word(text).eval(); }

}  // namespace suqcs
