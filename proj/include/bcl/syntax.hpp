#pragma once

// Concrete ASCII syntax:
//
//   ~f  f & g  f | g  f -> g  f <-> g     connectives (-> is right-associative)
//   [p,q] f   <p,q> f   [] f   <> f       ceteris paribus box / diamond
//   t(x)  o(p)  true  false               decision, observability and constant atoms
//   (f => g)   (f =>{p,q} g)              counterfactual; default index is every feature
//   [x := f] g                            assignment
//   K f                                   knowledge
//
// Precedence, tightest first: ~ K and modalities, &, |, ->, <->.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "bcl/error.hpp"
#include "bcl/formula.hpp"
#include "bcl/vocabulary.hpp"

namespace bcl {

namespace detail {

enum class Tok {
  kName,
  kNot,
  kAnd,
  kOr,
  kImplies,
  kIff,
  kCounterfactual,
  kColonEq,
  kLBracket,
  kRBracket,
  kLAngle,
  kRAngle,
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kComma,
  kEnd,
};

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_name_char(c)) {
      std::size_t j = i;
      while (j < s.size() && is_name_char(s[j])) ++j;
      out.push_back({Tok::kName, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    struct Sym {
      std::string_view text;
      Tok kind;
    };
    static constexpr Sym kSymbols[] = {
        {"<->", Tok::kIff},    {"->", Tok::kImplies}, {"=>", Tok::kCounterfactual},
        {":=", Tok::kColonEq}, {"~", Tok::kNot},      {"&", Tok::kAnd},
        {"|", Tok::kOr},       {"[", Tok::kLBracket}, {"]", Tok::kRBracket},
        {"<", Tok::kLAngle},   {">", Tok::kRAngle},   {"(", Tok::kLParen},
        {")", Tok::kRParen},   {"{", Tok::kLBrace},   {"}", Tok::kRBrace},
        {",", Tok::kComma},
    };
    bool matched = false;
    for (const auto& sym : kSymbols) {
      if (starts(sym.text)) {
        out.push_back({sym.kind, s.substr(i, sym.text.size()), i});
        i += sym.text.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Tok::kEnd, {}, s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary& voc) : toks_(tokenize(text)), voc_(voc) {}

  Formula parse() {
    Formula f = parse_iff();
    if (peek().kind != Tok::kEnd) fail("unexpected '" + std::string(peek().text) + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  void expect(Tok k, std::string_view what) {
    if (!accept(k)) fail("expected " + std::string(what));
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, peek().pos);
  }

  Formula parse_iff() {
    Formula f = parse_implies();
    while (accept(Tok::kIff)) f = iff(f, parse_implies());
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (accept(Tok::kImplies)) return implies(f, parse_implies());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::kOr)) f = disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept(Tok::kAnd)) f = conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kNot:
        next();
        return neg(parse_unary());
      case Tok::kName:
        if (t.text == "K") {
          next();
          return know(parse_unary());
        }
        return parse_atom();
      case Tok::kLBracket: {
        next();
        if (peek().kind == Tok::kName && peek(1).kind == Tok::kColonEq) {
          const Token& v = next();
          next();
          const auto value = lookup_value(v);
          Formula context = parse_iff();
          expect(Tok::kRBracket, "']' closing assignment");
          return assign(value, context, parse_unary());
        }
        const FeatureSet x = parse_index(Tok::kRBracket);
        return box(x, parse_unary());
      }
      case Tok::kLAngle: {
        next();
        const FeatureSet x = parse_index(Tok::kRAngle);
        return diamond(x, parse_unary());
      }
      case Tok::kLParen: {
        next();
        Formula f = parse_iff();
        if (accept(Tok::kCounterfactual)) {
          FeatureSet x = voc_.all_features();
          if (accept(Tok::kLBrace)) x = parse_index(Tok::kRBrace);
          Formula g = parse_iff();
          expect(Tok::kRParen, "')' closing counterfactual");
          return counterfactual(x, f, g);
        }
        expect(Tok::kRParen, "')'");
        return f;
      }
      default:
        fail("expected a formula");
    }
  }

  // Decision atoms inside an index set are dropped: states never contain them.
  FeatureSet parse_index(Tok close) {
    FeatureSet x;
    if (accept(close)) return x;
    while (true) {
      const Token& t = peek();
      if (t.kind != Tok::kName) fail("expected an atom in index set");
      if (peek(1).kind == Tok::kLParen && (t.text == "t" || t.text == "o")) {
        const Formula a = parse_atom();
        if (a.op() == Op::kFeature) x.insert(a.atom());
      } else {
        x.insert(lookup_feature(next()));
      }
      if (accept(close)) return x;
      expect(Tok::kComma, "',' in index set");
    }
  }

  Formula parse_atom() {
    const Token& t = next();
    if (peek().kind == Tok::kLParen && (t.text == "t" || t.text == "o")) {
      next();
      if (peek().kind != Tok::kName) fail("expected a name");
      const Token& name = next();
      expect(Tok::kRParen, "')'");
      if (t.text == "t") return decision(lookup_value(name));
      const auto basic = voc_.find_feature(name.text);
      if (!voc_.is_epistemic() || !basic || *basic >= voc_.basic_count()) {
        throw UnknownNameError("unknown observability atom 'o(" + std::string(name.text) +
                               ")' at position " + std::to_string(name.pos));
      }
      return feature(voc_.observability_of(*basic));
    }
    if (t.text == "true") return top();
    if (t.text == "false") return bottom();
    return feature(lookup_feature(t));
  }

  std::size_t lookup_feature(const Token& t) const {
    const auto i = voc_.find_feature(t.text);
    if (!i || voc_.is_observability(*i)) {
      throw UnknownNameError("unknown feature '" + std::string(t.text) + "' at position " +
                             std::to_string(t.pos));
    }
    return *i;
  }

  ValueId lookup_value(const Token& t) const {
    const auto v = voc_.find_value(t.text);
    if (!v) {
      throw UnknownNameError("unknown decision value '" + std::string(t.text) +
                             "' at position " + std::to_string(t.pos));
    }
    return *v;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Vocabulary& voc_;
};

// Binding levels: 0 <->, 1 ->, 2 |, 3 &, 4 prefix operators and atoms.
inline int level(Op op) {
  switch (op) {
    case Op::kIff:
      return 0;
    case Op::kImplies:
      return 1;
    case Op::kOr:
      return 2;
    case Op::kAnd:
      return 3;
    default:
      return 4;
  }
}

inline std::string render_index(FeatureSet x, const Vocabulary& voc) {
  std::string out;
  for (auto i : x.indices()) {
    if (!out.empty()) out += ',';
    out += voc.feature_name(i);
  }
  return out;
}

inline void render(const Formula& f, const Vocabulary& voc, int min_level, std::string& out) {
  const int lv = level(f.op());
  const bool parens = lv < min_level;
  if (parens) out += '(';
  switch (f.op()) {
    case Op::kTrue:
      out += "true";
      break;
    case Op::kFalse:
      out += "false";
      break;
    case Op::kFeature:
      out += voc.feature_name(f.atom());
      break;
    case Op::kDecision:
      out += "t(" + voc.value_name(f.atom()) + ")";
      break;
    case Op::kNot:
      out += '~';
      render(f.lhs(), voc, 4, out);
      break;
    case Op::kKnow:
      out += "K ";
      render(f.lhs(), voc, 4, out);
      break;
    case Op::kBox:
      out += "[" + render_index(f.index(), voc) + "] ";
      render(f.lhs(), voc, 4, out);
      break;
    case Op::kDiamond:
      out += "<" + render_index(f.index(), voc) + "> ";
      render(f.lhs(), voc, 4, out);
      break;
    case Op::kAssign:
      out += "[" + voc.value_name(f.atom()) + " := ";
      render(f.lhs(), voc, 0, out);
      out += "] ";
      render(f.rhs(), voc, 4, out);
      break;
    case Op::kCounterfactual:
      out += '(';
      render(f.lhs(), voc, 0, out);
      out += " =>";
      if (f.index() != voc.all_features()) out += "{" + render_index(f.index(), voc) + "}";
      out += ' ';
      render(f.rhs(), voc, 0, out);
      out += ')';
      break;
    case Op::kAnd:
      render(f.lhs(), voc, 3, out);
      out += " & ";
      render(f.rhs(), voc, 4, out);
      break;
    case Op::kOr:
      render(f.lhs(), voc, 2, out);
      out += " | ";
      render(f.rhs(), voc, 3, out);
      break;
    case Op::kImplies:
      render(f.lhs(), voc, 2, out);
      out += " -> ";
      render(f.rhs(), voc, 1, out);
      break;
    case Op::kIff:
      render(f.lhs(), voc, 0, out);
      out += " <-> ";
      render(f.rhs(), voc, 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

/// Parses the ASCII syntax against `voc`. Throws ParseError on malformed
/// input and UnknownNameError on undeclared atoms or values.
inline Formula parse_formula(std::string_view text, const Vocabulary& voc) {
  return detail::Parser(text, voc).parse();
}

/// Prints with minimal parentheses; the output parses back to the same tree.
inline std::string render_formula(const Formula& f, const Vocabulary& voc) {
  std::string out;
  detail::render(f, voc, 0, out);
  return out;
}

}  // namespace bcl
