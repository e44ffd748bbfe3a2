#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "bdtl/formula.hpp"

namespace bdtl {

namespace detail {

struct Token {
  std::string text;
  size_t pos;
};

inline std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  size_t i = 0;
  auto starts = [&](const char* s) {
    return src.compare(i, std::char_traits<char>::length(s), s) == 0;
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == ';') break;  // comment to end of line
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word = src.substr(i, j - i);
      if (word.find("__") != std::string::npos)
        throw input_error("identifier '" + word +
                          "' uses the reserved '__' suffix scheme");
      out.push_back({word, i});
      i = j;
      continue;
    }
    bool matched = false;
    for (const char* tok : {"<->", "<>1", "<>2", "(+)", "(.)", "(-)", "[]1", "[]2",
                            "->", "<>", "[]", "(", ")", "!", "~", "#", "&", "|"}) {
      if (starts(tok)) {
        out.push_back({tok, i});
        i += std::char_traits<char>::length(tok);
        matched = true;
        break;
      }
    }
    if (!matched)
      throw input_error("unexpected character '" + std::string(1, c) + "' at offset " +
                        std::to_string(i));
  }
  return out;
}

inline bool is_tag_word(const std::string& w) {
  return w == "Pr" || w == "Bl" || w == "Db" || w == "Cf" || w == "Uc" || w == "B" ||
         w == "Pl" || w == "Pr1" || w == "Pr2";
}

class Parser {
 public:
  Parser(LogicId logic, const std::string& src)
      : logic_(logic), toks_(tokenize(src)) {}

  ORef parse_outer_full() {
    ORef f = outer_iff();
    expect_end();
    return f;
  }

  BDRef parse_bd_full() {
    BDRef f = bd_or();
    expect_end();
    return f;
  }

 private:
  LogicId logic_;
  std::vector<Token> toks_;
  size_t p_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    std::string at = p_ < toks_.size()
                         ? "near '" + toks_[p_].text + "' (offset " +
                               std::to_string(toks_[p_].pos) + ")"
                         : "at end of input";
    throw input_error(msg + " " + at);
  }
  bool peek(const char* t) const { return p_ < toks_.size() && toks_[p_].text == t; }
  bool accept(const char* t) {
    if (peek(t)) {
      ++p_;
      return true;
    }
    return false;
  }
  void expect(const char* t) {
    if (!accept(t)) fail(std::string("expected '") + t + "'");
  }
  void expect_end() {
    if (p_ != toks_.size()) fail("trailing input");
  }
  bool luk_family() const { return !is_nluk_family(logic_); }

  void require_luk(const char* conn) {
    if (!luk_family())
      fail(std::string("connective '") + conn + "' is not part of logic " +
           logic_name(logic_));
  }

  ORef outer_iff() {
    ORef f = outer_impl();
    while (peek("<->")) {
      require_luk("<->");
      ++p_;
      f = o_iff(f, outer_impl());
    }
    return f;
  }
  ORef outer_impl() {
    ORef f = outer_or();
    if (accept("->")) {
      ORef rhs = outer_impl();
      return luk_family() ? o_impl(f, rhs) : o_nimpl(f, rhs);
    }
    return f;
  }
  ORef outer_or() {
    ORef f = outer_and();
    while (peek("|")) {
      require_luk("|");
      ++p_;
      f = o_or_sugar(f, outer_and());
    }
    return f;
  }
  ORef outer_and() {
    ORef f = outer_plus();
    while (accept("&"))
      f = luk_family() ? o_and_sugar(f, outer_plus()) : o_and(f, outer_plus());
    return f;
  }
  ORef outer_plus() {
    ORef f = outer_times();
    for (;;) {
      if (peek("(+)")) {
        require_luk("(+)");
        ++p_;
        f = o_oplus(f, outer_times());
      } else if (peek("(-)")) {
        require_luk("(-)");
        ++p_;
        f = o_ominus(f, outer_times());
      } else {
        return f;
      }
    }
  }
  ORef outer_times() {
    ORef f = outer_unary();
    while (peek("(.)")) {
      require_luk("(.)");
      ++p_;
      f = o_odot(f, outer_unary());
    }
    return f;
  }

  ORef outer_unary() {
    if (accept("!")) {
      if (logic_ == LogicId::LukDelta || logic_ == LogicId::FourPr)
        fail("'!' is not part of logic " + logic_name(logic_));
      return o_bdneg(outer_unary());
    }
    if (accept("~"))
      return luk_family() ? o_lneg(outer_unary()) : o_nneg(outer_unary());
    if (accept("#")) {
      if (!luk_family()) fail("'#' is not part of logic " + logic_name(logic_));
      return o_delta(outer_unary());
    }
    return outer_atom();
  }

  ORef outer_atom() {
    if (accept("(")) {
      ORef f = outer_iff();
      expect(")");
      return f;
    }
    if (p_ >= toks_.size()) fail("expected a formula");
    const std::string& w = toks_[p_].text;
    if (is_tag_word(w)) {
      ++p_;
      return modal_atom(w);
    }
    if (std::isupper(static_cast<unsigned char>(w[0])))
      fail("unknown modality '" + w + "'");
    if (!std::islower(static_cast<unsigned char>(w[0]))) fail("expected a formula");
    if (is_propositional(logic_)) {
      ++p_;
      return o_var(w);
    }
    fail("bare variable '" + w + "' is not a formula of " + logic_name(logic_) +
         "; a modal atom is required");
  }

  ORef modal_atom(const std::string& word) {
    Tag t;
    if (word == "Pr") t = Tag::Pr;
    else if (word == "Bl") t = Tag::Bl;
    else if (word == "Db") t = Tag::Db;
    else if (word == "Cf") t = Tag::Cf;
    else if (word == "Uc") t = Tag::Uc;
    else if (word == "B") t = Tag::B;
    else if (word == "Pl") t = Tag::Pl;
    else if (word == "Pr1") t = Tag::Pr1;
    else t = Tag::Pr2;

    bool ok = false;
    switch (logic_) {
      case LogicId::PrLuk2: ok = t == Tag::Pr; break;
      case LogicId::FourPr:
        ok = t == Tag::Bl || t == Tag::Db || t == Tag::Cf || t == Tag::Uc;
        break;
      case LogicId::BelLuk2: ok = t == Tag::B; break;
      case LogicId::BelNLuk: ok = t == Tag::B || t == Tag::Pl; break;
      case LogicId::ProbS5: ok = t == Tag::Pr; break;
      case LogicId::ProbNLukS5: ok = t == Tag::Pr1 || t == Tag::Pr2; break;
      default: ok = false;
    }
    if (!ok) fail("modality '" + word + "' is not part of logic " + logic_name(logic_));

    if (is_s5_family(logic_)) {
      int want = t == Tag::Pr2 ? 2 : 1;
      int rel;
      bool box;
      if (accept("[]") || accept("[]1")) { box = true; rel = 1; }
      else if (accept("[]2")) { box = true; rel = 2; }
      else if (accept("<>") || accept("<>1")) { box = false; rel = 1; }
      else if (accept("<>2")) { box = false; rel = 2; }
      else fail("modality '" + word + "' requires a [] or <> head");
      if (rel != want)
        fail("modality '" + word + "' requires the index-" + std::to_string(want) +
             " head");
      BDRef body = bd_unary();
      return o_atom(t, box ? bd_box(body, rel) : bd_dia(body, rel));
    }
    return o_atom(t, bd_unary());
  }

  BDRef bd_or() {
    BDRef f = bd_and();
    while (accept("|")) f = bd_or_node(f, bd_and());
    return f;
  }
  BDRef bd_and() {
    BDRef f = bd_unary();
    while (accept("&")) f = bd_and_node(f, bd_unary());
    return f;
  }
  static BDRef bd_or_node(BDRef a, BDRef b) { return bdtl::bd_or(std::move(a), std::move(b)); }
  static BDRef bd_and_node(BDRef a, BDRef b) { return bdtl::bd_and(std::move(a), std::move(b)); }
  BDRef bd_unary() {
    if (accept("!")) return bd_neg(bd_unary());
    return bd_primary();
  }
  BDRef bd_primary() {
    if (accept("(")) {
      BDRef f = bd_or();
      expect(")");
      return f;
    }
    if (p_ >= toks_.size()) fail("expected an inner formula");
    const std::string& w = toks_[p_].text;
    if (w == "[]" || w == "[]1" || w == "[]2" || w == "<>" || w == "<>1" || w == "<>2")
      fail("modalities cannot nest inside an atom body");
    if (is_tag_word(w)) fail("modal atoms cannot nest inside an atom body");
    if (!std::islower(static_cast<unsigned char>(w[0])))
      fail("expected an inner variable");
    ++p_;
    return bd_var(w);
  }
};

}  // namespace detail

inline ORef parse_formula(LogicId logic, const std::string& src) {
  return detail::Parser(logic, src).parse_outer_full();
}

inline BDRef parse_bd(const std::string& src) {
  return detail::Parser(LogicId::PrLuk2, src).parse_bd_full();
}

// One formula per nonempty non-comment line.
inline std::vector<ORef> parse_lines(LogicId logic, const std::string& text) {
  std::vector<ORef> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    std::string line =
        end == std::string::npos ? text.substr(start) : text.substr(start, end - start);
    size_t semi = line.find(';');
    if (semi != std::string::npos) line = line.substr(0, semi);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (!blank) out.push_back(parse_formula(logic, line));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace bdtl
