#include "warplang/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <set>
#include <vector>

#include "warplang/warp_expr.hpp"

namespace warplang {

namespace {

enum class Tok {
  Ident, Int, Keyword, Symbol, End,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

const std::set<std::string> kKeywords = {
    "def", "rec", "and", "fun", "let", "in", "by", "match", "with",
    "inl", "inr", "fst", "snd", "head", "tail", "not", "true", "false",
    "W", "Stream", "Int", "Bool",
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws_and_comments();
      Span here{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", here});
        return out;
      }
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_])))
          num += advance();
        out.push_back({Tok::Int, num, here});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_' || src_[pos_] == '\''))
          id += advance();
        out.push_back({kKeywords.count(id) ? Tok::Keyword : Tok::Ident,
                       std::move(id), here});
      } else {
        std::string sym;
        auto two = pos_ + 1 < src_.size() ? src_.substr(pos_, 2) : "";
        if (two == "->" || two == "::" || two == "==" || two == "<=") {
          sym = two;
          advance();
          advance();
        } else if (std::string("(){}[]:;,=+-*\\@").find(c) !=
                   std::string::npos) {
          sym += advance();
        } else {
          throw ParseError(here, std::string("unsupported character '") + c +
                                     "'");
        }
        out.push_back({Tok::Symbol, std::move(sym), here});
      }
    }
  }

 private:
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

  void skip_ws_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Program program() {
    Program prog;
    std::set<std::string> names;
    int group_counter = 0;
    while (!at_end()) {
      parse_def_group(prog, names, group_counter);
    }
    return prog;
  }

  TermPtr term_entry() {
    TermPtr t = term();
    expect_end();
    return t;
  }

  TypePtr type_entry() {
    TypePtr t = type();
    expect_end();
    return t;
  }

  Warp warp_entry() {
    Warp w = warp_literal();
    expect_end();
    return w;
  }

  WarpQuery warp_expr_entry() {
    Warp acc = warp_literal();
    while (true) {
      if (match(Tok::Symbol, "*")) {
        acc = compose(acc, warp_literal());
      } else if (match(Tok::Symbol, "\\")) {
        acc = residual(acc, warp_literal());
      } else if (peek().kind == Tok::Ident && peek().text == "sup") {
        advance();
        acc = sup(acc, warp_literal());
      } else if (peek().kind == Tok::Ident && peek().text == "inf") {
        advance();
        acc = inf(acc, warp_literal());
      } else {
        break;
      }
    }
    WarpQuery out;
    if (match(Tok::Symbol, "<=")) {
      Warp rhs = warp_literal();
      out.kind = WarpQuery::Kind::Bool;
      out.boolean = leq(acc, rhs);
    } else if (match(Tok::Symbol, "@")) {
      out.kind = WarpQuery::Kind::Number;
      out.number = acc.at(warp_element());
    } else {
      out.kind = WarpQuery::Kind::Warp;
      out.warp = acc;
    }
    expect_end();
    return out;
  }

 private:
  // --- token plumbing ---------------------------------------------------

  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  Token advance() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool check(Tok kind, std::string_view text) const {
    return peek().kind == kind && peek().text == text;
  }
  bool match(Tok kind, std::string_view text) {
    if (!check(kind, text)) return false;
    advance();
    return true;
  }
  Token expect(Tok kind, std::string_view text, std::string_view what) {
    if (!check(kind, text))
      throw ParseError(peek().span, "expected " + std::string(what) +
                                        ", found '" + describe(peek()) + "'");
    return advance();
  }
  static std::string describe(const Token& t) {
    return t.kind == Tok::End ? "end of input" : t.text;
  }
  void expect_end() {
    if (!at_end())
      throw ParseError(peek().span,
                       "unexpected '" + describe(peek()) + "' after input");
  }

  [[noreturn]] void fail(std::string msg) { throw ParseError(peek().span, std::move(msg)); }

  // --- programs ----------------------------------------------------------

  struct RawDef {
    std::string name;
    TypePtr annot;
    TermPtr body;
    Span span;
  };

  RawDef single_def() {
    Span s = peek().span;
    expect(Tok::Keyword, "def", "'def'");
    Token name = advance();
    if (name.kind != Tok::Ident)
      throw ParseError(name.span, "expected definition name");
    expect(Tok::Symbol, ":", "':'");
    TypePtr annot = type();
    expect(Tok::Symbol, "=", "'='");
    TermPtr body = term();
    return {name.text, std::move(annot), std::move(body), s};
  }

  void parse_def_group(Program& prog, std::set<std::string>& names,
                       int& group_counter) {
    auto declare = [&](const std::string& n, Span s) {
      if (!names.insert(n).second)
        throw ParseError(s, "duplicate top-level name '" + n + "'");
    };

    if (check(Tok::Keyword, "rec")) {
      advance();
      std::vector<RawDef> defs;
      defs.push_back(single_def());
      while (match(Tok::Keyword, "and")) {
        Span s = peek().span;
        Token name = advance();
        if (name.kind != Tok::Ident)
          throw ParseError(name.span, "expected definition name after 'and'");
        expect(Tok::Symbol, ":", "':'");
        TypePtr annot = type();
        expect(Tok::Symbol, "=", "'='");
        TermPtr body = term();
        defs.push_back({name.text, std::move(annot), std::move(body), s});
      }
      for (auto& d : defs) declare(d.name, d.span);

      if (defs.size() == 1) {
        // rec def x : τ = t  ≡  def x : τ = rec (x:τ) -> t
        auto& d = defs[0];
        prog.defs.push_back({d.name, d.annot,
                             m_rec(d.name, d.annot, d.body, d.span), d.span});
        return;
      }

      // A mutually recursive group becomes one Rec over a right-nested
      // product, with each member rebound to the matching projection
      // (under the later modality) before the tuple of bodies.
      std::string group = "$rec" + std::to_string(group_counter++);
      TypePtr prod = defs.back().annot;
      for (size_t i = defs.size() - 1; i-- > 0;)
        prod = t_prod(defs[i].annot, prod);

      TermPtr tuple = defs.back().body;
      for (size_t i = defs.size() - 1; i-- > 0;)
        tuple = m_pair(defs[i].body, tuple, defs[i].span);

      auto projection = [&](size_t i) {
        TermPtr t = m_var(group, defs[i].span);
        for (size_t k = 0; k < i; ++k) t = m_proj(2, t, defs[i].span);
        if (i + 1 < defs.size()) t = m_proj(1, t, defs[i].span);
        return t;
      };

      TermPtr body = tuple;
      for (size_t i = defs.size(); i-- > 0;) {
        body = m_let(defs[i].name, t_warped(Warp::later(), defs[i].annot),
                     projection(i), body, defs[i].span);
      }
      Span gs = defs[0].span;
      prog.defs.push_back({group, prod, m_rec(group, prod, body, gs), gs, true});
      for (size_t i = 0; i < defs.size(); ++i) {
        TermPtr t = m_var(group, defs[i].span);
        for (size_t k = 0; k < i; ++k) t = m_proj(2, t, defs[i].span);
        if (i + 1 < defs.size()) t = m_proj(1, t, defs[i].span);
        prog.defs.push_back({defs[i].name, defs[i].annot, t, defs[i].span});
      }
      return;
    }

    RawDef d = single_def();
    declare(d.name, d.span);
    prog.defs.push_back({d.name, d.annot, d.body, d.span});
  }

  // --- warp literals -------------------------------------------------------

  ExtNat warp_element() {
    if (peek().kind == Tok::Int) {
      return ExtNat(uint64_t(std::strtoull(advance().text.c_str(), nullptr, 10)));
    }
    if (peek().kind == Tok::Ident && peek().text == "w") {
      advance();
      return ExtNat::omega();
    }
    fail("expected warp element (number or 'w')");
  }

  Warp warp_literal() {
    std::vector<ExtNat> prefix, period;
    if (match(Tok::Symbol, "{")) {
      while (!check(Tok::Symbol, "}")) prefix.push_back(warp_element());
      expect(Tok::Symbol, "}", "'}'");
    }
    expect(Tok::Symbol, "(", "'(' of warp literal");
    while (!check(Tok::Symbol, ")")) period.push_back(warp_element());
    Token close = expect(Tok::Symbol, ")", "')'");
    if (period.empty())
      throw ParseError(close.span, "warp period must be nonempty");
    return Warp::canonical(std::move(prefix), std::move(period));
  }

  // --- types ---------------------------------------------------------------

  TypePtr type() {  // arrow, right-associative
    TypePtr dom = sum_type();
    if (match(Tok::Symbol, "->")) return t_arrow(std::move(dom), type());
    return dom;
  }

  TypePtr sum_type() {
    TypePtr t = prod_type();
    while (match(Tok::Symbol, "+")) t = t_sum(std::move(t), prod_type());
    return t;
  }

  TypePtr prod_type() {
    TypePtr t = prefix_type();
    while (match(Tok::Symbol, "*")) t = t_prod(std::move(t), prefix_type());
    return t;
  }

  TypePtr prefix_type() {
    if (match(Tok::Keyword, "Stream")) return t_stream(prefix_type());
    if (match(Tok::Keyword, "W")) {
      Warp w = warp_literal();
      return t_warped(std::move(w), prefix_type());
    }
    return atom_type();
  }

  TypePtr atom_type() {
    if (match(Tok::Keyword, "Int")) return t_int();
    if (match(Tok::Keyword, "Bool")) return t_bool();
    if (match(Tok::Symbol, "(")) {
      TypePtr t = type();
      expect(Tok::Symbol, ")", "')'");
      return t;
    }
    fail("expected a type");
  }

  // --- terms ---------------------------------------------------------------

  TermPtr term() { return cons_term(); }

  TermPtr cons_term() {
    Span s = peek().span;
    TermPtr head = cmp_term();
    if (match(Tok::Symbol, "::"))
      return m_cons(std::move(head), cons_term(), s);
    return head;
  }

  TermPtr cmp_term() {
    Span s = peek().span;
    TermPtr l = add_term();
    if (match(Tok::Symbol, "=="))
      return m_prim(PrimOp::Eq, {std::move(l), add_term()}, s);
    return l;
  }

  TermPtr add_term() {
    Span s = peek().span;
    TermPtr t = mul_term();
    while (true) {
      if (match(Tok::Symbol, "+"))
        t = m_prim(PrimOp::Add, {std::move(t), mul_term()}, s);
      else if (match(Tok::Symbol, "-"))
        t = m_prim(PrimOp::Sub, {std::move(t), mul_term()}, s);
      else
        return t;
    }
  }

  TermPtr mul_term() {
    Span s = peek().span;
    TermPtr t = by_term();
    while (match(Tok::Symbol, "*"))
      t = m_prim(PrimOp::Mul, {std::move(t), by_term()}, s);
    return t;
  }

  TermPtr by_term() {
    Span s = peek().span;
    TermPtr t = app_term();
    while (check(Tok::Keyword, "by")) {
      advance();
      t = m_by(std::move(t), warp_literal(), s);
    }
    return t;
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.kind == Tok::Int || t.kind == Tok::Ident) return true;
    if (t.kind == Tok::Symbol && t.text == "(") return true;
    if (t.kind == Tok::Keyword) {
      // `rec` only opens a term when followed by a binder: `rec def`
      // starts the next top-level group.
      if (t.text == "rec") return peek(1).kind == Tok::Symbol && peek(1).text == "(";
      static const std::set<std::string> starters = {
          "fun", "let",  "match", "true", "false",
          "inl", "inr",  "fst",  "snd",   "head", "tail", "not"};
      return starters.count(t.text) > 0;
    }
    return false;
  }

  TermPtr app_term() {
    Span s = peek().span;
    TermPtr t = prefix_term();
    while (starts_atom()) t = m_app(std::move(t), prefix_term(), s);
    return t;
  }

  TermPtr prefix_term() {
    Span s = peek().span;
    if (match(Tok::Keyword, "head")) return m_head(prefix_term(), s);
    if (match(Tok::Keyword, "tail")) return m_tail(prefix_term(), s);
    if (match(Tok::Keyword, "fst")) return m_proj(1, prefix_term(), s);
    if (match(Tok::Keyword, "snd")) return m_proj(2, prefix_term(), s);
    if (match(Tok::Keyword, "not"))
      return m_prim(PrimOp::Not, {prefix_term()}, s);
    if (check(Tok::Keyword, "inl") || check(Tok::Keyword, "inr")) {
      int index = advance().text == "inl" ? 1 : 2;
      expect(Tok::Symbol, "[", "'['");
      TypePtr other = type();
      expect(Tok::Symbol, "]", "']'");
      return m_inj(index, std::move(other), prefix_term(), s);
    }
    return atom_term();
  }

  TermPtr atom_term() {
    Span s = peek().span;
    if (peek().kind == Tok::Int)
      return m_int(std::strtoll(advance().text.c_str(), nullptr, 10), s);
    if (match(Tok::Keyword, "true")) return m_bool(true, s);
    if (match(Tok::Keyword, "false")) return m_bool(false, s);
    if (peek().kind == Tok::Ident) return m_var(advance().text, s);
    if (match(Tok::Keyword, "fun")) {
      std::vector<std::pair<std::string, TypePtr>> params;
      do {
        expect(Tok::Symbol, "(", "'('");
        Token x = advance();
        if (x.kind != Tok::Ident) throw ParseError(x.span, "expected parameter name");
        expect(Tok::Symbol, ":", "':'");
        TypePtr annot = type();
        expect(Tok::Symbol, ")", "')'");
        params.emplace_back(x.text, std::move(annot));
      } while (check(Tok::Symbol, "("));
      expect(Tok::Symbol, "->", "'->'");
      TermPtr body = term();
      for (size_t i = params.size(); i-- > 0;)
        body = m_fun(params[i].first, params[i].second, std::move(body), s);
      return body;
    }
    if (match(Tok::Keyword, "rec")) {
      expect(Tok::Symbol, "(", "'('");
      Token x = advance();
      if (x.kind != Tok::Ident) throw ParseError(x.span, "expected variable name");
      expect(Tok::Symbol, ":", "':'");
      TypePtr annot = type();
      expect(Tok::Symbol, ")", "')'");
      expect(Tok::Symbol, "->", "'->'");
      return m_rec(x.text, std::move(annot), term(), s);
    }
    if (match(Tok::Keyword, "let")) {
      Token x = advance();
      if (x.kind != Tok::Ident) throw ParseError(x.span, "expected variable name");
      expect(Tok::Symbol, ":", "':'");
      TypePtr annot = type();
      expect(Tok::Symbol, "=", "'='");
      TermPtr bound = term();
      expect(Tok::Keyword, "in", "'in'");
      TermPtr body = term();
      return m_let(x.text, std::move(annot), std::move(bound), std::move(body),
                   s);
    }
    if (match(Tok::Keyword, "match")) {
      TermPtr scrut = term();
      expect(Tok::Keyword, "with", "'with'");
      expect(Tok::Symbol, "{", "'{'");
      expect(Tok::Keyword, "inl", "'inl'");
      Token lv = advance();
      if (lv.kind != Tok::Ident) throw ParseError(lv.span, "expected variable name");
      expect(Tok::Symbol, "->", "'->'");
      TermPtr lb = term();
      expect(Tok::Symbol, ";", "';'");
      expect(Tok::Keyword, "inr", "'inr'");
      Token rv = advance();
      if (rv.kind != Tok::Ident) throw ParseError(rv.span, "expected variable name");
      expect(Tok::Symbol, "->", "'->'");
      TermPtr rb = term();
      expect(Tok::Symbol, "}", "'}'");
      return m_case(std::move(scrut), lv.text, std::move(lb), rv.text,
                    std::move(rb), s);
    }
    if (match(Tok::Symbol, "(")) {
      TermPtr t = term();
      if (match(Tok::Symbol, ",")) {
        TermPtr r = term();
        expect(Tok::Symbol, ")", "')'");
        return m_pair(std::move(t), std::move(r), s);
      }
      expect(Tok::Symbol, ")", "')'");
      return t;
    }
    fail("expected a term");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

Program parse_program(std::string_view source) {
  return Parser(source).program();
}

TermPtr parse_term(std::string_view source) {
  return Parser(source).term_entry();
}

TypePtr parse_type(std::string_view source) {
  return Parser(source).type_entry();
}

Warp parse_warp(std::string_view source) {
  return Parser(source).warp_entry();
}

WarpQuery eval_warp_expr(std::string_view source) {
  return Parser(source).warp_expr_entry();
}

}  // namespace warplang
