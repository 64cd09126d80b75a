#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "warplang/parser.hpp"
#include "warplang/syntax.hpp"

using namespace warplang;
using warplang::testing::TermGen;
using warplang::testing::TypeGen;

TEST_CASE("smallest program") {
  Program p = parse_program("def z : Int = 0");
  REQUIRE(p.defs.size() == 1);
  CHECK(p.defs[0].name == "z");
  CHECK(type_eq(p.defs[0].annot, t_int()));
  auto* s = term_as<Term::Scalar>(p.defs[0].body);
  REQUIRE(s != nullptr);
  CHECK(std::get<int64_t>(s->value) == 0);
}

TEST_CASE("guarded stream definition parses to a Rec/Cons tree") {
  Program p =
      parse_program("def zs : Stream Int = rec (zs : Stream Int) -> 0 :: zs");
  REQUIRE(p.defs.size() == 1);
  auto* rec = term_as<Term::Rec>(p.defs[0].body);
  REQUIRE(rec != nullptr);
  CHECK(type_eq(rec->annot, t_stream(t_int())));
  auto* cons = term_as<Term::Cons>(rec->body);
  REQUIRE(cons != nullptr);
  CHECK(term_as<Term::Scalar>(cons->head) != nullptr);
  CHECK(term_as<Term::Var>(cons->tail) != nullptr);
}

TEST_CASE("by carries its warp literal") {
  Program p = parse_program("def f : W (1 0) Int = 0 by (1 0)");
  auto* by = term_as<Term::By>(p.defs[0].body);
  REQUIRE(by != nullptr);
  CHECK(by->warp == parse_warp("(1 0)"));
  auto* w = type_as<Type::WarpedT>(p.defs[0].annot);
  REQUIRE(w != nullptr);
  CHECK(w->warp == parse_warp("(1 0)"));
}

TEST_CASE("rec def groups desugar to a product Rec plus projections") {
  Program p = parse_program(
      "rec def a : W (1 0) (Stream Int) = 0 :: b by (1 0)\n"
      "and b : W (0 1) (Stream Int) = 1 :: a by (0 1)");
  REQUIRE(p.defs.size() == 3);
  CHECK(p.defs[0].hidden);
  CHECK(!p.defs[1].hidden);
  CHECK(p.defs[1].name == "a");
  CHECK(p.defs[2].name == "b");
  auto* rec = term_as<Term::Rec>(p.defs[0].body);
  REQUIRE(rec != nullptr);
  CHECK(type_as<Type::ProdT>(rec->annot) != nullptr);
  CHECK(term_as<Term::Proj>(p.defs[1].body) != nullptr);

  // A single rec def is just sugar for a Rec body.
  Program q = parse_program("rec def zs : Stream Int = 0 :: zs");
  REQUIRE(q.defs.size() == 1);
  CHECK(term_as<Term::Rec>(q.defs[0].body) != nullptr);
}

TEST_CASE("let desugars to application of a function") {
  TermPtr t = parse_term("let x : Int = 1 in x + x");
  auto* app = term_as<Term::App>(t);
  REQUIRE(app != nullptr);
  CHECK(term_as<Term::Fun>(app->fn) != nullptr);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_program("def z : Int = "), ParseError);
  CHECK_THROWS_AS(parse_program("def z : Int = 0 def z : Int = 1"), ParseError);
  CHECK_THROWS_AS(parse_program("def z : Int = ?"), ParseError);
  CHECK_THROWS_AS(parse_term("0 by ()"), ParseError);
  try {
    parse_program("def z : Int =\n  @");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.span.line == 2);
    CHECK(e.span.col == 3);
  }
}

TEST_CASE("comments and whitespace") {
  Program p = parse_program(
      "-- a constant\n"
      "def z : Int = 0 -- trailing\n");
  CHECK(p.defs.size() == 1);
}

TEST_CASE("printing matches the documented forms") {
  CHECK(to_string(t_warped(parse_warp("(1 0)"), t_stream(t_int()))) ==
        "W (1 0) (Stream Int)");
  CHECK(to_string(c_delay(parse_warp("(1)"), parse_warp("{0}(1)"))) ==
        "delay{(1),{0}(1)}");
  CHECK(to_string(parse_term("f x y")) == "f x y");
  CHECK(to_string(parse_term("f (g x)")) == "f (g x)");
  CHECK(to_string(parse_term("0 :: 1 :: xs")) == "0 :: 1 :: xs");
  CHECK(to_string(parse_type("(Int -> Int) -> Stream Int -> Stream Int")) ==
        "(Int -> Int) -> Stream Int -> Stream Int");
}

TEST_CASE("erase drops all coercions and is stable on implicit terms") {
  TermPtr x = m_var("x");
  CHECK(term_eq(erase(m_coer(x, c_id())), x));

  // The silent-stream refiner erases back to `rec nothing -> nothing`.
  TypePtr silent = parse_type("W (0) (Stream Int)");
  TermPtr refiner = m_rec(
      "nothing", silent,
      m_coer(m_var("nothing"), c_concat(Warp::later(), Warp::zero())));
  TermPtr expect = m_rec("nothing", silent, m_var("nothing"));
  CHECK(term_eq(erase(refiner), expect));
  CHECK(is_implicit(erase(refiner)));

  TermGen gen(42);
  for (int i = 0; i < 300; ++i) {
    TermPtr t = gen.next();
    CHECK(is_implicit(t));
    CHECK(term_eq(erase(t), t));
  }
}

TEST_CASE("parser and printer round-trip") {
  TermGen gen(2024);
  for (int i = 0; i < 1000; ++i) {
    TermPtr t = gen.next();
    CAPTURE(to_string(t));
    CHECK(term_eq(parse_term(to_string(t)), t));
  }
  TypeGen tg(2025);
  for (int i = 0; i < 1000; ++i) {
    TypePtr t = tg.next();
    CAPTURE(to_string(t));
    CHECK(type_eq(parse_type(to_string(t)), t));
    Warp w = tg.warp();
    CHECK(parse_warp(w.to_string()) == w);
  }
}

TEST_CASE("free variables") {
  TermPtr t = parse_term("fun (x : Int) -> x + y");
  auto fv = free_vars(t);
  CHECK(fv == std::set<std::string>{"y"});
  fv = free_vars(parse_term("let x : Int = z in x"));
  CHECK(fv == std::set<std::string>{"z"});
  fv = free_vars(parse_term("match s with { inl a -> a ; inr b -> b + c }"));
  CHECK(fv == std::set<std::string>{"s", "c"});
}
