#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "warplang/checker.hpp"
#include "warplang/parser.hpp"

using namespace warplang;

namespace {
TypePtr ty(const char* s) { return parse_type(s); }
}  // namespace

TEST_CASE("context restriction") {
  Context ctx = {{"x", t_int()}, {"y", t_bool()}};
  Context r = ctx_restrict(ctx, {"y"});
  REQUIRE(r.size() == 1);
  CHECK(r[0].name == "y");
  CHECK(ctx_restrict(ctx, {"x", "y"}).size() == 2);
  CHECK(ctx_restrict({}, {"x"}).empty());
}

TEST_CASE("context unwarping") {
  Context ctx = {{"x", ty("W (1 0) Int")}, {"y", t_bool()}};
  Context u = ctx_unwarp(ctx, parse_warp("(1 0)"));
  REQUIRE(u.size() == 1);
  CHECK(u[0].name == "x");
  CHECK(type_eq(u[0].type, t_int()));

  CHECK(ctx_unwarp({{"x", t_int()}}, parse_warp("(1 0)")).empty());

  // Warp comparison is up to canonical form: {1}(0 1) is (1 0).
  Context c2 = {{"x", ty("W {1}(0 1) Int")}};
  Context u2 = ctx_unwarp(c2, parse_warp("(1 0)"));
  REQUIRE(u2.size() == 1);
  CHECK(type_eq(u2[0].type, t_int()));
}

TEST_CASE("context coercions") {
  Context ctx = {{"x", t_int()}};
  Context out = check_ctx_coercion({{"x", c_id()}}, ctx);
  REQUIRE(out.size() == 1);
  CHECK(type_eq(out[0].type, t_int()));

  // "next" sends a function under the later modality.
  CoePtr next = c_seq(c_wrap(), c_delay(Warp::identity(), Warp::later()));
  Context fc = {{"f", ty("Int -> Int")}};
  Context out2 = check_ctx_coercion({{"f", next}}, fc);
  CHECK(type_eq(out2[0].type, ty("W {0}(1) (Int -> Int)")));

  CHECK_THROWS_AS(check_ctx_coercion({{"y", c_id()}}, ctx), TypeError);
}

TEST_CASE("guarded recursion checks; unguarded recursion does not") {
  // rec zeroes : Stream Int. 0 :: zeroes
  TermPtr zeroes = m_rec("zeroes", ty("Stream Int"),
                         m_cons(m_int(0), m_var("zeroes")));
  CHECK(type_eq(check_explicit({}, zeroes), ty("Stream Int")));

  // rec nothing : Stream Int. nothing — the variable only exists later.
  TermPtr nothing =
      m_rec("nothing", ty("Stream Int"), m_var("nothing"));
  CHECK_THROWS_WITH_AS(
      check_explicit({}, nothing),
      doctest::Contains("W {0}(1) (Stream Int)"), TypeError);
}

TEST_CASE("the silent stream refiner has the expected type") {
  TypePtr silent = ty("W (0) (Stream Int)");
  TermPtr refiner = m_rec(
      "nothing", silent,
      m_coer(m_var("nothing"), c_concat(Warp::later(), Warp::zero())));
  CHECK(type_eq(check_explicit({}, refiner), silent));
}

TEST_CASE("structural rules") {
  Context ctx = {{"x", t_int()}, {"y", t_bool()}};
  TermPtr t = m_var("x");
  CHECK(type_eq(check_explicit(ctx, t), t_int()));

  // Weakening: extra bindings do not disturb the result.
  Context bigger = ctx_extend(ctx, "z", ty("Stream Int"));
  CHECK(type_eq(check_explicit(bigger, t), t_int()));

  // By checks its body under the unwarped context.
  Context wctx = {{"x", ty("W (2) Int")}, {"y", t_bool()}};
  TermPtr by = m_by(m_var("x"), parse_warp("(2)"));
  CHECK(type_eq(check_explicit(wctx, by), ty("W (2) Int")));
  CHECK_THROWS_AS(check_explicit(wctx, m_by(m_var("y"), parse_warp("(2)"))),
                  TypeError);
}

TEST_CASE("stream primitives") {
  Context ctx = {{"xs", ty("Stream Int")}};
  CHECK(type_eq(check_explicit(ctx, m_head(m_var("xs"))), t_int()));
  CHECK(type_eq(check_explicit(ctx, m_tail(m_var("xs"))),
                ty("W {0}(1) (Stream Int)")));
  CHECK_THROWS_AS(check_explicit(ctx, m_cons(m_int(0), m_var("xs"))),
                  TypeError);  // tail must sit under the later modality
}

TEST_CASE("explicit application is exact") {
  Context ctx = {{"f", ty("Int -> Bool")}, {"x", t_int()}, {"b", t_bool()}};
  CHECK(type_eq(check_explicit(ctx, m_app(m_var("f"), m_var("x"))), t_bool()));
  CHECK_THROWS_AS(check_explicit(ctx, m_app(m_var("f"), m_var("b"))),
                  TypeError);
  CHECK_THROWS_AS(check_explicit(ctx, m_app(m_var("x"), m_var("b"))),
                  TypeError);
}

TEST_CASE("prim signatures") {
  CHECK(type_eq(check_explicit({}, parse_term("1 + 2 * 3")), t_int()));
  CHECK(type_eq(check_explicit({}, parse_term("1 == 2")), t_bool()));
  CHECK(type_eq(check_explicit({}, parse_term("not true")), t_bool()));
  CHECK_THROWS_AS(check_explicit({}, parse_term("not 1")), TypeError);
  CHECK_THROWS_AS(check_explicit({}, parse_term("1 + true")), TypeError);
}

TEST_CASE("sums and cases") {
  TermPtr t = parse_term(
      "match inl [Bool] 1 with { inl x -> x + 1 ; inr y -> 0 }");
  CHECK(type_eq(check_explicit({}, t), t_int()));
  TermPtr bad = parse_term(
      "match inl [Bool] 1 with { inl x -> x ; inr y -> y }");
  CHECK_THROWS_AS(check_explicit({}, bad), TypeError);
}

TEST_CASE("coercion placement errors carry spans") {
  TermPtr bad = m_coer(m_int(1), c_unwrap(), Span{3, 7});
  try {
    check_explicit({}, bad);
    CHECK(false);
  } catch (const TypeError& e) {
    CHECK(e.span.line == 3);
    CHECK(e.span.col == 7);
  }
}
