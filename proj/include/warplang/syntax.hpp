#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "warplang/warp.hpp"

namespace warplang {

struct Span {
  int line = 0;  // 0 = unknown
  int col = 0;
  std::string to_string() const {
    return std::to_string(line) + ":" + std::to_string(col);
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(Span span, const std::string& msg)
      : std::runtime_error(msg), span(span) {}
  Span span;
};

class TypeError : public std::runtime_error {
 public:
  TypeError(Span span, const std::string& msg)
      : std::runtime_error(msg), span(span) {}
  Span span;
};

// Signals a broken internal invariant (e.g. evaluating an ill-typed term).
class InternalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Types

enum class Ground { Int, Bool };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  struct GroundT {
    Ground ground;
  };
  struct StreamT {
    TypePtr elem;
  };
  struct ArrowT {
    TypePtr dom, cod;
  };
  struct ProdT {
    TypePtr left, right;
  };
  struct SumT {
    TypePtr left, right;
  };
  struct WarpedT {
    Warp warp;  // stored canonical
    TypePtr body;
  };
  using Node = std::variant<GroundT, StreamT, ArrowT, ProdT, SumT, WarpedT>;
  Node node;
};

TypePtr t_int();
TypePtr t_bool();
TypePtr t_ground(Ground g);
TypePtr t_stream(TypePtr elem);
TypePtr t_arrow(TypePtr dom, TypePtr cod);
TypePtr t_prod(TypePtr l, TypePtr r);
TypePtr t_sum(TypePtr l, TypePtr r);
TypePtr t_warped(Warp w, TypePtr body);

bool type_eq(const TypePtr& a, const TypePtr& b);
std::string to_string(const TypePtr& t);

template <typename T>
const T* type_as(const TypePtr& t) {
  return std::get_if<T>(&t->node);
}

// ---------------------------------------------------------------------------
// Coercions

struct Coercion;
using CoePtr = std::shared_ptr<const Coercion>;

struct Coercion {
  struct Id {};
  struct Seq {
    CoePtr first, second;
  };
  struct OnStream {
    CoePtr elem;
  };
  struct OnArrow {
    CoePtr dom;  // contravariant
    CoePtr cod;
  };
  struct OnProd {
    CoePtr left, right;
  };
  struct OnSum {
    CoePtr left, right;
  };
  struct OnWarp {
    Warp warp;
    CoePtr body;
  };
  struct Wrap {};    // τ <: W id τ
  struct Unwrap {};  // W id τ <: τ
  struct Concat {    // W p (W q τ) <: W (p∗q) τ
    Warp p, q;
  };
  struct Decat {  // W (p∗q) τ <: W p (W q τ)
    Warp p, q;
  };
  struct Inflate {};  // ν <: W ω ν
  struct Dist {};     // W p (τ1×τ2) <: W p τ1 × W p τ2
  struct Fact {};     // W p τ1 × W p τ2 <: W p (τ1×τ2)
  struct Delay {      // W p τ <: W q τ, requires q ≤ p
    Warp from, to;
  };
  using Node = std::variant<Id, Seq, OnStream, OnArrow, OnProd, OnSum, OnWarp,
                            Wrap, Unwrap, Concat, Decat, Inflate, Dist, Fact,
                            Delay>;
  Node node;
};

CoePtr c_id();
CoePtr c_seq(CoePtr a, CoePtr b);
CoePtr c_stream(CoePtr a);
CoePtr c_arrow(CoePtr dom, CoePtr cod);
CoePtr c_prod(CoePtr l, CoePtr r);
CoePtr c_sum(CoePtr l, CoePtr r);
CoePtr c_warp(Warp w, CoePtr a);
CoePtr c_wrap();
CoePtr c_unwrap();
CoePtr c_concat(Warp p, Warp q);
CoePtr c_decat(Warp p, Warp q);
CoePtr c_inflate();
CoePtr c_dist();
CoePtr c_fact();
CoePtr c_delay(Warp from, Warp to);  // well-formed only when leq(to, from)

bool coercion_eq(const CoePtr& a, const CoePtr& b);
std::string to_string(const CoePtr& c);

template <typename T>
const T* coe_as(const CoePtr& c) {
  return std::get_if<T>(&c->node);
}

// Finite map from variable names to coercions, kept in insertion order.
using CtxCoercion = std::vector<std::pair<std::string, CoePtr>>;

// ---------------------------------------------------------------------------
// Terms

using ScalarVal = std::variant<int64_t, bool>;

enum class PrimOp { Add, Sub, Mul, Not, Eq };

const char* prim_name(PrimOp op);
int prim_arity(PrimOp op);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// One node type covers both levels of the calculus: implicit terms are the
// coercion-free fragment (no CoeR/CoeL), explicit terms the whole thing.
struct Term {
  struct Var {
    std::string name;
  };
  struct Fun {
    std::string var;
    TypePtr annot;
    TermPtr body;
  };
  struct App {
    TermPtr fn, arg;
  };
  struct Pair {
    TermPtr left, right;
  };
  struct Proj {
    int index;  // 1 or 2
    TermPtr body;
  };
  struct Inj {
    int index;      // 1 or 2
    TypePtr other;  // annotation: the other summand
    TermPtr body;
  };
  struct Case {
    TermPtr scrut;
    std::string left_var;
    TermPtr left_body;
    std::string right_var;
    TermPtr right_body;
  };
  struct Scalar {
    ScalarVal value;
  };
  struct Prim {
    PrimOp op;
    std::vector<TermPtr> args;
  };
  struct Rec {
    std::string var;
    TypePtr annot;
    TermPtr body;
  };
  struct By {
    TermPtr body;
    Warp warp;
  };
  struct Head {
    TermPtr body;
  };
  struct Tail {
    TermPtr body;
  };
  struct Cons {
    TermPtr head, tail;
  };
  struct CoeR {
    TermPtr body;
    CoePtr coe;
  };
  struct CoeL {
    CtxCoercion coe;
    TermPtr body;
  };
  using Node = std::variant<Var, Fun, App, Pair, Proj, Inj, Case, Scalar, Prim,
                            Rec, By, Head, Tail, Cons, CoeR, CoeL>;
  Node node;
  Span span;
};

TermPtr m_var(std::string name, Span s = {});
TermPtr m_fun(std::string var, TypePtr annot, TermPtr body, Span s = {});
TermPtr m_app(TermPtr fn, TermPtr arg, Span s = {});
TermPtr m_pair(TermPtr l, TermPtr r, Span s = {});
TermPtr m_proj(int index, TermPtr body, Span s = {});
TermPtr m_inj(int index, TypePtr other, TermPtr body, Span s = {});
TermPtr m_case(TermPtr scrut, std::string lv, TermPtr lb, std::string rv,
               TermPtr rb, Span s = {});
TermPtr m_scalar(ScalarVal v, Span s = {});
TermPtr m_int(int64_t v, Span s = {});
TermPtr m_bool(bool v, Span s = {});
TermPtr m_prim(PrimOp op, std::vector<TermPtr> args, Span s = {});
TermPtr m_rec(std::string var, TypePtr annot, TermPtr body, Span s = {});
TermPtr m_by(TermPtr body, Warp w, Span s = {});
TermPtr m_head(TermPtr body, Span s = {});
TermPtr m_tail(TermPtr body, Span s = {});
TermPtr m_cons(TermPtr head, TermPtr tail, Span s = {});
TermPtr m_coer(TermPtr body, CoePtr coe, Span s = {});
TermPtr m_coel(CtxCoercion coe, TermPtr body, Span s = {});

// let x : τ = t1 in t2 is sugar for (fun (x:τ) -> t2) t1.
TermPtr m_let(std::string var, TypePtr annot, TermPtr bound, TermPtr body,
              Span s = {});

template <typename T>
const T* term_as(const TermPtr& t) {
  return std::get_if<T>(&t->node);
}

bool term_eq(const TermPtr& a, const TermPtr& b);
std::string to_string(const TermPtr& t);

bool is_implicit(const TermPtr& t);
TermPtr erase(const TermPtr& t);
std::set<std::string> free_vars(const TermPtr& t);

// ---------------------------------------------------------------------------
// Contexts and programs

struct Binding {
  std::string name;
  TypePtr type;
};

using Context = std::vector<Binding>;

const TypePtr* ctx_lookup(const Context& ctx, const std::string& name);
Context ctx_extend(const Context& ctx, const std::string& name, TypePtr type);

struct Definition {
  std::string name;
  TypePtr annot;
  TermPtr body;  // implicit
  Span span;
  bool hidden = false;  // synthesized group binding, not user-visible
};

struct Program {
  std::vector<Definition> defs;
};

}  // namespace warplang
