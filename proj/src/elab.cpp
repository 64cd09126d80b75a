#include "warplang/elab.hpp"

#include "warplang/subtype.hpp"

namespace warplang {

namespace {

[[noreturn]] void clause_error(const char* clause, const TermPtr& at,
                               const std::string& msg) {
  throw TypeError(at->span, std::string(clause) + ": " + msg);
}

std::string show(const TypePtr& t) { return "'" + to_string(t) + "'"; }

// Wraps e in a coercion to `want`, or fails with both types printed.
TermPtr coerce_to(const char* clause, const TermPtr& at, const TermPtr& e,
                  const TypePtr& have, const TypePtr& want) {
  auto c = coe(have, want);
  if (!c)
    clause_error(clause, at,
                 "type " + show(have) + " is not a subtype of " + show(want));
  if (coe_as<Coercion::Id>(*c)) return e;
  return m_coer(e, *c, e->span);
}

// Exposes the rump of a normalized non-product type, failing with a shape
// message otherwise.
const Type::WarpedT* normal_head(const char* clause, const TermPtr& at,
                                 const TypePtr& normalized,
                                 const char* wanted) {
  auto* w = type_as<Type::WarpedT>(normalized);
  if (!w) clause_error(clause, at, std::string("expected ") + wanted +
                                       ", got " + show(normalized));
  return w;
}

void reject_shadowing(const char* clause, const Context& ctx,
                      const std::string& name, const TermPtr& at) {
  if (ctx_lookup(ctx, name))
    clause_error(clause, at, "variable '" + name + "' is already bound");
}

}  // namespace

Elaborated elaborate(const Context& ctx, const TermPtr& t) {
  if (auto* v = term_as<Term::Var>(t)) {
    if (const TypePtr* ty = ctx_lookup(ctx, v->name)) return {*ty, t};
    clause_error("Var", t, "unbound variable '" + v->name + "'");
  }

  if (auto* f = term_as<Term::Fun>(t)) {
    reject_shadowing("Fun", ctx, f->var, t);
    Elaborated body = elaborate(ctx_extend(ctx, f->var, f->annot), f->body);
    return {t_arrow(f->annot, body.type),
            m_fun(f->var, f->annot, body.term, t->span)};
  }

  if (auto* a = term_as<Term::App>(t)) {
    Elaborated fn = elaborate(ctx, a->fn);
    Elaborated arg = elaborate(ctx, a->arg);
    TypePtr n = normalize(fn.type);
    auto* w = normal_head("App", a->fn, n, "a function");
    auto* arrow = type_as<Type::ArrowT>(w->body);
    if (!arrow)
      clause_error("App", a->fn, "expected a function, got " + show(fn.type));
    TypePtr bare = t_arrow(arrow->dom, arrow->cod);
    TermPtr fe = coerce_to("App", a->fn, fn.term, fn.type, bare);
    TermPtr ae = coerce_to("App", a->arg, arg.term, arg.type, arrow->dom);
    return {arrow->cod, m_app(fe, ae, t->span)};
  }

  if (auto* p = term_as<Term::Pair>(t)) {
    Elaborated l = elaborate(ctx, p->left);
    Elaborated r = elaborate(ctx, p->right);
    return {t_prod(l.type, r.type), m_pair(l.term, r.term, t->span)};
  }

  if (auto* p = term_as<Term::Proj>(t)) {
    Elaborated body = elaborate(ctx, p->body);
    TypePtr n = normalize(body.type);
    auto* prod = type_as<Type::ProdT>(n);
    if (!prod)
      clause_error("Proj", p->body, "expected a pair, got " + show(body.type));
    TermPtr be = coerce_to("Proj", p->body, body.term, body.type, n);
    return {p->index == 1 ? prod->left : prod->right,
            m_proj(p->index, be, t->span)};
  }

  if (auto* i = term_as<Term::Inj>(t)) {
    Elaborated body = elaborate(ctx, i->body);
    TypePtr sum = i->index == 1 ? t_sum(body.type, i->other)
                                : t_sum(i->other, body.type);
    return {sum, m_inj(i->index, i->other, body.term, t->span)};
  }

  if (auto* c = term_as<Term::Case>(t)) {
    Elaborated scrut = elaborate(ctx, c->scrut);
    TypePtr n = normalize(scrut.type);
    auto* w = normal_head("Case", c->scrut, n, "a sum");
    auto* sum = type_as<Type::SumT>(w->body);
    if (!sum)
      clause_error("Case", c->scrut, "expected a sum, got " + show(scrut.type));
    TypePtr bare = t_sum(sum->left, sum->right);
    TermPtr se = coerce_to("Case", c->scrut, scrut.term, scrut.type, bare);
    reject_shadowing("Case", ctx, c->left_var, t);
    reject_shadowing("Case", ctx, c->right_var, t);
    Elaborated lb =
        elaborate(ctx_extend(ctx, c->left_var, sum->left), c->left_body);
    Elaborated rb =
        elaborate(ctx_extend(ctx, c->right_var, sum->right), c->right_body);
    auto join = type_sup(lb.type, rb.type);
    if (!join)
      clause_error("Case", t, "branch types " + show(lb.type) + " and " +
                                  show(rb.type) + " have no supremum");
    TermPtr le = coerce_to("Case", c->left_body, lb.term, lb.type, *join);
    TermPtr re = coerce_to("Case", c->right_body, rb.term, rb.type, *join);
    return {*join,
            m_case(se, c->left_var, le, c->right_var, re, t->span)};
  }

  if (auto* s = term_as<Term::Scalar>(t)) {
    return {std::holds_alternative<int64_t>(s->value) ? t_int() : t_bool(), t};
  }

  if (auto* p = term_as<Term::Prim>(t)) {
    std::vector<TermPtr> args;
    for (size_t i = 0; i < p->args.size(); ++i) {
      Elaborated a = elaborate(ctx, p->args[i]);
      args.push_back(coerce_to("Prim", p->args[i], a.term, a.type,
                               prim_arg_type(p->op, int(i))));
    }
    return {prim_result_type(p->op), m_prim(p->op, std::move(args), t->span)};
  }

  if (auto* r = term_as<Term::Rec>(t)) {
    reject_shadowing("Rec", ctx, r->var, t);
    Context inner = ctx_extend(ctx, r->var, t_warped(Warp::later(), r->annot));
    Elaborated body = elaborate(inner, r->body);
    TermPtr be = coerce_to("Rec", r->body, body.term, body.type, r->annot);
    return {r->annot, m_rec(r->var, r->annot, be, t->span)};
  }

  if (auto* b = term_as<Term::By>(t)) {
    // Elaborate under the divided context Γ|fv(t) \ p and reintroduce the
    // modality on the used bindings with the canonical coercions
    // Γ(x) <: W p (Γ(x)\p), which always exist.
    Context used = ctx_restrict(ctx, free_vars(b->body));
    Context divided;
    CtxCoercion under;
    for (auto& bind : used) {
      TypePtr d = type_div(bind.type, b->warp);
      divided.push_back({bind.name, d});
      auto c = coe(bind.type, t_warped(b->warp, d));
      assert(c.has_value());
      under.emplace_back(bind.name, *c);
    }
    Elaborated body = elaborate(divided, b->body);
    TermPtr e = m_by(body.term, b->warp, t->span);
    if (!under.empty()) e = m_coel(std::move(under), e, t->span);
    return {t_warped(b->warp, body.type), e};
  }

  if (auto* h = term_as<Term::Head>(t)) {
    Elaborated body = elaborate(ctx, h->body);
    TypePtr n = normalize(body.type);
    auto* w = normal_head("Head", h->body, n, "a stream");
    auto* s = type_as<Type::StreamT>(w->body);
    if (!s)
      clause_error("Head", h->body, "expected a stream, got " + show(body.type));
    TermPtr be =
        coerce_to("Head", h->body, body.term, body.type, t_stream(s->elem));
    return {s->elem, m_head(be, t->span)};
  }

  if (auto* tl = term_as<Term::Tail>(t)) {
    Elaborated body = elaborate(ctx, tl->body);
    TypePtr n = normalize(body.type);
    auto* w = normal_head("Tail", tl->body, n, "a stream");
    auto* s = type_as<Type::StreamT>(w->body);
    if (!s)
      clause_error("Tail", tl->body,
                   "expected a stream, got " + show(body.type));
    TypePtr bare = t_stream(s->elem);
    TermPtr be = coerce_to("Tail", tl->body, body.term, body.type, bare);
    return {t_warped(Warp::later(), bare), m_tail(be, t->span)};
  }

  if (auto* c = term_as<Term::Cons>(t)) {
    Elaborated hd = elaborate(ctx, c->head);
    Elaborated tle = elaborate(ctx, c->tail);
    TypePtr n = normalize(tle.type);
    auto* w = normal_head("Cons", c->tail, n, "a stream");
    auto* s = type_as<Type::StreamT>(w->body);
    if (!s)
      clause_error("Cons", c->tail,
                   "tail is not a stream: " + show(tle.type));
    auto join = type_sup(hd.type, s->elem);
    if (!join)
      clause_error("Cons", t, "head type " + show(hd.type) +
                                  " and element type " + show(s->elem) +
                                  " have no supremum");
    TermPtr he = coerce_to("Cons", c->head, hd.term, hd.type, *join);
    TermPtr te = coerce_to("Cons", c->tail, tle.term, tle.type,
                           t_warped(Warp::later(), t_stream(*join)));
    return {t_stream(*join), m_cons(he, te, t->span)};
  }

  if (term_as<Term::CoeR>(t) || term_as<Term::CoeL>(t))
    throw TypeError(t->span, "elaborate expects an implicit term");
  throw InternalError("elaborate: unhandled term");
}

std::vector<ElabDef> elaborate_program(const Program& prog) {
  std::vector<ElabDef> out;
  Context top;
  for (const Definition& def : prog.defs) {
    Elaborated e = elaborate(top, def.body);
    TermPtr body = e.term;
    if (type_eq(e.type, def.annot)) {
      // nothing to do
    } else if (auto c = coe(e.type, def.annot)) {
      if (!coe_as<Coercion::Id>(*c)) body = m_coer(body, *c, def.span);
    } else {
      throw TypeError(def.span, "definition '" + def.name + "' has type " +
                                    show(e.type) +
                                    ", which is not a subtype of its "
                                    "annotation " +
                                    show(def.annot));
    }
    top = ctx_extend(top, def.name, def.annot);
    out.push_back({def.name, def.annot, body, def.hidden});
  }
  return out;
}

}  // namespace warplang
