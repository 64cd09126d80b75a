#include "warplang/checker.hpp"

namespace warplang {

Context ctx_restrict(const Context& ctx, const std::set<std::string>& names) {
  Context out;
  for (auto& b : ctx)
    if (names.count(b.name)) out.push_back(b);
  return out;
}

Context ctx_unwarp(const Context& ctx, const Warp& p) {
  Context out;
  for (auto& b : ctx) {
    if (auto* w = type_as<Type::WarpedT>(b.type); w && w->warp == p)
      out.push_back({b.name, w->body});
  }
  return out;
}

Context check_ctx_coercion(const CtxCoercion& coe, const Context& ctx) {
  Context out;
  for (auto& b : ctx) {
    const CoePtr* c = nullptr;
    for (auto& [name, alpha] : coe)
      if (name == b.name) c = &alpha;
    if (!c)
      throw TypeError({}, "context coercion has no entry for variable '" +
                              b.name + "'");
    out.push_back({b.name, coercion_target(*c, b.type)});
  }
  return out;
}

TypePtr prim_result_type(PrimOp op) {
  switch (op) {
    case PrimOp::Add:
    case PrimOp::Sub:
    case PrimOp::Mul: return t_int();
    case PrimOp::Not:
    case PrimOp::Eq: return t_bool();
  }
  return t_int();
}

TypePtr prim_arg_type(PrimOp op, int) {
  return op == PrimOp::Not ? t_bool() : t_int();
}

namespace {

[[noreturn]] void rule_error(const char* rule, const TermPtr& at,
                             const std::string& msg) {
  throw TypeError(at->span, std::string(rule) + ": " + msg);
}

std::string show(const TypePtr& t) { return "'" + to_string(t) + "'"; }

}  // namespace

TypePtr check_explicit(const Context& ctx, const TermPtr& term) {
  if (auto* v = term_as<Term::Var>(term)) {
    if (const TypePtr* t = ctx_lookup(ctx, v->name)) return *t;
    rule_error("Var", term, "unbound variable '" + v->name + "'");
  }
  if (auto* f = term_as<Term::Fun>(term)) {
    if (ctx_lookup(ctx, f->var))
      rule_error("Fun", term, "variable '" + f->var + "' is already bound");
    TypePtr cod = check_explicit(ctx_extend(ctx, f->var, f->annot), f->body);
    return t_arrow(f->annot, cod);
  }
  if (auto* a = term_as<Term::App>(term)) {
    TypePtr ft = check_explicit(ctx, a->fn);
    auto* arrow = type_as<Type::ArrowT>(ft);
    if (!arrow)
      rule_error("App", term, "expected a function type, got " + show(ft));
    TypePtr at = check_explicit(ctx, a->arg);
    if (!type_eq(at, arrow->dom))
      rule_error("App", term, "argument has type " + show(at) + ", expected " +
                                  show(arrow->dom));
    return arrow->cod;
  }
  if (auto* p = term_as<Term::Pair>(term)) {
    return t_prod(check_explicit(ctx, p->left), check_explicit(ctx, p->right));
  }
  if (auto* p = term_as<Term::Proj>(term)) {
    TypePtr t = check_explicit(ctx, p->body);
    auto* prod = type_as<Type::ProdT>(t);
    if (!prod)
      rule_error("Proj", term, "expected a product type, got " + show(t));
    return p->index == 1 ? prod->left : prod->right;
  }
  if (auto* i = term_as<Term::Inj>(term)) {
    TypePtr t = check_explicit(ctx, i->body);
    return i->index == 1 ? t_sum(t, i->other) : t_sum(i->other, t);
  }
  if (auto* c = term_as<Term::Case>(term)) {
    TypePtr st = check_explicit(ctx, c->scrut);
    auto* sum = type_as<Type::SumT>(st);
    if (!sum)
      rule_error("Case", term, "expected a sum type, got " + show(st));
    if (ctx_lookup(ctx, c->left_var))
      rule_error("Case", term,
                 "variable '" + c->left_var + "' is already bound");
    if (ctx_lookup(ctx, c->right_var))
      rule_error("Case", term,
                 "variable '" + c->right_var + "' is already bound");
    TypePtr lt =
        check_explicit(ctx_extend(ctx, c->left_var, sum->left), c->left_body);
    TypePtr rt = check_explicit(ctx_extend(ctx, c->right_var, sum->right),
                                c->right_body);
    if (!type_eq(lt, rt))
      rule_error("Case", term, "branch types differ: " + show(lt) + " vs " +
                                   show(rt));
    return lt;
  }
  if (auto* s = term_as<Term::Scalar>(term)) {
    return std::holds_alternative<int64_t>(s->value) ? t_int() : t_bool();
  }
  if (auto* p = term_as<Term::Prim>(term)) {
    for (size_t i = 0; i < p->args.size(); ++i) {
      TypePtr at = check_explicit(ctx, p->args[i]);
      TypePtr want = prim_arg_type(p->op, int(i));
      if (!type_eq(at, want))
        rule_error("Prim", term,
                   std::string("operand of '") + prim_name(p->op) +
                       "' has type " + show(at) + ", expected " + show(want));
    }
    return prim_result_type(p->op);
  }
  if (auto* r = term_as<Term::Rec>(term)) {
    if (ctx_lookup(ctx, r->var))
      rule_error("Rec", term, "variable '" + r->var + "' is already bound");
    Context inner =
        ctx_extend(ctx, r->var, t_warped(Warp::later(), r->annot));
    TypePtr bt = check_explicit(inner, r->body);
    if (!type_eq(bt, r->annot))
      rule_error("Rec", term, "recursive variable '" + r->var + "' has type " +
                                  show(t_warped(Warp::later(), r->annot)) +
                                  "; body has type " + show(bt) +
                                  ", expected " + show(r->annot));
    return r->annot;
  }
  if (auto* b = term_as<Term::By>(term)) {
    TypePtr t = check_explicit(ctx_unwarp(ctx, b->warp), b->body);
    return t_warped(b->warp, t);
  }
  if (auto* h = term_as<Term::Head>(term)) {
    TypePtr t = check_explicit(ctx, h->body);
    auto* s = type_as<Type::StreamT>(t);
    if (!s) rule_error("Head", term, "expected a stream type, got " + show(t));
    return s->elem;
  }
  if (auto* tl = term_as<Term::Tail>(term)) {
    TypePtr t = check_explicit(ctx, tl->body);
    auto* s = type_as<Type::StreamT>(t);
    if (!s) rule_error("Tail", term, "expected a stream type, got " + show(t));
    return t_warped(Warp::later(), t);
  }
  if (auto* c = term_as<Term::Cons>(term)) {
    TypePtr ht = check_explicit(ctx, c->head);
    TypePtr tt = check_explicit(ctx, c->tail);
    TypePtr want = t_warped(Warp::later(), t_stream(ht));
    if (!type_eq(tt, want))
      rule_error("Cons", term, "tail has type " + show(tt) + ", expected " +
                                   show(want));
    return t_stream(ht);
  }
  if (auto* cr = term_as<Term::CoeR>(term)) {
    TypePtr t = check_explicit(ctx, cr->body);
    try {
      return coercion_target(cr->coe, t);
    } catch (TypeError& e) {
      throw TypeError(term->span, e.what());
    }
  }
  auto* cl = term_as<Term::CoeL>(term);
  std::set<std::string> dom;
  for (auto& [name, alpha] : cl->coe) dom.insert(name);
  Context restricted = ctx_restrict(ctx, dom);
  Context coerced;
  try {
    coerced = check_ctx_coercion(cl->coe, restricted);
  } catch (TypeError& e) {
    throw TypeError(term->span, e.what());
  }
  return check_explicit(coerced, cl->body);
}

}  // namespace warplang
