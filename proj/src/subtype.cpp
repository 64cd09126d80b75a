#include "warplang/subtype.hpp"

#include <functional>

namespace warplang {

namespace {

bool is_rump(const TypePtr& t) {
  if (type_as<Type::GroundT>(t)) return true;
  if (auto* s = type_as<Type::StreamT>(t)) return is_normal(s->elem);
  if (auto* a = type_as<Type::ArrowT>(t))
    return is_normal(a->dom) && is_normal(a->cod);
  if (auto* s = type_as<Type::SumT>(t))
    return is_normal(s->left) && is_normal(s->right);
  return false;
}

}  // namespace

bool is_normal(const TypePtr& t) {
  if (auto* p = type_as<Type::ProdT>(t))
    return is_normal(p->left) && is_normal(p->right);
  if (auto* w = type_as<Type::WarpedT>(t)) return is_rump(w->body);
  return false;
}

TypePtr normalize(const TypePtr& t) {
  if (type_as<Type::GroundT>(t)) return t_warped(Warp::omega(), t);
  if (auto* s = type_as<Type::StreamT>(t))
    return t_warped(Warp::identity(), t_stream(normalize(s->elem)));
  if (auto* a = type_as<Type::ArrowT>(t))
    return t_warped(Warp::identity(),
                    t_arrow(normalize(a->dom), normalize(a->cod)));
  if (auto* s = type_as<Type::SumT>(t))
    return t_warped(Warp::identity(),
                    t_sum(normalize(s->left), normalize(s->right)));
  if (auto* p = type_as<Type::ProdT>(t))
    return t_prod(normalize(p->left), normalize(p->right));
  auto* w = type_as<Type::WarpedT>(t);
  if (auto* p = type_as<Type::ProdT>(w->body))
    return t_prod(normalize(t_warped(w->warp, p->left)),
                  normalize(t_warped(w->warp, p->right)));
  // The body may still normalize to a product (it hides one under warps),
  // in which case the modality distributes over the normalized components.
  TypePtr inner = normalize(w->body);
  if (auto* p = type_as<Type::ProdT>(inner))
    return t_prod(normalize(t_warped(w->warp, p->left)),
                  normalize(t_warped(w->warp, p->right)));
  auto* iw = type_as<Type::WarpedT>(inner);
  return t_warped(compose(w->warp, iw->warp), iw->body);
}

NormCoercions norm_coercions(const TypePtr& t) {
  if (type_as<Type::GroundT>(t)) {
    return {c_inflate(),
            c_seq(c_delay(Warp::omega(), Warp::identity()), c_unwrap())};
  }
  if (auto* s = type_as<Type::StreamT>(t)) {
    NormCoercions e = norm_coercions(s->elem);
    return {c_seq(c_stream(e.into), c_wrap()),
            c_seq(c_unwrap(), c_stream(e.outof))};
  }
  if (auto* a = type_as<Type::ArrowT>(t)) {
    NormCoercions d = norm_coercions(a->dom);
    NormCoercions c = norm_coercions(a->cod);
    return {c_seq(c_arrow(d.outof, c.into), c_wrap()),
            c_seq(c_unwrap(), c_arrow(d.into, c.outof))};
  }
  if (auto* s = type_as<Type::SumT>(t)) {
    NormCoercions l = norm_coercions(s->left);
    NormCoercions r = norm_coercions(s->right);
    return {c_seq(c_sum(l.into, r.into), c_wrap()),
            c_seq(c_unwrap(), c_sum(l.outof, r.outof))};
  }
  if (auto* p = type_as<Type::ProdT>(t)) {
    NormCoercions l = norm_coercions(p->left);
    NormCoercions r = norm_coercions(p->right);
    return {c_prod(l.into, r.into), c_prod(l.outof, r.outof)};
  }
  auto* w = type_as<Type::WarpedT>(t);
  if (auto* p = type_as<Type::ProdT>(w->body)) {
    NormCoercions l = norm_coercions(t_warped(w->warp, p->left));
    NormCoercions r = norm_coercions(t_warped(w->warp, p->right));
    return {c_seq(c_dist(), c_prod(l.into, r.into)),
            c_seq(c_prod(l.outof, r.outof), c_fact())};
  }
  // First normalize under the modality, then absorb it into the normalized
  // shape: concat over a warped body, dist + recursion over a product one.
  NormCoercions inner = norm_coercions(w->body);
  TypePtr nb = normalize(w->body);
  std::function<CoePtr(const Warp&, const TypePtr&)> absorb_in =
      [&](const Warp& p, const TypePtr& n) -> CoePtr {
    if (auto* pr = type_as<Type::ProdT>(n))
      return c_seq(c_dist(),
                   c_prod(absorb_in(p, pr->left), absorb_in(p, pr->right)));
    return c_concat(p, type_as<Type::WarpedT>(n)->warp);
  };
  std::function<CoePtr(const Warp&, const TypePtr&)> absorb_out =
      [&](const Warp& p, const TypePtr& n) -> CoePtr {
    if (auto* pr = type_as<Type::ProdT>(n))
      return c_seq(c_prod(absorb_out(p, pr->left), absorb_out(p, pr->right)),
                   c_fact());
    return c_decat(p, type_as<Type::WarpedT>(n)->warp);
  };
  return {c_seq(c_warp(w->warp, inner.into), absorb_in(w->warp, nb)),
          c_seq(absorb_out(w->warp, nb), c_warp(w->warp, inner.outof))};
}

namespace {

std::optional<CoePtr> precedence_any(const TypePtr& a, const TypePtr& b);

std::optional<CoePtr> precedence_rump(const TypePtr& a, const TypePtr& b) {
  if (auto* g = type_as<Type::GroundT>(a)) {
    auto* h = type_as<Type::GroundT>(b);
    if (h && g->ground == h->ground) return c_id();
    return std::nullopt;
  }
  if (auto* s = type_as<Type::StreamT>(a)) {
    auto* t = type_as<Type::StreamT>(b);
    if (!t) return std::nullopt;
    auto e = precedence_any(s->elem, t->elem);
    if (!e) return std::nullopt;
    return c_stream(*e);
  }
  if (auto* f = type_as<Type::ArrowT>(a)) {
    auto* g = type_as<Type::ArrowT>(b);
    if (!g) return std::nullopt;
    auto dom = precedence_any(g->dom, f->dom);  // contravariant
    auto cod = precedence_any(f->cod, g->cod);
    if (!dom || !cod) return std::nullopt;
    return c_arrow(*dom, *cod);
  }
  if (auto* s = type_as<Type::SumT>(a)) {
    auto* t = type_as<Type::SumT>(b);
    if (!t) return std::nullopt;
    auto l = precedence_any(s->left, t->left);
    auto r = precedence_any(s->right, t->right);
    if (!l || !r) return std::nullopt;
    return c_sum(*l, *r);
  }
  return std::nullopt;
}

std::optional<CoePtr> precedence_any(const TypePtr& a, const TypePtr& b) {
  if (auto* p = type_as<Type::ProdT>(a)) {
    auto* q = type_as<Type::ProdT>(b);
    if (!q) return std::nullopt;
    auto l = precedence_any(p->left, q->left);
    auto r = precedence_any(p->right, q->right);
    if (!l || !r) return std::nullopt;
    return c_prod(*l, *r);
  }
  auto* w = type_as<Type::WarpedT>(a);
  auto* v = type_as<Type::WarpedT>(b);
  if (!w || !v) return std::nullopt;
  if (!leq(v->warp, w->warp)) return std::nullopt;
  auto body = precedence_rump(w->body, v->body);
  if (!body) return std::nullopt;
  return c_seq(c_delay(w->warp, v->warp), c_warp(v->warp, *body));
}

bool is_id(const CoePtr& c) { return coe_as<Coercion::Id>(c) != nullptr; }

}  // namespace

std::optional<CoePtr> precedence(const TypePtr& n1, const TypePtr& n2) {
  assert(is_normal(n1) && is_normal(n2));
  return precedence_any(n1, n2);
}

namespace {

void flatten_seq(const CoePtr& c, std::vector<CoePtr>& out) {
  if (auto* s = coe_as<Coercion::Seq>(c)) {
    flatten_seq(s->first, out);
    flatten_seq(s->second, out);
    return;
  }
  CoePtr atom = simplify(c);
  if (auto* s = coe_as<Coercion::Seq>(atom)) {
    flatten_seq(s->first, out);
    flatten_seq(s->second, out);
  } else if (!is_id(atom)) {
    out.push_back(std::move(atom));
  }
}

// Cancels inverse neighbors and fuses consecutive delays in a pipeline.
void reduce_pipeline(std::vector<CoePtr>& atoms) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < atoms.size(); ++i) {
      const CoePtr& a = atoms[i];
      const CoePtr& b = atoms[i + 1];
      bool cancel =
          (coe_as<Coercion::Wrap>(a) && coe_as<Coercion::Unwrap>(b)) ||
          (coe_as<Coercion::Unwrap>(a) && coe_as<Coercion::Wrap>(b));
      if (!cancel) {
        auto* ca = coe_as<Coercion::Concat>(a);
        auto* db = coe_as<Coercion::Decat>(b);
        cancel = ca && db && ca->p == db->p && ca->q == db->q;
      }
      if (!cancel) {
        auto* da = coe_as<Coercion::Decat>(a);
        auto* cb = coe_as<Coercion::Concat>(b);
        cancel = da && cb && da->p == cb->p && da->q == cb->q;
      }
      if (cancel) {
        atoms.erase(atoms.begin() + i, atoms.begin() + i + 2);
        changed = true;
        break;
      }
      auto* da = coe_as<Coercion::Delay>(a);
      auto* db2 = coe_as<Coercion::Delay>(b);
      if (da && db2 && da->to == db2->from) {
        CoePtr fused = da->from == db2->to ? c_id()
                                           : c_delay(da->from, db2->to);
        atoms.erase(atoms.begin() + i, atoms.begin() + i + 2);
        if (!is_id(fused)) atoms.insert(atoms.begin() + i, fused);
        changed = true;
        break;
      }
    }
  }
}

}  // namespace

CoePtr simplify(const CoePtr& c) {
  if (coe_as<Coercion::Seq>(c)) {
    std::vector<CoePtr> atoms;
    flatten_seq(c, atoms);
    reduce_pipeline(atoms);
    if (atoms.empty()) return c_id();
    CoePtr out = atoms.back();
    for (size_t i = atoms.size() - 1; i-- > 0;) out = c_seq(atoms[i], out);
    return out;
  }
  if (auto* s = coe_as<Coercion::OnStream>(c)) {
    CoePtr e = simplify(s->elem);
    return is_id(e) ? c_id() : c_stream(std::move(e));
  }
  if (auto* s = coe_as<Coercion::OnArrow>(c)) {
    CoePtr d = simplify(s->dom), e = simplify(s->cod);
    return is_id(d) && is_id(e) ? c_id() : c_arrow(std::move(d), std::move(e));
  }
  if (auto* s = coe_as<Coercion::OnProd>(c)) {
    CoePtr l = simplify(s->left), r = simplify(s->right);
    return is_id(l) && is_id(r) ? c_id() : c_prod(std::move(l), std::move(r));
  }
  if (auto* s = coe_as<Coercion::OnSum>(c)) {
    CoePtr l = simplify(s->left), r = simplify(s->right);
    return is_id(l) && is_id(r) ? c_id() : c_sum(std::move(l), std::move(r));
  }
  if (auto* s = coe_as<Coercion::OnWarp>(c)) {
    CoePtr b = simplify(s->body);
    return is_id(b) ? c_id() : c_warp(s->warp, std::move(b));
  }
  if (auto* d = coe_as<Coercion::Delay>(c)) {
    if (d->from == d->to) return c_id();
  }
  return c;
}

std::optional<CoePtr> coe(const TypePtr& t1, const TypePtr& t2) {
  NormCoercions in = norm_coercions(t1);
  NormCoercions out = norm_coercions(t2);
  auto mid = precedence_any(normalize(t1), normalize(t2));
  if (!mid) return std::nullopt;
  return simplify(c_seq(in.into, c_seq(*mid, out.outof)));
}

namespace {

[[noreturn]] void target_error(const CoePtr& c, const TypePtr& t) {
  throw TypeError({}, "coercion '" + to_string(c) +
                          "' does not apply to type '" + to_string(t) + "'");
}

}  // namespace

TypePtr coercion_target(const CoePtr& c, const TypePtr& t) {
  if (coe_as<Coercion::Id>(c)) return t;
  if (auto* s = coe_as<Coercion::Seq>(c))
    return coercion_target(s->second, coercion_target(s->first, t));
  if (auto* s = coe_as<Coercion::OnStream>(c)) {
    if (auto* st = type_as<Type::StreamT>(t))
      return t_stream(coercion_target(s->elem, st->elem));
    target_error(c, t);
  }
  if (auto* s = coe_as<Coercion::OnArrow>(c)) {
    if (auto* f = type_as<Type::ArrowT>(t))
      return t_arrow(coercion_source(s->dom, f->dom),
                     coercion_target(s->cod, f->cod));
    target_error(c, t);
  }
  if (auto* s = coe_as<Coercion::OnProd>(c)) {
    if (auto* p = type_as<Type::ProdT>(t))
      return t_prod(coercion_target(s->left, p->left),
                    coercion_target(s->right, p->right));
    target_error(c, t);
  }
  if (auto* s = coe_as<Coercion::OnSum>(c)) {
    if (auto* p = type_as<Type::SumT>(t))
      return t_sum(coercion_target(s->left, p->left),
                   coercion_target(s->right, p->right));
    target_error(c, t);
  }
  if (auto* s = coe_as<Coercion::OnWarp>(c)) {
    if (auto* w = type_as<Type::WarpedT>(t); w && w->warp == s->warp)
      return t_warped(w->warp, coercion_target(s->body, w->body));
    target_error(c, t);
  }
  if (coe_as<Coercion::Wrap>(c)) return t_warped(Warp::identity(), t);
  if (coe_as<Coercion::Unwrap>(c)) {
    if (auto* w = type_as<Type::WarpedT>(t); w && w->warp == Warp::identity())
      return w->body;
    target_error(c, t);
  }
  if (auto* s = coe_as<Coercion::Concat>(c)) {
    if (auto* w = type_as<Type::WarpedT>(t); w && w->warp == s->p)
      if (auto* v = type_as<Type::WarpedT>(w->body); v && v->warp == s->q)
        return t_warped(compose(s->p, s->q), v->body);
    target_error(c, t);
  }
  if (auto* s = coe_as<Coercion::Decat>(c)) {
    if (auto* w = type_as<Type::WarpedT>(t); w && w->warp == compose(s->p, s->q))
      return t_warped(s->p, t_warped(s->q, w->body));
    target_error(c, t);
  }
  if (coe_as<Coercion::Inflate>(c)) {
    if (type_as<Type::GroundT>(t)) return t_warped(Warp::omega(), t);
    target_error(c, t);
  }
  if (coe_as<Coercion::Dist>(c)) {
    if (auto* w = type_as<Type::WarpedT>(t))
      if (auto* p = type_as<Type::ProdT>(w->body))
        return t_prod(t_warped(w->warp, p->left), t_warped(w->warp, p->right));
    target_error(c, t);
  }
  if (coe_as<Coercion::Fact>(c)) {
    if (auto* p = type_as<Type::ProdT>(t)) {
      auto* l = type_as<Type::WarpedT>(p->left);
      auto* r = type_as<Type::WarpedT>(p->right);
      if (l && r && l->warp == r->warp)
        return t_warped(l->warp, t_prod(l->body, r->body));
    }
    target_error(c, t);
  }
  auto* d = coe_as<Coercion::Delay>(c);
  if (auto* w = type_as<Type::WarpedT>(t);
      w && w->warp == d->from && leq(d->to, d->from))
    return t_warped(d->to, w->body);
  target_error(c, t);
}

TypePtr coercion_source(const CoePtr& c, const TypePtr& t) {
  if (coe_as<Coercion::Id>(c)) return t;
  if (auto* s = coe_as<Coercion::Seq>(c))
    return coercion_source(s->first, coercion_source(s->second, t));
  if (auto* s = coe_as<Coercion::OnStream>(c)) {
    if (auto* st = type_as<Type::StreamT>(t))
      return t_stream(coercion_source(s->elem, st->elem));
    target_error(c, t);
  }
  if (auto* s = coe_as<Coercion::OnArrow>(c)) {
    if (auto* f = type_as<Type::ArrowT>(t))
      return t_arrow(coercion_target(s->dom, f->dom),
                     coercion_source(s->cod, f->cod));
    target_error(c, t);
  }
  if (auto* s = coe_as<Coercion::OnProd>(c)) {
    if (auto* p = type_as<Type::ProdT>(t))
      return t_prod(coercion_source(s->left, p->left),
                    coercion_source(s->right, p->right));
    target_error(c, t);
  }
  if (auto* s = coe_as<Coercion::OnSum>(c)) {
    if (auto* p = type_as<Type::SumT>(t))
      return t_sum(coercion_source(s->left, p->left),
                   coercion_source(s->right, p->right));
    target_error(c, t);
  }
  if (auto* s = coe_as<Coercion::OnWarp>(c)) {
    if (auto* w = type_as<Type::WarpedT>(t); w && w->warp == s->warp)
      return t_warped(w->warp, coercion_source(s->body, w->body));
    target_error(c, t);
  }
  if (coe_as<Coercion::Wrap>(c)) {
    if (auto* w = type_as<Type::WarpedT>(t); w && w->warp == Warp::identity())
      return w->body;
    target_error(c, t);
  }
  if (coe_as<Coercion::Unwrap>(c)) return t_warped(Warp::identity(), t);
  if (auto* s = coe_as<Coercion::Concat>(c)) {
    if (auto* w = type_as<Type::WarpedT>(t); w && w->warp == compose(s->p, s->q))
      return t_warped(s->p, t_warped(s->q, w->body));
    target_error(c, t);
  }
  if (auto* s = coe_as<Coercion::Decat>(c)) {
    if (auto* w = type_as<Type::WarpedT>(t); w && w->warp == s->p)
      if (auto* v = type_as<Type::WarpedT>(w->body); v && v->warp == s->q)
        return t_warped(compose(s->p, s->q), v->body);
    target_error(c, t);
  }
  if (coe_as<Coercion::Inflate>(c)) {
    if (auto* w = type_as<Type::WarpedT>(t);
        w && w->warp == Warp::omega() && type_as<Type::GroundT>(w->body))
      return w->body;
    target_error(c, t);
  }
  if (coe_as<Coercion::Dist>(c)) {
    if (auto* p = type_as<Type::ProdT>(t)) {
      auto* l = type_as<Type::WarpedT>(p->left);
      auto* r = type_as<Type::WarpedT>(p->right);
      if (l && r && l->warp == r->warp)
        return t_warped(l->warp, t_prod(l->body, r->body));
    }
    target_error(c, t);
  }
  if (coe_as<Coercion::Fact>(c)) {
    if (auto* w = type_as<Type::WarpedT>(t))
      if (auto* p = type_as<Type::ProdT>(w->body))
        return t_prod(t_warped(w->warp, p->left), t_warped(w->warp, p->right));
    target_error(c, t);
  }
  auto* d = coe_as<Coercion::Delay>(c);
  if (auto* w = type_as<Type::WarpedT>(t);
      w && w->warp == d->to && leq(d->to, d->from))
    return t_warped(d->from, w->body);
  target_error(c, t);
}

namespace {

TypePtr div_normal(const TypePtr& n, const Warp& p) {
  if (auto* pr = type_as<Type::ProdT>(n))
    return t_prod(div_normal(pr->left, p), div_normal(pr->right, p));
  auto* w = type_as<Type::WarpedT>(n);
  assert(w != nullptr);
  return t_warped(residual(w->warp, p), w->body);
}

std::optional<TypePtr> bound_normal(const TypePtr& a, const TypePtr& b,
                                    bool is_sup);

std::optional<TypePtr> bound_rump(const TypePtr& a, const TypePtr& b,
                                  bool is_sup) {
  if (auto* g = type_as<Type::GroundT>(a)) {
    auto* h = type_as<Type::GroundT>(b);
    if (h && g->ground == h->ground) return a;
    return std::nullopt;
  }
  if (auto* s = type_as<Type::StreamT>(a)) {
    auto* t = type_as<Type::StreamT>(b);
    if (!t) return std::nullopt;
    auto e = bound_normal(s->elem, t->elem, is_sup);
    if (!e) return std::nullopt;
    return t_stream(*e);
  }
  if (auto* f = type_as<Type::ArrowT>(a)) {
    auto* g = type_as<Type::ArrowT>(b);
    if (!g) return std::nullopt;
    auto dom = bound_normal(f->dom, g->dom, !is_sup);  // contravariant
    auto cod = bound_normal(f->cod, g->cod, is_sup);
    if (!dom || !cod) return std::nullopt;
    return t_arrow(*dom, *cod);
  }
  if (auto* s = type_as<Type::SumT>(a)) {
    auto* t = type_as<Type::SumT>(b);
    if (!t) return std::nullopt;
    auto l = bound_normal(s->left, t->left, is_sup);
    auto r = bound_normal(s->right, t->right, is_sup);
    if (!l || !r) return std::nullopt;
    return t_sum(*l, *r);
  }
  return std::nullopt;
}

std::optional<TypePtr> bound_normal(const TypePtr& a, const TypePtr& b,
                                    bool is_sup) {
  if (auto* p = type_as<Type::ProdT>(a)) {
    auto* q = type_as<Type::ProdT>(b);
    if (!q) return std::nullopt;
    auto l = bound_normal(p->left, q->left, is_sup);
    auto r = bound_normal(p->right, q->right, is_sup);
    if (!l || !r) return std::nullopt;
    return t_prod(*l, *r);
  }
  auto* w = type_as<Type::WarpedT>(a);
  auto* v = type_as<Type::WarpedT>(b);
  if (!w || !v) return std::nullopt;
  auto body = bound_rump(w->body, v->body, is_sup);
  if (!body) return std::nullopt;
  // Faster types are smaller for <:, so sup takes the slower modality.
  Warp m = is_sup ? inf(w->warp, v->warp) : sup(w->warp, v->warp);
  return t_warped(std::move(m), *body);
}

}  // namespace

TypePtr type_div(const TypePtr& t, const Warp& p) {
  return div_normal(normalize(t), p);
}

std::optional<TypePtr> type_sup(const TypePtr& t1, const TypePtr& t2) {
  return bound_normal(normalize(t1), normalize(t2), true);
}

std::optional<TypePtr> type_inf(const TypePtr& t1, const TypePtr& t2) {
  return bound_normal(normalize(t1), normalize(t2), false);
}

}  // namespace warplang
