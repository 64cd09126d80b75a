#include "warplang/eval.hpp"

#include <functional>

namespace warplang {

Env Env::extend(const std::string& name, ValuePtr v) const {
  Env out = *this;
  for (auto& [n, slot] : out.binds) {
    if (n == name) {
      slot = std::move(v);
      return out;
    }
  }
  out.binds.emplace_back(name, std::move(v));
  return out;
}

namespace {
ValuePtr mk(Value::Node node) {
  return std::make_shared<Value>(Value{std::move(node)});
}
}  // namespace

ValuePtr v_stop() {
  static const ValuePtr v = mk(Value::Stop{});
  return v;
}
ValuePtr v_scalar(ScalarVal s) { return mk(Value::Scalar{s}); }
ValuePtr v_int(int64_t v) { return v_scalar(ScalarVal{v}); }
ValuePtr v_bool(bool v) { return v_scalar(ScalarVal{v}); }
ValuePtr v_cons(ValuePtr head, ValuePtr tail) {
  return mk(Value::ConsV{std::move(head), std::move(tail)});
}
ValuePtr v_closure(std::string var, TypePtr annot, TermPtr body, Env env) {
  return mk(Value::Closure{std::move(var), std::move(annot), std::move(body),
                           std::move(env)});
}
ValuePtr v_pair(ValuePtr l, ValuePtr r) {
  return mk(Value::PairV{std::move(l), std::move(r)});
}
ValuePtr v_inj(int index, ValuePtr body) {
  return mk(Value::InjV{index, std::move(body)});
}
ValuePtr v_thunk(TermPtr term, Env env) {
  return mk(Value::Thunk{std::move(term), std::move(env)});
}
ValuePtr v_warped(Warp w, ValuePtr body) {
  return mk(Value::WarpedV{std::move(w), std::move(body)});
}

namespace {

[[noreturn]] void bug(const std::string& what) {
  throw InternalError("evaluator invariant broken: " + what);
}

ScalarVal expect_scalar(const ValuePtr& v, const char* who) {
  auto* s = value_as<Value::Scalar>(v);
  if (!s) bug(std::string(who) + " applied to a non-scalar");
  return s->value;
}

ValuePtr eval_prim(PrimOp op, const std::vector<ValuePtr>& args) {
  switch (op) {
    case PrimOp::Add:
      return v_int(std::get<int64_t>(expect_scalar(args[0], "+")) +
                   std::get<int64_t>(expect_scalar(args[1], "+")));
    case PrimOp::Sub:
      return v_int(std::get<int64_t>(expect_scalar(args[0], "-")) -
                   std::get<int64_t>(expect_scalar(args[1], "-")));
    case PrimOp::Mul:
      return v_int(std::get<int64_t>(expect_scalar(args[0], "*")) *
                   std::get<int64_t>(expect_scalar(args[1], "*")));
    case PrimOp::Not:
      return v_bool(!std::get<bool>(expect_scalar(args[0], "not")));
    case PrimOp::Eq:
      return v_bool(std::get<int64_t>(expect_scalar(args[0], "==")) ==
                    std::get<int64_t>(expect_scalar(args[1], "==")));
  }
  bug("unknown primitive");
}

}  // namespace

Env purge(const Env& env, const Warp& p) {
  Env out;
  for (auto& [name, v] : env.binds) {
    if (auto* w = value_as<Value::WarpedV>(v); w && w->warp == p)
      out.binds.emplace_back(name, w->body);
  }
  return out;
}

Env truncate_env(const Env& env, ExtNat n) {
  Env out;
  for (auto& [name, v] : env.binds)
    out.binds.emplace_back(name, truncate_value(v, n));
  return out;
}

ValuePtr truncate_value(const ValuePtr& v, ExtNat n) {
  if (n.is_zero()) return v_stop();
  if (n.is_omega()) return v;
  if (value_as<Value::Scalar>(v)) return v;
  if (auto* c = value_as<Value::ConsV>(v))
    return v_cons(truncate_value(c->head, n),
                  truncate_value(c->tail, monus(n, 1)));
  if (auto* c = value_as<Value::Closure>(v))
    return v_closure(c->var, c->annot, c->body, truncate_env(c->env, n));
  if (auto* p = value_as<Value::PairV>(v))
    return v_pair(truncate_value(p->left, n), truncate_value(p->right, n));
  if (auto* i = value_as<Value::InjV>(v))
    return v_inj(i->index, truncate_value(i->body, n));
  if (auto* t = value_as<Value::Thunk>(v))
    return evaluate(t->term, truncate_env(t->env, n), n);
  if (auto* w = value_as<Value::WarpedV>(v))
    return v_warped(w->warp, truncate_value(w->body, w->warp.at(n)));
  bug("truncating stop to a positive step");
}

ValuePtr coerce_value(const CoePtr& coe, const ValuePtr& v, ExtNat n) {
  if (n.is_zero()) return v_stop();
  if (n.is_omega()) {
    // A coercion meeting a suspended computation is itself suspended.
    if (auto* t = value_as<Value::Thunk>(v))
      return v_thunk(m_coer(t->term, coe), t->env);
    // Other value forms can sit at ω under warped wrappers (e.g. after a
    // decat); the structural rules below cover them at n = ω.
  }

  if (coe_as<Coercion::Id>(coe)) return v;
  if (auto* s = coe_as<Coercion::Seq>(coe))
    return coerce_value(s->second, coerce_value(s->first, v, n), n);
  if (auto* s = coe_as<Coercion::OnStream>(coe)) {
    if (auto* c = value_as<Value::ConsV>(v))
      return v_cons(coerce_value(s->elem, c->head, n),
                    coerce_value(coe, c->tail, monus(n, 1)));
    bug("stream coercion on a non-stream value");
  }
  if (auto* s = coe_as<Coercion::OnArrow>(coe)) {
    auto* c = value_as<Value::Closure>(v);
    if (!c) bug("arrow coercion on a non-closure value");
    // New body: coerce the argument in the context, run, coerce the result.
    CtxCoercion under;
    under.emplace_back(c->var, s->dom);
    for (const std::string& y : free_vars(c->body))
      if (y != c->var) under.emplace_back(y, c_id());
    TermPtr body = m_coel(std::move(under), m_coer(c->body, s->cod));
    return v_closure(c->var, c->annot, body, c->env);
  }
  if (auto* s = coe_as<Coercion::OnProd>(coe)) {
    if (auto* p = value_as<Value::PairV>(v))
      return v_pair(coerce_value(s->left, p->left, n),
                    coerce_value(s->right, p->right, n));
    bug("product coercion on a non-pair value");
  }
  if (auto* s = coe_as<Coercion::OnSum>(coe)) {
    if (auto* i = value_as<Value::InjV>(v))
      return v_inj(i->index, coerce_value(
                                 i->index == 1 ? s->left : s->right, i->body, n));
    bug("sum coercion on a non-injection value");
  }
  if (auto* s = coe_as<Coercion::OnWarp>(coe)) {
    if (auto* w = value_as<Value::WarpedV>(v); w && w->warp == s->warp)
      return v_warped(w->warp, coerce_value(s->body, w->body, w->warp.at(n)));
    bug("warp coercion mismatch");
  }
  if (coe_as<Coercion::Wrap>(coe)) return v_warped(Warp::identity(), v);
  if (coe_as<Coercion::Unwrap>(coe)) {
    if (auto* w = value_as<Value::WarpedV>(v); w && w->warp == Warp::identity())
      return w->body;
    bug("unwrap on a non-wrapped value");
  }
  if (auto* s = coe_as<Coercion::Concat>(coe)) {
    auto* w = value_as<Value::WarpedV>(v);
    if (!w || w->warp != s->p) bug("concat on unexpected value");
    Warp pq = compose(s->p, s->q);
    if (auto* inner = value_as<Value::WarpedV>(w->body)) {
      if (inner->warp != s->q) bug("concat inner warp mismatch");
      return v_warped(std::move(pq), inner->body);
    }
    if (value_as<Value::Stop>(w->body)) return v_warped(std::move(pq), w->body);
    if (auto* t = value_as<Value::Thunk>(w->body)) {
      // The thunk lives at p(n) = ω and suspends a W q τ computation; the
      // concatenated payload position is q(ω).
      ExtNat target = pq.at(n);
      if (!target.is_omega())
        return v_warped(std::move(pq), truncate_value(w->body, target));
      if (leq(Warp::identity(), s->q)) {
        // Strip the inner modality inside the suspension, keeping a τ thunk.
        CoePtr strip =
            c_seq(c_delay(s->q, Warp::identity()), c_unwrap());
        return v_warped(std::move(pq),
                        v_thunk(m_coer(t->term, std::move(strip)), t->env));
      }
      return v_warped(std::move(pq), w->body);
    }
    bug("concat payload has unexpected shape");
  }
  if (auto* s = coe_as<Coercion::Decat>(coe)) {
    auto* w = value_as<Value::WarpedV>(v);
    if (!w || w->warp != compose(s->p, s->q)) bug("decat on unexpected value");
    return v_warped(s->p, v_warped(s->q, w->body));
  }
  if (coe_as<Coercion::Inflate>(coe)) {
    auto* s = value_as<Value::Scalar>(v);
    if (!s) bug("inflate on a non-scalar value");
    return v_warped(Warp::omega(), v_thunk(m_scalar(s->value), Env{}));
  }
  if (coe_as<Coercion::Dist>(coe)) {
    auto* w = value_as<Value::WarpedV>(v);
    if (!w) bug("dist on a non-warped value");
    if (auto* p = value_as<Value::PairV>(w->body))
      return v_pair(v_warped(w->warp, p->left), v_warped(w->warp, p->right));
    if (value_as<Value::Stop>(w->body))
      return v_pair(v_warped(w->warp, w->body), v_warped(w->warp, w->body));
    if (auto* t = value_as<Value::Thunk>(w->body)) {
      // Split the suspended pair into suspended components.
      return v_pair(
          v_warped(w->warp, v_thunk(m_proj(1, t->term), t->env)),
          v_warped(w->warp, v_thunk(m_proj(2, t->term), t->env)));
    }
    bug("dist payload has unexpected shape");
  }
  if (coe_as<Coercion::Fact>(coe)) {
    auto* p = value_as<Value::PairV>(v);
    if (!p) bug("fact on a non-pair value");
    auto* l = value_as<Value::WarpedV>(p->left);
    auto* r = value_as<Value::WarpedV>(p->right);
    if (!l || !r || l->warp != r->warp) bug("fact components mismatch");
    return v_warped(l->warp, v_pair(l->body, r->body));
  }
  auto* d = coe_as<Coercion::Delay>(coe);
  if (!d) bug("unknown coercion");
  auto* w = value_as<Value::WarpedV>(v);
  if (!w || w->warp != d->from) bug("delay on unexpected value");
  return v_warped(d->to, truncate_value(w->body, d->to.at(n)));
}

ValuePtr iterate(const std::string& var, const TermPtr& body, const Env& env,
                 ValuePtr acc, uint64_t from, uint64_t to) {
  // Operational Kleene iteration: acc is the `from`-th iterate from stop.
  // Each round runs the body one step deeper with the previous iterate
  // available one step later.
  for (uint64_t m = from; m < to; ++m) {
    Env trimmed = truncate_env(env, m + 1);
    acc = evaluate(body,
                   trimmed.extend(var, v_warped(Warp::later(), std::move(acc))),
                   m + 1);
  }
  return acc;
}

ValuePtr evaluate(const TermPtr& term, const Env& env, ExtNat n) {
  if (n.is_zero()) return v_stop();
  if (n.is_omega()) return v_thunk(term, env);

  if (auto* v = term_as<Term::Var>(term)) {
    if (const ValuePtr* found = env.lookup(v->name)) return *found;
    bug("unbound variable '" + v->name + "'");
  }
  if (auto* f = term_as<Term::Fun>(term))
    return v_closure(f->var, f->annot, f->body, env);
  if (auto* a = term_as<Term::App>(term)) {
    ValuePtr fn = evaluate(a->fn, env, n);
    auto* c = value_as<Value::Closure>(fn);
    if (!c) bug("application of a non-closure");
    ValuePtr arg = evaluate(a->arg, env, n);
    return evaluate(c->body, c->env.extend(c->var, std::move(arg)), n);
  }
  if (auto* p = term_as<Term::Pair>(term))
    return v_pair(evaluate(p->left, env, n), evaluate(p->right, env, n));
  if (auto* p = term_as<Term::Proj>(term)) {
    ValuePtr v = evaluate(p->body, env, n);
    auto* pair = value_as<Value::PairV>(v);
    if (!pair) bug("projection from a non-pair");
    return p->index == 1 ? pair->left : pair->right;
  }
  if (auto* i = term_as<Term::Inj>(term))
    return v_inj(i->index, evaluate(i->body, env, n));
  if (auto* c = term_as<Term::Case>(term)) {
    ValuePtr scrut = evaluate(c->scrut, env, n);
    auto* inj = value_as<Value::InjV>(scrut);
    if (!inj) bug("case analysis on a non-injection");
    if (inj->index == 1)
      return evaluate(c->left_body, env.extend(c->left_var, inj->body), n);
    return evaluate(c->right_body, env.extend(c->right_var, inj->body), n);
  }
  if (auto* s = term_as<Term::Scalar>(term)) return v_scalar(s->value);
  if (auto* p = term_as<Term::Prim>(term)) {
    std::vector<ValuePtr> args;
    for (auto& a : p->args) args.push_back(evaluate(a, env, n));
    return eval_prim(p->op, args);
  }
  if (auto* r = term_as<Term::Rec>(term))
    return iterate(r->var, r->body, env, v_stop(), 0, n.finite());
  if (auto* b = term_as<Term::By>(term))
    return v_warped(b->warp,
                    evaluate(b->body, purge(env, b->warp), b->warp.at(n)));
  if (auto* h = term_as<Term::Head>(term)) {
    ValuePtr v = evaluate(h->body, env, n);
    auto* c = value_as<Value::ConsV>(v);
    if (!c) bug("head of a non-stream");
    return c->head;
  }
  if (auto* t = term_as<Term::Tail>(term)) {
    ValuePtr v = evaluate(t->body, env, n);
    auto* c = value_as<Value::ConsV>(v);
    if (!c) bug("tail of a non-stream");
    return v_warped(Warp::later(), c->tail);
  }
  if (auto* c = term_as<Term::Cons>(term)) {
    ValuePtr head = evaluate(c->head, env, n);
    ValuePtr tail = evaluate(c->tail, env, n);
    auto* w = value_as<Value::WarpedV>(tail);
    if (!w || w->warp != Warp::later()) bug("cons tail is not a later value");
    return v_cons(std::move(head), w->body);
  }
  if (auto* cr = term_as<Term::CoeR>(term))
    return coerce_value(cr->coe, evaluate(cr->body, env, n), n);
  auto* cl = term_as<Term::CoeL>(term);
  Env coerced;
  for (auto& [name, alpha] : cl->coe) {
    if (const ValuePtr* v = env.lookup(name))
      coerced.binds.emplace_back(name, coerce_value(alpha, *v, n));
  }
  return evaluate(cl->body, coerced, n);
}

bool value_has_type(const ValuePtr& v, const TypePtr& type, ExtNat n) {
  if (value_as<Value::Stop>(v)) return n.is_zero();
  if (auto* s = value_as<Value::Scalar>(v)) {
    if (n.is_zero() || n.is_omega()) return false;
    auto* g = type_as<Type::GroundT>(type);
    if (!g) return false;
    bool is_int = std::holds_alternative<int64_t>(s->value);
    return is_int == (g->ground == Ground::Int);
  }
  if (auto* c = value_as<Value::ConsV>(v)) {
    if (n.is_zero() || n.is_omega()) return false;
    auto* st = type_as<Type::StreamT>(type);
    return st && value_has_type(c->head, st->elem, n) &&
           value_has_type(c->tail, type, monus(n, 1));
  }
  if (value_as<Value::Closure>(v)) {
    // Shape check only: the stored body's typing context is not part of the
    // value, and coercions retarget closures without touching the
    // annotation (the domain side is adjusted when the argument arrives).
    return type_as<Type::ArrowT>(type) != nullptr;
  }
  if (auto* p = value_as<Value::PairV>(v)) {
    auto* pt = type_as<Type::ProdT>(type);
    return pt && value_has_type(p->left, pt->left, n) &&
           value_has_type(p->right, pt->right, n);
  }
  if (auto* i = value_as<Value::InjV>(v)) {
    auto* st = type_as<Type::SumT>(type);
    return st &&
           value_has_type(i->body, i->index == 1 ? st->left : st->right, n);
  }
  if (value_as<Value::Thunk>(v)) {
    if (!n.is_omega()) return false;
    // Sampling approximation of the ∀m premise: force shallow prefixes.
    for (uint64_t m = 1; m <= 2; ++m)
      if (!value_has_type(truncate_value(v, m), type, m)) return false;
    return true;
  }
  auto* w = value_as<Value::WarpedV>(v);
  auto* wt = type_as<Type::WarpedT>(type);
  return w && wt && w->warp == wt->warp &&
         value_has_type(w->body, wt->body, w->warp.at(n));
}

std::string to_string(const ValuePtr& v) {
  if (value_as<Value::Stop>(v)) return "•";
  if (auto* s = value_as<Value::Scalar>(v)) {
    if (std::holds_alternative<int64_t>(s->value))
      return std::to_string(std::get<int64_t>(s->value));
    return std::get<bool>(s->value) ? "true" : "false";
  }
  if (auto* c = value_as<Value::ConsV>(v))
    return to_string(c->head) + " :: " + to_string(c->tail);
  if (value_as<Value::Closure>(v)) return "<closure>";
  if (auto* p = value_as<Value::PairV>(v))
    return "(" + to_string(p->left) + ", " + to_string(p->right) + ")";
  if (auto* i = value_as<Value::InjV>(v))
    return (i->index == 1 ? "inl " : "inr ") + to_string(i->body);
  if (value_as<Value::Thunk>(v)) return "<thunk>";
  auto* w = value_as<Value::WarpedV>(v);
  return "⌈" + w->warp.to_string() + "⌉" + to_string(w->body);
}

nlohmann::json value_to_json(const ValuePtr& v) {
  using nlohmann::json;
  if (value_as<Value::Stop>(v)) return json{{"kind", "stop"}};
  if (auto* s = value_as<Value::Scalar>(v)) {
    json val = std::holds_alternative<int64_t>(s->value)
                   ? json(std::get<int64_t>(s->value))
                   : json(std::get<bool>(s->value));
    return json{{"kind", "scalar"}, {"value", val}};
  }
  if (auto* c = value_as<Value::ConsV>(v))
    return json{{"kind", "cons"},
                {"head", value_to_json(c->head)},
                {"tail", value_to_json(c->tail)}};
  if (value_as<Value::Closure>(v)) return json{{"kind", "closure"}};
  if (auto* p = value_as<Value::PairV>(v))
    return json{{"kind", "pair"},
                {"left", value_to_json(p->left)},
                {"right", value_to_json(p->right)}};
  if (auto* i = value_as<Value::InjV>(v))
    return json{{"kind", "inj"},
                {"index", i->index},
                {"value", value_to_json(i->body)}};
  if (value_as<Value::Thunk>(v)) return json{{"kind", "thunk"}};
  auto* w = value_as<Value::WarpedV>(v);
  return json{{"kind", "warped"},
              {"warp", w->warp.to_string()},
              {"value", value_to_json(w->body)}};
}

}  // namespace warplang
