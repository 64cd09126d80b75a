#include "warplang/syntax.hpp"

#include <algorithm>
#include <functional>

namespace warplang {

// ---------------------------------------------------------------------------
// Type constructors

TypePtr t_ground(Ground g) {
  return std::make_shared<Type>(Type{Type::GroundT{g}});
}
TypePtr t_int() {
  static const TypePtr t = t_ground(Ground::Int);
  return t;
}
TypePtr t_bool() {
  static const TypePtr t = t_ground(Ground::Bool);
  return t;
}
TypePtr t_stream(TypePtr elem) {
  return std::make_shared<Type>(Type{Type::StreamT{std::move(elem)}});
}
TypePtr t_arrow(TypePtr dom, TypePtr cod) {
  return std::make_shared<Type>(
      Type{Type::ArrowT{std::move(dom), std::move(cod)}});
}
TypePtr t_prod(TypePtr l, TypePtr r) {
  return std::make_shared<Type>(Type{Type::ProdT{std::move(l), std::move(r)}});
}
TypePtr t_sum(TypePtr l, TypePtr r) {
  return std::make_shared<Type>(Type{Type::SumT{std::move(l), std::move(r)}});
}
TypePtr t_warped(Warp w, TypePtr body) {
  return std::make_shared<Type>(
      Type{Type::WarpedT{std::move(w), std::move(body)}});
}

bool type_eq(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* g = type_as<Type::GroundT>(a))
    return g->ground == type_as<Type::GroundT>(b)->ground;
  if (auto* s = type_as<Type::StreamT>(a))
    return type_eq(s->elem, type_as<Type::StreamT>(b)->elem);
  if (auto* f = type_as<Type::ArrowT>(a)) {
    auto* g = type_as<Type::ArrowT>(b);
    return type_eq(f->dom, g->dom) && type_eq(f->cod, g->cod);
  }
  if (auto* p = type_as<Type::ProdT>(a)) {
    auto* q = type_as<Type::ProdT>(b);
    return type_eq(p->left, q->left) && type_eq(p->right, q->right);
  }
  if (auto* p = type_as<Type::SumT>(a)) {
    auto* q = type_as<Type::SumT>(b);
    return type_eq(p->left, q->left) && type_eq(p->right, q->right);
  }
  auto* w = type_as<Type::WarpedT>(a);
  auto* v = type_as<Type::WarpedT>(b);
  return w->warp == v->warp && type_eq(w->body, v->body);
}

namespace {

// Precedence levels: 0 arrow, 1 sum, 2 prod, 3 prefix (Stream/W), 4 atom.
void print_type(const TypePtr& t, int level, std::string& out) {
  auto paren = [&](int mine, auto&& body) {
    bool need = mine < level;
    if (need) out += '(';
    body();
    if (need) out += ')';
  };
  if (auto* g = type_as<Type::GroundT>(t)) {
    out += g->ground == Ground::Int ? "Int" : "Bool";
  } else if (auto* s = type_as<Type::StreamT>(t)) {
    paren(3, [&] {
      out += "Stream ";
      print_type(s->elem, 4, out);
    });
  } else if (auto* w = type_as<Type::WarpedT>(t)) {
    paren(3, [&] {
      out += "W ";
      out += w->warp.to_string();
      out += ' ';
      print_type(w->body, 4, out);
    });
  } else if (auto* f = type_as<Type::ArrowT>(t)) {
    paren(0, [&] {
      print_type(f->dom, 1, out);
      out += " -> ";
      print_type(f->cod, 0, out);
    });
  } else if (auto* p = type_as<Type::SumT>(t)) {
    paren(1, [&] {
      print_type(p->left, 1, out);
      out += " + ";
      print_type(p->right, 2, out);
    });
  } else if (auto* p = type_as<Type::ProdT>(t)) {
    paren(2, [&] {
      print_type(p->left, 2, out);
      out += " * ";
      print_type(p->right, 3, out);
    });
  }
}

}  // namespace

std::string to_string(const TypePtr& t) {
  std::string out;
  print_type(t, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Coercion constructors

namespace {
CoePtr mk_coe(Coercion::Node node) {
  return std::make_shared<Coercion>(Coercion{std::move(node)});
}
}  // namespace

CoePtr c_id() {
  static const CoePtr c = mk_coe(Coercion::Id{});
  return c;
}
CoePtr c_seq(CoePtr a, CoePtr b) {
  return mk_coe(Coercion::Seq{std::move(a), std::move(b)});
}
CoePtr c_stream(CoePtr a) { return mk_coe(Coercion::OnStream{std::move(a)}); }
CoePtr c_arrow(CoePtr dom, CoePtr cod) {
  return mk_coe(Coercion::OnArrow{std::move(dom), std::move(cod)});
}
CoePtr c_prod(CoePtr l, CoePtr r) {
  return mk_coe(Coercion::OnProd{std::move(l), std::move(r)});
}
CoePtr c_sum(CoePtr l, CoePtr r) {
  return mk_coe(Coercion::OnSum{std::move(l), std::move(r)});
}
CoePtr c_warp(Warp w, CoePtr a) {
  return mk_coe(Coercion::OnWarp{std::move(w), std::move(a)});
}
CoePtr c_wrap() { return mk_coe(Coercion::Wrap{}); }
CoePtr c_unwrap() { return mk_coe(Coercion::Unwrap{}); }
CoePtr c_concat(Warp p, Warp q) {
  return mk_coe(Coercion::Concat{std::move(p), std::move(q)});
}
CoePtr c_decat(Warp p, Warp q) {
  return mk_coe(Coercion::Decat{std::move(p), std::move(q)});
}
CoePtr c_inflate() { return mk_coe(Coercion::Inflate{}); }
CoePtr c_dist() { return mk_coe(Coercion::Dist{}); }
CoePtr c_fact() { return mk_coe(Coercion::Fact{}); }
CoePtr c_delay(Warp from, Warp to) {
  // The side condition to ≤ from is enforced where the coercion is used
  // (coercion_target), so ill-formed delays are constructible in tests.
  return mk_coe(Coercion::Delay{std::move(from), std::move(to)});
}

bool coercion_eq(const CoePtr& a, const CoePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* s = coe_as<Coercion::Seq>(a)) {
    auto* t = coe_as<Coercion::Seq>(b);
    return coercion_eq(s->first, t->first) && coercion_eq(s->second, t->second);
  }
  if (auto* s = coe_as<Coercion::OnStream>(a))
    return coercion_eq(s->elem, coe_as<Coercion::OnStream>(b)->elem);
  if (auto* s = coe_as<Coercion::OnArrow>(a)) {
    auto* t = coe_as<Coercion::OnArrow>(b);
    return coercion_eq(s->dom, t->dom) && coercion_eq(s->cod, t->cod);
  }
  if (auto* s = coe_as<Coercion::OnProd>(a)) {
    auto* t = coe_as<Coercion::OnProd>(b);
    return coercion_eq(s->left, t->left) && coercion_eq(s->right, t->right);
  }
  if (auto* s = coe_as<Coercion::OnSum>(a)) {
    auto* t = coe_as<Coercion::OnSum>(b);
    return coercion_eq(s->left, t->left) && coercion_eq(s->right, t->right);
  }
  if (auto* s = coe_as<Coercion::OnWarp>(a)) {
    auto* t = coe_as<Coercion::OnWarp>(b);
    return s->warp == t->warp && coercion_eq(s->body, t->body);
  }
  if (auto* s = coe_as<Coercion::Concat>(a)) {
    auto* t = coe_as<Coercion::Concat>(b);
    return s->p == t->p && s->q == t->q;
  }
  if (auto* s = coe_as<Coercion::Decat>(a)) {
    auto* t = coe_as<Coercion::Decat>(b);
    return s->p == t->p && s->q == t->q;
  }
  if (auto* s = coe_as<Coercion::Delay>(a)) {
    auto* t = coe_as<Coercion::Delay>(b);
    return s->from == t->from && s->to == t->to;
  }
  return true;  // Id, Wrap, Unwrap, Inflate, Dist, Fact
}

std::string to_string(const CoePtr& c) {
  if (coe_as<Coercion::Id>(c)) return "id";
  if (auto* s = coe_as<Coercion::Seq>(c))
    return to_string(s->first) + "; " + to_string(s->second);
  if (auto* s = coe_as<Coercion::OnStream>(c))
    return "stream{" + to_string(s->elem) + "}";
  if (auto* s = coe_as<Coercion::OnArrow>(c))
    return "arrow{" + to_string(s->dom) + ", " + to_string(s->cod) + "}";
  if (auto* s = coe_as<Coercion::OnProd>(c))
    return "prod{" + to_string(s->left) + ", " + to_string(s->right) + "}";
  if (auto* s = coe_as<Coercion::OnSum>(c))
    return "sum{" + to_string(s->left) + ", " + to_string(s->right) + "}";
  if (auto* s = coe_as<Coercion::OnWarp>(c))
    return "warp{" + s->warp.to_string() + ", " + to_string(s->body) + "}";
  if (coe_as<Coercion::Wrap>(c)) return "wrap";
  if (coe_as<Coercion::Unwrap>(c)) return "unwrap";
  if (auto* s = coe_as<Coercion::Concat>(c))
    return "concat{" + s->p.to_string() + "," + s->q.to_string() + "}";
  if (auto* s = coe_as<Coercion::Decat>(c))
    return "decat{" + s->p.to_string() + "," + s->q.to_string() + "}";
  if (coe_as<Coercion::Inflate>(c)) return "inflate";
  if (coe_as<Coercion::Dist>(c)) return "dist";
  if (coe_as<Coercion::Fact>(c)) return "fact";
  auto* d = coe_as<Coercion::Delay>(c);
  return "delay{" + d->from.to_string() + "," + d->to.to_string() + "}";
}

// ---------------------------------------------------------------------------
// Term constructors

const char* prim_name(PrimOp op) {
  switch (op) {
    case PrimOp::Add: return "+";
    case PrimOp::Sub: return "-";
    case PrimOp::Mul: return "*";
    case PrimOp::Not: return "not";
    case PrimOp::Eq: return "==";
  }
  return "?";
}

int prim_arity(PrimOp op) { return op == PrimOp::Not ? 1 : 2; }

namespace {
TermPtr mk(Term::Node node, Span s) {
  return std::make_shared<Term>(Term{std::move(node), s});
}
}  // namespace

TermPtr m_var(std::string name, Span s) {
  return mk(Term::Var{std::move(name)}, s);
}
TermPtr m_fun(std::string var, TypePtr annot, TermPtr body, Span s) {
  return mk(Term::Fun{std::move(var), std::move(annot), std::move(body)}, s);
}
TermPtr m_app(TermPtr fn, TermPtr arg, Span s) {
  return mk(Term::App{std::move(fn), std::move(arg)}, s);
}
TermPtr m_pair(TermPtr l, TermPtr r, Span s) {
  return mk(Term::Pair{std::move(l), std::move(r)}, s);
}
TermPtr m_proj(int index, TermPtr body, Span s) {
  return mk(Term::Proj{index, std::move(body)}, s);
}
TermPtr m_inj(int index, TypePtr other, TermPtr body, Span s) {
  return mk(Term::Inj{index, std::move(other), std::move(body)}, s);
}
TermPtr m_case(TermPtr scrut, std::string lv, TermPtr lb, std::string rv,
               TermPtr rb, Span s) {
  return mk(Term::Case{std::move(scrut), std::move(lv), std::move(lb),
                       std::move(rv), std::move(rb)},
            s);
}
TermPtr m_scalar(ScalarVal v, Span s) { return mk(Term::Scalar{v}, s); }
TermPtr m_int(int64_t v, Span s) { return m_scalar(ScalarVal{v}, s); }
TermPtr m_bool(bool v, Span s) { return m_scalar(ScalarVal{v}, s); }
TermPtr m_prim(PrimOp op, std::vector<TermPtr> args, Span s) {
  assert(int(args.size()) == prim_arity(op));
  return mk(Term::Prim{op, std::move(args)}, s);
}
TermPtr m_rec(std::string var, TypePtr annot, TermPtr body, Span s) {
  return mk(Term::Rec{std::move(var), std::move(annot), std::move(body)}, s);
}
TermPtr m_by(TermPtr body, Warp w, Span s) {
  return mk(Term::By{std::move(body), std::move(w)}, s);
}
TermPtr m_head(TermPtr body, Span s) { return mk(Term::Head{std::move(body)}, s); }
TermPtr m_tail(TermPtr body, Span s) { return mk(Term::Tail{std::move(body)}, s); }
TermPtr m_cons(TermPtr head, TermPtr tail, Span s) {
  return mk(Term::Cons{std::move(head), std::move(tail)}, s);
}
TermPtr m_coer(TermPtr body, CoePtr coe, Span s) {
  return mk(Term::CoeR{std::move(body), std::move(coe)}, s);
}
TermPtr m_coel(CtxCoercion coe, TermPtr body, Span s) {
  return mk(Term::CoeL{std::move(coe), std::move(body)}, s);
}
TermPtr m_let(std::string var, TypePtr annot, TermPtr bound, TermPtr body,
              Span s) {
  return m_app(m_fun(std::move(var), std::move(annot), std::move(body), s),
               std::move(bound), s);
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* v = term_as<Term::Var>(a))
    return v->name == term_as<Term::Var>(b)->name;
  if (auto* f = term_as<Term::Fun>(a)) {
    auto* g = term_as<Term::Fun>(b);
    return f->var == g->var && type_eq(f->annot, g->annot) &&
           term_eq(f->body, g->body);
  }
  if (auto* f = term_as<Term::App>(a)) {
    auto* g = term_as<Term::App>(b);
    return term_eq(f->fn, g->fn) && term_eq(f->arg, g->arg);
  }
  if (auto* f = term_as<Term::Pair>(a)) {
    auto* g = term_as<Term::Pair>(b);
    return term_eq(f->left, g->left) && term_eq(f->right, g->right);
  }
  if (auto* f = term_as<Term::Proj>(a)) {
    auto* g = term_as<Term::Proj>(b);
    return f->index == g->index && term_eq(f->body, g->body);
  }
  if (auto* f = term_as<Term::Inj>(a)) {
    auto* g = term_as<Term::Inj>(b);
    return f->index == g->index && type_eq(f->other, g->other) &&
           term_eq(f->body, g->body);
  }
  if (auto* f = term_as<Term::Case>(a)) {
    auto* g = term_as<Term::Case>(b);
    return term_eq(f->scrut, g->scrut) && f->left_var == g->left_var &&
           term_eq(f->left_body, g->left_body) &&
           f->right_var == g->right_var &&
           term_eq(f->right_body, g->right_body);
  }
  if (auto* f = term_as<Term::Scalar>(a))
    return f->value == term_as<Term::Scalar>(b)->value;
  if (auto* f = term_as<Term::Prim>(a)) {
    auto* g = term_as<Term::Prim>(b);
    if (f->op != g->op || f->args.size() != g->args.size()) return false;
    for (size_t i = 0; i < f->args.size(); ++i)
      if (!term_eq(f->args[i], g->args[i])) return false;
    return true;
  }
  if (auto* f = term_as<Term::Rec>(a)) {
    auto* g = term_as<Term::Rec>(b);
    return f->var == g->var && type_eq(f->annot, g->annot) &&
           term_eq(f->body, g->body);
  }
  if (auto* f = term_as<Term::By>(a)) {
    auto* g = term_as<Term::By>(b);
    return f->warp == g->warp && term_eq(f->body, g->body);
  }
  if (auto* f = term_as<Term::Head>(a))
    return term_eq(f->body, term_as<Term::Head>(b)->body);
  if (auto* f = term_as<Term::Tail>(a))
    return term_eq(f->body, term_as<Term::Tail>(b)->body);
  if (auto* f = term_as<Term::Cons>(a)) {
    auto* g = term_as<Term::Cons>(b);
    return term_eq(f->head, g->head) && term_eq(f->tail, g->tail);
  }
  if (auto* f = term_as<Term::CoeR>(a)) {
    auto* g = term_as<Term::CoeR>(b);
    return term_eq(f->body, g->body) && coercion_eq(f->coe, g->coe);
  }
  auto* f = term_as<Term::CoeL>(a);
  auto* g = term_as<Term::CoeL>(b);
  if (f->coe.size() != g->coe.size()) return false;
  for (size_t i = 0; i < f->coe.size(); ++i)
    if (f->coe[i].first != g->coe[i].first ||
        !coercion_eq(f->coe[i].second, g->coe[i].second))
      return false;
  return term_eq(f->body, g->body);
}

namespace {

// Levels: 0 cons, 1 cmp, 2 add, 3 mul, 4 by, 5 app, 6 prefix, 7 atom.
// fun/rec/let/match extend maximally to the right and count as level 0.
void print_term(const TermPtr& t, int level, std::string& out) {
  auto paren = [&](int mine, auto&& body) {
    bool need = mine < level;
    if (need) out += '(';
    body();
    if (need) out += ')';
  };
  if (auto* v = term_as<Term::Var>(t)) {
    out += v->name;
  } else if (auto* s = term_as<Term::Scalar>(t)) {
    if (std::holds_alternative<int64_t>(s->value))
      out += std::to_string(std::get<int64_t>(s->value));
    else
      out += std::get<bool>(s->value) ? "true" : "false";
  } else if (auto* f = term_as<Term::Fun>(t)) {
    paren(0, [&] {
      out += "fun (" + f->var + " : " + to_string(f->annot) + ") -> ";
      print_term(f->body, 0, out);
    });
  } else if (auto* r = term_as<Term::Rec>(t)) {
    paren(0, [&] {
      out += "rec (" + r->var + " : " + to_string(r->annot) + ") -> ";
      print_term(r->body, 0, out);
    });
  } else if (auto* c = term_as<Term::Case>(t)) {
    paren(0, [&] {
      out += "match ";
      print_term(c->scrut, 0, out);
      out += " with { inl " + c->left_var + " -> ";
      print_term(c->left_body, 0, out);
      out += " ; inr " + c->right_var + " -> ";
      print_term(c->right_body, 0, out);
      out += " }";
    });
  } else if (auto* c = term_as<Term::Cons>(t)) {
    paren(0, [&] {
      print_term(c->head, 1, out);
      out += " :: ";
      print_term(c->tail, 0, out);
    });
  } else if (auto* p = term_as<Term::Prim>(t)) {
    switch (p->op) {
      case PrimOp::Eq:
        paren(1, [&] {
          print_term(p->args[0], 2, out);
          out += " == ";
          print_term(p->args[1], 2, out);
        });
        break;
      case PrimOp::Add:
      case PrimOp::Sub:
        paren(2, [&] {
          print_term(p->args[0], 2, out);
          out += p->op == PrimOp::Add ? " + " : " - ";
          print_term(p->args[1], 3, out);
        });
        break;
      case PrimOp::Mul:
        paren(3, [&] {
          print_term(p->args[0], 3, out);
          out += " * ";
          print_term(p->args[1], 4, out);
        });
        break;
      case PrimOp::Not:
        paren(6, [&] {
          out += "not ";
          print_term(p->args[0], 6, out);
        });
        break;
    }
  } else if (auto* b = term_as<Term::By>(t)) {
    paren(4, [&] {
      print_term(b->body, 4, out);
      out += " by ";
      out += b->warp.to_string();
    });
  } else if (auto* a = term_as<Term::App>(t)) {
    paren(5, [&] {
      print_term(a->fn, 5, out);
      out += ' ';
      print_term(a->arg, 6, out);
    });
  } else if (auto* h = term_as<Term::Head>(t)) {
    paren(6, [&] {
      out += "head ";
      print_term(h->body, 6, out);
    });
  } else if (auto* tl = term_as<Term::Tail>(t)) {
    paren(6, [&] {
      out += "tail ";
      print_term(tl->body, 6, out);
    });
  } else if (auto* pj = term_as<Term::Proj>(t)) {
    paren(6, [&] {
      out += pj->index == 1 ? "fst " : "snd ";
      print_term(pj->body, 6, out);
    });
  } else if (auto* in = term_as<Term::Inj>(t)) {
    paren(6, [&] {
      out += in->index == 1 ? "inl [" : "inr [";
      out += to_string(in->other);
      out += "] ";
      print_term(in->body, 6, out);
    });
  } else if (auto* pr = term_as<Term::Pair>(t)) {
    out += '(';
    print_term(pr->left, 0, out);
    out += ", ";
    print_term(pr->right, 0, out);
    out += ')';
  } else if (auto* cr = term_as<Term::CoeR>(t)) {
    out += '(';
    print_term(cr->body, 0, out);
    out += " ; ";
    out += to_string(cr->coe);
    out += ')';
  } else if (auto* cl = term_as<Term::CoeL>(t)) {
    paren(0, [&] {
      out += '[';
      for (size_t i = 0; i < cl->coe.size(); ++i) {
        if (i) out += ", ";
        out += cl->coe[i].first + ": " + to_string(cl->coe[i].second);
      }
      out += "] ";
      print_term(cl->body, 6, out);
    });
  }
}

}  // namespace

std::string to_string(const TermPtr& t) {
  std::string out;
  print_term(t, 0, out);
  return out;
}

bool is_implicit(const TermPtr& t) {
  bool ok = true;
  std::function<void(const TermPtr&)> go = [&](const TermPtr& u) {
    if (!ok) return;
    if (term_as<Term::CoeR>(u) || term_as<Term::CoeL>(u)) {
      ok = false;
      return;
    }
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Term::Fun>) go(n.body);
          else if constexpr (std::is_same_v<T, Term::App>) { go(n.fn); go(n.arg); }
          else if constexpr (std::is_same_v<T, Term::Pair>) { go(n.left); go(n.right); }
          else if constexpr (std::is_same_v<T, Term::Proj>) go(n.body);
          else if constexpr (std::is_same_v<T, Term::Inj>) go(n.body);
          else if constexpr (std::is_same_v<T, Term::Case>) {
            go(n.scrut); go(n.left_body); go(n.right_body);
          } else if constexpr (std::is_same_v<T, Term::Prim>) {
            for (auto& a : n.args) go(a);
          } else if constexpr (std::is_same_v<T, Term::Rec>) go(n.body);
          else if constexpr (std::is_same_v<T, Term::By>) go(n.body);
          else if constexpr (std::is_same_v<T, Term::Head>) go(n.body);
          else if constexpr (std::is_same_v<T, Term::Tail>) go(n.body);
          else if constexpr (std::is_same_v<T, Term::Cons>) { go(n.head); go(n.tail); }
        },
        u->node);
  };
  go(t);
  return ok;
}

TermPtr erase(const TermPtr& t) {
  if (auto* cr = term_as<Term::CoeR>(t)) return erase(cr->body);
  if (auto* cl = term_as<Term::CoeL>(t)) return erase(cl->body);
  if (auto* f = term_as<Term::Fun>(t))
    return m_fun(f->var, f->annot, erase(f->body), t->span);
  if (auto* a = term_as<Term::App>(t))
    return m_app(erase(a->fn), erase(a->arg), t->span);
  if (auto* p = term_as<Term::Pair>(t))
    return m_pair(erase(p->left), erase(p->right), t->span);
  if (auto* p = term_as<Term::Proj>(t))
    return m_proj(p->index, erase(p->body), t->span);
  if (auto* i = term_as<Term::Inj>(t))
    return m_inj(i->index, i->other, erase(i->body), t->span);
  if (auto* c = term_as<Term::Case>(t))
    return m_case(erase(c->scrut), c->left_var, erase(c->left_body),
                  c->right_var, erase(c->right_body), t->span);
  if (auto* p = term_as<Term::Prim>(t)) {
    std::vector<TermPtr> args;
    for (auto& a : p->args) args.push_back(erase(a));
    return m_prim(p->op, std::move(args), t->span);
  }
  if (auto* r = term_as<Term::Rec>(t))
    return m_rec(r->var, r->annot, erase(r->body), t->span);
  if (auto* b = term_as<Term::By>(t))
    return m_by(erase(b->body), b->warp, t->span);
  if (auto* h = term_as<Term::Head>(t)) return m_head(erase(h->body), t->span);
  if (auto* tl = term_as<Term::Tail>(t)) return m_tail(erase(tl->body), t->span);
  if (auto* c = term_as<Term::Cons>(t))
    return m_cons(erase(c->head), erase(c->tail), t->span);
  return t;  // Var, Scalar
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::function<void(const TermPtr&, std::set<std::string>&)> go =
      [&](const TermPtr& u, std::set<std::string>& bound) {
        if (auto* v = term_as<Term::Var>(u)) {
          if (!bound.count(v->name)) out.insert(v->name);
        } else if (auto* f = term_as<Term::Fun>(u)) {
          auto inner = bound;
          inner.insert(f->var);
          go(f->body, inner);
        } else if (auto* r = term_as<Term::Rec>(u)) {
          auto inner = bound;
          inner.insert(r->var);
          go(r->body, inner);
        } else if (auto* c = term_as<Term::Case>(u)) {
          go(c->scrut, bound);
          auto l = bound;
          l.insert(c->left_var);
          go(c->left_body, l);
          auto r = bound;
          r.insert(c->right_var);
          go(c->right_body, r);
        } else {
          std::visit(
              [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Term::App>) { go(n.fn, bound); go(n.arg, bound); }
                else if constexpr (std::is_same_v<T, Term::Pair>) { go(n.left, bound); go(n.right, bound); }
                else if constexpr (std::is_same_v<T, Term::Proj>) go(n.body, bound);
                else if constexpr (std::is_same_v<T, Term::Inj>) go(n.body, bound);
                else if constexpr (std::is_same_v<T, Term::Prim>) {
                  for (auto& a : n.args) go(a, bound);
                } else if constexpr (std::is_same_v<T, Term::By>) go(n.body, bound);
                else if constexpr (std::is_same_v<T, Term::Head>) go(n.body, bound);
                else if constexpr (std::is_same_v<T, Term::Tail>) go(n.body, bound);
                else if constexpr (std::is_same_v<T, Term::Cons>) { go(n.head, bound); go(n.tail, bound); }
                else if constexpr (std::is_same_v<T, Term::CoeR>) go(n.body, bound);
                else if constexpr (std::is_same_v<T, Term::CoeL>) go(n.body, bound);
              },
              u->node);
        }
      };
  std::set<std::string> bound;
  go(t, bound);
  return out;
}

// ---------------------------------------------------------------------------
// Contexts

const TypePtr* ctx_lookup(const Context& ctx, const std::string& name) {
  for (auto& b : ctx)
    if (b.name == name) return &b.type;
  return nullptr;
}

// Contexts keep pairwise-distinct names; callers reject shadowing first.
Context ctx_extend(const Context& ctx, const std::string& name, TypePtr type) {
  assert(ctx_lookup(ctx, name) == nullptr);
  Context out = ctx;
  out.push_back({name, std::move(type)});
  return out;
}

}  // namespace warplang
