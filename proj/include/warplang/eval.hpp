#pragma once

#include <json.hpp>

#include "warplang/syntax.hpp"

namespace warplang {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

// Environments are immutable name→value maps in insertion order; extending
// with an existing name replaces the binding (inner scopes fully hide outer
// ones).
struct Env {
  std::vector<std::pair<std::string, ValuePtr>> binds;

  const ValuePtr* lookup(const std::string& name) const {
    for (auto& [n, v] : binds)
      if (n == name) return &v;
    return nullptr;
  }
  Env extend(const std::string& name, ValuePtr v) const;
};

// Evaluation results, indexed by a step n ∈ ω+1. `stop` inhabits every type
// at 0; thunks suspend whole computations at ω; warped values mark results
// computed in a local time scale.
struct Value {
  struct Stop {};
  struct Scalar {
    ScalarVal value;
  };
  struct ConsV {
    ValuePtr head, tail;
  };
  struct Closure {
    std::string var;
    TypePtr annot;
    TermPtr body;
    Env env;
  };
  struct PairV {
    ValuePtr left, right;
  };
  struct InjV {
    int index;
    ValuePtr body;
  };
  struct Thunk {
    TermPtr term;
    Env env;
  };
  struct WarpedV {
    Warp warp;
    ValuePtr body;
  };
  using Node =
      std::variant<Stop, Scalar, ConsV, Closure, PairV, InjV, Thunk, WarpedV>;
  Node node;
};

ValuePtr v_stop();
ValuePtr v_scalar(ScalarVal s);
ValuePtr v_int(int64_t v);
ValuePtr v_bool(bool v);
ValuePtr v_cons(ValuePtr head, ValuePtr tail);
ValuePtr v_closure(std::string var, TypePtr annot, TermPtr body, Env env);
ValuePtr v_pair(ValuePtr l, ValuePtr r);
ValuePtr v_inj(int index, ValuePtr body);
ValuePtr v_thunk(TermPtr term, Env env);
ValuePtr v_warped(Warp w, ValuePtr body);

template <typename T>
const T* value_as(const ValuePtr& v) {
  return std::get_if<T>(&v->node);
}

// Big-step evaluation at fuel n. Total on well-typed inputs; ill-typed
// hand-built terms surface as InternalError.
ValuePtr evaluate(const TermPtr& term, const Env& env, ExtNat n);

// Removes all information pertaining to steps greater than n. Forcing a
// thunk at a finite positive step evaluates it.
ValuePtr truncate_value(const ValuePtr& v, ExtNat n);
Env truncate_env(const Env& env, ExtNat n);

// Applies a coercion to a value at step n.
ValuePtr coerce_value(const CoePtr& coe, const ValuePtr& v, ExtNat n);

// Keeps bindings of the form x ↦ ⌈p⌉v (exactly this p, canonically),
// stripping the wrapper; drops everything else.
Env purge(const Env& env, const Warp& p);

// Kleene iteration for rec: the n-th iterate of (fun x. body) from stop.
ValuePtr iterate(const std::string& var, const TermPtr& body, const Env& env,
                 ValuePtr acc, uint64_t from, uint64_t to);

// Decides the value typing judgment v : τ @ n. Thunks are sampled by
// forcing at steps 1 and 2; closures are checked by annotation shape.
bool value_has_type(const ValuePtr& v, const TypePtr& type, ExtNat n);

std::string to_string(const ValuePtr& v);
nlohmann::json value_to_json(const ValuePtr& v);

}  // namespace warplang
