#pragma once

#include <set>
#include <string>

#include "warplang/subtype.hpp"
#include "warplang/syntax.hpp"

namespace warplang {

// Largest subcontext of Γ whose names lie in X, order preserved.
Context ctx_restrict(const Context& ctx, const std::set<std::string>& names);

// Γ ∸ p: keeps exactly the bindings x : W q σ with q equal to p (warps are
// canonical, so equality is representation equality), rebinding x : σ.
Context ctx_unwarp(const Context& ctx, const Warp& p);

// Applies β pointwise: Γ'(x) = coercion_target(β(x), Γ(x)). Every binding
// of Γ must be covered by β.
Context check_ctx_coercion(const CtxCoercion& coe, const Context& ctx);

// Syntax-directed type checking of explicit terms. Deterministic: at most
// one type. Throws TypeError (with the offending span) on failure.
TypePtr check_explicit(const Context& ctx, const TermPtr& term);

// Prim signatures: add/sub/mul : Int,Int→Int; not : Bool→Bool;
// eq : Int,Int→Bool.
TypePtr prim_result_type(PrimOp op);
TypePtr prim_arg_type(PrimOp op, int index);

}  // namespace warplang
