#pragma once

#include <optional>

#include "warplang/syntax.hpp"

namespace warplang {

// Normal types: products of normal types, or a single warping modality over
// a rump (ground / stream / arrow / sum of normal types).
bool is_normal(const TypePtr& t);
TypePtr normalize(const TypePtr& t);

// Invertible coercions τ <: N(τ) and N(τ) <: τ.
struct NormCoercions {
  CoePtr into;
  CoePtr outof;
};
NormCoercions norm_coercions(const TypePtr& t);

// Lockstep subtyping on normal types where the only atomic coercion is
// delay. Undefined (nullopt) on shape mismatch or when the order fails.
std::optional<CoePtr> precedence(const TypePtr& n1, const TypePtr& n2);

// Full algorithmic subtyping: Coe(τ,τ') = in(τ); P(N τ, N τ'); out(τ').
// The result is peephole-simplified.
std::optional<CoePtr> coe(const TypePtr& t1, const TypePtr& t2);

// The unique τ' with α : τ <: τ' (resp. the unique τ with α : τ <: τ').
// Throws TypeError naming the offending coercion node on mismatch.
TypePtr coercion_target(const CoePtr& c, const TypePtr& t);
TypePtr coercion_source(const CoePtr& c, const TypePtr& t);

// Type division: τ \ p, the canonical σ with τ <: W p σ.
TypePtr type_div(const TypePtr& t, const Warp& p);

// Suprema and infima w.r.t. algorithmic subtyping; results are normal.
std::optional<TypePtr> type_sup(const TypePtr& t1, const TypePtr& t2);
std::optional<TypePtr> type_inf(const TypePtr& t1, const TypePtr& t2);

// Removes identity steps; preserves coercion_target and runtime behavior.
CoePtr simplify(const CoePtr& c);

}  // namespace warplang
