#pragma once

#include <vector>

#include "warplang/checker.hpp"
#include "warplang/syntax.hpp"

namespace warplang {

struct Elaborated {
  TypePtr type;
  TermPtr term;  // explicit refiner of the input, erase(term) = input
};

// Elaborates an implicit term: computes its type and the canonical
// coercion-decorated explicit term. Throws TypeError when no refiner exists.
Elaborated elaborate(const Context& ctx, const TermPtr& implicit);

struct ElabDef {
  std::string name;
  TypePtr type;  // the definition's annotation
  TermPtr term;  // explicit term, checked against the annotation
  bool hidden = false;
};

// Elaborates definitions in order, threading the top-level context. Each
// body is coerced to its annotation, so reported types match the source.
std::vector<ElabDef> elaborate_program(const Program& prog);

}  // namespace warplang
