#pragma once

#include <string_view>

#include "warplang/warp.hpp"

namespace warplang {

// Result of a warp-expression query: a warp (from literals, *, \, sup,
// inf), a boolean (<=), or a step value (@ n).
struct WarpQuery {
  enum class Kind { Warp, Bool, Number };
  Kind kind = Kind::Warp;
  Warp warp = Warp::zero();
  bool boolean = false;
  ExtNat number = 0;
};

WarpQuery eval_warp_expr(std::string_view source);

}  // namespace warplang
