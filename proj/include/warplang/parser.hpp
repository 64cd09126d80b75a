#pragma once

#include <string>
#include <string_view>

#include "warplang/syntax.hpp"

namespace warplang {

// Parses a whole `.wlp` source. Mutually recursive `rec def ... and ...`
// groups are desugared into a hidden product-valued Rec definition followed
// by one projection definition per member; `let` desugars to application.
Program parse_program(std::string_view source);

// Parses a single implicit term / type / warp literal (used by tests and
// the `warp` CLI subcommand's expression grammar).
TermPtr parse_term(std::string_view source);
TypePtr parse_type(std::string_view source);
Warp parse_warp(std::string_view source);

}  // namespace warplang
