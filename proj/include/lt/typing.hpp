#pragma once

#include <map>
#include <string>

#include "lt/term.hpp"
#include "lt/type.hpp"

namespace lt {

using ConstTypes = std::map<std::string, Type>;

// c : o^rk(c) -o o for every letter.
ConstTypes const_types(const Alphabet& sigma);

struct TypingContext {
    std::map<std::string, Type> theta;  // unrestricted
    std::map<std::string, Type> phi;    // affine
};

// Checks t against `expected` and returns a copy with every node annotated by type and depth.
Term check_type(const TypingContext& ctx, const Term& t, const Type& expected, const ConstTypes& constants);
// Infers the type of t; a lambda without an expected type gets its principal simple type with leftover type
// variables set to o.
Term infer_type(const TypingContext& ctx, const Term& t, const ConstTypes& constants);

// As check_type, but lambda-bound variables of type o may occur several times (almost affine terms).
Term check_almost_affine(const TypingContext& ctx, const Term& t, const Type& expected, const ConstTypes& constants);

// Fills Node::depth given Node::ty, starting at `depth`.
Term annotate_depth(const Term& typed, int depth = 0);

// Every lambda-bound variable occurs at most once and outside any box relative to its binder.
bool affineness_holds(const Term& t);

// Least tier satisfied by the annotated term, given the types of its free variables.
Tier classify_term(const Term& annotated, const TypingContext& ctx = {});
// Maximum type height over all annotated subterms: the tape bound H.
int max_subterm_height(const Term& annotated);

}  // namespace lt
