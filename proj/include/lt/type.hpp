#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace lt {

enum class TK { Base, Arrow, Bang };

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
    TK kind;
    Type a, b;  // Arrow: a -o b; Bang: !a
};

Type base();
Type arrow(Type a, Type b);
Type bang(Type a);
// o -o ... -o o with `rank` arguments.
Type const_type(int rank);

bool type_eq(const Type& x, const Type& y);
std::string to_string(const Type& t);
// type := "o" | "!" type | type "-o" type, with -o right-associative.
Type parse_type(std::string_view text);

enum class Tier { PurelyAffine = 0, AlmostPurelyAffine = 1, AlmostDepth1 = 2, General = 3 };

const char* tier_name(Tier t);  // e.g. "almost-depth-1"
Tier classify_type(const Type& t);
bool in_tier(const Type& t, Tier tier);

// Tape symbols are 'p' and 'o' (the latter standing for the circle); index 0 is the top.
std::optional<Type> navigate(const Type& t, std::string_view tape);
int type_height(const Type& t);
Type subst_base(const Type& a, const Type& b);
// Peel `n` arrows; throws TypeMismatch otherwise.
Type codomain(const Type& t, int n = 1);

}  // namespace lt
