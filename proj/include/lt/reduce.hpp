#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lt/term.hpp"
#include "lt/typing.hpp"

namespace lt {

inline constexpr std::uint64_t kDefaultFuel = 10'000'000;

// L ::= [.] | let !x = t in L, outermost first.
struct LetPrefix {
    std::vector<std::pair<std::string, Term>> lets;
};

std::pair<LetPrefix, Term> split_lets(const Term& t);
Term plug_lets(const LetPrefix& l, Term core);

enum class Strategy { LeftmostOutermost, RightmostInnermost };

// One redex contraction, or nullopt on a normal form.
std::optional<Term> beta_step(const Term& t, Strategy s = Strategy::LeftmostOutermost);

// Throws FuelExhausted after `fuel` steps.
Term normalize(const Term& t, std::uint64_t fuel = kDefaultFuel, Strategy s = Strategy::LeftmostOutermost,
               std::uint64_t* steps = nullptr);

bool is_normal(const Term& t);

// For an annotated normal form: its tier does not exceed the tier of its type and context.
bool normal_form_classification_check(const Term& annotated_nf, const TypingContext& ctx = {});

}  // namespace lt
