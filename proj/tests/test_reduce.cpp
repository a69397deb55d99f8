#include <catch2/catch_amalgamated.hpp>

#include "lt/error.hpp"
#include "lt/reduce.hpp"

using namespace lt;

namespace {
const Alphabet kOut{{"S", 1}, {"0", 0}, {"cons", 2}, {"nil", 0}, {"a", 2}, {"b", 1}, {"c", 0}};
Term P(const char* s, std::set<std::string> free = {}) { return parse_term(s, kOut, free); }
}  // namespace

TEST_CASE("reduction at a distance") {
    Term t = P("(let !x = u in let !y = v in \\z. z x y) w", {"u", "v", "w"});
    Term nf = normalize(t);
    REQUIRE(alpha_equal(nf, P("let !x = u in let !y = v in w x y", {"u", "v", "w"})));
    REQUIRE_FALSE(beta_step(P("\\x. x")));
}

TEST_CASE("leftmost-outermost order") {
    Term t = P("(\\f. f 0) (\\x. x)");
    Term s1 = *beta_step(t);
    REQUIRE(alpha_equal(s1, P("(\\x. x) 0")));
    Term s2 = *beta_step(s1);
    REQUIRE(alpha_equal(s2, P("0")));
}

TEST_CASE("count example normalizes") {
    Term v = P("(\\f. f 0) ((\\l. \\r. \\x. l (r x)) ((\\f. \\x. S (f x)) S) S)");
    REQUIRE(to_string(normalize(v)) == "S (S (S 0))");
    REQUIRE(alpha_equal(normalize(P("let !z = !(\\x. x) in z")), P("\\x. x")));
    Term enc = P("a (b c) c");
    REQUIRE(alpha_equal(normalize(enc), enc));
}

TEST_CASE("let substitution avoids capture by the prefix") {
    Term t = P("let !x = (let !y = w in !y) in \\z. a x y", {"w", "y"});
    Term nf = normalize(t);
    REQUIRE(free_vars(nf) == std::set<std::string>{"w", "y"});
}

TEST_CASE("fuel exhaustion") {
    Term omega = P("(\\x. x x) (\\x. x x)");
    try {
        normalize(omega, 50);
        FAIL("expected FuelExhausted");
    } catch (const Error& e) {
        REQUIRE(e.code == Err::FuelExhausted);
    }
}

TEST_CASE("normal forms simplify classification") {
    ConstTypes k = const_types(kOut);
    Term nf = normalize(P("let !z = !(\\x. x) in z"));
    Term ann = check_type({}, nf, parse_type("o -o o"), k);
    REQUIRE(normal_form_classification_check(ann));
    REQUIRE(classify_term(ann) == Tier::PurelyAffine);
    Term bad = check_type({}, P("let !z = !(\\x. x) in z"), parse_type("o -o o"), k);
    REQUIRE(classify_term(bad) != Tier::PurelyAffine);
}

TEST_CASE("strategies agree") {
    Term v = P("(\\g. g !(S 0)) ((\\g. \\x. let !y = x in cons y (g !(S y))) (\\x. nil))");
    Term a = normalize(v, kDefaultFuel, Strategy::LeftmostOutermost);
    Term b = normalize(v, kDefaultFuel, Strategy::RightmostInnermost);
    REQUIRE(alpha_equal(a, b));
    REQUIRE(to_string(a) == "cons (S 0) nil");
}
