#include <catch2/catch_amalgamated.hpp>

#include "lt/error.hpp"
#include "lt/typing.hpp"

using namespace lt;

namespace {

const Alphabet kOut{{"S", 1}, {"0", 0}, {"cons", 2}, {"nil", 0}, {"a", 2}, {"c", 0}};
const ConstTypes kConsts = const_types(kOut);

Term check(const char* src, const char* ty) {
    return check_type({}, parse_term(src, kOut), parse_type(ty), kConsts);
}

Err error_of(const TypingContext& ctx, const char* src, const char* ty, std::set<std::string> free = {}) {
    try {
        check_type(ctx, parse_term(src, kOut, free), parse_type(ty), kConsts);
    } catch (const Error& e) {
        return e.code;
    }
    return Err::Io;
}

}  // namespace

TEST_CASE("transition terms typecheck") {
    Term ta = check("\\l. \\r. \\x. l (r x)", "(o -o o) -o (o -o o) -o o -o o");
    REQUIRE(type_eq(ta->ty, parse_type("(o -o o) -o (o -o o) -o o -o o")));
    REQUIRE(classify_term(ta) == Tier::PurelyAffine);

    Term ts = check("\\g. \\x. let !y = x in cons y (g !(S y))", "(!o -o o) -o !o -o o");
    REQUIRE(classify_term(ts) == Tier::AlmostPurelyAffine);

    Term t1 = check("\\g. \\x. let !f = x in g !(\\y. let !z = f (f y) in !(a z z))",
                    "(!(!o -o !o) -o o) -o !(!o -o !o) -o o");
    REQUIRE(classify_term(t1) == Tier::AlmostDepth1);
}

TEST_CASE("affine violations are rejected") {
    TypingContext ctx;
    ctx.phi["f"] = parse_type("o -o o -o o");
    REQUIRE(error_of(ctx, "\\x. f x x", "o -o o", {"f"}) == Err::AffineViolation);
    REQUIRE(error_of({}, "\\x. !x", "o -o !o") == Err::BoxCapturesAffine);
    REQUIRE(error_of({}, "\\x. y", "o -o o") == Err::UnknownConstant);
    REQUIRE(error_of({}, "\\x. x", "o -o o -o o") == Err::TypeMismatch);
    REQUIRE(error_of(ctx, "\\x. y", "o -o o", {"y"}) == Err::UnboundVariable);
}

TEST_CASE("let-bound variables may repeat") {
    Term t = check("\\x. let !y = x in a y y", "!o -o o");
    REQUIRE(affineness_holds(t));
}

TEST_CASE("depth annotation counts non-base boxes") {
    Term t = check("\\g. \\x. let !f = x in g !(\\y. f (f y))", "(!(!o -o !o) -o o) -o !(!o -o !o) -o o");
    // Path to the inner f occurrence: lam, lam, let body, app arg, box body, lam body, app fn.
    Term f = subterm_at(t, {0, 0, 1, 1, 0, 0, 0});
    REQUIRE(f->name == "f");
    REQUIRE(f->depth == 1);
    REQUIRE(subterm_at(t, {0, 0, 1, 1})->depth == 0);
    Term s = check("\\g. \\x. let !y = x in g !(S y)", "(!o -o o) -o !o -o o");
    REQUIRE(subterm_at(s, {0, 0, 1, 1, 0})->depth == 0);
    auto [ctx, sub] = split_at(t, {0, 0, 1, 1, 0, 0, 0});
    REQUIRE(context_depth(ctx) == 1);
}

TEST_CASE("type classification") {
    REQUIRE(classify_type(parse_type("o -o o")) == Tier::PurelyAffine);
    REQUIRE(classify_type(parse_type("(o -o !o) -o !o")) == Tier::AlmostPurelyAffine);
    REQUIRE(classify_type(parse_type("!(!o -o o)")) == Tier::AlmostDepth1);
    REQUIRE(classify_type(parse_type("!!(o -o o)")) == Tier::General);
    REQUIRE(classify_type(parse_type("!(o -o o)")) == Tier::AlmostDepth1);
}

TEST_CASE("navigate and height") {
    REQUIRE(type_eq(*navigate(parse_type("o -o o"), "p"), base()));
    REQUIRE(type_eq(*navigate(parse_type("(o -o o) -o o"), "op"), base()));
    REQUIRE_FALSE(navigate(base(), "p"));
    REQUIRE(type_eq(*navigate(parse_type("!o"), ""), parse_type("!o")));
    REQUIRE_FALSE(navigate(parse_type("!o"), "p"));
    REQUIRE(type_height(base()) == 0);
    REQUIRE(type_height(parse_type("o -o o")) == 1);
    Type t = parse_type("!(!o -o !o) -o o");
    REQUIRE(type_height(t) == 2);
    for (int len = 0; len <= 4; ++len)
        for (int bits = 0; bits < (1 << len); ++bits) {
            std::string tape;
            for (int i = 0; i < len; ++i) tape += (bits >> i) & 1 ? 'p' : 'o';
            if (navigate(t, tape)) REQUIRE(len <= 2);
        }
}

TEST_CASE("base substitution") {
    REQUIRE(type_eq(subst_base(parse_type("o -o o"), parse_type("!o -o o")), parse_type("(!o -o o) -o !o -o o")));
    REQUIRE(type_eq(subst_base(base(), parse_type("!o")), parse_type("!o")));
    Type r = subst_base(parse_type("(o -o !o) -o !o"), parse_type("o -o o"));
    REQUIRE(type_eq(r, parse_type("((o -o o) -o !(o -o o)) -o !(o -o o)")));
    REQUIRE(classify_type(r) == Tier::AlmostDepth1);
}

TEST_CASE("lambdas without an expected type get their principal type") {
    Alphabet sigma{{"S", 1}, {"0", 0}};
    auto consts = const_types(sigma);
    Term t = parse_term("(\\l. \\r. \\x. l (r x)) ((\\f. \\x. S (f x)) S) S 0", sigma);
    Term ann = check_type({}, t, base(), consts);
    CHECK(type_eq(ann->ty, base()));
    Term id = infer_type({}, parse_term("\\f. \\x. f x", sigma), consts);
    CHECK(to_string(id->ty) == "(o -o o) -o o -o o");
    CHECK_THROWS_AS(infer_type({}, parse_term("\\x. x x", sigma), consts), Error);
}
