#include <catch2/catch_amalgamated.hpp>

#include "lt/error.hpp"
#include "lt/term.hpp"

using namespace lt;

namespace {
const Alphabet kOut{{"S", 1}, {"0", 0}, {"a", 2}, {"b", 1}, {"c", 0}, {"cons", 2}, {"nil", 0}};
}

TEST_CASE("parse lambda and application") {
    Term t = parse_term("\\f. f 0", kOut);
    REQUIRE(t->kind == Kind::Lam);
    REQUIRE(t->name == "f");
    REQUIRE(t->a->kind == Kind::App);
    REQUIRE(t->a->a->kind == Kind::Var);
    REQUIRE(t->a->b->kind == Kind::Const);
    REQUIRE(t->a->b->name == "0");
}

TEST_CASE("parse let-binding") {
    Term t = parse_term("let !y = x in cons y (g !(S y))", kOut, {"x", "g"});
    REQUIRE(t->kind == Kind::Let);
    REQUIRE(t->name == "y");
    REQUIRE(t->a->kind == Kind::Var);
    REQUIRE(t->a->name == "x");
    REQUIRE(to_string(t) == "let !y = x in cons y (g !(S y))");
}

TEST_CASE("malformed and unknown input") {
    try {
        parse_term("\\x. \\x.", kOut);
        FAIL("expected a syntax error");
    } catch (const Error& e) {
        REQUIRE(e.code == Err::Syntax);
        REQUIRE(std::string(e.what()).find("line 1, column") != std::string::npos);
    }
    try {
        parse_term("zz", kOut);
        FAIL("expected an unknown constant");
    } catch (const Error& e) {
        REQUIRE(e.code == Err::UnknownConstant);
    }
}

TEST_CASE("print then parse is the identity up to alpha") {
    for (const char* src : {"\\l. \\r. \\x. l (r x)", "\\g. \\x. let !y = x in cons y (g !(S y))",
                            "(\\x. x) ((\\y. y) 0)", "\\g. g !(\\y. y)", "!(!0)", "let !z = !(\\x. x) in z"}) {
        Term t = parse_term(src, kOut);
        Term back = parse_term(to_string(t), kOut);
        REQUIRE(alpha_equal(t, back));
        REQUIRE(alpha_equal(canonical(t), t));
    }
}

TEST_CASE("alpha equality") {
    REQUIRE(alpha_equal(parse_term("\\x. \\y. x", kOut), parse_term("\\a. \\b. a", kOut)));
    REQUIRE_FALSE(alpha_equal(parse_term("\\x. \\y. x", kOut), parse_term("\\a. \\b. b", kOut)));
}

TEST_CASE("tree encoding round trip") {
    Tree t = parse_tree("a(b(c),c)");
    REQUIRE(to_string(encode_tree(t)) == "a (b c) c");
    REQUIRE(decode_tree(encode_tree(t)) == t);
    REQUIRE(to_string(encode_tree(parse_tree("c"))) == "c");
    REQUIRE(to_string(encode_tree(parse_tree("S(S(0))"))) == "S (S 0)");
    REQUIRE(decode_tree(parse_term("S 0", kOut)) == parse_tree("S(0)"));
    try {
        decode_tree(parse_term("\\x. x", kOut));
        FAIL("expected NotAnEncoding");
    } catch (const Error& e) {
        REQUIRE(e.code == Err::NotAnEncoding);
    }
    try {
        decode_tree(parse_term("a c", kOut), &kOut);
        FAIL("expected an arity mismatch");
    } catch (const Error& e) {
        REQUIRE(e.code == Err::NotAnEncoding);
    }
}

TEST_CASE("instantiate replaces letters by family terms") {
    Alphabet in{{"a", 2}, {"b", 1}, {"c", 0}};
    std::map<std::string, Term> fam{{"a", parse_term("\\l. \\r. \\x. l (r x)", kOut)},
                                    {"b", parse_term("\\f. \\x. S (f x)", kOut)},
                                    {"c", parse_term("S", kOut)}};
    Term t = instantiate(parse_tree("a(b(c),c)"), fam);
    REQUIRE(to_string(t) == "(\\l. \\r. \\x. l (r x)) ((\\f. \\x. S (f x)) S) S");
    REQUIRE(to_string(instantiate(parse_tree("c"), fam)) == "S");
}

TEST_CASE("split and plug") {
    Term t = parse_term("\\x. S (f x)", kOut, {"f"});
    auto [c0, s0] = split_at(t, {});
    REQUIRE(s0 == t);
    REQUIRE(alpha_equal(plug(c0, s0), t));
    auto [c1, s1] = split_at(t, {0, 1, 0});
    REQUIRE(to_string(s1) == "f");
    REQUIRE(to_string(c1) == "\\x. S ([.] x)");
    REQUIRE(alpha_equal(plug(c1, s1), t));
    REQUIRE_THROWS_AS(split_at(t, {1}), Error);
}

TEST_CASE("capture-avoiding substitution") {
    Term t = parse_term("\\y. x y", kOut, {"x"});
    Term r = subst(t, "x", mk_var("y"));
    REQUIRE(r->kind == Kind::Lam);
    REQUIRE(r->name != "y");
    REQUIRE(r->a->a->name == "y");
    REQUIRE(free_vars(r) == std::set<std::string>{"y"});
}

TEST_CASE("focus rendering") {
    Term t = parse_term("(\\f. f 0) S", kOut);
    REQUIRE(render_focus(t, {0, 0, 0}, false) == "(\\f. >f< 0) S");
    REQUIRE(render_focus(t, {0}, true) == "<(\\f. f 0)> S");
    REQUIRE(render_focus(t, {}, false) == ">(\\f. f 0) S<");
}
