#include <catch2/catch_amalgamated.hpp>

#include "lt/transducer.hpp"

using namespace lt;

namespace {

const std::string kCorpus = LT_CORPUS_DIR;

Tree T(const char* s) { return parse_tree(s); }

Tree unary(int n) {
    Tree t("0");
    for (int i = 0; i < n; ++i) t = Tree("S", {t});
    return t;
}

Tree numeral_list(int n) {
    Tree l("nil");
    for (int i = n; i >= 1; --i) l = Tree("cons", {unary(i), l});
    return l;
}

}  // namespace

TEST_CASE("count transducer") {
    auto spec = load_spec(kCorpus + "/count.lt");
    CHECK(spec.tier == Tier::PurelyAffine);
    CHECK(eval_normalize(spec, T("a(b(c),c)")) == T("S(S(S(0)))"));
    CHECK(eval_iam(spec, T("a(b(c),c)")) == T("S(S(S(0)))"));
    CHECK(eval_iam(spec, T("a(a(c,c),b(b(c)))"), Variant::PA) == unary(5));
    CHECK(to_string(program_term(spec, T("a(b(c),c)"))) ==
          to_string(parse_term(R"(((\f. f 0) ((\l. \r. \x. l (r x)) ((\f. \x. S (f x)) S) S)))", spec.output)));
}

TEST_CASE("seq-nat transducer") {
    auto spec = load_spec(kCorpus + "/seq-nat.lt");
    CHECK(spec.tier == Tier::AlmostPurelyAffine);
    for (int n = 0; n <= 6; ++n) {
        CHECK(eval_normalize(spec, unary(n)) == numeral_list(n));
        CHECK(eval_iam(spec, unary(n)) == numeral_list(n));
    }
    CHECK_THROWS_AS(eval_iam(spec, unary(2), Variant::PA), Error);
}

TEST_CASE("bin2bin transducer") {
    auto spec = load_spec(kCorpus + "/bin2bin.lt");
    CHECK(spec.tier == Tier::AlmostDepth1);
    Tree in = T("0(0(1(0(e))))");
    Tree want = T("a(a(c,c),a(c,c))");
    CHECK(eval_normalize(spec, in) == want);
    CHECK(eval_iam(spec, in, Variant::Depth1) == want);
    CHECK(eval_iam(spec, in, Variant::Single) == want);
    CHECK(eval_normalize(spec, T("1(e)")).size() == 3);
    CHECK(eval_normalize(spec, T("1(1(e))")).size() == 15);
}

TEST_CASE("spec parsing errors carry a line number") {
    try {
        parse_spec("input { a:0 }\noutput { c:0 }\nmemory o\nrule a = c c\nout = \\x. x\n", "f.lt");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("f.lt") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_spec("input { a:0 }\noutput { c:0 }\nmemory o\nout = \\x. x\n"), Error);
    try {
        parse_spec("input { a:0 }\noutput { c:0 }\nmemory o\nrule a = (c\nout = \\x. x\n", "g.lt");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code == Err::Syntax);
        CHECK(std::string(e.what()).rfind("g.lt:4:", 0) == 0);
    }
}

TEST_CASE("global program origins") {
    auto spec = load_spec(kCorpus + "/count.lt");
    auto g = global_program(spec, T("a(b(c),c)"));
    CHECK(g.origin[0].kind == Origin::Top);
    CHECK(g.origin[1].kind == Origin::U);
    CHECK(g.origin[1].local == 0);
    int blocks = 0;
    for (auto& o : g.origin) blocks += o.kind == Origin::Block && o.local == 0;
    CHECK(blocks == 4);
    for (int i = 0; i < g.flat.size(); ++i) {
        const Origin& o = g.origin[i];
        if (o.kind != Origin::Block) continue;
        FlatTerm sk(skeleton_term(spec, g.tree.nodes[o.tree_node].label));
        CHECK(sk[o.local].kind == g.flat[i].kind);
        CHECK(sk[o.local].name == g.flat[i].name);
    }
}

TEST_CASE("composition") {
    auto seq = load_spec(kCorpus + "/seq-nat.lt");
    auto cnt = load_spec(kCorpus + "/count-list.lt");
    auto c = compose(seq, cnt);
    CHECK(to_string(c.memory) == "!(o -o o) -o o -o o");
    CHECK(c.tier <= Tier::AlmostDepth1);
    for (int k = 0; k <= 6; ++k) {
        Tree two = eval_normalize(cnt, eval_normalize(seq, unary(k)));
        CHECK(eval_normalize(c, unary(k)) == two);
        CHECK(eval_iam(c, unary(k)) == two);
    }
    CHECK_THROWS_AS(compose(seq, load_spec(kCorpus + "/count.lt")), Error);
    auto id = identity_transducer(seq.input);
    CHECK(eval_normalize(compose(id, seq), unary(3)) == numeral_list(3));
}

TEST_CASE("GLS mirror and its type-constant form") {
    auto g = load_gls(kCorpus + "/gls-mirror.gls");
    CHECK(gls_run(g, T("a(c,c)")) == T("a(c,c)"));
    CHECK(gls_run(g, T("a(b(c),c)")) == T("a(c,b(c))"));
    CHECK(gls_run(g, T("a(a(b(c),c),b(c))")) == T("a(b(c),a(b(c),c))"));
    auto k = make_type_constant(g);
    CHECK(to_string(k.state_types.at("e")) == "o -o (o -o o) -o o");
    auto rel = split_state_relabeling(k);
    for (const char* s : {"c", "a(c,c)", "a(b(c),c)", "b(a(c,b(c)))", "a(a(b(c),c),b(c))"}) {
        CHECK(gls_run(k, T(s)) == gls_run(g, T(s)));
        CHECK(eval_normalize(rel.transducer, rel.relabel(T(s))) == gls_run(g, T(s)));
    }
    CHECK(rel.relabel(T("a(b(c),c)")) == T("a@e(b@d(c@e),c@d)"));
}

TEST_CASE("conversions cast after inject is the identity up to eta") {
    auto g = load_gls(kCorpus + "/gls-mirror.gls");
    auto c = conversions(g);
    auto consts = const_types(g.output);
    for (auto& [q, ty] : g.state_types) {
        for (const char* s : {"\\y. b y", "\\k. k (a c c)"}) {
            Term t = parse_term(s, g.output);
            try {
                check_type({}, t, ty, consts);
            } catch (const Error&) {
                continue;
            }
            Term back = normalize(mk_app(c.cast.at(q), mk_app(c.iota.at(q), t)));
            CHECK(alpha_equal(back, eta_long(t, ty, consts)));
        }
    }
    CHECK(to_string(dummy_term(parse_type("o -o o -o o"), "c")).find("c") != std::string::npos);
}

TEST_CASE("eta-long forms") {
    Alphabet sigma{{"a", 2}, {"c", 0}};
    auto consts = const_types(sigma);
    Term t = parse_term("a", sigma);
    Term e = eta_long(t, parse_type("o -o o -o o"), consts);
    CHECK(alpha_equal(e, parse_term("\\x. \\y. a x y", sigma)));
    Term h = parse_term("\\f. f", sigma);
    Term he = eta_long(h, parse_type("(o -o o) -o o -o o"), consts);
    CHECK(alpha_equal(he, parse_term("\\f. \\x. f x", sigma)));
}

TEST_CASE("wn translation of almost affine terms") {
    Alphabet sigma{{"a", 2}, {"b", 1}, {"c", 0}};
    auto consts = const_types(sigma);
    Term t = parse_term("(\\x. a x x) (b c)", sigma);
    Term ann = check_almost_affine({}, t, base(), consts);
    Term w = wn_translate(ann, sigma);
    check_type({}, w, bang(base()), consts);
    CHECK(alpha_equal(normalize(w), mk_box(encode_tree(T("a(b(c),b(c))")))));
    CHECK(discarded_variables(parse_term("\\x. \\y. y", sigma)) == std::vector<std::string>{"x"});
}
