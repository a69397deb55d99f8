#include <catch2/catch_amalgamated.hpp>

#include "lt/transducer.hpp"
#include "lt/walking.hpp"

using namespace lt;

namespace {

const std::string kCorpus = LT_CORPUS_DIR;

Tree T(const char* s) { return parse_tree(s); }

Tree unary(int n) {
    Tree t("0");
    for (int i = 0; i < n; ++i) t = Tree("S", {t});
    return t;
}

// Binary numeral with the most significant bit at the root.
Tree binary(unsigned n, int bits) {
    Tree t("e");
    for (int i = 0; i < bits; ++i) t = Tree(((n >> i) & 1) ? "1" : "0", {t});
    return t;
}

Tree full(int h) { return h == 0 ? Tree("c") : Tree("a", {full(h - 1), full(h - 1)}); }

}  // namespace

TEST_CASE("count TWT run") {
    auto spec = load_twt(kCorpus + "/count.twt");
    Tree tau = T("a(b(c),c)");
    IndexedTree it(tau);
    StepFn<TwtConfig> step = [&](const TwtConfig& c) { return twt_step(spec, it, c); };
    auto [tr, r] = trace<TwtConfig>(step, twt_initial(spec), 100, [&](const TwtConfig& c) { return render(it, c); });
    REQUIRE(r.status == Status::Output);
    CHECK(r.output == T("S(S(S(0)))"));
    std::vector<std::string> want{
        "(q, from-parent, b2)",
        "S((q, from-parent, c3))",
        "S(S((q, from-child 1, b2)))",
        "S(S((q, from-child 1, a1)))",
        "S(S((q, from-parent, c4)))",
        "S(S(S((q, from-child 2, a1))))",
        "S(S(S(0)))",
    };
    REQUIRE(tr.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(tr[i].frontier == want[i]);
}

TEST_CASE("seq-nat TWT") {
    auto spec = load_twt(kCorpus + "/seq-nat.twt");
    auto lam = load_spec(kCorpus + "/seq-nat.lt");
    for (int n = 0; n <= 6; ++n) CHECK(twt_eval(spec, unary(n)) == eval_normalize(lam, unary(n)));
    auto root = spec.delta.at(TwtKey{"S", "spine", {Prov::Self, 0}, true});
    CHECK(to_string(root) == "cons((num, stay), (spine, to-child 1))");
}

TEST_CASE("reversibility") {
    auto count = load_twt(kCorpus + "/count.twt");
    CHECK(check_reversible(count).reversible);
    auto seq = load_twt(kCorpus + "/seq-nat.twt");
    auto rep = check_reversible(seq);
    CHECK_FALSE(rep.reversible);
    CHECK(rep.witness == "(num, to-parent) occurs in delta S(num, self) and delta S(num, from-child 1)");
    CHECK_THROWS_AS(predecessor(seq, IndexedTree(unary(1)), TwtConfig{"num", {Prov::Self, 0}, 0}), Error);
    auto constant = parse_twt("input { a:0 }\noutput { c:0 }\nstate q init\ndelta-root a q self = c\n");
    CHECK(check_reversible(constant).reversible);
}

TEST_CASE("predecessor walks the count run backwards") {
    auto spec = load_twt(kCorpus + "/count.twt");
    Tree tau = T("a(b(c),c)");
    IndexedTree it(tau);
    std::vector<TwtConfig> fired;
    twt_run(spec, tau, 100, [&](std::uint64_t, const TwtConfig& c, const std::vector<int>&) { fired.push_back(c); });
    REQUIRE(fired.size() == 7);
    CHECK_FALSE(predecessor(spec, it, fired[0]).has_value());
    for (std::size_t i = 1; i < fired.size(); ++i) {
        auto p = predecessor(spec, it, fired[i]);
        REQUIRE(p.has_value());
        CHECK(*p == fired[i - 1]);
    }
    auto p = predecessor(spec, it, TwtConfig{"q", {Prov::FromParent, 0}, 1});
    REQUIRE(p);
    CHECK(render(it, *p) == "(q, self, a1)");
}

TEST_CASE("TWT text round trip and errors") {
    auto spec = load_twt(kCorpus + "/count.twt");
    auto again = parse_twt(to_text(spec));
    CHECK(again.delta.size() == spec.delta.size());
    CHECK(to_text(again) == to_text(spec));
    auto quoted = parse_twt("input { a:0 }\noutput { c:0 }\nstate \"T[x, \\\"y\\\"]\" init\ndelta-root a \"T[x, \\\"y\\\"]\" self = c\n");
    CHECK(quoted.initial == "T[x, \"y\"]");
    CHECK(to_text(parse_twt(to_text(quoted))) == to_text(quoted));
    CHECK_THROWS_AS(parse_twt("input { a:0 }\noutput { c:0 }\nstate q init\ndelta-root a q from-parent = c\n"), Error);
    CHECK_THROWS_AS(parse_twt("input { a:1 }\noutput { c:0 }\nstate q init\ndelta-root a q self = (q, to-parent)\n"), Error);
    CHECK_THROWS_AS(parse_twt("input { a:0 }\noutput { c:0 }\nstate q init\ndelta-root a q self = (r, stay)\n"), Error);
    auto none = parse_twt("input { a:0, b:0 }\noutput { c:0 }\nstate q init\ndelta-root a q self = c\n");
    auto r = twt_run(none, T("b"), 10);
    CHECK(r.status == Status::Stuck);
    CHECK(r.steps == 0);
}

TEST_CASE("IPTT pebble visibility") {
    auto spec = load_iptt(kCorpus + "/bin2unary.iptt");
    IndexedTree it(T("a(b(c),c)"));
    IpttConfig c{"q", {Prov::FromParent, 0}, 2, {{"b", 2}, {"a", 1}}};
    CHECK_FALSE(visible_pebble(c).has_value());
    c.pebbles.emplace_back("a", 2);
    CHECK(visible_pebble(c) == std::optional<std::string>("a"));
    CHECK(render(it, c) == "(q, from-parent, c3, [(a, c3), (a, b2), (b, c3)])");
}

TEST_CASE("binary to unary IPTT") {
    auto spec = load_iptt(kCorpus + "/bin2unary.iptt");
    CHECK(iptt_eval(spec, T("0(1(0(1(e))))")) == unary(5));
    CHECK(iptt_eval(spec, T("0(1(e))")) == unary(1));
    CHECK(iptt_eval(spec, T("e")) == unary(0));
    for (unsigned n = 0; n < 32; ++n) CHECK(iptt_eval(spec, binary(n, 5)) == unary(static_cast<int>(n)));
    auto again = parse_iptt(to_text(spec));
    CHECK(to_text(again) == to_text(spec));
}

TEST_CASE("bin2bin IPTT") {
    auto spec = load_iptt(kCorpus + "/bin2bin.iptt");
    auto lam = load_spec(kCorpus + "/bin2bin.lt");
    CHECK(iptt_eval(spec, T("0(0(1(0(e))))")) == T("a(a(c,c),a(c,c))"));
    for (unsigned n = 0; n <= 4; ++n) {
        Tree out = iptt_eval(spec, binary(n, 3));
        CHECK(out == full(static_cast<int>(n)));
        CHECK(out == eval_normalize(lam, binary(n, 3)));
    }
}

TEST_CASE("child-number adapter") {
    ChildNumberTwt cn;
    cn.input = Alphabet{{"a", 2}, {"c", 0}};
    cn.output = Alphabet{{"S", 1}, {"T", 1}, {"0", 0}};
    cn.states = {"d", "u"};
    cn.initial = "d";
    auto leaf = [](const char* q, Move m) { return Rhs::leaf(Target{q, m}); };
    for (int j = 0; j <= 2; ++j) {
        cn.delta[{"a", "d", j}] = leaf("d", {Move::ToChild, 2, {}});
        cn.delta[{"c", "d", j}] = leaf("u", {Move::ToParent, 0, {}});
    }
    cn.delta[{"a", "u", 0}] = Rhs::node("0");
    Rhs s = Rhs::node("S");
    s.kids.push_back(leaf("u", {Move::ToParent, 0, {}}));
    cn.delta[{"a", "u", 1}] = s;
    Rhs t = Rhs::node("T");
    t.kids.push_back(leaf("u", {Move::ToParent, 0, {}}));
    cn.delta[{"a", "u", 2}] = t;
    auto spec = adapt_child_numbers(cn);
    CHECK(twt_eval(spec, T("a(c,a(c,c))")) == T("T(0)"));
    CHECK(twt_eval(spec, T("a(c,a(c,a(c,c)))")) == T("T(T(0))"));
}
