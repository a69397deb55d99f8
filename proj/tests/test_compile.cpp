#include <catch2/catch_amalgamated.hpp>

#include "lt/compile.hpp"

using namespace lt;

namespace {

const std::string kCorpus = LT_CORPUS_DIR;

Tree T(const char* s) { return parse_tree(s); }

Tree unary(int n) {
    Tree t("0");
    for (int i = 0; i < n; ++i) t = Tree("S", {t});
    return t;
}

Tree binary(unsigned n, int bits) {
    Tree t("e");
    for (int i = 0; i < bits; ++i) t = Tree(((n >> i) & 1) ? "1" : "0", {t});
    return t;
}

Tree full(int h) { return h == 0 ? Tree("c") : Tree("a", {full(h - 1), full(h - 1)}); }

// Visited input nodes with consecutive repeats removed.
std::vector<int> visits(const std::vector<int>& nodes) {
    std::vector<int> r;
    for (int v : nodes)
        if (r.empty() || r.back() != v) r.push_back(v);
    return r;
}

}  // namespace

TEST_CASE("compiled TWT simulates the IAM step by step") {
    auto spec = load_spec(kCorpus + "/count.lt");
    auto twt = compile_to_twt(spec);
    SimContext ctx(spec);
    for (const char* s : {"a(b(c),c)", "c", "b(a(c,b(c)))", "a(a(c,c),b(a(c,c)))"}) {
        Tree tau = T(s);
        GlobalProgram g = global_program(spec, tau);
        std::vector<TwtConfig> mapped, fired;
        run_iam(g.flat, Variant::APA, 100000,
                [&](std::uint64_t, const IamConfig& c, const std::vector<int>&) { mapped.push_back(sim_map(ctx, g, c)); });
        auto r = twt_run(twt, tau, 100000,
                         [&](std::uint64_t, const TwtConfig& c, const std::vector<int>&) { fired.push_back(c); });
        REQUIRE(r.status == Status::Output);
        CHECK(r.output == eval_normalize(spec, tau));
        REQUIRE(mapped.size() == fired.size());
        for (std::size_t i = 0; i < fired.size(); ++i) {
            INFO(s << " step " << i + 1);
            CHECK(mapped[i] == fired[i]);
        }
    }
}

TEST_CASE("compiled count TWT visits the nodes of the hand-written one") {
    auto spec = load_spec(kCorpus + "/count.lt");
    auto twt = compile_to_twt(spec);
    auto hand = load_twt(kCorpus + "/count.twt");
    for (const char* s : {"a(b(c),c)", "b(a(c,b(c)))", "c"}) {
        Tree tau = T(s);
        std::vector<int> a, b;
        twt_run(twt, tau, 100000, [&](std::uint64_t, const TwtConfig& c, const std::vector<int>&) { a.push_back(c.node); });
        twt_run(hand, tau, 100000, [&](std::uint64_t, const TwtConfig& c, const std::vector<int>&) { b.push_back(c.node); });
        INFO(s);
        CHECK(visits(a) == visits(b));
        CHECK(twt_eval(twt, tau) == twt_eval(hand, tau));
    }
}

TEST_CASE("compiled TWT reversibility") {
    auto count = compile_to_twt(load_spec(kCorpus + "/count.lt"));
    CHECK(check_reversible(count).reversible);
    auto seq = compile_to_twt(load_spec(kCorpus + "/seq-nat.lt"));
    CHECK_FALSE(check_reversible(seq).reversible);
}

TEST_CASE("compiled seq-nat TWT agrees with normalization") {
    auto spec = load_spec(kCorpus + "/seq-nat.lt");
    auto twt = compile_to_twt(spec);
    for (int n = 0; n <= 6; ++n) CHECK(twt_eval(twt, unary(n)) == eval_normalize(spec, unary(n)));
    auto again = parse_twt(to_text(twt));
    CHECK(to_text(again) == to_text(twt));
}

TEST_CASE("compiled count-list TWT agrees with normalization") {
    auto spec = load_spec(kCorpus + "/count-list.lt");
    auto twt = compile_to_twt(spec);
    for (const char* s : {"cons(S(0),cons(0,nil))", "nil", "cons(S(S(0)),nil)"}) CHECK(twt_eval(twt, T(s)) == eval_normalize(spec, T(s)));
}

TEST_CASE("state names") {
    auto spec = load_spec(kCorpus + "/count.lt");
    SimContext ctx(spec);
    CHECK(ctx.name(SimState{}) == "I");
    CHECK(ctx.name(SimState{SimState::Nabla, false, "", -1, "pp", -1}) == "Nabla[\"pp\"]");
    CHECK(ctx.name(SimState{SimState::Delta, true, "", -1, "o", 1}) == "Delta[\"o\",a1]");
    auto twt = compile_to_twt(spec);
    CHECK(twt.initial == "I");
}

TEST_CASE("compiled bin2bin IPTT") {
    auto spec = load_spec(kCorpus + "/bin2bin.lt");
    auto iptt = compile_to_iptt(spec);
    CHECK_FALSE(iptt.colors.empty());
    CHECK(iptt_eval(iptt, T("0(0(1(0(e))))")) == T("a(a(c,c),a(c,c))"));
    for (unsigned n = 0; n <= 4; ++n) {
        Tree out = iptt_eval(iptt, binary(n, 3));
        CHECK(out == full(static_cast<int>(n)));
        CHECK(out.size() == (std::size_t{2} << n) - 1);
    }
    auto again = parse_iptt(to_text(iptt));
    CHECK(to_text(again) == to_text(iptt));
}

TEST_CASE("compiled IPTT simulates the single-stack IAM") {
    auto spec = load_spec(kCorpus + "/bin2bin.lt");
    auto iptt = compile_to_iptt(spec);
    SimContext ctx(spec);
    for (unsigned n = 0; n <= 3; ++n) {
        Tree tau = binary(n, 2);
        GlobalProgram g = global_program(spec, tau);
        std::vector<IpttConfig> mapped, fired;
        run_single(g.flat, 1000000,
                   [&](std::uint64_t, const SsConfig& c, const std::vector<int>&) { mapped.push_back(sim_map(ctx, g, c)); });
        auto r = iptt_run(iptt, tau, 1000000,
                          [&](std::uint64_t, const IpttConfig& c, const std::vector<int>&) { fired.push_back(c); });
        REQUIRE(r.status == Status::Output);
        REQUIRE(mapped.size() == fired.size());
        for (std::size_t i = 0; i < fired.size(); ++i) {
            INFO("n=" << n << " step " << i + 1);
            CHECK(mapped[i] == fired[i]);
        }
    }
}

TEST_CASE("compilation refuses transducers above its class") {
    auto bin = load_spec(kCorpus + "/bin2bin.lt");
    CHECK_THROWS_MATCHES(compile_to_twt(bin), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code == Err::ClassificationTooHigh;
                         }));
    auto count = load_spec(kCorpus + "/count.lt");
    CHECK_NOTHROW(compile_to_iptt(count));
}

TEST_CASE("compiled count TWT golden trace") {
    auto twt = compile_to_twt(load_spec(kCorpus + "/count.lt"));
    Tree tau = T("a(b(c),c)");
    IndexedTree it(tau);
    StepFn<TwtConfig> step = [&](const TwtConfig& c) { return twt_step(twt, it, c); };
    auto [tr, r] = trace<TwtConfig>(step, twt_initial(twt), 1000, [&](const TwtConfig& c) { return render(it, c); });
    REQUIRE(r.status == Status::Output);
    REQUIRE(tr.size() == 52);
    std::vector<std::string> f{render(it, twt_initial(twt))};
    for (auto& e : tr) f.push_back(e.frontier);
    CHECK(f[0] == "(I, self, a1)");
    CHECK(f[1] == R"((U[down,">\f. f 0<","p"], self, a1))");
    CHECK(f[4] == R"((U[up,"<\f. f 0>","op"], self, a1))");
    CHECK(f[5] == R"((Nabla["p"], self, a1))");
    CHECK(f[6] == R"((T[down,">(\l. \r. \x. l (r x)) <>1< <>2","pp"], self, a1))");
    CHECK(f[11] == R"((T[down,"(\l. \r. \x. >l< (r x)) <>1 <>2","p"], self, a1))");
    CHECK(f[12] == R"((T[up,"<(\l. \r. \x. l (r x))> <>1 <>2","op"], self, a1))");
    CHECK(f[13] == R"((Nabla["p"], from-parent, b2))");
    CHECK(f[14] == R"((T[down,">(\f. \x. S (f x))< <>1","pp"], self, b2))");
    CHECK(f[17] == R"((T[down,"(\f. \x. >S< (f x)) <>1","p"], self, b2))");
    CHECK(f[18] == R"(S((T[up,"(\f. \x. <S> (f x)) <>1","o"], self, b2)))");
    CHECK(f[37] == R"(S(S((Nabla["p"], from-parent, c4))))");
    CHECK(f[38] == R"(S(S(S((Delta["o"], from-child 2, a1)))))");
    CHECK(f[39] == R"(S(S(S((T[down,">(\l. \r. \x. l (r x)) <>1< <>2","oo"], self, a1)))))");
    CHECK(f[52] == "S(S(S(0)))");
}

TEST_CASE("compiled depth-1 pipeline admits lower tiers") {
    auto spec = load_spec(kCorpus + "/seq-nat.lt");
    auto iptt = compile_to_iptt(spec);
    for (int n = 0; n <= 6; ++n) CHECK(iptt_eval(iptt, unary(n)) == eval_normalize(spec, unary(n)));
    auto count = load_spec(kCorpus + "/count.lt");
    auto ic = compile_to_iptt(count);
    CHECK(iptt_eval(ic, T("a(b(c),c)")) == T("S(S(S(0)))"));
}
