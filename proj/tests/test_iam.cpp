#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "lt/gen.hpp"
#include "lt/iam.hpp"
#include "lt/transducer.hpp"

using namespace lt;

namespace {

const std::string kCorpus = LT_CORPUS_DIR;
const std::string kGolden = LT_GOLDEN_DIR;

Tree T(const char* s) { return parse_tree(s); }

Tree binary(unsigned n, int bits) {
    Tree t("e");
    for (int i = 0; i < bits; ++i) t = Tree(((n >> i) & 1) ? "1" : "0", {t});
    return t;
}

Tree unary(int n) {
    Tree t("0");
    for (int i = 0; i < n; ++i) t = Tree("S", {t});
    return t;
}

// Every configuration of an output run fires exactly once.
std::vector<IamConfig> record(const FlatTerm& v, Variant variant, RunResult<IamConfig>& r) {
    std::vector<IamConfig> cs;
    r = run_iam(v, variant, 10000000, [&](std::uint64_t, const IamConfig& c, const std::vector<int>&) { cs.push_back(c); });
    return cs;
}

}  // namespace

TEST_CASE("count IAM golden trace") {
    auto spec = load_spec(kCorpus + "/count.lt");
    GlobalProgram g = global_program(spec, T("a(b(c),c)"));
    StepFn<IamConfig> step = [&](const IamConfig& c) { return iam_step(g.flat, Variant::PA, c); };
    auto [tr, r] = trace<IamConfig>(step, IamConfig{}, 1000, [&](const IamConfig& c) { return render(g.flat, c); });
    REQUIRE(r.status == Status::Output);
    CHECK(r.output == T("S(S(S(0)))"));
    REQUIRE(tr.size() == 52);
    std::vector<std::string> f{render(g.flat, IamConfig{})};
    for (auto& e : tr) f.push_back(e.frontier);
    const std::string ctx = "((\\l. \\r. \\x. l (r x)) ((\\f. \\x. S (f x)) S) S)";
    CHECK(f[0] == "(>(\\f. f 0) " + ctx + "<, \"\")");
    CHECK(f[1] == "(>(\\f. f 0)< " + ctx + ", \"p\")");
    CHECK(f[2] == "((\\f. >f 0<) " + ctx + ", \"\")");
    CHECK(f[3] == "((\\f. >f< 0) " + ctx + ", \"p\")");
    CHECK(f[4] == "(<(\\f. f 0)> " + ctx + ", \"op\")");
    CHECK(f[5] == "((\\f. f 0) >" + ctx + "<, \"p\")");
    CHECK(f[7] == R"(((\f. f 0) (>(\l. \r. \x. l (r x))< ((\f. \x. S (f x)) S) S), "ppp"))");
    CHECK(f[11] == R"(((\f. f 0) ((\l. \r. \x. >l< (r x)) ((\f. \x. S (f x)) S) S), "p"))");
    CHECK(f[12] == R"(((\f. f 0) (<(\l. \r. \x. l (r x))> ((\f. \x. S (f x)) S) S), "op"))");
    CHECK(f[14] == R"(((\f. f 0) ((\l. \r. \x. l (r x)) (>(\f. \x. S (f x))< S) S), "pp"))");
    CHECK(f[17] == R"(((\f. f 0) ((\l. \r. \x. l (r x)) ((\f. \x. >S< (f x)) S) S), "p"))");
    CHECK(f[18] == R"(S(((\f. f 0) ((\l. \r. \x. l (r x)) ((\f. \x. <S> (f x)) S) S), "o")))");
    CHECK(f[52] == "S(S(S(0)))");

    std::ostringstream lines;
    for (auto& e : tr) lines << trace_json_line(e) << "\n";
    std::ifstream in(kGolden + "/count_iam.jsonl", std::ios::binary);
    std::stringstream golden;
    golden << in.rdbuf();
    CHECK(lines.str() == golden.str());
}

TEST_CASE("PAIAM reads back encoded trees") {
    Alphabet sigma{{"a", 2}, {"b", 1}, {"c", 0}};
    auto consts = const_types(sigma);
    RandomTreeGenerator gen(7, sigma, 30);
    for (int i = 0; i < 100; ++i) {
        Tree tau = gen.next();
        Term ann = check_type({}, encode_tree(tau), base(), consts);
        INFO(to_string(tau));
        CHECK(iam_run(ann, Variant::PA) == tau);
    }
}

TEST_CASE("IAM invariants hold on corpus runs") {
    struct Case {
        const char* file;
        std::vector<Tree> inputs;
        Variant variant;
    };
    std::vector<Case> cases{
        {"count.lt", {T("a(b(c),c)"), T("b(a(c,a(c,c)))"), T("c")}, Variant::PA},
        {"count.lt", {T("a(b(c),c)")}, Variant::APA},
        {"seq-nat.lt", {unary(0), unary(3), unary(5)}, Variant::APA},
        {"count-list.lt", {T("cons(S(0),cons(0,nil))")}, Variant::APA},
        {"bin2bin.lt", {binary(2, 3), binary(3, 2)}, Variant::Depth1},
    };
    for (auto& c : cases) {
        auto spec = load_spec(kCorpus + "/" + c.file);
        for (auto& tau : c.inputs) {
            GlobalProgram g = global_program(spec, tau);
            RunResult<IamConfig> r;
            auto configs = record(g.flat, c.variant, r);
            REQUIRE(r.status == Status::Output);
            auto rep = assert_invariants(g.flat, configs, c.variant);
            INFO(c.file << " on " << to_string(tau) << ": " << rep.message);
            CHECK(rep.ok);
            CHECK(rep.checked == configs.size());
        }
    }
}

TEST_CASE("two-stack and single-stack depth-1 machines agree") {
    auto spec = load_spec(kCorpus + "/bin2bin.lt");
    for (unsigned n = 0; n <= 4; ++n) {
        Tree tau = binary(n, 3);
        GlobalProgram g = global_program(spec, tau);
        std::vector<SsConfig> two, one;
        auto a = run_iam(g.flat, Variant::Depth1, 10000000,
                         [&](std::uint64_t, const IamConfig& c, const std::vector<int>&) { two.push_back(abstract_config(c)); });
        auto b = run_single(g.flat, 10000000,
                            [&](std::uint64_t, const SsConfig& c, const std::vector<int>&) { one.push_back(c); });
        REQUIRE(a.status == Status::Output);
        REQUIRE(b.status == Status::Output);
        CHECK(a.output == b.output);
        CHECK(a.steps == b.steps);
        CHECK(a.output.size() == (std::size_t{2} << n) - 1);
        REQUIRE(two.size() == one.size());
        std::size_t same = 0;
        for (std::size_t i = 0; i < one.size(); ++i) same += same_config(two[i], one[i]);
        CHECK(same == one.size());
    }
}

TEST_CASE("bin2bin on the worked input") {
    auto spec = load_spec(kCorpus + "/bin2bin.lt");
    Tree tau = T("0(0(1(0(e))))");
    CHECK(eval_iam(spec, tau, Variant::Depth1) == T("a(a(c,c),a(c,c))"));
    CHECK(eval_iam(spec, tau, Variant::Single) == T("a(a(c,c),a(c,c))"));
}

TEST_CASE("variant selection") {
    auto seq = load_spec(kCorpus + "/seq-nat.lt");
    Term prog = global_program(seq, unary(2)).flat.source;
    CHECK(select_variant(prog, Variant::Auto) == Variant::APA);
    CHECK_THROWS_AS(select_variant(prog, Variant::PA), Error);
    auto bin = load_spec(kCorpus + "/bin2bin.lt");
    Term bp = global_program(bin, binary(1, 1)).flat.source;
    CHECK(select_variant(bp, Variant::Auto) == Variant::Depth1);
    CHECK_THROWS_AS(select_variant(bp, Variant::APA), Error);
    CHECK(parse_variant("single") == Variant::Single);
    CHECK_THROWS_AS(parse_variant("nope"), Error);
}
