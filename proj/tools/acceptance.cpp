// Acceptance checks: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lt/compile.hpp"
#include "lt/difftest.hpp"
#include "lt/gen.hpp"
#include "lt/iam.hpp"
#include "lt/transducer.hpp"
#include "lt/walking.hpp"

using namespace lt;

namespace {

// Pinned limits.
constexpr double kFuzzSeconds = 60.0;
constexpr int kFuzzInputs = 300;
constexpr int kEncodeTrees = 100;
constexpr std::size_t kEncodeBound = 30;
constexpr int kCastSamples = 10;
constexpr int kGlsInputs = 20;
constexpr int kWnTerms = 20;
constexpr unsigned kBisimMax = 4;
constexpr int kSeqMax = 6;

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

Tree binary(unsigned n, int bits) {
    Tree t("e");
    for (int i = 0; i < bits; ++i) t = Tree(((n >> i) & 1) ? "1" : "0", {t});
    return t;
}

// Collects the first failure of a criterion.
struct Check {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    template <class A, class B>
    void equal(const A& got, const B& want, const std::string& what) {
        if (!(got == want)) failures.push_back(what);
    }
};

// IAM runs recorded by the criteria, checked by criterion 4.
struct RecordedRun {
    std::string name;
    std::shared_ptr<FlatTerm> flat;
    Variant variant;
    std::vector<IamConfig> configs;
};
std::vector<RecordedRun> g_runs;

Tree recorded_iam(const std::string& name, const Term& program, Variant variant, std::uint64_t fuel = kDefaultFuel) {
    auto flat = std::make_shared<FlatTerm>(program);
    Variant v = select_variant(program, variant);
    std::vector<IamConfig> cs;
    auto r = run_iam(*flat, v, fuel, [&](std::uint64_t, const IamConfig& c, const std::vector<int>&) { cs.push_back(c); });
    if (r.status != Status::Output) fail(Err::FuelExhausted, name + ": IAM run did not produce an output");
    g_runs.push_back({name, flat, v, std::move(cs)});
    return r.output;
}

Tree recorded_eval_iam(const TransducerSpec& spec, const Tree& tau, Variant variant, const std::string& name) {
    return recorded_iam(name + " on " + to_string(tau), global_program(spec, tau).flat.source, variant);
}

std::vector<std::string> frontiers_twt(const TwtSpec& t, const Tree& tau) {
    IndexedTree it(tau);
    StepFn<TwtConfig> step = [&](const TwtConfig& c) { return twt_step(t, it, c); };
    auto [tr, r] = trace<TwtConfig>(step, twt_initial(t), 10000, [&](const TwtConfig& c) { return render(it, c); });
    std::vector<std::string> f{render(it, twt_initial(t))};
    for (auto& e : tr) f.push_back(e.frontier);
    return f;
}

Check c1_examples() {
    Check k;
    auto count = load_spec(kCorpus + "/count.lt");
    auto hand = load_twt(kCorpus + "/count.twt");
    auto ctwt = compile_to_twt(count);
    Tree tau = T("a(b(c),c)"), want = T("S(S(S(0)))");
    k.equal(eval_normalize(count, tau), want, "count via normalize");
    k.equal(recorded_eval_iam(count, tau, Variant::APA, "count"), want, "count via APAIAM");
    k.equal(twt_eval(ctwt, tau), want, "count via compiled TWT");
    k.equal(twt_eval(hand, tau), want, "count via hand-written TWT");

    auto seq = load_spec(kCorpus + "/seq-nat.lt");
    auto stwt = compile_to_twt(seq);
    for (int n = 0; n <= kSeqMax; ++n) {
        std::string at = " on S^" + std::to_string(n) + "(0)";
        k.equal(eval_normalize(seq, unary(n)), numeral_list(n), "seq-nat via normalize" + at);
        k.equal(recorded_eval_iam(seq, unary(n), Variant::APA, "seq-nat"), numeral_list(n), "seq-nat via APAIAM" + at);
        k.equal(twt_eval(stwt, unary(n)), numeral_list(n), "seq-nat via compiled TWT" + at);
    }

    auto bin = load_spec(kCorpus + "/bin2bin.lt");
    Tree b = T("0(0(1(0(e))))"), bw = T("a(a(c,c),a(c,c))");
    k.equal(eval_normalize(bin, b), bw, "bin2bin via normalize");
    k.equal(recorded_eval_iam(bin, b, Variant::Depth1, "bin2bin"), bw, "bin2bin via two-stack depth-1 IAM");
    k.equal(eval_iam(bin, b, Variant::Single), bw, "bin2bin via single-stack depth-1 IAM");
    k.equal(iptt_eval(compile_to_iptt(bin), b), bw, "bin2bin via compiled IPTT");
    return k;
}

Check c2_golden() {
    Check k;
    auto count = load_spec(kCorpus + "/count.lt");
    Tree tau = T("a(b(c),c)");
    GlobalProgram g = global_program(count, tau);
    StepFn<IamConfig> step = [&](const IamConfig& c) { return iam_step(g.flat, Variant::PA, c); };
    auto [tr, r] = trace<IamConfig>(step, IamConfig{}, 10000, [&](const IamConfig& c) { return render(g.flat, c); });
    std::vector<std::string> f{render(g.flat, IamConfig{})};
    for (auto& e : tr) f.push_back(e.frontier);
    const std::string ctx = R"(((\l. \r. \x. l (r x)) ((\f. \x. S (f x)) S) S))";
    std::vector<std::pair<int, std::string>> iam{
        {0, R"((>(\f. f 0) )" + ctx + R"(<, ""))"},
        {1, R"((>(\f. f 0)< )" + ctx + R"(, "p"))"},
        {2, R"(((\f. >f 0<) )" + ctx + R"(, ""))"},
        {3, R"(((\f. >f< 0) )" + ctx + R"(, "p"))"},
        {4, R"((<(\f. f 0)> )" + ctx + R"(, "op"))"},
        {5, R"(((\f. f 0) >)" + ctx + R"(<, "p"))"},
        {7, R"(((\f. f 0) (>(\l. \r. \x. l (r x))< ((\f. \x. S (f x)) S) S), "ppp"))"},
        {11, R"(((\f. f 0) ((\l. \r. \x. >l< (r x)) ((\f. \x. S (f x)) S) S), "p"))"},
        {12, R"(((\f. f 0) (<(\l. \r. \x. l (r x))> ((\f. \x. S (f x)) S) S), "op"))"},
        {14, R"(((\f. f 0) ((\l. \r. \x. l (r x)) (>(\f. \x. S (f x))< S) S), "pp"))"},
        {17, R"(((\f. f 0) ((\l. \r. \x. l (r x)) ((\f. \x. >S< (f x)) S) S), "p"))"},
        {18, R"(S(((\f. f 0) ((\l. \r. \x. l (r x)) ((\f. \x. <S> (f x)) S) S), "o")))"},
    };
    k.expect(r.status == Status::Output && r.output == T("S(S(S(0)))"), "IAM trace output");
    for (auto& [i, want] : iam)
        k.expect(static_cast<std::size_t>(i) < f.size() && f[i] == want, "IAM step " + std::to_string(i));

    auto tf = frontiers_twt(compile_to_twt(count), tau);
    std::vector<std::pair<int, std::string>> twt{
        {0, "(I, self, a1)"},
        {1, R"((U[down,">\f. f 0<","p"], self, a1))"},
        {4, R"((U[up,"<\f. f 0>","op"], self, a1))"},
        {5, R"((Nabla["p"], self, a1))"},
        {6, R"((T[down,">(\l. \r. \x. l (r x)) <>1< <>2","pp"], self, a1))"},
        {11, R"((T[down,"(\l. \r. \x. >l< (r x)) <>1 <>2","p"], self, a1))"},
        {12, R"((T[up,"<(\l. \r. \x. l (r x))> <>1 <>2","op"], self, a1))"},
        {13, R"((Nabla["p"], from-parent, b2))"},
        {14, R"((T[down,">(\f. \x. S (f x))< <>1","pp"], self, b2))"},
        {17, R"((T[down,"(\f. \x. >S< (f x)) <>1","p"], self, b2))"},
        {18, R"(S((T[up,"(\f. \x. <S> (f x)) <>1","o"], self, b2)))"},
        {37, R"(S(S((Nabla["p"], from-parent, c4))))"},
        {38, R"(S(S(S((Delta["o"], from-child 2, a1)))))"},
        {39, R"(S(S(S((T[down,">(\l. \r. \x. l (r x)) <>1< <>2","oo"], self, a1)))))"},
        {52, "S(S(S(0)))"},
    };
    for (auto& [i, want] : twt)
        k.expect(static_cast<std::size_t>(i) < tf.size() && tf[i] == want, "compiled TWT step " + std::to_string(i));
    k.equal(tf.size(), f.size(), "TWT and IAM runs have the same length");
    return k;
}

Check c3_encode() {
    Check k;
    Alphabet sigma{{"a", 2}, {"b", 1}, {"c", 0}};
    auto consts = const_types(sigma);
    RandomTreeGenerator gen(3, sigma, kEncodeBound);
    for (int i = 0; i < kEncodeTrees; ++i) {
        Tree tau = gen.next();
        Term ann = check_type({}, encode_tree(tau), base(), consts);
        k.equal(recorded_iam("encode " + to_string(tau), ann, Variant::PA), tau, "PAIAM on " + to_string(tau));
    }
    return k;
}

Check c4_invariants(std::string& detail) {
    Check k;
    std::size_t configs = 0;
    for (auto& run : g_runs) {
        auto rep = assert_invariants(*run.flat, run.configs, run.variant);
        configs += rep.checked;
        k.expect(rep.ok, run.name + ": " + rep.message);
    }
    detail = std::to_string(g_runs.size()) + " runs, " + std::to_string(configs) + " configurations";
    return k;
}

Check c5_reversibility() {
    Check k;
    auto ctwt = compile_to_twt(load_spec(kCorpus + "/count.lt"));
    k.expect(check_reversible(ctwt).reversible, "compiled count TWT is reversible");
    Tree tau = T("a(b(c),c)");
    IndexedTree it(tau);
    std::vector<TwtConfig> fired;
    twt_run(ctwt, tau, 10000, [&](std::uint64_t, const TwtConfig& c, const std::vector<int>&) { fired.push_back(c); });
    std::vector<TwtConfig> back{fired.back()};
    while (auto p = predecessor(ctwt, it, back.back())) back.push_back(*p);
    std::reverse(back.begin(), back.end());
    k.expect(back == fired, "backward walk reproduces the forward trace");
    auto seq = load_twt(kCorpus + "/seq-nat.twt");
    auto rep = check_reversible(seq);
    k.expect(!rep.reversible, "seq-nat TWT is not reversible");
    k.expect(rep.witness.rfind("(num, to-parent) occurs in", 0) == 0, "witness: " + rep.witness);
    return k;
}

Check c6_bisim() {
    Check k;
    auto bin = load_spec(kCorpus + "/bin2bin.lt");
    for (unsigned n = 0; n <= kBisimMax; ++n) {
        GlobalProgram g = global_program(bin, binary(n, 3));
        std::string at = " for n=" + std::to_string(n);
        std::vector<IamConfig> cs;
        auto a = run_iam(g.flat, Variant::Depth1, kDefaultFuel,
                         [&](std::uint64_t, const IamConfig& c, const std::vector<int>&) { cs.push_back(c); });
        auto b = run_single(g.flat);
        g_runs.push_back({"bin2bin n=" + std::to_string(n), std::make_shared<FlatTerm>(g.flat), Variant::Depth1, cs});
        k.expect(a.status == Status::Output && b.status == Status::Output, "both machines output" + at);
        k.equal(a.output, b.output, "outputs agree" + at);
        k.equal(a.steps, b.steps, "step counts agree" + at);
        k.equal(a.output.size(), (std::size_t{2} << n) - 1, "output size 2^(n+1)-1" + at);
    }
    return k;
}

Check c7_compose(std::string& detail) {
    Check k;
    auto seq = load_spec(kCorpus + "/seq-nat.lt");
    auto cnt = load_spec(kCorpus + "/count-list.lt");
    auto c = compose(seq, cnt);
    for (int n = 0; n <= kSeqMax; ++n) {
        Tree two = eval_normalize(cnt, eval_normalize(seq, unary(n)));
        k.equal(eval_normalize(c, unary(n)), two, "composition via normalize on S^" + std::to_string(n) + "(0)");
        k.equal(recorded_eval_iam(c, unary(n), Variant::Auto, "seq-nat;count-list"), two,
                "composition via IAM on S^" + std::to_string(n) + "(0)");
    }
    k.expect(c.tier <= Tier::AlmostDepth1, std::string("memory tier ") + tier_name(c.tier));
    detail = std::string("memory ") + to_string(c.memory) + ", " + tier_name(c.tier);
    return k;
}

Check c8_gls() {
    Check k;
    auto g = load_gls(kCorpus + "/gls-mirror.gls");
    auto conv = conversions(g);
    auto consts = const_types(g.output);
    Rng rng(8);
    for (auto& [q, ty] : g.state_types) {
        for (int i = 0; i < kCastSamples; ++i) {
            Term t = gen_affine_normal(rng, ty, g.output, 6);
            check_type({}, t, ty, consts);
            Term back = normalize(mk_app(conv.cast.at(q), mk_app(conv.iota.at(q), t)));
            k.expect(alpha_equal(back, eta_long(t, ty, consts)), "cast after iota at " + q + " on " + to_string(t));
        }
    }
    auto tc = make_type_constant(g);
    auto rel = split_state_relabeling(tc);
    RandomTreeGenerator gen(8, g.input, 15);
    for (int i = 0; i < kGlsInputs; ++i) {
        Tree tau = gen.next();
        Tree want = gls_run(g, tau);
        k.equal(gls_run(tc, tau), want, "type constant on " + to_string(tau));
        k.equal(eval_normalize(rel.transducer, rel.relabel(tau)), want, "relabeling on " + to_string(tau));
    }
    return k;
}

Check c9_wn() {
    Check k;
    auto count = load_spec(kCorpus + "/count.lt");
    Alphabet sigma = count.output;
    auto consts = const_types(sigma);
    Rng rng(9);
    RandomTreeGenerator trees(9, count.input, 5);
    std::vector<Term> pieces;
    for (int i = 0; i < 4; ++i) pieces.push_back(program_term(count, trees.next()));
    for (int i = 0; i < kWnTerms; ++i) {
        Term t = gen_almost_affine(rng, sigma, pieces, 8);
        Term ann = check_almost_affine({}, t, base(), consts);
        Term w = wn_translate(ann, sigma);
        check_type({}, w, bang(base()), consts);
        Tree tt = decode_tree(normalize(t), &sigma);
        k.expect(alpha_equal(normalize(w), mk_box(encode_tree(tt))), "?t on " + to_string(t));
    }
    return k;
}

Check c10_fuzz(std::string& detail) {
    Check k;
    struct Plan {
        const char* file;
        int cases;
        std::size_t max_size;
    };
    // bin2bin outputs grow doubly exponentially in the input size, so its inputs stay small
    std::vector<Plan> plans{{"count.lt", 80, 12}, {"seq-nat.lt", 80, 12}, {"count-list.lt", 80, 12}, {"bin2bin.lt", 60, 4}};
    auto t0 = std::chrono::steady_clock::now();
    int total = 0, agreed = 0;
    for (auto& p : plans) {
        DiffOptions o;
        o.seed = 10;
        o.cases = p.cases;
        o.max_size = p.max_size;
        auto r = difftest(load_spec(kCorpus + "/" + p.file), o);
        total += r.cases;
        agreed += r.agreed;
        for (auto& m : r.mismatches) k.failures.push_back(std::string(p.file) + " " + m.report);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    k.equal(total, kFuzzInputs, "input count");
    k.expect(secs < kFuzzSeconds, "wall time " + std::to_string(secs) + " s");
    std::ostringstream o;
    o << agreed << "/" << total << " agree in " << secs << " s";
    detail = o.str();
    return k;
}

}  // namespace

int main() {
    int failed = 0;
    std::map<int, std::string> lines;  // printed in criterion order
    auto report = [&](int n, const std::string& title, const std::function<Check(std::string&)>& f) {
        std::string detail;
        Check k;
        try {
            k = f(detail);
        } catch (const std::exception& e) {
            k.failures.push_back(std::string("exception: ") + e.what());
        }
        bool ok = k.failures.empty();
        failed += !ok;
        std::ostringstream o;
        o << (ok ? "PASS" : "FAIL") << " " << n << " " << title;
        if (!detail.empty()) o << " (" << detail << ")";
        o << "\n";
        for (std::size_t i = 0; i < k.failures.size() && i < 5; ++i) o << "    " << k.failures[i] << "\n";
        lines[n] = o.str();
    };
    auto plain = [](Check (*f)()) { return [f](std::string&) { return f(); }; };
    report(1, "example reproduction", plain(c1_examples));
    report(2, "golden traces", plain(c2_golden));
    report(3, "PAIAM reads back encoded trees", plain(c3_encode));
    report(5, "reversibility", plain(c5_reversibility));
    report(6, "depth-1 bisimulation", plain(c6_bisim));
    report(7, "composition", c7_compose);
    report(8, "type constants and relabeling", plain(c8_gls));
    report(9, "wn translation", plain(c9_wn));
    report(10, "differential fuzz", c10_fuzz);
    // last, so that it sees the runs recorded by the other criteria
    report(4, "IAM invariants", c4_invariants);
    for (auto& [n, l] : lines) std::cout << l;
    return failed == 0 ? 0 : 1;
}
