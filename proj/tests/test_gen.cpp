#include <catch2/catch_amalgamated.hpp>

#include "lt/difftest.hpp"
#include "lt/gen.hpp"

using namespace lt;

namespace {

const std::string kCorpus = LT_CORPUS_DIR;
const Alphabet kAbc{{"a", 2}, {"b", 1}, {"c", 0}};

}  // namespace

TEST_CASE("random trees") {
    RandomTreeGenerator one(1, Alphabet{{"c", 0}}, 1);
    CHECK(one.next() == Tree("c"));
    RandomTreeGenerator g(5, kAbc, 20), h(5, kAbc, 20);
    bool big = false;
    for (int i = 0; i < 200; ++i) {
        Tree t = g.next();
        CHECK(t == h.next());
        CHECK(t.size() <= 20);
        CHECK_NOTHROW(validate(t, kAbc));
        big = big || t.size() > 10;
    }
    CHECK(big);
    CHECK_THROWS_AS(RandomTreeGenerator(1, Alphabet{{"b", 1}}, 5), Error);
}

TEST_CASE("random affine normal terms typecheck") {
    Rng rng(11);
    auto consts = const_types(kAbc);
    for (const char* ty : {"o", "o -o o", "(o -o o) -o o", "o -o (o -o o) -o o"}) {
        Type a = parse_type(ty);
        for (int i = 0; i < 20; ++i) {
            Term t = gen_affine_normal(rng, a, kAbc, 8);
            INFO(to_string(t));
            CHECK_NOTHROW(check_type({}, t, a, consts));
            CHECK(alpha_equal(normalize(t), t));
        }
    }
}

TEST_CASE("random almost affine terms typecheck") {
    Rng rng(3);
    auto consts = const_types(kAbc);
    for (int i = 0; i < 30; ++i) {
        Term t = gen_almost_affine(rng, kAbc, {}, 10);
        INFO(to_string(t));
        CHECK_NOTHROW(check_almost_affine({}, t, base(), consts));
    }
}

TEST_CASE("difftest on the corpus") {
    DiffOptions o;
    o.cases = 50;
    for (const char* f : {"count.lt", "seq-nat.lt", "count-list.lt"}) {
        auto r = difftest(load_spec(kCorpus + "/" + f), o);
        INFO(f << (r.mismatches.empty() ? "" : r.mismatches.front().report));
        CHECK(r.agreed == r.cases);
    }
    o.max_size = 4;
    auto r = difftest(load_spec(kCorpus + "/bin2bin.lt"), o);
    CHECK(r.backends == std::vector<std::string>{"normalize", "iam", "iam-single", "iptt"});
    CHECK(r.agreed == r.cases);
}

TEST_CASE("difftest reports a mismatch") {
    // too little fuel makes every backend fail
    auto spec = load_spec(kCorpus + "/count.lt");
    DiffCase c = diff_one(spec, Tree("a", {Tree("c"), Tree("c")}), 5);
    CHECK_FALSE(c.agree);
    CHECK(c.report.find("input a(c,c)") != std::string::npos);
    CHECK(c.report.find("error: ") != std::string::npos);
}
