#include <catch2/catch_amalgamated.hpp>

#include "lt/treegen.hpp"

using namespace lt;

namespace {

struct SeqConf {
    bool spine;
    int m;
};

StepFn<SeqConf> seq_machine(int n) {
    return [n](const SeqConf& k) -> std::optional<Gen<SeqConf>> {
        using G = Gen<SeqConf>;
        if (k.spine) {
            if (k.m == 0) return G::node("nil");
            return G::node("cons", {G::leaf({false, n - (k.m - 1)}), G::leaf({true, k.m - 1})});
        }
        if (k.m == 0) return G::node("0");
        return G::node("S", {G::leaf({false, k.m - 1})});
    };
}

std::string show(const SeqConf& k) { return std::string(k.spine ? "<spine," : "<num,") + std::to_string(k.m) + ">"; }

}  // namespace

TEST_CASE("list machine produces [1,2,3]") {
    auto r = run<SeqConf>(seq_machine(3), {true, 3}, 1000);
    REQUIRE(r.status == Status::Output);
    REQUIRE(to_string(r.output) == "cons(S(0),cons(S(S(0)),cons(S(S(S(0))),nil)))");
    auto r0 = run<SeqConf>(seq_machine(0), {true, 0}, 1000);
    REQUIRE(r0.status == Status::Output);
    REQUIRE(r0.steps == 1);
    REQUIRE(to_string(r0.output) == "nil");
}

TEST_CASE("leaf policy does not change the output") {
    for (int n = 0; n <= 6; ++n) {
        auto l = run<SeqConf>(seq_machine(n), {true, n}, 10000, Policy::Leftmost);
        auto r = run<SeqConf>(seq_machine(n), {true, n}, 10000, Policy::Rightmost);
        REQUIRE(l.output == r.output);
        REQUIRE(l.steps == r.steps);
    }
}

TEST_CASE("self loop diverges and undefined steps are stuck") {
    StepFn<int> loop = [](const int& k) -> std::optional<Gen<int>> { return Gen<int>::leaf(k); };
    auto r = run<int>(loop, 0, 10);
    REQUIRE(r.status == Status::Diverged);
    REQUIRE(r.steps == 10);
    StepFn<int> none = [](const int&) -> std::optional<Gen<int>> { return std::nullopt; };
    auto s = run<int>(none, 7, 10);
    REQUIRE(s.status == Status::Stuck);
    REQUIRE(*s.stuck_at == 7);
}

TEST_CASE("trace records frontiers") {
    auto [entries, r] = trace<SeqConf>(seq_machine(3), {true, 3}, 1000, show);
    REQUIRE(entries.size() == r.steps);
    REQUIRE(entries[0].frontier == "cons(<num,1>,<spine,2>)");
    REQUIRE(entries[1].frontier == "cons(S(<num,0>),<spine,2>)");
    REQUIRE(entries[1].fired == std::vector<int>{0});
    REQUIRE(entries[2].frontier == "cons(S(0),<spine,2>)");
    REQUIRE(entries.back().frontier == to_string(r.output));
    REQUIRE(trace_json_line(entries[1]) == R"j({"step":2,"frontier":"cons(S(<num,0>),<spine,2>)","fired":[0]})j");
    auto [one, r1] = trace<SeqConf>(seq_machine(0), {true, 0}, 10, show);
    REQUIRE(one.size() == 1);
}
