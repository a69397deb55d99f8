#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lt/tree.hpp"

namespace lt {

// An element of Tree(Sigma, K): output letters with configuration leaves.
template <class K>
struct Gen {
    std::optional<K> conf;
    std::string label;
    std::vector<Gen> kids;

    static Gen leaf(K k) { return Gen{std::move(k), {}, {}}; }
    static Gen node(std::string l, std::vector<Gen> ks = {}) { return Gen{std::nullopt, std::move(l), std::move(ks)}; }
};

template <class K>
using StepFn = std::function<std::optional<Gen<K>>(const K&)>;

enum class Policy { Leftmost, Rightmost };

enum class Status { Output, Diverged, Stuck };

template <class K>
struct RunResult {
    Status status = Status::Output;
    Tree output;                  // valid when status == Output
    std::uint64_t steps = 0;
    std::optional<K> stuck_at;    // valid when status == Stuck
    std::vector<int> stuck_path;  // position of the stuck leaf in the frontier
};

// Called after each step with the step number (from 1), the fired configuration and its frontier position.
template <class K>
using Observer = std::function<void(std::uint64_t, const K&, const std::vector<int>&)>;

template <class K>
class Frontier {
public:
    struct Slot {
        std::string label;
        std::vector<int> kids;
        int parent = -1;
        int index = 0;  // 0-based child index in the parent
        std::optional<K> conf;
    };

    explicit Frontier(K init) { slots_.push_back(Slot{{}, {}, -1, 0, std::move(init)}); }

    const Slot& slot(int i) const { return slots_[i]; }

    std::vector<int> path(int i) const {
        std::vector<int> p;
        for (int cur = i; slots_[cur].parent >= 0; cur = slots_[cur].parent) p.push_back(slots_[cur].index);
        return {p.rbegin(), p.rend()};
    }

    // Replaces the configuration leaf at i by g; returns the new configuration leaves, left to right.
    std::vector<int> expand(int i, const Gen<K>& g) {
        std::vector<int> fresh;
        fill(i, g, fresh);
        return fresh;
    }

    Tree output(int i = 0) const {
        Tree t(slots_[i].label);
        for (int k : slots_[i].kids) t.kids.push_back(output(k));
        return t;
    }

    std::string render(const std::function<std::string(const K&)>& show, int i = 0) const {
        const Slot& s = slots_[i];
        if (s.conf) return show(*s.conf);
        std::string r = s.label;
        if (!s.kids.empty()) {
            r += "(";
            for (std::size_t k = 0; k < s.kids.size(); ++k) r += (k ? "," : "") + render(show, s.kids[k]);
            r += ")";
        }
        return r;
    }

private:
    void fill(int i, const Gen<K>& g, std::vector<int>& fresh) {
        slots_[i].conf = g.conf;
        slots_[i].label = g.label;
        slots_[i].kids.clear();
        if (g.conf) {
            fresh.push_back(i);
            return;
        }
        for (std::size_t k = 0; k < g.kids.size(); ++k) {
            int c = static_cast<int>(slots_.size());
            slots_.push_back(Slot{{}, {}, i, static_cast<int>(k), std::nullopt});
            slots_[i].kids.push_back(c);
            fill(c, g.kids[k], fresh);
        }
    }

    std::vector<Slot> slots_;
};

// Rewrites the selected configuration leaf until none remain.
template <class K>
RunResult<K> run(const StepFn<K>& step, const K& init, std::uint64_t fuel, Policy policy = Policy::Leftmost,
                 const Observer<K>& observer = {}, Frontier<K>* out_frontier = nullptr) {
    Frontier<K> local(init);
    Frontier<K>& f = out_frontier ? *out_frontier : local;
    if (out_frontier) f = Frontier<K>(init);
    std::vector<int> pending{0};  // top at the back
    RunResult<K> r;
    while (!pending.empty()) {
        if (r.steps == fuel) {
            r.status = Status::Diverged;
            return r;
        }
        int i = pending.back();
        pending.pop_back();
        K k = *f.slot(i).conf;
        std::optional<Gen<K>> img = step(k);
        if (!img) {
            r.status = Status::Stuck;
            r.stuck_at = k;
            r.stuck_path = f.path(i);
            return r;
        }
        ++r.steps;
        std::vector<int> path = observer ? f.path(i) : std::vector<int>{};
        std::vector<int> fresh = f.expand(i, *img);
        if (policy == Policy::Leftmost)
            pending.insert(pending.end(), fresh.rbegin(), fresh.rend());
        else
            pending.insert(pending.end(), fresh.begin(), fresh.end());
        if (observer) observer(r.steps, k, path);
    }
    r.output = f.output();
    return r;
}

struct TraceEntry {
    std::uint64_t step;
    std::string frontier;
    std::vector<int> fired;
};

// Records the frontier after every step.
template <class K>
std::pair<std::vector<TraceEntry>, RunResult<K>> trace(const StepFn<K>& step, const K& init, std::uint64_t fuel,
                                                        const std::function<std::string(const K&)>& show) {
    std::vector<TraceEntry> entries;
    Frontier<K> f(init);
    Frontier<K>* fp = &f;
    auto obs = [&](std::uint64_t n, const K&, const std::vector<int>& path) {
        entries.push_back(TraceEntry{n, fp->render(show), path});
    };
    RunResult<K> r = run<K>(step, init, fuel, Policy::Leftmost, obs, fp);
    return {entries, r};
}

std::string trace_json_line(const TraceEntry& e);

}  // namespace lt
