#include "lt/compile.hpp"

#include <deque>
#include <set>

namespace lt {

SimContext::SimContext(const TransducerSpec& spec) : spec_(&spec), u_(spec.out) {
    for (auto& a : spec.input.letters()) {
        Term sk = skeleton_term(spec, a);
        std::string text = to_string(sk);
        skeleton_text_[a] = text;
        if (!by_text_.count(text)) by_text_.emplace(text, FlatTerm(sk));
    }
}

const FlatTerm& SimContext::skeleton(const std::string& letter) const { return by_text_.at(skeleton_text_.at(letter)); }

std::string SimContext::name(const SimState& s) const {
    std::string ans = s.answer >= 0 ? ",a" + std::to_string(s.answer) : "";
    std::string tape = "\"" + s.tape + "\"";
    std::string dir = s.up ? "up" : "down";
    switch (s.kind) {
        case SimState::I: return "I";
        case SimState::U: return "U[" + dir + ",\"" + u_.render(s.node, s.up) + "\"," + tape + ans + "]";
        case SimState::T:
            return "T[" + dir + ",\"" + by_text_.at(s.skeleton).render(s.node, s.up) + "\"," + tape + ans + "]";
        case SimState::Nabla: return "Nabla[" + tape + ans + "]";
        case SimState::Delta: return "Delta[" + tape + ans + "]";
    }
    return "?";
}

std::string SimContext::color(const std::string& ctx, int occ, int n) const {
    const FlatTerm& f = ctx == "u" ? u_ : by_text_.at(ctx);
    return "P[\"" + f.render(occ, false) + "\"," + std::to_string(n) + "]";
}

namespace {

struct Placed {
    std::string state;
    Prov prov;
    int node;
};

Placed place(const SimContext& ctx, const GlobalProgram& g, bool up, int node, const std::string& tape, int answer) {
    const Origin& o = g.origin[node];
    switch (o.kind) {
        case Origin::Top:
            if (up) fail(Err::Unreachable, "upward configuration on the whole program");
            return {"I", {Prov::Self, 0}, 0};
        case Origin::U:
            return {ctx.name(SimState{SimState::U, up, "", o.local, tape, answer}), {Prov::Self, 0}, 0};
        case Origin::Block: break;
    }
    int v = o.tree_node;
    const auto& tn = g.tree.nodes[v];
    if (o.local != 0)
        return {ctx.name(SimState{SimState::T, up, ctx.skeleton_text(tn.label), o.local, tape, answer}), {Prov::Self, 0}, v};
    if (!up)
        return {ctx.name(SimState{SimState::Nabla, false, "", -1, tape, answer}),
                {v == 0 ? Prov::Self : Prov::FromParent, 0}, v};
    std::string d = ctx.name(SimState{SimState::Delta, true, "", -1, tape, answer});
    if (v == 0) return {d, {Prov::Self, 0}, 0};
    return {d, {Prov::FromChild, tn.index_in_parent}, tn.parent};
}

void flatten(const SimContext& ctx, const GlobalProgram& g, const LoggedPtr& l,
             std::vector<std::pair<std::string, int>>& out) {
    for (auto it = l->log.rbegin(); it != l->log.rend(); ++it) flatten(ctx, g, *it, out);
    const Origin& o = g.origin[l->occ];
    if (o.kind == Origin::U) {
        out.emplace_back(ctx.color("u", o.local, static_cast<int>(l->log.size())), 0);
    } else if (o.kind == Origin::Block) {
        out.emplace_back(ctx.color(ctx.skeleton_text(g.tree.nodes[o.tree_node].label), o.local,
                                   static_cast<int>(l->log.size())),
                         o.tree_node);
    } else {
        fail(Err::Unreachable, "logged position outside u and the blocks");
    }
}

}  // namespace

TwtConfig sim_map(const SimContext& ctx, const GlobalProgram& g, const IamConfig& c) {
    Placed p = place(ctx, g, c.up, c.node, c.mult(), -1);
    return TwtConfig{p.state, p.prov, p.node};
}

IpttConfig sim_map(const SimContext& ctx, const GlobalProgram& g, const SsConfig& c) {
    Placed p = place(ctx, g, c.up, c.node, c.mult, c.answer);
    IpttConfig r{p.state, p.prov, p.node, {}};
    for (auto& l : c.exp) flatten(ctx, g, l, r.pebbles);
    return r;
}

namespace {

struct LocalCfg {
    bool up = false;
    int node = 0;
    std::string tape;
    int answer = -1;
};

struct LocalRes {
    LocalCfg cfg;
    Move move;  // Stay, Put or Remove
};

struct ColorInfo {
    std::string ctx;
    int occ;
    int n;
};

// Rule synthesis by running one IAM step on the local representative configuration.
class Synth {
public:
    Synth(const TransducerSpec& spec, bool single) : ctx_(spec), spec_(spec), single_(single) {
        if (single_) collect_colors();
    }

    const SimContext& ctx() const { return ctx_; }
    const std::map<std::string, ColorInfo>& colors() const { return colors_; }

    std::string intern(const SimState& s) {
        std::string n = ctx_.name(s);
        if (states_.emplace(n, s).second) order_.push_back(n);
        return n;
    }
    const std::vector<std::string>& state_order() const { return order_; }
    const SimState& state(const std::string& n) const { return states_.at(n); }

    // Image of (letter, state, prov, root) given the visible pebble, or nullopt when undefined.
    std::optional<Rhs> rule(const std::string& a, const SimState& q, const Prov& p, bool root,
                            const std::optional<std::string>& z) {
        try {
            return rule_unsafe(a, q, p, root, z);
        } catch (const Error&) {
            return std::nullopt;  // configurations the typing invariants exclude
        }
    }

private:
    std::optional<Rhs> rule_unsafe(const std::string& a, const SimState& q, const Prov& p, bool root,
                                   const std::optional<std::string>& z) {
        bool self = p.kind == Prov::Self;
        switch (q.kind) {
            case SimState::I:
                if (!self || !root || z) return std::nullopt;
                return leaf(SimState{SimState::U, false, "", 0, "p", ans(0)}, Move{});
            case SimState::U: {
                if (!self || !root) return std::nullopt;
                if (q.up && q.node == 0) {
                    // leaving u upwards enters its argument, the block at the root
                    if (z || q.tape.empty() || q.tape[0] != 'o') return std::nullopt;
                    return leaf(SimState{SimState::Nabla, false, "", -1, q.tape.substr(1), q.answer}, Move{});
                }
                auto g = local_step(ctx_.u(), "u", LocalCfg{q.up, q.node, q.tape, q.answer}, z);
                if (!g) return std::nullopt;
                return map_leaves(*g, [&](const LocalRes& r) -> std::optional<Target> {
                    return Target{intern(SimState{SimState::U, r.cfg.up, "", r.cfg.node, r.cfg.tape, r.cfg.answer}), r.move};
                });
            }
            case SimState::Nabla:
                if (!(self ? root : p.kind == Prov::FromParent)) return std::nullopt;
                return in_block(a, LocalCfg{false, 0, q.tape, q.answer}, root, z);
            case SimState::Delta: {
                if (self) {
                    if (!root || z) return std::nullopt;
                    // the argument of u going up re-enters u with a circle
                    return leaf(SimState{SimState::U, false, "", 0, "o" + q.tape, q.answer}, Move{});
                }
                if (p.kind != Prov::FromChild) return std::nullopt;
                const FlatTerm& sk = ctx_.skeleton(a);
                for (int i = 0; i < sk.size(); ++i)
                    if (sk[i].placeholder == p.child) return in_block(a, LocalCfg{true, i, q.tape, q.answer}, root, z);
                return std::nullopt;
            }
            case SimState::T:
                if (!self || ctx_.skeleton_text(a) != q.skeleton) return std::nullopt;
                return in_block(a, LocalCfg{q.up, q.node, q.tape, q.answer}, root, z);
        }
        return std::nullopt;
    }

    int ans(int v) const { return single_ ? v : -1; }

    std::optional<Rhs> leaf(const SimState& s, Move m) {
        if (static_cast<int>(s.tape.size()) > spec_.height) return std::nullopt;
        return Rhs::leaf(Target{intern(s), m});
    }

    std::optional<Rhs> in_block(const std::string& a, const LocalCfg& c, bool root, const std::optional<std::string>& z) {
        const FlatTerm& sk = ctx_.skeleton(a);
        auto g = local_step(sk, ctx_.skeleton_text(a), c, z);
        if (!g) return std::nullopt;
        return map_leaves(*g, [&](const LocalRes& r) -> std::optional<Target> {
            const LocalCfg& k = r.cfg;
            if (int ph = sk[k.node].placeholder) {
                if (k.up || r.move.kind != Move::Stay) return std::nullopt;
                return Target{intern(SimState{SimState::Nabla, false, "", -1, k.tape, k.answer}), Move{Move::ToChild, ph, {}}};
            }
            if (k.node == 0) {
                if (!k.up || r.move.kind != Move::Stay) return std::nullopt;
                return Target{intern(SimState{SimState::Delta, true, "", -1, k.tape, k.answer}),
                              Move{root ? Move::Stay : Move::ToParent, 0, {}}};
            }
            return Target{intern(SimState{SimState::T, k.up, ctx_.skeleton_text(a), k.node, k.tape, k.answer}), r.move};
        });
    }

    template <class F>
    std::optional<Rhs> map_leaves(const Gen<LocalRes>& g, F&& f) {
        if (g.conf) {
            if (static_cast<int>(g.conf->cfg.tape.size()) > spec_.height) return std::nullopt;
            auto t = f(*g.conf);
            if (!t) return std::nullopt;
            return Rhs::leaf(*t);
        }
        Rhs r = Rhs::node(g.label);
        for (auto& k : g.kids) {
            auto sub = map_leaves(k, f);
            if (!sub) return std::nullopt;
            r.kids.push_back(std::move(*sub));
        }
        return r;
    }

    std::optional<Gen<LocalRes>> local_step(const FlatTerm& v, const std::string& ctx_key, const LocalCfg& c,
                                            const std::optional<std::string>& z) {
        MultMove m = mult_step(v, c.up, c.node, c.tape);
        switch (m.kind) {
            case MultMove::Move:
                return Gen<LocalRes>::leaf(LocalRes{{m.up, m.node, m.push + c.tape.substr(m.pop), c.answer}, Move{}});
            case MultMove::Output: {
                std::string rest = c.tape.substr(m.pop);
                Gen<LocalRes> g = Gen<LocalRes>::node(v[c.node].name);
                for (int i = 1; i <= m.rank; ++i)
                    g.kids.push_back(Gen<LocalRes>::leaf(LocalRes{{true, c.node, std::string(i - 1, 'p') + "o" + rest, c.answer}, Move{}}));
                return g;
            }
            case MultMove::Exponential: break;
            default: return std::nullopt;
        }
        if (!single_) {
            // almost purely affine: a let-bound variable jumps to the bound term
            const auto& n = v[c.node];
            if (c.up || n.kind != Kind::Var || z) return std::nullopt;
            return Gen<LocalRes>::leaf(LocalRes{{false, v[n.binder].kid[0], c.tape, c.answer}, Move{}});
        }
        std::optional<std::pair<int, int>> top;
        if (z) {
            const ColorInfo& ci = colors_.at(*z);
            if (ci.ctx != ctx_key) return std::nullopt;
            top = std::make_pair(ci.occ, ci.n);
        }
        SsExpMove e = single_exp_step(v, c.up, c.node, c.answer, top);
        if (!e.ok) return std::nullopt;
        if (z && e.op.kind != ExpOp::Pop) return std::nullopt;  // the pebble-blind rule covers this key
        Move mv;
        switch (e.op.kind) {
            case ExpOp::None: break;
            case ExpOp::Push: mv = Move{Move::Put, 0, ctx_.color(ctx_key, e.op.occ, e.op.n)}; break;
            case ExpOp::Pop: mv = Move{Move::Remove, 0, {}}; break;
            case ExpOp::Drop: return std::nullopt;
        }
        return Gen<LocalRes>::leaf(LocalRes{{e.up, e.node, c.tape, e.answer}, mv});
    }

    void collect_colors() {
        auto scan = [&](const FlatTerm& f, const std::string& key) {
            for (int i = 0; i < f.size(); ++i) {
                const auto& n = f[i];
                if (n.kind != Kind::Var || n.binder < 0 || f[n.binder].kind != Kind::Let) continue;
                const auto& b = f[n.binder];
                int d = n.depth - b.depth;
                bool base_let = f[b.kid[0]].ty->a->kind == TK::Base;
                if (base_let) {
                    if (d > 0)
                        fail(Err::Unsupported, "the pebble compilation does not handle a let-bound variable of type !o "
                                               "used inside a box: " + f.render(i, false));
                    continue;
                }
                if (b.depth == 0) colors_[ctx_.color(key, i, d)] = ColorInfo{key, i, d};
            }
        };
        scan(ctx_.u(), "u");
        for (auto& a : spec_.input.letters()) {
            const std::string& t = ctx_.skeleton_text(a);
            bool done = false;
            for (auto& [c, info] : colors_) done = done || info.ctx == t;
            if (!done) scan(ctx_.skeleton(a), t);
        }
    }

    SimContext ctx_;
    const TransducerSpec& spec_;
    bool single_;
    std::map<std::string, SimState> states_;
    std::vector<std::string> order_;
    std::map<std::string, ColorInfo> colors_;
};

void collect_targets(const Rhs& r, std::vector<Target>& out) {
    if (r.conf) out.push_back(*r.conf);
    for (auto& k : r.kids) collect_targets(k, out);
}

// Keys that a leaf can lead to, over all input trees.
template <class Push>
void successors(const Alphabet& in, const std::string& a, bool root, const Target& t, Push&& push) {
    switch (t.move.kind) {
        case Move::ToChild:
            for (auto& b : in.letters()) push(b, t.state, Prov{Prov::FromParent, 0}, false);
            break;
        case Move::ToParent:
            for (auto& [c, k] : in.ranks)
                for (int j = 1; j <= k; ++j)
                    for (bool r : {false, true}) push(c, t.state, Prov{Prov::FromChild, j}, r);
            break;
        default: push(a, t.state, Prov{Prov::Self, 0}, root);
    }
}

}  // namespace

TwtSpec compile_to_twt(const TransducerSpec& spec) {
    if (spec.tier > Tier::AlmostPurelyAffine)
        fail(Err::ClassificationTooHigh, std::string("tree-walking compilation needs an almost purely affine transducer, got ") +
                                             tier_name(spec.tier));
    Synth s(spec, false);
    TwtSpec out;
    out.input = spec.input;
    out.output = spec.output;
    out.initial = s.intern(SimState{});
    std::set<TwtKey> seen;
    std::deque<TwtKey> work;
    auto push = [&](const std::string& a, const std::string& q, Prov p, bool root) {
        TwtKey k{a, q, p, root};
        if (seen.insert(k).second) work.push_back(k);
    };
    for (auto& a : spec.input.letters()) push(a, out.initial, Prov{Prov::Self, 0}, true);
    while (!work.empty()) {
        TwtKey k = work.front();
        work.pop_front();
        auto rhs = s.rule(k.letter, s.state(k.state), k.prov, k.root, std::nullopt);
        if (!rhs) continue;
        std::vector<Target> ts;
        collect_targets(*rhs, ts);
        for (auto& t : ts) successors(spec.input, k.letter, k.root, t, push);
        out.delta.emplace(k, std::move(*rhs));
    }
    out.states = s.state_order();
    validate(out);
    return out;
}

IpttSpec compile_to_iptt(const TransducerSpec& spec) {
    if (spec.tier > Tier::AlmostDepth1)
        fail(Err::ClassificationTooHigh, std::string("pebble compilation needs an almost depth-1 transducer, got ") +
                                             tier_name(spec.tier));
    Synth s(spec, true);
    IpttSpec out;
    out.input = spec.input;
    out.output = spec.output;
    for (auto& [c, info] : s.colors()) out.colors.push_back(c);
    SimState init;
    init.answer = 0;
    out.initial = s.intern(init);
    std::set<TwtKey> seen;
    std::deque<TwtKey> work;
    auto push = [&](const std::string& a, const std::string& q, Prov p, bool root) {
        TwtKey k{a, q, p, root};
        if (seen.insert(k).second) work.push_back(k);
    };
    for (auto& a : spec.input.letters()) push(a, out.initial, Prov{Prov::Self, 0}, true);
    while (!work.empty()) {
        TwtKey k = work.front();
        work.pop_front();
        const SimState& q = s.state(k.state);
        std::vector<std::pair<std::string, Rhs>> rules;
        if (auto rhs = s.rule(k.letter, q, k.prov, k.root, std::nullopt)) {
            rules.emplace_back(kAnyPebble, std::move(*rhs));
        } else {
            for (auto& [c, info] : s.colors())
                if (auto r = s.rule(k.letter, q, k.prov, k.root, c)) rules.emplace_back(c, std::move(*r));
        }
        for (auto& [z, rhs] : rules) {
            std::vector<Target> ts;
            collect_targets(rhs, ts);
            for (auto& t : ts) successors(spec.input, k.letter, k.root, t, push);
            out.delta.emplace(IpttKey{k, z}, std::move(rhs));
        }
    }
    out.states = s.state_order();
    validate(out);
    return out;
}

}  // namespace lt
