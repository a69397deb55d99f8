#include "lt/iam.hpp"

#include <algorithm>

#include "lt/error.hpp"

namespace lt {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Auto: return "auto";
        case Variant::PA: return "pa";
        case Variant::APA: return "apa";
        case Variant::Depth1: return "depth1";
        case Variant::Single: return "single";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    for (Variant v : {Variant::Auto, Variant::PA, Variant::APA, Variant::Depth1, Variant::Single})
        if (s == variant_name(v)) return v;
    fail(Err::Syntax, "unknown IAM variant '" + s + "'");
}

std::string IamConfig::mult() const {
    std::string s;
    for (auto it = tape.rbegin(); it != tape.rend(); ++it)
        if (it->sym != 'L') s += it->sym;
    return s;
}

std::string IamConfig::symbols() const {
    std::string s;
    for (auto it = tape.rbegin(); it != tape.rend(); ++it) s += it->sym;
    return s;
}

namespace {

int const_rank(const Type& t) {
    int k = 0;
    for (Type cur = t; cur->kind == TK::Arrow; cur = cur->b) ++k;
    return k;
}

bool base_content(const FlatTerm& v, int box) { return v[box].ty->a->kind == TK::Base; }

// The let-bound term has type !o.
bool let_of_base(const FlatTerm& v, int let) { return v[v[let].kid[0]].ty->a->kind == TK::Base; }

}  // namespace

MultMove mult_step(const FlatTerm& v, bool up, int node, std::string_view top) {
    MultMove m;
    const auto& n = v[node];
    auto move = [&](bool u, int to, int pop, std::string push) {
        m.kind = MultMove::Move;
        m.up = u;
        m.node = to;
        m.pop = pop;
        m.push = std::move(push);
        return m;
    };
    if (!up) {
        switch (n.kind) {
            case Kind::App: return move(false, n.kid[0], 0, "p");
            case Kind::Lam:
                if (top.empty()) return m;
                if (top[0] == 'p') return move(false, n.kid[0], 1, "");
                if (top[0] == 'o' && n.occs.size() == 1) return move(true, n.occs[0], 1, "");
                return m;
            case Kind::Var:
                if (n.binder < 0) return m;
                if (v[n.binder].kind == Kind::Lam) return move(true, n.binder, 0, "o");
                m.kind = MultMove::Exponential;
                return m;
            case Kind::Const: {
                if (n.placeholder > 0) {
                    m.kind = MultMove::Boundary;
                    return m;
                }
                int k = const_rank(n.ty);
                if (static_cast<int>(top.size()) < k) return m;
                for (int i = 0; i < k; ++i)
                    if (top[i] != 'p') return m;
                m.kind = MultMove::Output;
                m.node = node;
                m.pop = k;
                m.rank = k;
                return m;
            }
            case Kind::Box:
                if (base_content(v, node)) return move(false, n.kid[0], 0, "");
                m.kind = MultMove::Exponential;
                return m;
            case Kind::Let: return move(false, n.kid[1], 0, "");
        }
        return m;
    }
    if (n.parent < 0) {
        m.kind = MultMove::Boundary;
        return m;
    }
    const auto& p = v[n.parent];
    switch (p.kind) {
        case Kind::App:
            if (n.slot == 1) return move(false, p.kid[0], 0, "o");
            if (top.empty()) return m;
            if (top[0] == 'p') return move(true, n.parent, 1, "");
            if (top[0] == 'o') return move(false, p.kid[1], 1, "");
            return m;
        case Kind::Lam: return move(true, n.parent, 0, "p");
        case Kind::Let:
            if (n.slot == 1) return move(true, n.parent, 0, "");
            m.kind = MultMove::Exponential;
            return m;
        case Kind::Box: m.kind = MultMove::Exponential; return m;
        default: return m;
    }
}

SsExpMove single_exp_step(const FlatTerm& v, bool up, int node, int answer, std::optional<std::pair<int, int>> top) {
    SsExpMove r;
    const auto& n = v[node];
    if (!up) {
        if (n.kind == Kind::Var && n.binder >= 0 && v[n.binder].kind == Kind::Let) {
            int b = n.binder;
            int m = v[b].depth;
            int d = n.depth - m;
            if (let_of_base(v, b)) {
                if (answer != d + m) return r;
                r.ok = true;
                r.node = v[b].kid[0];
                r.answer = m;
                if (d > 0) r.op = ExpOp{ExpOp::Drop, -1, d};
                return r;
            }
            if (m != 0 || answer != d) return r;
            r.ok = true;
            r.node = v[b].kid[0];
            r.answer = 0;
            r.op = ExpOp{ExpOp::Push, node, d};
            return r;
        }
        if (n.kind == Kind::Box && !base_content(v, node)) {
            if (n.depth != 0 || answer != 0) return r;
            r.ok = true;
            r.node = n.kid[0];
            r.answer = 1;
            return r;
        }
        return r;
    }
    const auto& p = v[n.parent];
    if (p.kind == Kind::Box) {
        if (base_content(v, n.parent)) fail(Err::Invariant, "upward configuration inside a box of base type");
        if (p.depth != 0 || answer != 1) return r;
        r.ok = true;
        r.up = true;
        r.node = n.parent;
        r.answer = 0;
        return r;
    }
    if (p.kind == Kind::Let && n.slot == 0) {
        if (let_of_base(v, n.parent)) fail(Err::Invariant, "upward configuration on a let-bound term of type !o");
        if (p.depth != 0 || answer != 0 || !top) return r;
        r.ok = true;
        r.up = true;
        r.node = top->first;
        r.answer = top->second;
        r.op = ExpOp{ExpOp::Pop, -1, 0};
        return r;
    }
    return r;
}

namespace {

void apply_tape(std::vector<TapeItem>& tape, int pop, const std::string& push) {
    for (int i = 0; i < pop; ++i) tape.pop_back();
    for (auto it = push.rbegin(); it != push.rend(); ++it) tape.push_back(TapeItem{*it, nullptr});
}

template <class K, class Child>
Gen<K> output_node(const FlatTerm& v, int node, int rank, Child make_child) {
    Gen<K> g = Gen<K>::node(v[node].name);
    for (int i = 1; i <= rank; ++i) g.kids.push_back(Gen<K>::leaf(make_child(i)));
    return g;
}

std::string top_symbols(const IamConfig& c, std::size_t limit) {
    std::string s;
    for (auto it = c.tape.rbegin(); it != c.tape.rend() && s.size() < limit; ++it) s += it->sym;
    return s;
}

std::optional<Gen<IamConfig>> depth1_exp(const FlatTerm& v, const IamConfig& c) {
    const auto& n = v[c.node];
    IamConfig r = c;
    if (!c.up) {
        if (n.kind == Kind::Var) {
            int b = n.binder;
            int d = n.depth - v[b].depth;
            r.node = v[b].kid[0];
            if (let_of_base(v, b)) {
                if (static_cast<int>(c.log.size()) < d) return std::nullopt;
                r.log.erase(r.log.begin(), r.log.begin() + d);
                return Gen<IamConfig>::leaf(r);
            }
            if (v[b].depth != 0 || static_cast<int>(c.log.size()) != d) return std::nullopt;
            r.tape.push_back(TapeItem{'L', std::make_shared<const Logged>(Logged{c.node, c.log})});
            r.log.clear();
            return Gen<IamConfig>::leaf(r);
        }
        if (n.kind == Kind::Box) {
            if (n.depth != 0 || !c.log.empty() || c.tape.empty() || c.tape.back().sym != 'L') return std::nullopt;
            r.log = {c.tape.back().logged};
            r.tape.pop_back();
            r.node = n.kid[0];
            return Gen<IamConfig>::leaf(r);
        }
        return std::nullopt;
    }
    const auto& p = v[n.parent];
    if (p.kind == Kind::Let) {
        if (let_of_base(v, n.parent)) fail(Err::Invariant, "upward configuration on a let-bound term of type !o");
        if (p.depth != 0 || !c.log.empty() || c.tape.empty() || c.tape.back().sym != 'L') return std::nullopt;
        LoggedPtr l = c.tape.back().logged;
        r.tape.pop_back();
        r.node = l->occ;
        r.log = l->log;
        return Gen<IamConfig>::leaf(r);
    }
    if (p.kind == Kind::Box) {
        if (base_content(v, n.parent)) fail(Err::Invariant, "upward configuration inside a box of base type");
        if (p.depth != 0 || c.log.size() != 1) return std::nullopt;
        r.tape.push_back(TapeItem{'L', c.log[0]});
        r.log.clear();
        r.node = n.parent;
        return Gen<IamConfig>::leaf(r);
    }
    return std::nullopt;
}

}  // namespace

std::optional<Gen<IamConfig>> iam_step(const FlatTerm& v, Variant variant, const IamConfig& c) {
    MultMove m = mult_step(v, c.up, c.node, top_symbols(c, 64));
    switch (m.kind) {
        case MultMove::Move: {
            IamConfig r = c;
            r.up = m.up;
            r.node = m.node;
            apply_tape(r.tape, m.pop, m.push);
            return Gen<IamConfig>::leaf(std::move(r));
        }
        case MultMove::Output: {
            IamConfig base = c;
            base.up = true;
            apply_tape(base.tape, m.pop, "");
            return output_node<IamConfig>(v, c.node, m.rank, [&](int i) {
                IamConfig k = base;
                apply_tape(k.tape, 0, std::string(i - 1, 'p') + "o");
                return k;
            });
        }
        case MultMove::Exponential: {
            if (variant == Variant::PA) return std::nullopt;
            if (variant == Variant::Depth1) return depth1_exp(v, c);
            const auto& n = v[c.node];
            if (!c.up && n.kind == Kind::Var) {
                IamConfig r = c;
                r.node = v[n.binder].kid[0];
                return Gen<IamConfig>::leaf(std::move(r));
            }
            if (c.up) fail(Err::Invariant, "upward configuration on a box or let-bound term: " + render(v, c));
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

std::optional<Gen<SsConfig>> single_step(const FlatTerm& v, const SsConfig& c) {
    MultMove m = mult_step(v, c.up, c.node, c.mult);
    switch (m.kind) {
        case MultMove::Move: {
            SsConfig r = c;
            r.up = m.up;
            r.node = m.node;
            r.mult = m.push + r.mult.substr(m.pop);
            return Gen<SsConfig>::leaf(std::move(r));
        }
        case MultMove::Output: {
            SsConfig base = c;
            base.up = true;
            base.mult = c.mult.substr(m.pop);
            return output_node<SsConfig>(v, c.node, m.rank, [&](int i) {
                SsConfig k = base;
                k.mult = std::string(i - 1, 'p') + "o" + base.mult;
                return k;
            });
        }
        case MultMove::Exponential: {
            std::optional<std::pair<int, int>> top;
            if (!c.exp.empty()) top = std::make_pair(c.exp.back()->occ, static_cast<int>(c.exp.back()->log.size()));
            SsExpMove e = single_exp_step(v, c.up, c.node, c.answer, top);
            if (!e.ok) return std::nullopt;
            SsConfig r = c;
            r.up = e.up;
            r.node = e.node;
            r.answer = e.answer;
            switch (e.op.kind) {
                case ExpOp::None: break;
                case ExpOp::Push: {
                    if (static_cast<int>(r.exp.size()) < e.op.n) return std::nullopt;
                    std::vector<LoggedPtr> nested;
                    for (int i = 0; i < e.op.n; ++i) {
                        nested.push_back(r.exp.back());
                        r.exp.pop_back();
                    }
                    r.exp.push_back(std::make_shared<const Logged>(Logged{e.op.occ, nested}));
                    break;
                }
                case ExpOp::Pop: {
                    LoggedPtr l = r.exp.back();
                    r.exp.pop_back();
                    for (auto it = l->log.rbegin(); it != l->log.rend(); ++it) r.exp.push_back(*it);
                    break;
                }
                case ExpOp::Drop:
                    if (static_cast<int>(r.exp.size()) < e.op.n) return std::nullopt;
                    r.exp.resize(r.exp.size() - e.op.n);
                    break;
            }
            return Gen<SsConfig>::leaf(std::move(r));
        }
        default: return std::nullopt;
    }
}

std::string render(const FlatTerm& v, const IamConfig& c) {
    std::string s = "(" + v.render(c.node, c.up) + ", \"" + c.symbols() + "\"";
    if (!c.log.empty()) s += ", log " + std::to_string(c.log.size());
    return s + ")";
}

std::string render(const FlatTerm& v, const SsConfig& c) {
    return "(" + v.render(c.node, c.up) + ", \"" + c.mult + "\", exp " + std::to_string(c.exp.size()) + ", a " +
           std::to_string(c.answer) + ")";
}

Variant select_variant(const Term& annotated, Variant requested) {
    Tier t = classify_term(annotated);
    auto need = [&](Tier max, Variant v) {
        if (t > max)
            fail(Err::ClassificationTooHigh, std::string("program is ") + tier_name(t) + ", too high for the " +
                                                 variant_name(v) + " machine");
        return v;
    };
    switch (requested) {
        case Variant::Auto:
            if (t == Tier::PurelyAffine) return Variant::PA;
            if (t == Tier::AlmostPurelyAffine) return Variant::APA;
            return need(Tier::AlmostDepth1, Variant::Depth1);
        case Variant::PA: return need(Tier::PurelyAffine, requested);
        case Variant::APA: return need(Tier::AlmostPurelyAffine, requested);
        default: return need(Tier::AlmostDepth1, requested);
    }
}

RunResult<IamConfig> run_iam(const FlatTerm& v, Variant variant, std::uint64_t fuel, const Observer<IamConfig>& obs) {
    StepFn<IamConfig> step = [&](const IamConfig& c) { return iam_step(v, variant, c); };
    return run<IamConfig>(step, IamConfig{}, fuel, Policy::Leftmost, obs);
}

RunResult<SsConfig> run_single(const FlatTerm& v, std::uint64_t fuel, const Observer<SsConfig>& obs) {
    StepFn<SsConfig> step = [&](const SsConfig& c) { return single_step(v, c); };
    return run<SsConfig>(step, SsConfig{}, fuel, Policy::Leftmost, obs);
}

namespace {

template <class K>
Tree finish(const FlatTerm& v, const RunResult<K>& r, std::uint64_t fuel) {
    if (r.status == Status::Diverged) fail(Err::FuelExhausted, "IAM run exceeded " + std::to_string(fuel) + " steps");
    if (r.status == Status::Stuck) fail(Err::Invariant, "IAM run stuck at " + render(v, *r.stuck_at));
    return r.output;
}

}  // namespace

Tree iam_run(const Term& annotated, Variant variant, std::uint64_t fuel) {
    if (!annotated->ty || annotated->ty->kind != TK::Base) fail(Err::TypeMismatch, "IAM programs must have type o");
    if (!free_vars(annotated).empty()) fail(Err::UnboundVariable, "IAM programs must be closed");
    Variant used = select_variant(annotated, variant);
    FlatTerm v(annotated);
    if (used == Variant::Single) return finish(v, run_single(v, fuel), fuel);
    return finish(v, run_iam(v, used, fuel), fuel);
}

InvariantReport assert_invariants(const FlatTerm& v, const std::vector<IamConfig>& configs, Variant variant) {
    InvariantReport rep;
    int h = max_subterm_height(v.source);
    bool affine = variant == Variant::PA || variant == Variant::APA;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const IamConfig& c = configs[i];
        std::string mult = c.mult();
        auto bad = [&](const std::string& what) {
            rep.ok = false;
            rep.index = i;
            rep.message = what + " at " + render(v, c);
            return rep;
        };
        auto nav = navigate(v[c.node].ty, mult);
        Type t = nav ? *nav : nullptr;
        while (t && t->kind == TK::Bang) t = t->a;
        if (!t || t->kind != TK::Base) return bad("typing invariant violated");
        if (static_cast<int>(mult.size()) > h) return bad("tape longer than " + std::to_string(h));
        if (affine) {
            auto circles = std::count(mult.begin(), mult.end(), 'o');
            if ((circles % 2 == 1) != c.up) return bad("direction parity violated");
            int p = v[c.node].parent;
            if (c.up && p >= 0 && (v[p].kind == Kind::Box || (v[p].kind == Kind::Let && v[c.node].slot == 0)))
                return bad("upward box configuration");
        }
        ++rep.checked;
    }
    return rep;
}

SsConfig abstract_config(const IamConfig& c) {
    SsConfig s;
    s.up = c.up;
    s.node = c.node;
    s.mult = c.mult();
    for (const auto& it : c.tape)
        if (it.sym == 'L') s.exp.push_back(it.logged);
    for (auto it = c.log.rbegin(); it != c.log.rend(); ++it) s.exp.push_back(*it);
    s.answer = static_cast<int>(c.log.size());
    return s;
}

namespace {

bool same_logged(const LoggedPtr& x, const LoggedPtr& y) {
    if (x->occ != y->occ || x->log.size() != y->log.size()) return false;
    for (std::size_t i = 0; i < x->log.size(); ++i)
        if (!same_logged(x->log[i], y->log[i])) return false;
    return true;
}

}  // namespace

bool same_config(const SsConfig& x, const SsConfig& y) {
    if (x.up != y.up || x.node != y.node || x.mult != y.mult || x.answer != y.answer || x.exp.size() != y.exp.size())
        return false;
    for (std::size_t i = 0; i < x.exp.size(); ++i)
        if (!same_logged(x.exp[i], y.exp[i])) return false;
    return true;
}

}  // namespace lt
