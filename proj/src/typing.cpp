#include "lt/typing.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include "lt/error.hpp"

namespace lt {

ConstTypes const_types(const Alphabet& sigma) {
    ConstTypes m;
    for (auto& [c, k] : sigma.ranks) m[c] = const_type(k);
    return m;
}

namespace {

struct Entry {
    std::string name;
    Type ty;
    bool affine;
    int level;  // box nesting level at binding time
    bool used = false;
};

// Principal simple type by unification, for lambdas the bidirectional rules cannot infer.
class Unifier {
public:
    explicit Unifier(const ConstTypes& constants) : constants_(constants) {}

    // Leftover type variables become o.
    Type principal(const Term& t, const std::vector<Entry>& env) {
        std::vector<std::pair<std::string, int>> scope;
        for (auto& e : env) scope.emplace_back(e.name, from(e.ty));
        return to(walk(t, scope));
    }

private:
    struct U {
        TK kind;
        int a = -1, b = -1;
        bool var = false;
    };

    int fresh() {
        nodes_.push_back(U{TK::Base, -1, -1, true});
        return static_cast<int>(nodes_.size()) - 1;
    }
    int make(TK k, int a = -1, int b = -1) {
        nodes_.push_back(U{k, a, b, false});
        return static_cast<int>(nodes_.size()) - 1;
    }
    int from(const Type& t) {
        switch (t->kind) {
            case TK::Base: return make(TK::Base);
            case TK::Arrow: return make(TK::Arrow, from(t->a), from(t->b));
            case TK::Bang: return make(TK::Bang, from(t->a));
        }
        return make(TK::Base);
    }
    int find(int x) {
        while (nodes_[x].var && link_.count(x)) x = link_.at(x);
        return x;
    }
    bool occurs(int v, int t) {
        t = find(t);
        if (t == v) return true;
        const U& u = nodes_[t];
        if (u.var) return false;
        return (u.a >= 0 && occurs(v, u.a)) || (u.b >= 0 && occurs(v, u.b));
    }
    void unify(int x, int y, const Term& at) {
        x = find(x);
        y = find(y);
        if (x == y) return;
        if (nodes_[x].var || nodes_[y].var) {
            int v = nodes_[x].var ? x : y, t = v == x ? y : x;
            if (occurs(v, t)) fail(Err::TypeMismatch, "cyclic type in '" + to_string(at) + "'");
            link_[v] = t;
            return;
        }
        U ux = nodes_[x], uy = nodes_[y];
        if (ux.kind != uy.kind) fail(Err::TypeMismatch, "no simple type for '" + to_string(at) + "'");
        if (ux.a >= 0) unify(ux.a, uy.a, at);
        if (ux.b >= 0) unify(ux.b, uy.b, at);
    }
    int walk(const Term& t, std::vector<std::pair<std::string, int>>& scope) {
        switch (t->kind) {
            case Kind::Const: {
                auto it = constants_.find(t->name);
                if (it == constants_.end()) fail(Err::UnknownConstant, "unknown constant '" + t->name + "'");
                return from(it->second);
            }
            case Kind::Var:
                for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                    if (it->first == t->name) return it->second;
                fail(Err::UnboundVariable, "unbound variable '" + t->name + "'");
            case Kind::Lam: {
                int a = fresh();
                scope.emplace_back(t->name, a);
                int b = walk(t->a, scope);
                scope.pop_back();
                return make(TK::Arrow, a, b);
            }
            case Kind::App: {
                int f = walk(t->a, scope), x = walk(t->b, scope), r = fresh();
                unify(f, make(TK::Arrow, x, r), t);
                return r;
            }
            case Kind::Box: return make(TK::Bang, walk(t->a, scope));
            case Kind::Let: {
                int u = walk(t->a, scope), a = fresh();
                unify(u, make(TK::Bang, a), t);
                scope.emplace_back(t->name, a);
                int b = walk(t->b, scope);
                scope.pop_back();
                return b;
            }
        }
        return fresh();
    }
    Type to(int x) {
        x = find(x);
        const U& u = nodes_[x];
        if (u.var) return base();
        switch (u.kind) {
            case TK::Base: return base();
            case TK::Arrow: return arrow(to(u.a), to(u.b));
            case TK::Bang: return bang(to(u.a));
        }
        return base();
    }

    const ConstTypes& constants_;
    std::vector<U> nodes_;
    std::map<int, int> link_;
};

struct Checker {
    const ConstTypes& constants;
    std::vector<Entry> env;
    int level = 0;
    bool base_repeat = false;

    [[noreturn]] void mismatch(const Term& t, const Type& want, const Type& got) {
        fail(Err::TypeMismatch, "type mismatch in '" + to_string(t) + "': expected " + to_string(want) + ", got " +
                                    to_string(got));
    }

    Entry* lookup(const std::string& x) {
        for (auto it = env.rbegin(); it != env.rend(); ++it)
            if (it->name == x) return &*it;
        return nullptr;
    }

    void bind(const std::string& x, Type ty, bool affine) { env.push_back(Entry{x, std::move(ty), affine, level}); }

    Term ann(const Term& t, Term a, Term b, Type ty) { return with_ann(t, std::move(a), std::move(b), std::move(ty), -1); }

    Term var(const Term& t) {
        Entry* e = lookup(t->name);
        if (!e) fail(Err::UnboundVariable, "unbound variable '" + t->name + "'");
        if (e->affine) {
            if (e->level != level) fail(Err::BoxCapturesAffine, "affine variable '" + t->name + "' used inside a box");
            if (e->used && !(base_repeat && e->ty->kind == TK::Base)) fail(Err::AffineViolation, "affine variable '" + t->name + "' used more than once");
            e->used = true;
        }
        return ann(t, nullptr, nullptr, e->ty);
    }

    Term check(const Term& t, const Type& want) {
        switch (t->kind) {
            case Kind::Lam: {
                if (want->kind != TK::Arrow)
                    fail(Err::TypeMismatch, "lambda '" + to_string(t) + "' checked against " + to_string(want));
                bind(t->name, want->a, true);
                Term body = check(t->a, want->b);
                env.pop_back();
                return ann(t, body, nullptr, want);
            }
            case Kind::Box: {
                if (want->kind != TK::Bang)
                    fail(Err::TypeMismatch, "box '" + to_string(t) + "' checked against " + to_string(want));
                ++level;
                Term body = check(t->a, want->a);
                --level;
                return ann(t, body, nullptr, want);
            }
            case Kind::Let: {
                // let !x = u in x: the bound term is checked against !want.
                bool direct = t->b->kind == Kind::Var && t->b->name == t->name;
                Term u = direct ? check(t->a, bang(want)) : infer(t->a);
                if (u->ty->kind != TK::Bang)
                    fail(Err::TypeMismatch, "let-bound term '" + to_string(t->a) + "' has non-! type " + to_string(u->ty));
                bind(t->name, u->ty->a, false);
                Term body = check(t->b, want);
                env.pop_back();
                return ann(t, u, body, want);
            }
            default: {
                Term r = t->kind == Kind::App && lambda_headed(t) ? spine(t, want) : infer(t);
                if (!type_eq(r->ty, want)) mismatch(t, want, r->ty);
                return r;
            }
        }
    }

    // Spine with a lambda or let head: infer the arguments first, then bind them.
    Term spine(const Term& t, const Type& want = nullptr) {
        std::vector<Term> args;
        Term head = t;
        while (head->kind == Kind::App) {
            args.push_back(head->b);
            head = head->a;
        }
        std::reverse(args.begin(), args.end());
        std::vector<Term> typed_args;
        for (auto& a : args) typed_args.push_back(infer(a));
        std::size_t used = 0;
        std::function<Term(const Term&)> go = [&](const Term& h) -> Term {
            if (h->kind == Kind::Lam && used < typed_args.size()) {
                Type dom = typed_args[used++]->ty;
                bind(h->name, dom, true);
                Term body = go(h->a);
                env.pop_back();
                return ann(h, body, nullptr, arrow(dom, body->ty));
            }
            if (h->kind == Kind::Let) {
                Term u = infer(h->a);
                if (u->ty->kind != TK::Bang)
                    fail(Err::TypeMismatch, "let-bound term '" + to_string(h->a) + "' has non-! type " + to_string(u->ty));
                bind(h->name, u->ty->a, false);
                Term body = go(h->b);
                env.pop_back();
                return ann(h, u, body, body->ty);
            }
            if (want && used == typed_args.size()) return check(h, want);
            return infer(h);
        };
        Term f = go(head);
        for (auto& a : typed_args) {
            if (f->ty->kind != TK::Arrow) fail(Err::TypeMismatch, "applying a term of non-function type " + to_string(f->ty));
            if (!type_eq(f->ty->a, a->ty)) mismatch(a, f->ty->a, a->ty);
            Type res = f->ty->b;
            f = with_ann(mk_app(f, a), f, a, res, -1);
        }
        return f;
    }

    static bool lambda_headed(const Term& t) {
        Term h = t;
        while (h->kind == Kind::App) h = h->a;
        return h->kind == Kind::Lam || h->kind == Kind::Let;
    }

    Term infer(const Term& t) {
        switch (t->kind) {
            case Kind::Const: {
                auto it = constants.find(t->name);
                if (it == constants.end()) fail(Err::UnknownConstant, "unknown constant '" + t->name + "'");
                return ann(t, nullptr, nullptr, it->second);
            }
            case Kind::Var: return var(t);
            case Kind::Lam: {
                Unifier u(constants);
                return check(t, u.principal(t, env));
            }
            case Kind::Box: {
                ++level;
                Term body = infer(t->a);
                --level;
                return ann(t, body, nullptr, bang(body->ty));
            }
            case Kind::Let:
            case Kind::App: {
                if (t->kind == Kind::Let || lambda_headed(t)) return spine(t);
                Term f = infer(t->a);
                if (f->ty->kind != TK::Arrow)
                    fail(Err::TypeMismatch, "applying '" + to_string(t->a) + "' of non-function type " + to_string(f->ty));
                Term x = check(t->b, f->ty->a);
                return ann(t, f, x, f->ty->b);
            }
        }
        return t;
    }
};

Checker make_checker(const TypingContext& ctx, const ConstTypes& constants) {
    Checker c{constants, {}, 0, false};
    for (auto& [x, ty] : ctx.theta) c.bind(x, ty, false);
    for (auto& [x, ty] : ctx.phi) {
        if (ctx.theta.count(x)) fail(Err::TypeMismatch, "variable '" + x + "' is both unrestricted and affine");
        c.bind(x, ty, true);
    }
    return c;
}

}  // namespace

Term annotate_depth(const Term& t, int depth) {
    Term a, b;
    if (t->kind == Kind::Box) {
        a = annotate_depth(t->a, depth + (t->ty->a->kind == TK::Base ? 0 : 1));
    } else {
        if (t->a) a = annotate_depth(t->a, depth);
        if (t->b) b = annotate_depth(t->b, depth);
    }
    return with_ann(t, a, b, t->ty, depth);
}

Term check_type(const TypingContext& ctx, const Term& t, const Type& expected, const ConstTypes& constants) {
    Checker c = make_checker(ctx, constants);
    Term r = annotate_depth(c.check(t, expected));
    if (!affineness_holds(r)) fail(Err::AffineViolation, "affineness post-check failed on '" + to_string(t) + "'");
    return r;
}

Term check_almost_affine(const TypingContext& ctx, const Term& t, const Type& expected, const ConstTypes& constants) {
    Checker c = make_checker(ctx, constants);
    c.base_repeat = true;
    try {
        return annotate_depth(c.check(t, expected));
    } catch (const Error& e) {
        if (e.code == Err::AffineViolation) fail(Err::NotAlmostAffine, e.what());
        throw;
    }
}

Term infer_type(const TypingContext& ctx, const Term& t, const ConstTypes& constants) {
    Checker c = make_checker(ctx, constants);
    Term r = annotate_depth(c.infer(t));
    if (!affineness_holds(r)) fail(Err::AffineViolation, "affineness post-check failed on '" + to_string(t) + "'");
    return r;
}

namespace {

// Counts free occurrences of x in t; `boxed` counts those under a box.
void occurrences(const Term& t, const std::string& x, int& total, int& boxed, bool in_box) {
    switch (t->kind) {
        case Kind::Const: return;
        case Kind::Var:
            if (t->name == x) {
                ++total;
                if (in_box) ++boxed;
            }
            return;
        case Kind::Lam:
            if (t->name != x) occurrences(t->a, x, total, boxed, in_box);
            return;
        case Kind::Let:
            occurrences(t->a, x, total, boxed, in_box);
            if (t->name != x) occurrences(t->b, x, total, boxed, in_box);
            return;
        case Kind::App:
            occurrences(t->a, x, total, boxed, in_box);
            occurrences(t->b, x, total, boxed, in_box);
            return;
        case Kind::Box: occurrences(t->a, x, total, boxed, true); return;
    }
}

}  // namespace

bool affineness_holds(const Term& t) {
    if (t->kind == Kind::Lam) {
        int total = 0, boxed = 0;
        occurrences(t->a, t->name, total, boxed, false);
        if (total > 1 || boxed > 0) return false;
    }
    return (!t->a || affineness_holds(t->a)) && (!t->b || affineness_holds(t->b));
}

namespace {

bool types_within(const Term& t, Tier tier) {
    if (!t->ty) fail(Err::Invariant, "classification needs an annotated term");
    if (!in_tier(t->ty, tier)) return false;
    if (t->kind == Kind::Box) {
        if (tier == Tier::PurelyAffine) return false;
        if (tier != Tier::General && !types_within(t->a, static_cast<Tier>(static_cast<int>(tier) - 1))) return false;
    }
    return (!t->a || types_within(t->a, tier)) && (!t->b || types_within(t->b, tier));
}

bool theta_within(const Term& t, Tier tier) {
    if (t->kind == Kind::Box) return true;  // box contents are checked one tier down, on types
    if (t->kind == Kind::Let) {
        Type x = t->a->ty->a;
        if (tier == Tier::PurelyAffine) return false;
        if (tier == Tier::AlmostPurelyAffine && x->kind != TK::Base) return false;
        if (tier == Tier::AlmostDepth1 && !in_tier(x, Tier::AlmostPurelyAffine)) return false;
    }
    return (!t->a || theta_within(t->a, tier)) && (!t->b || theta_within(t->b, tier));
}

bool ctx_within(const TypingContext& ctx, Tier tier) {
    for (auto& [x, ty] : ctx.phi)
        if (!in_tier(ty, tier)) return false;
    for (auto& [x, ty] : ctx.theta) {
        if (tier == Tier::PurelyAffine) return false;
        if (tier == Tier::AlmostPurelyAffine && ty->kind != TK::Base) return false;
        if (tier == Tier::AlmostDepth1 && !in_tier(ty, Tier::AlmostPurelyAffine)) return false;
    }
    return true;
}

}  // namespace

Tier classify_term(const Term& t, const TypingContext& ctx) {
    for (Tier x : {Tier::PurelyAffine, Tier::AlmostPurelyAffine, Tier::AlmostDepth1})
        if (ctx_within(ctx, x) && types_within(t, x) && theta_within(t, x)) return x;
    return Tier::General;
}

int max_subterm_height(const Term& t) {
    int h = t->ty ? type_height(t->ty) : 0;
    if (t->a) h = std::max(h, max_subterm_height(t->a));
    if (t->b) h = std::max(h, max_subterm_height(t->b));
    return h;
}

}  // namespace lt
