#include "lt/reduce.hpp"

#include <algorithm>

#include "lt/error.hpp"

namespace lt {

std::pair<LetPrefix, Term> split_lets(const Term& t) {
    LetPrefix l;
    Term cur = t;
    while (cur->kind == Kind::Let) {
        l.lets.emplace_back(cur->name, cur->a);
        cur = cur->b;
    }
    return {l, cur};
}

Term plug_lets(const LetPrefix& l, Term core) {
    for (auto it = l.lets.rbegin(); it != l.lets.rend(); ++it) core = mk_let(it->first, it->second, core);
    return core;
}

namespace {

// Renames the binders of l that clash with `avoid`, inside later bounds and the core.
void freshen(LetPrefix& l, Term& core, const std::set<std::string>& avoid) {
    for (std::size_t i = 0; i < l.lets.size(); ++i) {
        std::string old = l.lets[i].first;
        if (!avoid.count(old)) continue;
        std::string n = fresh_name(old);
        l.lets[i].first = n;
        for (std::size_t j = i + 1; j < l.lets.size(); ++j) l.lets[j].second = rename_bound(l.lets[j].second, old, n);
        core = rename_bound(core, old, n);
    }
}

std::optional<Term> contract(const Term& t) {
    if (t->kind == Kind::App) {
        auto [l, core] = split_lets(t->a);
        if (core->kind != Kind::Lam) return std::nullopt;
        std::set<std::string> avoid = free_vars(t->b);
        Term lam = core;
        freshen(l, lam, avoid);
        return plug_lets(l, subst(lam->a, lam->name, t->b));
    }
    if (t->kind == Kind::Let) {
        auto [l, core] = split_lets(t->a);
        if (core->kind != Kind::Box) return std::nullopt;
        std::set<std::string> avoid = free_vars(t->b);
        avoid.erase(t->name);
        Term box = core;
        freshen(l, box, avoid);
        return plug_lets(l, subst(t->b, t->name, box->a));
    }
    return std::nullopt;
}

Term rebuild(const Term& t, int i, Term k) {
    switch (t->kind) {
        case Kind::Lam: return mk_lam(t->name, k);
        case Kind::Box: return mk_box(k);
        case Kind::App: return i == 0 ? mk_app(k, t->b) : mk_app(t->a, k);
        case Kind::Let: return i == 0 ? mk_let(t->name, k, t->b) : mk_let(t->name, t->a, k);
        default: return t;
    }
}

std::optional<Term> step_lo(const Term& t) {
    if (auto r = contract(t)) return r;
    for (int i = 0; i < arity(t); ++i)
        if (auto r = step_lo(child(t, i))) return rebuild(t, i, *r);
    return std::nullopt;
}

std::optional<Term> step_ri(const Term& t) {
    for (int i = arity(t) - 1; i >= 0; --i)
        if (auto r = step_ri(child(t, i))) return rebuild(t, i, *r);
    return contract(t);
}

}  // namespace

std::optional<Term> beta_step(const Term& t, Strategy s) {
    return s == Strategy::LeftmostOutermost ? step_lo(t) : step_ri(t);
}

bool is_normal(const Term& t) { return !step_ri(t).has_value(); }

Term normalize(const Term& t, std::uint64_t fuel, Strategy s, std::uint64_t* steps) {
    Term cur = t;
    std::uint64_t n = 0;
    while (auto r = beta_step(cur, s)) {
        if (n == fuel) fail(Err::FuelExhausted, "normalization ran out of fuel after " + std::to_string(fuel) + " steps");
        cur = *r;
        ++n;
    }
    if (steps) *steps = n;
    return cur;
}

bool normal_form_classification_check(const Term& nf, const TypingContext& ctx) {
    Tier bound = classify_type(nf->ty);
    for (auto& [x, ty] : ctx.phi) bound = std::max(bound, classify_type(ty));
    for (auto& [x, ty] : ctx.theta) bound = std::max(bound, classify_type(ty));
    return classify_term(nf, ctx) <= bound;
}

}  // namespace lt
