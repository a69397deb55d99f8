#include "lt/term.hpp"

#include <atomic>
#include <cctype>
#include <functional>

#include "lt/error.hpp"

namespace lt {

Term mk_const(const std::string& c) { return std::make_shared<Node>(Node{Kind::Const, c, nullptr, nullptr, nullptr, -1}); }
Term mk_var(const std::string& x) { return std::make_shared<Node>(Node{Kind::Var, x, nullptr, nullptr, nullptr, -1}); }
Term mk_lam(const std::string& x, Term body) {
    return std::make_shared<Node>(Node{Kind::Lam, x, std::move(body), nullptr, nullptr, -1});
}
Term mk_app(Term f, Term x) { return std::make_shared<Node>(Node{Kind::App, "", std::move(f), std::move(x), nullptr, -1}); }
Term mk_box(Term body) { return std::make_shared<Node>(Node{Kind::Box, "", std::move(body), nullptr, nullptr, -1}); }
Term mk_let(const std::string& x, Term bound, Term body) {
    return std::make_shared<Node>(Node{Kind::Let, x, std::move(bound), std::move(body), nullptr, -1});
}

Term apps(Term f, const std::vector<Term>& args) {
    for (auto& a : args) f = mk_app(f, a);
    return f;
}

Term with_ann(const Term& t, Term a, Term b, Type ty, int depth) {
    return std::make_shared<Node>(Node{t->kind, t->name, std::move(a), std::move(b), std::move(ty), depth});
}

int arity(const Term& t) {
    switch (t->kind) {
        case Kind::Const:
        case Kind::Var: return 0;
        case Kind::Lam:
        case Kind::Box: return 1;
        case Kind::App:
        case Kind::Let: return 2;
    }
    return 0;
}

const Term& child(const Term& t, int i) { return i == 0 ? t->a : t->b; }

Term subterm_at(const Term& t, const Path& p) {
    Term cur = t;
    for (int i : p) {
        if (i < 0 || i >= arity(cur)) fail(Err::InvalidPosition, "invalid position in term");
        cur = child(cur, i);
    }
    return cur;
}

std::pair<Context, Term> split_at(const Term& t, const Path& p) { return {Context{t, p}, subterm_at(t, p)}; }

namespace {

Term replace_at(const Term& t, const Path& p, std::size_t k, const Term& s) {
    if (k == p.size()) return s;
    int i = p[k];
    if (i < 0 || i >= arity(t)) fail(Err::InvalidPosition, "invalid position in context");
    Term na = i == 0 ? replace_at(t->a, p, k + 1, s) : t->a;
    Term nb = i == 1 ? replace_at(t->b, p, k + 1, s) : t->b;
    return with_ann(t, na, nb, t->ty, t->depth);
}

}  // namespace

Term plug(const Context& c, const Term& s) { return replace_at(c.whole, c.hole, 0, s); }

int context_depth(const Context& c) {
    int d = 0;
    Term cur = c.whole;
    for (int i : c.hole) {
        if (cur->kind == Kind::Box) {
            if (!cur->a->ty) fail(Err::Invariant, "context depth needs a type-annotated term");
            if (cur->a->ty->kind != TK::Base) ++d;
        }
        cur = child(cur, i);
    }
    return d;
}

namespace {

enum class Pos { Top, Fn, Arg, BoxBody };

struct Printer {
    const Path* focus = nullptr;
    bool up = false;
    std::string hole_text;  // when non-empty, the focus is printed as this text instead
    Path cur;

    std::string go(const Term& t, Pos pos) {
        bool here = focus && cur == *focus;
        std::string s;
        if (here && !hole_text.empty()) return hole_text;
        switch (t->kind) {
            case Kind::Const:
            case Kind::Var: s = t->name; break;
            case Kind::Lam: {
                cur.push_back(0);
                s = "\\" + t->name + ". " + go(t->a, Pos::Top);
                cur.pop_back();
                if (pos != Pos::Top) s = "(" + s + ")";
                break;
            }
            case Kind::Let: {
                cur.push_back(0);
                std::string u = go(t->a, Pos::Top);
                cur.back() = 1;
                std::string body = go(t->b, Pos::Top);
                cur.pop_back();
                s = "let !" + t->name + " = " + u + " in " + body;
                if (pos != Pos::Top) s = "(" + s + ")";
                break;
            }
            case Kind::App: {
                cur.push_back(0);
                std::string f = go(t->a, Pos::Fn);
                cur.back() = 1;
                std::string x = go(t->b, Pos::Arg);
                cur.pop_back();
                s = f + " " + x;
                if (pos == Pos::Arg || pos == Pos::BoxBody) s = "(" + s + ")";
                break;
            }
            case Kind::Box: {
                cur.push_back(0);
                s = "!" + go(t->a, Pos::BoxBody);
                cur.pop_back();
                break;
            }
        }
        if (here) s = up ? "<" + s + ">" : ">" + s + "<";
        return s;
    }
};

}  // namespace

std::string to_string(const Term& t) {
    Printer p;
    return p.go(t, Pos::Top);
}

std::string render_focus(const Term& t, const Path& focus, bool up) {
    Printer p;
    p.focus = &focus;
    p.up = up;
    return p.go(t, Pos::Top);
}

std::string to_string(const Context& c) {
    Printer p;
    p.focus = &c.hole;
    p.hole_text = "[.]";
    return p.go(c.whole, Pos::Top);
}

namespace {

struct TermParser {
    std::string_view s;
    const Alphabet& constants;
    const std::set<std::string>& free;
    std::size_t i = 0;
    std::vector<std::string> scope;

    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@'; }

    [[noreturn]] void error(const std::string& what) {
        int line = 1, col = 1;
        for (std::size_t k = 0; k < i && k < s.size(); ++k) {
            if (s[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fail(Err::Syntax, "syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
    }
    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek_ident() {
        ws();
        return i < s.size() && ident_char(s[i]);
    }
    std::string ident() {
        ws();
        std::size_t st = i;
        while (i < s.size() && ident_char(s[i])) ++i;
        if (st == i) error("expected an identifier");
        return std::string(s.substr(st, i - st));
    }
    bool keyword(std::string_view kw) {
        ws();
        if (s.substr(i, kw.size()) != kw) return false;
        if (i + kw.size() < s.size() && ident_char(s[i + kw.size()])) return false;
        i += kw.size();
        return true;
    }
    void expect(char c) {
        ws();
        if (i >= s.size() || s[i] != c) error(std::string("expected '") + c + "'");
        ++i;
    }
    std::string binder() {
        std::string x = ident();
        if (x == "let" || x == "in") error("reserved word used as a variable");
        return x;
    }
    Term term() {
        ws();
        if (i < s.size() && s[i] == '\\') {
            ++i;
            std::string x = binder();
            expect('.');
            scope.push_back(x);
            Term body = term();
            scope.pop_back();
            return mk_lam(x, body);
        }
        if (keyword("let")) {
            expect('!');
            std::string x = binder();
            expect('=');
            Term u = term();
            if (!keyword("in")) error("expected 'in'");
            scope.push_back(x);
            Term body = term();
            scope.pop_back();
            return mk_let(x, u, body);
        }
        Term t = atom();
        while (starts_atom()) t = mk_app(t, atom());
        return t;
    }
    bool starts_atom() {
        ws();
        if (i >= s.size()) return false;
        char c = s[i];
        if (c == '(' || c == '!') return true;
        if (!ident_char(c)) return false;
        std::size_t save = i;
        bool kw = keyword("in") || keyword("let");
        i = save;
        return !kw;
    }
    Term atom() {
        ws();
        if (i >= s.size()) error("unexpected end of input");
        if (s[i] == '(') {
            ++i;
            Term t = term();
            expect(')');
            return t;
        }
        if (s[i] == '!') {
            ++i;
            return mk_box(atom());
        }
        if (!ident_char(s[i])) error(std::string("unexpected character '") + s[i] + "'");
        std::size_t at = i;
        std::string x = ident();
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (*it == x) return mk_var(x);
        if (free.count(x)) return mk_var(x);
        if (constants.contains(x)) return mk_const(x);
        i = at;
        fail(Err::UnknownConstant, "unknown constant or unbound variable '" + x + "'");
    }
};

}  // namespace

Term parse_term(std::string_view text, const Alphabet& constants, const std::set<std::string>& free) {
    TermParser p{text, constants, free, 0, {}};
    Term t = p.term();
    p.ws();
    if (p.i != text.size()) p.error("trailing input");
    return t;
}

std::size_t term_size(const Term& t) {
    std::size_t n = 1;
    if (t->a) n += term_size(t->a);
    if (t->b) n += term_size(t->b);
    return n;
}

namespace {

void fv(const Term& t, std::vector<std::string>& bound, std::set<std::string>& out) {
    switch (t->kind) {
        case Kind::Const: return;
        case Kind::Var:
            for (auto& b : bound)
                if (b == t->name) return;
            out.insert(t->name);
            return;
        case Kind::Lam:
            bound.push_back(t->name);
            fv(t->a, bound, out);
            bound.pop_back();
            return;
        case Kind::Let:
            fv(t->a, bound, out);
            bound.push_back(t->name);
            fv(t->b, bound, out);
            bound.pop_back();
            return;
        case Kind::App:
            fv(t->a, bound, out);
            fv(t->b, bound, out);
            return;
        case Kind::Box: fv(t->a, bound, out); return;
    }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
    std::vector<std::string> bound;
    std::set<std::string> out;
    fv(t, bound, out);
    return out;
}

std::set<std::string> constants_of(const Term& t) {
    std::set<std::string> out;
    std::function<void(const Term&)> go = [&](const Term& x) {
        if (x->kind == Kind::Const) out.insert(x->name);
        if (x->a) go(x->a);
        if (x->b) go(x->b);
    };
    go(t);
    return out;
}

namespace {

bool aeq(const Term& x, const Term& y, std::vector<std::string>& bx, std::vector<std::string>& by) {
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case Kind::Const: return x->name == y->name;
        case Kind::Var: {
            int ix = -1, iy = -1;
            for (int k = static_cast<int>(bx.size()) - 1; k >= 0; --k)
                if (bx[k] == x->name) {
                    ix = k;
                    break;
                }
            for (int k = static_cast<int>(by.size()) - 1; k >= 0; --k)
                if (by[k] == y->name) {
                    iy = k;
                    break;
                }
            if (ix < 0 && iy < 0) return x->name == y->name;
            return ix == iy;
        }
        case Kind::Lam: {
            bx.push_back(x->name);
            by.push_back(y->name);
            bool r = aeq(x->a, y->a, bx, by);
            bx.pop_back();
            by.pop_back();
            return r;
        }
        case Kind::Let: {
            if (!aeq(x->a, y->a, bx, by)) return false;
            bx.push_back(x->name);
            by.push_back(y->name);
            bool r = aeq(x->b, y->b, bx, by);
            bx.pop_back();
            by.pop_back();
            return r;
        }
        case Kind::App: return aeq(x->a, y->a, bx, by) && aeq(x->b, y->b, bx, by);
        case Kind::Box: return aeq(x->a, y->a, bx, by);
    }
    return false;
}

}  // namespace

bool alpha_equal(const Term& x, const Term& y) {
    std::vector<std::string> bx, by;
    return aeq(x, y, bx, by);
}

Term canonical(const Term& t) {
    int counter = 0;
    std::vector<std::pair<std::string, std::string>> env;
    std::function<Term(const Term&)> go = [&](const Term& x) -> Term {
        switch (x->kind) {
            case Kind::Const: return mk_const(x->name);
            case Kind::Var:
                for (auto it = env.rbegin(); it != env.rend(); ++it)
                    if (it->first == x->name) return mk_var(it->second);
                return mk_var(x->name);
            case Kind::Lam: {
                std::string n = "x" + std::to_string(counter++);
                env.emplace_back(x->name, n);
                Term body = go(x->a);
                env.pop_back();
                return mk_lam(n, body);
            }
            case Kind::Let: {
                Term u = go(x->a);
                std::string n = "x" + std::to_string(counter++);
                env.emplace_back(x->name, n);
                Term body = go(x->b);
                env.pop_back();
                return mk_let(n, u, body);
            }
            case Kind::App: {
                Term f = go(x->a);
                return mk_app(f, go(x->b));
            }
            case Kind::Box: return mk_box(go(x->a));
        }
        return x;
    };
    return go(t);
}

Term strip(const Term& t) {
    switch (t->kind) {
        case Kind::Const: return mk_const(t->name);
        case Kind::Var: return mk_var(t->name);
        case Kind::Lam: return mk_lam(t->name, strip(t->a));
        case Kind::Let: return mk_let(t->name, strip(t->a), strip(t->b));
        case Kind::App: return mk_app(strip(t->a), strip(t->b));
        case Kind::Box: return mk_box(strip(t->a));
    }
    return t;
}

std::string fresh_name(const std::string& hint) {
    static std::atomic<unsigned long> counter{0};
    std::string base = hint;
    auto us = base.rfind('_');
    if (us != std::string::npos && us + 1 < base.size() &&
        base.find_first_not_of("0123456789", us + 1) == std::string::npos)
        base = base.substr(0, us);
    if (base.empty()) base = "v";
    return base + "_" + std::to_string(++counter);
}

namespace {

Term subst_set(const Term& t, const std::string& x, const Term& u, const std::set<std::string>& fvu);

// Rebinds `name` in `body` to a fresh variable when it would capture a free variable of u.
std::pair<std::string, Term> avoid(const std::string& name, const Term& body, const std::set<std::string>& fvu) {
    if (!fvu.count(name)) return {name, body};
    std::string n = fresh_name(name);
    return {n, subst_set(body, name, mk_var(n), {n})};
}

Term subst_set(const Term& t, const std::string& x, const Term& u, const std::set<std::string>& fvu) {
    switch (t->kind) {
        case Kind::Const: return t;
        case Kind::Var: return t->name == x ? u : t;
        case Kind::Lam: {
            if (t->name == x) return t;
            auto [n, body] = avoid(t->name, t->a, fvu);
            Term nb = subst_set(body, x, u, fvu);
            if (nb == t->a && n == t->name) return t;
            return mk_lam(n, nb);
        }
        case Kind::Let: {
            Term nu = subst_set(t->a, x, u, fvu);
            if (t->name == x) return nu == t->a ? t : mk_let(t->name, nu, t->b);
            auto [n, body] = avoid(t->name, t->b, fvu);
            Term nb = subst_set(body, x, u, fvu);
            if (nu == t->a && nb == t->b && n == t->name) return t;
            return mk_let(n, nu, nb);
        }
        case Kind::App: {
            Term f = subst_set(t->a, x, u, fvu);
            Term a = subst_set(t->b, x, u, fvu);
            if (f == t->a && a == t->b) return t;
            return mk_app(f, a);
        }
        case Kind::Box: {
            Term b = subst_set(t->a, x, u, fvu);
            return b == t->a ? t : mk_box(b);
        }
    }
    return t;
}

}  // namespace

Term rename_bound(const Term& t, const std::string& from, const std::string& to) { return subst_set(t, from, mk_var(to), {to}); }

Term subst(const Term& t, const std::string& x, const Term& u) { return subst_set(t, x, u, free_vars(u)); }

Term subst_consts(const Term& t, const std::map<std::string, Term>& m) {
    switch (t->kind) {
        case Kind::Const: {
            auto it = m.find(t->name);
            return it == m.end() ? t : it->second;
        }
        case Kind::Var: return t;
        case Kind::Lam: return mk_lam(t->name, subst_consts(t->a, m));
        case Kind::Let: return mk_let(t->name, subst_consts(t->a, m), subst_consts(t->b, m));
        case Kind::App: return mk_app(subst_consts(t->a, m), subst_consts(t->b, m));
        case Kind::Box: return mk_box(subst_consts(t->a, m));
    }
    return t;
}

Term encode_tree(const Tree& t) {
    Term r = mk_const(t.label);
    for (auto& k : t.kids) r = mk_app(r, encode_tree(k));
    return r;
}

Tree decode_tree(const Term& t, const Alphabet* sigma) {
    std::vector<Term> args;
    Term head = t;
    while (head->kind == Kind::App) {
        args.push_back(head->b);
        head = head->a;
    }
    if (head->kind != Kind::Const) fail(Err::NotAnEncoding, "not a tree encoding: " + to_string(t));
    if (sigma) {
        if (!sigma->contains(head->name)) fail(Err::NotAnEncoding, "unknown letter '" + head->name + "'");
        if (sigma->rank(head->name) != static_cast<int>(args.size()))
            fail(Err::NotAnEncoding, "arity mismatch for '" + head->name + "' in " + to_string(t));
    }
    Tree out(head->name);
    for (auto it = args.rbegin(); it != args.rend(); ++it) out.kids.push_back(decode_tree(*it, sigma));
    return out;
}

Term instantiate(const Tree& tau, const std::map<std::string, Term>& family) {
    auto it = family.find(tau.label);
    if (it == family.end()) fail(Err::MissingRule, "no term for letter '" + tau.label + "'");
    Term r = it->second;
    for (auto& k : tau.kids) r = mk_app(r, instantiate(k, family));
    return r;
}

}  // namespace lt
