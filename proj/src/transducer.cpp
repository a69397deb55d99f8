#include "lt/transducer.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace lt {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> w;
    for (std::string x; in >> x;) w.push_back(x);
    return w;
}

struct Line {
    int number;
    std::string keyword;
    std::string rest;
};

// Non-empty lines with '#' comments removed, split into keyword and remainder.
std::vector<Line> lines_of(std::string_view text) {
    std::vector<Line> out;
    int n = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++n;
        std::string_view raw = text.substr(pos, end - pos);
        if (auto h = raw.find('#'); h != std::string_view::npos) raw = raw.substr(0, h);
        std::string l = trim(raw);
        if (!l.empty()) {
            std::size_t sp = l.find_first_of(" \t=");
            std::string kw = l.substr(0, sp);
            std::string rest = sp == std::string::npos ? "" : trim(std::string_view(l).substr(sp));
            out.push_back({n, kw, rest});
        }
        pos = end + 1;
    }
    return out;
}

// "lhs = rhs" with the first '='.
std::pair<std::string, std::string> split_eq(const std::string& s) {
    auto eq = s.find('=');
    if (eq == std::string::npos) fail(Err::Syntax, "expected '='");
    return {trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1))};
}

template <class F>
auto at_line(const std::string& origin, int line, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.code, origin + ":" + std::to_string(line) + ": " + e.what());
    }
}

Tier max_tier(Tier a, Tier b) { return a < b ? b : a; }

Type rule_type(const Type& memory, int rank) {
    Type t = memory;
    for (int i = 0; i < rank; ++i) t = arrow(memory, t);
    return t;
}

Term lams(const std::vector<std::string>& xs, Term body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = mk_lam(*it, body);
    return body;
}

std::vector<std::string> fresh_names(const std::string& hint, int n) {
    std::vector<std::string> xs;
    for (int i = 0; i < n; ++i) xs.push_back(fresh_name(hint));
    return xs;
}

// Typecheck, normalize and annotate the normal form.
Term normal_annotated(const Term& t, const Type& ty, const ConstTypes& consts) {
    check_type({}, t, ty, consts);
    return check_type({}, normalize(strip(t)), ty, consts);
}

std::map<std::string, Term> stripped(const std::map<std::string, Term>& m) {
    std::map<std::string, Term> r;
    for (auto& [k, v] : m) r[k] = strip(v);
    return r;
}

// Argument types of a purely affine type ending in o.
std::vector<Type> arg_types(const Type& t) {
    std::vector<Type> args;
    Type cur = t;
    while (cur->kind == TK::Arrow) {
        args.push_back(cur->a);
        cur = cur->b;
    }
    if (cur->kind != TK::Base) fail(Err::Unsupported, "type " + to_string(t) + " does not end in o");
    return args;
}

Type arrows(const std::vector<Type>& args, Type result) {
    for (auto it = args.rbegin(); it != args.rend(); ++it) result = arrow(*it, result);
    return result;
}

}  // namespace

TransducerSpec make_spec(Alphabet input, Alphabet output, Type memory, std::map<std::string, Term> rules, Term out) {
    TransducerSpec s;
    s.input = std::move(input);
    s.output = std::move(output);
    s.memory = std::move(memory);
    for (auto& [a, t] : rules)
        if (!s.input.contains(a)) fail(Err::UnknownConstant, "rule for '" + a + "' which is not an input letter");
    for (auto& a : s.input.letters())
        if (!rules.count(a)) fail(Err::MissingRule, "no rule for input letter '" + a + "'");
    if (!out) fail(Err::MissingRule, "no output term");
    ConstTypes consts = const_types(s.output);
    s.source_rules = std::move(rules);
    s.source_out = std::move(out);
    for (auto& [a, t] : s.source_rules) {
        Type ty = rule_type(s.memory, s.input.rank(a));
        Term n;
        try {
            n = normal_annotated(t, ty, consts);
        } catch (const Error& e) {
            throw Error(e.code, "rule " + a + ": " + e.what());
        }
        s.rules[a] = n;
        s.tier = max_tier(s.tier, classify_term(n));
        s.height = std::max({s.height, max_subterm_height(n), type_height(ty)});
    }
    try {
        s.out = normal_annotated(s.source_out, arrow(s.memory, base()), consts);
    } catch (const Error& e) {
        throw Error(e.code, std::string("out: ") + e.what());
    }
    s.tier = max_tier(s.tier, classify_term(s.out));
    s.height = std::max(s.height, max_subterm_height(s.out));
    return s;
}

TransducerSpec parse_spec(std::string_view text, const std::string& origin) {
    std::optional<Alphabet> input, output;
    Type memory;
    std::vector<std::pair<Line, std::string>> rule_lines;  // with the letter
    std::optional<Line> out_line;
    for (const Line& l : lines_of(text)) {
        at_line(origin, l.number, [&] {
            if (l.keyword == "input") {
                input = Alphabet::parse(l.rest);
            } else if (l.keyword == "output") {
                output = Alphabet::parse(l.rest);
            } else if (l.keyword == "memory") {
                memory = parse_type(l.rest);
            } else if (l.keyword == "rule") {
                auto [lhs, rhs] = split_eq(l.rest);
                if (!valid_letter_name(lhs)) fail(Err::Syntax, "bad letter '" + lhs + "'");
                for (auto& [prev, a] : rule_lines)
                    if (a == lhs) fail(Err::Syntax, "duplicate rule for '" + lhs + "'");
                rule_lines.push_back({Line{l.number, lhs, rhs}, lhs});
            } else if (l.keyword == "out") {
                if (out_line) fail(Err::Syntax, "duplicate out line");
                auto [lhs, rhs] = split_eq(l.rest);
                if (!lhs.empty()) fail(Err::Syntax, "expected 'out = TERM'");
                out_line = Line{l.number, "out", rhs};
            } else {
                fail(Err::Syntax, "unknown keyword '" + l.keyword + "'");
            }
            return 0;
        });
    }
    if (!input) fail(Err::Syntax, origin + ": missing 'input' line");
    if (!output) fail(Err::Syntax, origin + ": missing 'output' line");
    if (!memory) fail(Err::Syntax, origin + ": missing 'memory' line");
    if (!out_line) fail(Err::Syntax, origin + ": missing 'out' line");
    std::map<std::string, Term> rules;
    for (auto& [l, a] : rule_lines) rules[a] = at_line(origin, l.number, [&] { return parse_term(l.rest, *output); });
    Term out = at_line(origin, out_line->number, [&] { return parse_term(out_line->rest, *output); });
    try {
        return make_spec(*input, *output, memory, rules, out);
    } catch (const Error& e) {
        throw Error(e.code, origin + ": " + e.what());
    }
}

std::string to_text(const TransducerSpec& spec) {
    std::ostringstream o;
    o << "input " << spec.input.to_string() << "\n";
    o << "output " << spec.output.to_string() << "\n";
    o << "memory " << to_string(spec.memory) << "\n";
    for (auto& [a, t] : spec.rules) o << "rule " << a << " = " << to_string(strip(t)) << "\n";
    o << "out = " << to_string(strip(spec.out)) << "\n";
    return o.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Err::Io, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TransducerSpec load_spec(const std::string& path) { return parse_spec(read_file(path), path); }

Term program_term(const TransducerSpec& spec, const Tree& tau) {
    validate(tau, spec.input);
    return mk_app(strip(spec.out), instantiate(tau, stripped(spec.rules)));
}

Tree eval_normalize(const TransducerSpec& spec, const Tree& tau, std::uint64_t fuel) {
    return decode_tree(normalize(program_term(spec, tau), fuel), &spec.output);
}

namespace {

Term block_term(const TransducerSpec& spec, const Tree& tau) {
    Term cur = spec.rules.at(tau.label);
    for (auto& k : tau.kids) {
        Term b = block_term(spec, k);
        cur = with_ann(mk_app(cur, b), cur, b, cur->ty->b, 0);
    }
    return cur;
}

Term global_term(const TransducerSpec& spec, const Tree& tau) {
    validate(tau, spec.input);
    Term b = block_term(spec, tau);
    return with_ann(mk_app(spec.out, b), spec.out, b, base(), 0);
}

}  // namespace

Tree eval_iam(const TransducerSpec& spec, const Tree& tau, Variant variant, std::uint64_t fuel) {
    return iam_run(global_term(spec, tau), variant, fuel);
}

Term skeleton_term(const TransducerSpec& spec, const std::string& letter) {
    auto it = spec.rules.find(letter);
    if (it == spec.rules.end()) fail(Err::MissingRule, "no rule for '" + letter + "'");
    Term cur = it->second;
    for (int i = 1; i <= spec.input.rank(letter); ++i) {
        Term ph = with_ann(mk_const(placeholder_name(i)), nullptr, nullptr, spec.memory, 0);
        cur = with_ann(mk_app(cur, ph), cur, ph, cur->ty->b, 0);
    }
    return cur;
}

GlobalProgram global_program(const TransducerSpec& spec, const Tree& tau) {
    GlobalProgram g{IndexedTree(tau), FlatTerm(global_term(spec, tau)), {}};
    g.origin.assign(g.flat.size(), Origin{});
    std::map<std::string, FlatTerm> skeletons;
    auto skeleton = [&](const std::string& a) -> const FlatTerm& {
        auto it = skeletons.find(a);
        if (it == skeletons.end()) it = skeletons.emplace(a, FlatTerm(skeleton_term(spec, a))).first;
        return it->second;
    };
    int next = 1;
    FlatTerm u(spec.out);
    for (int i = 0; i < u.size(); ++i) g.origin[next++] = Origin{Origin::U, -1, i};
    std::function<void(int, const FlatTerm&, int)> walk = [&](int tn, const FlatTerm& sk, int local) {
        int ph = sk[local].placeholder;
        if (ph) {
            int c = g.tree.nodes[tn].kids[ph - 1];
            walk(c, skeleton(g.tree.nodes[c].label), 0);
            return;
        }
        g.origin[next++] = Origin{Origin::Block, tn, local};
        for (int k : sk[local].kid)
            if (k >= 0) walk(tn, sk, k);
    };
    walk(0, skeleton(g.tree.nodes[0].label), 0);
    if (next != g.flat.size()) fail(Err::Invariant, "origin map does not cover the global program");
    return g;
}

TransducerSpec compose(const TransducerSpec& f, const TransducerSpec& g) {
    if (!(f.output == g.input))
        fail(Err::AlphabetMismatch, "output alphabet " + f.output.to_string() + " differs from input alphabet " +
                                        g.input.to_string());
    std::map<std::string, Term> gm = stripped(g.rules);
    std::map<std::string, Term> rules;
    for (auto& [a, t] : f.rules) rules[a] = subst_consts(strip(t), gm);
    std::string x = fresh_name("x");
    Term out = mk_lam(x, mk_app(strip(g.out), mk_app(subst_consts(strip(f.out), gm), mk_var(x))));
    return make_spec(f.input, g.output, subst_base(f.memory, g.memory), rules, out);
}

TransducerSpec identity_transducer(const Alphabet& sigma) {
    std::map<std::string, Term> rules;
    for (auto& [a, k] : sigma.ranks) {
        auto xs = fresh_names("x", k);
        std::vector<Term> vs;
        for (auto& x : xs) vs.push_back(mk_var(x));
        rules[a] = lams(xs, apps(mk_const(a), vs));
    }
    return make_spec(sigma, sigma, base(), rules, mk_lam("x", mk_var("x")));
}

GlsSpec parse_gls(std::string_view text, const std::string& origin) {
    GlsSpec s;
    std::optional<Alphabet> input, output;
    struct Pending {
        int line;
        std::string state, letter;
        std::vector<std::string> next;
        std::string term;
    };
    std::vector<Pending> pending;
    std::optional<Line> out_line;
    for (const Line& l : lines_of(text)) {
        at_line(origin, l.number, [&] {
            if (l.keyword == "input") {
                input = Alphabet::parse(l.rest);
            } else if (l.keyword == "output") {
                output = Alphabet::parse(l.rest);
            } else if (l.keyword == "state") {
                auto colon = l.rest.find(':');
                if (colon == std::string::npos) fail(Err::Syntax, "expected 'state NAME : TYPE'");
                std::string q = trim(std::string_view(l.rest).substr(0, colon));
                if (!valid_letter_name(q)) fail(Err::Syntax, "bad state name '" + q + "'");
                if (s.state_types.count(q)) fail(Err::Syntax, "duplicate state '" + q + "'");
                s.states.push_back(q);
                s.state_types[q] = parse_type(l.rest.substr(colon + 1));
            } else if (l.keyword == "init") {
                s.init = trim(l.rest);
            } else if (l.keyword == "rule") {
                auto [lhs, rhs] = split_eq(l.rest);
                auto w = words(lhs);
                if (w.size() < 2) fail(Err::Syntax, "expected 'rule STATE LETTER [-> STATES] = TERM'");
                Pending p{l.number, w[0], w[1], {}, rhs};
                if (w.size() > 2) {
                    if (w[2] != "->") fail(Err::Syntax, "expected '->'");
                    p.next.assign(w.begin() + 3, w.end());
                }
                pending.push_back(p);
            } else if (l.keyword == "out") {
                auto [lhs, rhs] = split_eq(l.rest);
                if (!lhs.empty()) fail(Err::Syntax, "expected 'out = TERM'");
                out_line = Line{l.number, "out", rhs};
            } else {
                fail(Err::Syntax, "unknown keyword '" + l.keyword + "'");
            }
            return 0;
        });
    }
    if (!input || !output) fail(Err::Syntax, origin + ": missing alphabet line");
    if (!out_line) fail(Err::Syntax, origin + ": missing 'out' line");
    if (s.init.empty()) fail(Err::Syntax, origin + ": missing 'init' line");
    s.input = *input;
    s.output = *output;
    for (auto& p : pending) {
        at_line(origin, p.line, [&] {
            auto key = std::make_pair(p.state, p.letter);
            if (s.rules.count(key)) fail(Err::Syntax, "duplicate rule for (" + p.state + ", " + p.letter + ")");
            s.rules[key] = GlsSpec::Rule{parse_term(p.term, s.output), p.next};
            return 0;
        });
    }
    s.out = at_line(origin, out_line->number, [&] { return parse_term(out_line->rest, s.output); });
    try {
        check_gls(s);
    } catch (const Error& e) {
        throw Error(e.code, origin + ": " + e.what());
    }
    return s;
}

GlsSpec load_gls(const std::string& path) { return parse_gls(read_file(path), path); }

void check_gls(const GlsSpec& spec) {
    if (!spec.state_types.count(spec.init)) fail(Err::Syntax, "unknown initial state '" + spec.init + "'");
    ConstTypes consts = const_types(spec.output);
    for (auto& [key, r] : spec.rules) {
        auto& [q, a] = key;
        if (!spec.state_types.count(q)) fail(Err::Syntax, "unknown state '" + q + "'");
        if (static_cast<int>(r.next.size()) != spec.input.rank(a))
            fail(Err::TypeMismatch, "rule (" + q + ", " + a + ") lists " + std::to_string(r.next.size()) +
                                        " states for a letter of rank " + std::to_string(spec.input.rank(a)));
        std::vector<Type> args;
        for (auto& n : r.next) {
            if (!spec.state_types.count(n)) fail(Err::Syntax, "unknown state '" + n + "'");
            args.push_back(spec.state_types.at(n));
        }
        try {
            check_type({}, r.term, arrows(args, spec.state_types.at(q)), consts);
        } catch (const Error& e) {
            throw Error(e.code, "rule (" + q + ", " + a + "): " + e.what());
        }
    }
    check_type({}, spec.out, arrow(spec.state_types.at(spec.init), base()), consts);
}

namespace {

Term gls_down(const GlsSpec& spec, const Tree& tau, const std::string& q) {
    auto it = spec.rules.find({q, tau.label});
    if (it == spec.rules.end()) fail(Err::MissingRule, "no rule for (" + q + ", " + tau.label + ")");
    Term r = strip(it->second.term);
    for (std::size_t i = 0; i < tau.kids.size(); ++i) r = mk_app(r, gls_down(spec, tau.kids[i], it->second.next[i]));
    return r;
}

}  // namespace

Term gls_term(const GlsSpec& spec, const Tree& tau) {
    validate(tau, spec.input);
    return gls_down(spec, tau, spec.init);
}

Tree gls_run(const GlsSpec& spec, const Tree& tau, std::uint64_t fuel) {
    return decode_tree(normalize(mk_app(strip(spec.out), gls_term(spec, tau)), fuel), &spec.output);
}

Term dummy_term(const Type& c, const std::string& leaf) {
    return lams(fresh_names("d", static_cast<int>(arg_types(c).size())), mk_const(leaf));
}

Conversions conversions(const GlsSpec& spec) {
    auto leaves = spec.output.nullary();
    if (leaves.empty()) fail(Err::NoNullaryLetter, "the output alphabet has no nullary letter");
    Conversions c;
    std::vector<Type> all;
    std::map<std::string, std::pair<int, int>> span;  // offset and count
    for (auto& q : spec.states) {
        const Type& t = spec.state_types.at(q);
        if (classify_type(t) != Tier::PurelyAffine) fail(Err::Unsupported, "state type of " + q + " is not purely affine");
        auto args = arg_types(t);
        span[q] = {static_cast<int>(all.size()), static_cast<int>(args.size())};
        all.insert(all.end(), args.begin(), args.end());
    }
    c.common = arrows(all, base());
    int n = static_cast<int>(all.size());
    for (auto& q : spec.states) {
        auto [off, k] = span[q];
        auto xs = fresh_names("x", n);
        std::string z = fresh_name("z");
        std::vector<Term> own;
        for (int i = 0; i < k; ++i) own.push_back(mk_var(xs[off + i]));
        c.iota[q] = mk_lam(z, lams(xs, apps(mk_var(z), own)));
        auto ys = fresh_names("x", k);
        std::string y = fresh_name("y");
        std::vector<Term> args;
        for (int i = 0; i < n; ++i)
            args.push_back(i >= off && i < off + k ? mk_var(ys[i - off]) : dummy_term(all[i], leaves.front()));
        c.cast[q] = mk_lam(y, lams(ys, apps(mk_var(y), args)));
    }
    return c;
}

GlsSpec make_type_constant(const GlsSpec& spec) {
    Conversions c = conversions(spec);
    GlsSpec r = spec;
    for (auto& q : r.states) r.state_types[q] = c.common;
    for (auto& [key, rule] : r.rules) {
        auto ys = fresh_names("y", static_cast<int>(rule.next.size()));
        Term body = strip(rule.term);
        for (std::size_t i = 0; i < ys.size(); ++i) body = mk_app(body, mk_app(c.cast.at(rule.next[i]), mk_var(ys[i])));
        rule.term = normalize(lams(ys, mk_app(c.iota.at(key.first), body)));
    }
    std::string y = fresh_name("y");
    r.out = normalize(mk_lam(y, mk_app(strip(spec.out), mk_app(c.cast.at(spec.init), mk_var(y)))));
    check_gls(r);
    return r;
}

namespace {

std::string split_letter(const std::string& a, const std::string& q) { return a + "@" + q; }

Tree relabel_tree(const GlsSpec& g, const Tree& tau, const std::string& q) {
    auto it = g.rules.find({q, tau.label});
    if (it == g.rules.end()) fail(Err::MissingRule, "no rule for (" + q + ", " + tau.label + ")");
    Tree r(split_letter(tau.label, q));
    for (std::size_t i = 0; i < tau.kids.size(); ++i) r.kids.push_back(relabel_tree(g, tau.kids[i], it->second.next[i]));
    return r;
}

}  // namespace

Relabeling split_state_relabeling(const GlsSpec& g) {
    Type common = g.state_types.at(g.init);
    for (auto& q : g.states)
        if (!type_eq(g.state_types.at(q), common)) fail(Err::TypeMismatch, "state types are not all equal");
    Alphabet in;
    std::map<std::string, Term> rules;
    for (auto& [key, rule] : g.rules) {
        std::string l = split_letter(key.second, key.first);
        in.ranks[l] = g.input.rank(key.second);
        rules[l] = rule.term;
    }
    Relabeling r;
    r.transducer = make_spec(in, g.output, common, rules, g.out);
    r.relabel = [g](const Tree& tau) {
        validate(tau, g.input);
        return relabel_tree(g, tau, g.init);
    };
    return r;
}

std::vector<std::string> discarded_variables(const Term& t) {
    std::vector<std::string> r;
    std::function<void(const Term&)> go = [&](const Term& s) {
        if (s->kind == Kind::Lam && !free_vars(s->a).count(s->name)) r.push_back(s->name);
        for (int i = 0; i < arity(s); ++i) go(child(s, i));
    };
    go(t);
    return r;
}

namespace {

// \!x. t, i.e. \y. let !x = y in t
Term bang_lam(const std::string& x, Term body) {
    std::string y = fresh_name("y");
    return mk_lam(y, mk_let(x, mk_var(y), body));
}

Term wn(const Term& t, const Alphabet& sigma) {
    switch (t->kind) {
        case Kind::Const: {
            int k = sigma.rank(t->name);
            auto xs = fresh_names("x", k);
            std::vector<Term> vs;
            for (auto& x : xs) vs.push_back(mk_var(x));
            Term r = mk_box(apps(mk_const(t->name), vs));
            for (auto it = xs.rbegin(); it != xs.rend(); ++it) r = bang_lam(*it, r);
            return r;
        }
        case Kind::Var:
            if (!t->ty) fail(Err::Invariant, "wn_translate needs an annotated term");
            return t->ty->kind == TK::Base ? mk_box(mk_var(t->name)) : mk_var(t->name);
        case Kind::Lam:
            if (t->ty->a->kind == TK::Base) return bang_lam(t->name, wn(t->a, sigma));
            return mk_lam(t->name, wn(t->a, sigma));
        case Kind::App: return mk_app(wn(t->a, sigma), wn(t->b, sigma));
        default: fail(Err::Unsupported, "the ?-translation applies to terms without exponentials");
    }
}

Term eta(const Term& t, const Type& a, std::map<std::string, Type> env, const ConstTypes& consts) {
    if (a->kind == TK::Arrow) {
        if (t->kind == Kind::Lam) {
            env[t->name] = a->a;
            return mk_lam(t->name, eta(t->a, a->b, env, consts));
        }
        std::string z = fresh_name("z");
        env[z] = a->a;
        return mk_lam(z, eta(mk_app(t, mk_var(z)), a->b, env, consts));
    }
    if (a->kind != TK::Base) fail(Err::Unsupported, "eta_long applies to purely affine types");
    std::vector<Term> args;
    Term h = t;
    while (h->kind == Kind::App) {
        args.push_back(h->b);
        h = h->a;
    }
    std::reverse(args.begin(), args.end());
    Type ht;
    if (h->kind == Kind::Var && env.count(h->name)) ht = env.at(h->name);
    else if (h->kind == Kind::Const && consts.count(h->name)) ht = consts.at(h->name);
    else fail(Err::TypeMismatch, "eta_long: not a normal term of the given type: " + to_string(t));
    std::vector<Term> out;
    for (auto& x : args) {
        if (ht->kind != TK::Arrow) fail(Err::TypeMismatch, "eta_long: too many arguments in " + to_string(t));
        out.push_back(eta(x, ht->a, env, consts));
        ht = ht->b;
    }
    return apps(h, out);
}

}  // namespace

Term wn_translate(const Term& annotated, const Alphabet& sigma) { return wn(annotated, sigma); }

Term eta_long(const Term& t, const Type& a, const ConstTypes& constants) { return eta(t, a, {}, constants); }

}  // namespace lt
