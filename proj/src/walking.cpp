#include "lt/walking.hpp"

#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lt/transducer.hpp"

namespace lt {

namespace {

bool plain_word(const std::string& s) {
    if (s.empty()) return false;
    for (unsigned char c : s)
        if (!(std::isalnum(c) || c == '_' || c == '@' || c == '-' || c == '.' || c == '<' || c == '>')) return false;
    return true;
}

std::string quoted(const std::string& s) { return plain_word(s) ? s : nlohmann::json(s).dump(); }

}  // namespace

std::string to_string(const Prov& p) {
    switch (p.kind) {
        case Prov::FromParent: return "from-parent";
        case Prov::Self: return "self";
        case Prov::FromChild: return "from-child " + std::to_string(p.child);
    }
    return "?";
}

std::string to_string(const Move& m) {
    switch (m.kind) {
        case Move::ToParent: return "to-parent";
        case Move::Stay: return "stay";
        case Move::ToChild: return "to-child " + std::to_string(m.child);
        case Move::Put: return "put " + quoted(m.color);
        case Move::Remove: return "remove";
    }
    return "?";
}


std::string to_string(const Rhs& r) {
    if (r.conf) return "(" + quoted(r.conf->state) + ", " + to_string(r.conf->move) + ")";
    std::string s = r.label;
    if (!r.kids.empty()) {
        s += "(";
        for (std::size_t i = 0; i < r.kids.size(); ++i) s += (i ? ", " : "") + to_string(r.kids[i]);
        s += ")";
    }
    return s;
}

namespace {

struct Tok {
    enum Kind { Word, Str, Punct, End } kind;
    std::string text;
};

std::vector<Tok> lex(const std::string& line) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < line.size() && line[j] != '"') j += line[j] == '\\' ? 2 : 1;
            if (j >= line.size()) fail(Err::Syntax, "unterminated string");
            try {
                out.push_back({Tok::Str, nlohmann::json::parse(line.substr(i, j + 1 - i)).get<std::string>()});
            } catch (const nlohmann::json::exception&) {
                fail(Err::Syntax, "bad string literal");
            }
            i = j + 1;
        } else if (std::string_view("(),={}").find(c) != std::string_view::npos) {
            out.push_back({Tok::Punct, std::string(1, c)});
            ++i;
        } else {
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
                   std::string_view("(),={}\"").find(line[j]) == std::string_view::npos)
                ++j;
            out.push_back({Tok::Word, line.substr(i, j - i)});
            i = j;
        }
    }
    out.push_back({Tok::End, ""});
    return out;
}

struct Cursor {
    std::vector<Tok> toks;
    std::size_t i = 0;

    const Tok& peek() const { return toks[i]; }
    bool at_punct(char c) const { return peek().kind == Tok::Punct && peek().text[0] == c; }
    void expect(char c) {
        if (!at_punct(c)) fail(Err::Syntax, std::string("expected '") + c + "' near '" + peek().text + "'");
        ++i;
    }
    std::string name() {
        if (peek().kind != Tok::Word && peek().kind != Tok::Str) fail(Err::Syntax, "expected a name near '" + peek().text + "'");
        return toks[i++].text;
    }
    std::string word() {
        if (peek().kind != Tok::Word) fail(Err::Syntax, "expected a word near '" + peek().text + "'");
        return toks[i++].text;
    }
    int number() {
        std::string w = word();
        if (w.empty() || w.find_first_not_of("0123456789") != std::string::npos) fail(Err::Syntax, "expected a number, got '" + w + "'");
        return std::stoi(w);
    }
    void end() {
        if (peek().kind != Tok::End) fail(Err::Syntax, "unexpected '" + peek().text + "'");
    }
};

Prov parse_prov(Cursor& c) {
    std::string w = c.word();
    if (w == "from-parent") return {Prov::FromParent, 0};
    if (w == "self") return {Prov::Self, 0};
    if (w == "from-child") return {Prov::FromChild, c.number()};
    fail(Err::Syntax, "unknown provenance '" + w + "'");
}

Move parse_move(Cursor& c) {
    std::string w = c.word();
    if (w == "to-parent") return {Move::ToParent, 0, {}};
    if (w == "stay") return {Move::Stay, 0, {}};
    if (w == "to-child") return {Move::ToChild, c.number(), {}};
    if (w == "put") return {Move::Put, 0, c.name()};
    if (w == "remove") return {Move::Remove, 0, {}};
    fail(Err::Syntax, "unknown move '" + w + "'");
}

Rhs parse_rhs(Cursor& c) {
    if (c.at_punct('(')) {
        c.expect('(');
        std::string q = c.name();
        c.expect(',');
        Move m = parse_move(c);
        c.expect(')');
        return Rhs::leaf(Target{q, m});
    }
    Rhs r = Rhs::node(c.word());
    if (c.at_punct('(')) {
        c.expect('(');
        r.kids.push_back(parse_rhs(c));
        while (c.at_punct(',')) {
            c.expect(',');
            r.kids.push_back(parse_rhs(c));
        }
        c.expect(')');
    }
    return r;
}

std::vector<std::string> parse_name_set(Cursor& c) {
    std::vector<std::string> out;
    c.expect('{');
    if (!c.at_punct('}')) {
        out.push_back(c.name());
        while (c.at_punct(',')) {
            c.expect(',');
            out.push_back(c.name());
        }
    }
    c.expect('}');
    return out;
}

struct RawLine {
    int number;
    std::string raw;
};

std::vector<RawLine> raw_lines(std::string_view text) {
    std::vector<RawLine> out;
    std::istringstream in{std::string(text)};
    int n = 0;
    for (std::string l; std::getline(in, l);) {
        ++n;
        // '#' starts a comment unless it sits inside a quoted name
        bool str = false;
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (str && l[i] == '\\') ++i;
            else if (l[i] == '"') str = !str;
            else if (!str && l[i] == '#') {
                l.resize(i);
                break;
            }
        }
        if (l.find_first_not_of(" \t\r") != std::string::npos) out.push_back({n, l});
    }
    return out;
}

template <class F>
void at_line(const std::string& origin, int line, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        throw Error(e.code, origin + ":" + std::to_string(line) + ": " + e.what());
    }
}

struct Parsed {
    Alphabet input, output;
    std::vector<std::string> states, colors;
    std::string initial;
    std::map<IpttKey, Rhs> delta;
    bool input_seen = false, output_seen = false;
};

Parsed parse_walk(std::string_view text, const std::string& origin, bool iptt) {
    Parsed p;
    for (const RawLine& l : raw_lines(text)) {
        at_line(origin, l.number, [&] {
            std::string body = l.raw.substr(l.raw.find_first_not_of(" \t"));
            std::string kw = body.substr(0, body.find_first_of(" \t{"));
            std::string rest = body.substr(kw.size());
            if (kw == "input" || kw == "output") {
                (kw == "input" ? p.input : p.output) = Alphabet::parse(rest);
                (kw == "input" ? p.input_seen : p.output_seen) = true;
                return;
            }
            Cursor c{lex(rest)};
            if (kw == "colors") {
                if (!iptt) fail(Err::Syntax, "colors are only allowed in pebble transducers");
                p.colors = parse_name_set(c);
                c.end();
            } else if (kw == "state") {
                std::string q = c.name();
                for (auto& s : p.states)
                    if (s == q) fail(Err::Syntax, "duplicate state '" + q + "'");
                p.states.push_back(q);
                if (c.peek().kind == Tok::Word && c.peek().text == "init") {
                    c.word();
                    if (!p.initial.empty()) fail(Err::Syntax, "two initial states");
                    p.initial = q;
                }
                c.end();
            } else if (kw == "delta" || kw == "delta-root") {
                if (iptt && kw == "delta-root") fail(Err::Syntax, "pebble transducers mark the root with a key suffix");
                TwtKey k;
                k.letter = c.name();
                k.state = c.name();
                k.prov = parse_prov(c);
                std::vector<bool> roots{kw == "delta-root"};
                std::string pebble;
                if (iptt) {
                    std::string r = c.word();
                    if (r == "root") roots = {true};
                    else if (r == "nonroot") roots = {false};
                    else if (r == "any") roots = k.prov.kind == Prov::FromParent ? std::vector<bool>{false} : std::vector<bool>{false, true};
                    else fail(Err::Syntax, "expected root, nonroot or any");
                    if (c.word() != "pebble") fail(Err::Syntax, "expected 'pebble'");
                    std::string z = c.name();
                    pebble = z == "NONE" ? "" : z == "ANY" ? kAnyPebble : z;
                }
                c.expect('=');
                Rhs rhs = parse_rhs(c);
                c.end();
                for (bool r : roots) {
                    k.root = r;
                    IpttKey key{k, pebble};
                    if (!p.delta.emplace(key, rhs).second) fail(Err::Syntax, "duplicate transition");
                }
            } else {
                fail(Err::Syntax, "unknown keyword '" + kw + "'");
            }
        });
    }
    if (!p.input_seen || !p.output_seen) fail(Err::Syntax, origin + ": missing alphabet line");
    if (p.initial.empty()) fail(Err::Syntax, origin + ": no initial state");
    return p;
}

void check_rhs(const Rhs& r, const Alphabet& out, const std::set<std::string>& states, int rank, bool root,
               const std::set<std::string>* colors, const std::string& pebble) {
    if (r.conf) {
        const Target& t = *r.conf;
        if (!states.count(t.state)) fail(Err::Syntax, "undeclared state '" + t.state + "'");
        switch (t.move.kind) {
            case Move::ToParent:
                if (root) fail(Err::Syntax, "to-parent at the root");
                break;
            case Move::ToChild:
                if (t.move.child < 1 || t.move.child > rank) fail(Err::Syntax, "to-child " + std::to_string(t.move.child) + " out of range");
                break;
            case Move::Put:
                if (!colors) fail(Err::Syntax, "put in a transducer without pebbles");
                if (!colors->count(t.move.color)) fail(Err::Syntax, "undeclared color '" + t.move.color + "'");
                break;
            case Move::Remove:
                if (!colors) fail(Err::Syntax, "remove in a transducer without pebbles");
                if (pebble.empty()) fail(Err::Syntax, "remove without a visible pebble");
                break;
            case Move::Stay: break;
        }
        return;
    }
    if (!out.contains(r.label)) fail(Err::UnknownConstant, "unknown output letter '" + r.label + "'");
    if (out.rank(r.label) != static_cast<int>(r.kids.size()))
        fail(Err::Syntax, "output letter '" + r.label + "' used with " + std::to_string(r.kids.size()) + " children");
    for (auto& k : r.kids) check_rhs(k, out, states, rank, root, colors, pebble);
}

void check_key(const TwtKey& k, const Alphabet& in, const std::set<std::string>& states) {
    if (!in.contains(k.letter)) fail(Err::UnknownConstant, "unknown input letter '" + k.letter + "'");
    if (!states.count(k.state)) fail(Err::Syntax, "undeclared state '" + k.state + "'");
    if (k.prov.kind == Prov::FromChild && (k.prov.child < 1 || k.prov.child > in.rank(k.letter)))
        fail(Err::Syntax, "from-child " + std::to_string(k.prov.child) + " out of range for '" + k.letter + "'");
    if (k.root && k.prov.kind == Prov::FromParent) fail(Err::Syntax, "from-parent at the root");
}

std::string key_text(const TwtKey& k) {
    return (k.root ? "delta-root " : "delta ") + quoted(k.letter) + " " + quoted(k.state) + " " + to_string(k.prov);
}

}  // namespace

void validate(const TwtSpec& spec) {
    std::set<std::string> states(spec.states.begin(), spec.states.end());
    if (!states.count(spec.initial)) fail(Err::Syntax, "undeclared initial state '" + spec.initial + "'");
    for (auto& [k, rhs] : spec.delta) {
        try {
            check_key(k, spec.input, states);
            check_rhs(rhs, spec.output, states, spec.input.rank(k.letter), k.root, nullptr, "");
        } catch (const Error& e) {
            throw Error(e.code, key_text(k) + ": " + e.what());
        }
    }
}

void validate(const IpttSpec& spec) {
    std::set<std::string> states(spec.states.begin(), spec.states.end());
    std::set<std::string> colors(spec.colors.begin(), spec.colors.end());
    if (!states.count(spec.initial)) fail(Err::Syntax, "undeclared initial state '" + spec.initial + "'");
    for (auto& [k, rhs] : spec.delta) {
        try {
            check_key(k.key, spec.input, states);
            if (!k.pebble.empty() && k.pebble != kAnyPebble && !colors.count(k.pebble))
                fail(Err::Syntax, "undeclared color '" + k.pebble + "'");
            check_rhs(rhs, spec.output, states, spec.input.rank(k.key.letter), k.key.root, &colors, k.pebble);
        } catch (const Error& e) {
            throw Error(e.code, key_text(k.key) + ": " + e.what());
        }
    }
}

TwtSpec parse_twt(std::string_view text, const std::string& origin) {
    Parsed p = parse_walk(text, origin, false);
    TwtSpec s{p.input, p.output, p.states, p.initial, {}};
    for (auto& [k, rhs] : p.delta) s.delta.emplace(k.key, rhs);
    try {
        validate(s);
    } catch (const Error& e) {
        throw Error(e.code, origin + ": " + e.what());
    }
    return s;
}

IpttSpec parse_iptt(std::string_view text, const std::string& origin) {
    Parsed p = parse_walk(text, origin, true);
    IpttSpec s{p.input, p.output, p.states, p.initial, p.colors, p.delta};
    try {
        validate(s);
    } catch (const Error& e) {
        throw Error(e.code, origin + ": " + e.what());
    }
    return s;
}

TwtSpec load_twt(const std::string& path) { return parse_twt(read_file(path), path); }
IpttSpec load_iptt(const std::string& path) { return parse_iptt(read_file(path), path); }

namespace {

void header(std::ostringstream& o, const Alphabet& in, const Alphabet& out, const std::vector<std::string>& states,
            const std::string& initial) {
    o << "input " << in.to_string() << "\n";
    o << "output " << out.to_string() << "\n";
    for (auto& q : states) o << "state " << quoted(q) << (q == initial ? " init" : "") << "\n";
}

}  // namespace

std::string to_text(const TwtSpec& spec) {
    std::ostringstream o;
    header(o, spec.input, spec.output, spec.states, spec.initial);
    for (auto& [k, rhs] : spec.delta) o << key_text(k) << " = " << to_string(rhs) << "\n";
    return o.str();
}

std::string to_text(const IpttSpec& spec) {
    std::ostringstream o;
    header(o, spec.input, spec.output, spec.states, spec.initial);
    o << "colors {";
    for (std::size_t i = 0; i < spec.colors.size(); ++i) o << (i ? ", " : " ") << quoted(spec.colors[i]);
    o << (spec.colors.empty() ? "}" : " }") << "\n";
    for (auto& [k, rhs] : spec.delta) {
        std::string z = k.pebble.empty() ? "NONE" : k.pebble == kAnyPebble ? "ANY" : quoted(k.pebble);
        o << "delta " << quoted(k.key.letter) << " " << quoted(k.key.state) << " " << to_string(k.key.prov)
          << (k.key.root ? " root" : " nonroot") << " pebble " << z << " = " << to_string(rhs) << "\n";
    }
    return o.str();
}

std::string render(const IndexedTree& t, const TwtConfig& c) {
    return "(" + c.state + ", " + to_string(c.prov) + ", " + t.name(c.node) + ")";
}

std::string render(const IndexedTree& t, const IpttConfig& c) {
    std::string s = "(" + c.state + ", " + to_string(c.prov) + ", " + t.name(c.node) + ", [";
    for (auto it = c.pebbles.rbegin(); it != c.pebbles.rend(); ++it)
        s += (it == c.pebbles.rbegin() ? "(" : ", (") + it->first + ", " + t.name(it->second) + ")";
    return s + "])";
}

namespace {

// Resolves the moves of an image; nullopt when a move leaves the tree or is not allowed.
template <class K, class Resolve>
std::optional<Gen<K>> instantiate_rhs(const Rhs& r, Resolve&& resolve) {
    if (r.conf) {
        std::optional<K> k = resolve(*r.conf);
        if (!k) return std::nullopt;
        return Gen<K>::leaf(std::move(*k));
    }
    Gen<K> g = Gen<K>::node(r.label);
    for (auto& kid : r.kids) {
        auto sub = instantiate_rhs<K>(kid, resolve);
        if (!sub) return std::nullopt;
        g.kids.push_back(std::move(*sub));
    }
    return g;
}

// Node and provenance after a walking move.
std::optional<std::pair<int, Prov>> walk(const IndexedTree& t, int node, const Move& m) {
    const auto& n = t.nodes[node];
    switch (m.kind) {
        case Move::ToChild:
            if (m.child < 1 || m.child > static_cast<int>(n.kids.size())) return std::nullopt;
            return std::make_pair(n.kids[m.child - 1], Prov{Prov::FromParent, 0});
        case Move::ToParent:
            if (n.parent < 0) return std::nullopt;
            return std::make_pair(n.parent, Prov{Prov::FromChild, n.index_in_parent});
        default: return std::make_pair(node, Prov{Prov::Self, 0});
    }
}

}  // namespace

std::optional<Gen<TwtConfig>> twt_step(const TwtSpec& spec, const IndexedTree& t, const TwtConfig& c) {
    auto it = spec.delta.find(TwtKey{t.nodes[c.node].label, c.state, c.prov, c.node == 0});
    if (it == spec.delta.end()) return std::nullopt;
    return instantiate_rhs<TwtConfig>(it->second, [&](const Target& g) -> std::optional<TwtConfig> {
        if (g.move.kind == Move::Put || g.move.kind == Move::Remove) return std::nullopt;
        auto w = walk(t, c.node, g.move);
        if (!w) return std::nullopt;
        return TwtConfig{g.state, w->second, w->first};
    });
}

std::optional<std::string> visible_pebble(const IpttConfig& c) {
    if (c.pebbles.empty() || c.pebbles.back().second != c.node) return std::nullopt;
    return c.pebbles.back().first;
}

std::optional<Gen<IpttConfig>> iptt_step(const IpttSpec& spec, const IndexedTree& t, const IpttConfig& c) {
    auto z = visible_pebble(c);
    TwtKey k{t.nodes[c.node].label, c.state, c.prov, c.node == 0};
    auto it = spec.delta.find(IpttKey{k, z ? *z : ""});
    if (it == spec.delta.end()) it = spec.delta.find(IpttKey{k, kAnyPebble});
    if (it == spec.delta.end()) return std::nullopt;
    return instantiate_rhs<IpttConfig>(it->second, [&](const Target& g) -> std::optional<IpttConfig> {
        IpttConfig r{g.state, Prov{Prov::Self, 0}, c.node, c.pebbles};
        if (g.move.kind == Move::Put) {
            r.pebbles.emplace_back(g.move.color, c.node);
            return r;
        }
        if (g.move.kind == Move::Remove) {
            if (!z) return std::nullopt;
            r.pebbles.pop_back();
            return r;
        }
        auto w = walk(t, c.node, g.move);
        if (!w) return std::nullopt;
        r.node = w->first;
        r.prov = w->second;
        return r;
    });
}

TwtConfig twt_initial(const TwtSpec& spec) { return TwtConfig{spec.initial, Prov{Prov::Self, 0}, 0}; }
IpttConfig iptt_initial(const IpttSpec& spec) { return IpttConfig{spec.initial, Prov{Prov::Self, 0}, 0, {}}; }

RunResult<TwtConfig> twt_run(const TwtSpec& spec, const Tree& tau, std::uint64_t fuel, const Observer<TwtConfig>& obs) {
    validate(tau, spec.input);
    IndexedTree t(tau);
    StepFn<TwtConfig> step = [&](const TwtConfig& c) { return twt_step(spec, t, c); };
    return run<TwtConfig>(step, twt_initial(spec), fuel, Policy::Leftmost, obs);
}

RunResult<IpttConfig> iptt_run(const IpttSpec& spec, const Tree& tau, std::uint64_t fuel,
                               const Observer<IpttConfig>& obs) {
    validate(tau, spec.input);
    IndexedTree t(tau);
    StepFn<IpttConfig> step = [&](const IpttConfig& c) { return iptt_step(spec, t, c); };
    return run<IpttConfig>(step, iptt_initial(spec), fuel, Policy::Leftmost, obs);
}

namespace {

template <class K>
Tree finish_walk(const RunResult<K>& r, const IndexedTree& t, std::uint64_t fuel) {
    if (r.status == Status::Diverged) fail(Err::FuelExhausted, "walking run exceeded " + std::to_string(fuel) + " steps");
    if (r.status == Status::Stuck) fail(Err::Unreachable, "walking run stuck at " + render(t, *r.stuck_at));
    return r.output;
}

}  // namespace

Tree twt_eval(const TwtSpec& spec, const Tree& tau, std::uint64_t fuel) {
    return finish_walk(twt_run(spec, tau, fuel), IndexedTree(tau), fuel);
}

Tree iptt_eval(const IpttSpec& spec, const Tree& tau, std::uint64_t fuel) {
    return finish_walk(iptt_run(spec, tau, fuel), IndexedTree(tau), fuel);
}

namespace {

void collect_leaves(const Rhs& r, std::vector<const Target*>& out) {
    if (r.conf) out.push_back(&*r.conf);
    for (auto& k : r.kids) collect_leaves(k, out);
}

std::string leaf_text(const Target& t) { return "(" + t.state + ", " + to_string(t.move) + ")"; }

}  // namespace

ReversibilityReport check_reversible(const TwtSpec& spec) {
    // (letter, root) -> leaf -> keys producing it
    std::map<std::pair<std::string, bool>, std::map<std::string, std::vector<const TwtKey*>>> seen;
    for (auto& [k, rhs] : spec.delta) {
        std::vector<const Target*> leaves;
        collect_leaves(rhs, leaves);
        auto& m = seen[{k.letter, k.root}];
        for (auto* l : leaves) m[leaf_text(*l)].push_back(&k);
    }
    for (auto& [map, leaves] : seen) {
        for (auto& [leaf, keys] : leaves) {
            if (keys.size() < 2) continue;
            ReversibilityReport r;
            r.reversible = false;
            std::string fn = std::string(map.second ? "delta-root " : "delta ") + map.first;
            r.witness = leaf + " occurs in " + fn + "(" + keys[0]->state + ", " + to_string(keys[0]->prov) + ")";
            if (keys[1] == keys[0]) r.witness += " twice";
            else r.witness += " and " + fn + "(" + keys[1]->state + ", " + to_string(keys[1]->prov) + ")";
            return r;
        }
    }
    return {};
}

std::optional<TwtConfig> predecessor(const TwtSpec& spec, const IndexedTree& t, const TwtConfig& c) {
    ReversibilityReport rep = check_reversible(spec);
    if (!rep.reversible) fail(Err::NotReversible, "predecessor needs a reversible transducer: " + rep.witness);
    const auto& n = t.nodes[c.node];
    int prev = c.node;
    Move m{Move::Stay, 0, {}};
    switch (c.prov.kind) {
        case Prov::FromParent:
            if (n.parent < 0) return std::nullopt;
            prev = n.parent;
            m = Move{Move::ToChild, n.index_in_parent, {}};
            break;
        case Prov::FromChild:
            if (c.prov.child < 1 || c.prov.child > static_cast<int>(n.kids.size())) return std::nullopt;
            prev = n.kids[c.prov.child - 1];
            m = Move{Move::ToParent, 0, {}};
            break;
        case Prov::Self: break;
    }
    const std::string& letter = t.nodes[prev].label;
    bool root = prev == 0;
    int kids = static_cast<int>(t.nodes[prev].kids.size());
    for (auto& [k, rhs] : spec.delta) {
        if (k.letter != letter || k.root != root) continue;
        if (k.prov.kind == Prov::FromChild && k.prov.child > kids) continue;
        std::vector<const Target*> leaves;
        collect_leaves(rhs, leaves);
        for (auto* l : leaves)
            if (l->state == c.state && l->move == m) return TwtConfig{k.state, k.prov, prev};
    }
    return std::nullopt;
}

namespace {

std::string run_state(const std::string& q, int j) { return "Run(" + q + "," + std::to_string(j) + ")"; }
std::string probe_state(const std::string& q) { return "Probe(" + q + ")"; }
std::string up_state(const std::string& q) { return "Up(" + q + ")"; }
std::string back_state(const std::string& q, int j) { return "Back(" + q + "," + std::to_string(j) + ")"; }

Rhs adapt_rhs(const Rhs& r, int j) {
    if (!r.conf) {
        Rhs g = Rhs::node(r.label);
        for (auto& k : r.kids) g.kids.push_back(adapt_rhs(k, j));
        return g;
    }
    const Target& t = *r.conf;
    switch (t.move.kind) {
        case Move::ToChild: return Rhs::leaf(Target{run_state(t.state, t.move.child), t.move});
        case Move::ToParent: return Rhs::leaf(Target{probe_state(t.state), t.move});
        default: return Rhs::leaf(Target{run_state(t.state, j), t.move});
    }
}

bool moves_up(const Rhs& r) {
    if (r.conf) return r.conf->move.kind == Move::ToParent;
    for (auto& k : r.kids)
        if (moves_up(k)) return true;
    return false;
}

}  // namespace

TwtSpec adapt_child_numbers(const ChildNumberTwt& spec) {
    TwtSpec s;
    s.input = spec.input;
    s.output = spec.output;
    int maxk = spec.input.max_rank();
    for (auto& q : spec.states) {
        for (int j = 0; j <= maxk; ++j) s.states.push_back(run_state(q, j));
        s.states.push_back(probe_state(q));
        s.states.push_back(up_state(q));
        for (int j = 1; j <= maxk; ++j) s.states.push_back(back_state(q, j));
    }
    s.initial = run_state(spec.initial, 0);
    for (auto& [a, k] : spec.input.ranks) {
        std::vector<Prov> provs{{Prov::Self, 0}};
        for (int i = 1; i <= k; ++i) provs.push_back({Prov::FromChild, i});
        for (auto& q : spec.states) {
            for (int j = 0; j <= maxk; ++j) {
                auto it = spec.delta.find(ChildNumberKey{a, q, j});
                if (it == spec.delta.end()) continue;
                if (j == 0 && moves_up(it->second)) continue;  // cannot leave the root
                Rhs r = adapt_rhs(it->second, j);
                for (auto& p : provs) s.delta[TwtKey{a, run_state(q, j), p, j == 0}] = r;
                if (j > 0) s.delta[TwtKey{a, run_state(q, j), {Prov::FromParent, 0}, false}] = r;
            }
            for (int i = 1; i <= k; ++i) {
                Prov from{Prov::FromChild, i};
                s.delta[TwtKey{a, probe_state(q), from, true}] = Rhs::leaf(Target{run_state(q, 0), {Move::Stay, 0, {}}});
                s.delta[TwtKey{a, probe_state(q), from, false}] = Rhs::leaf(Target{up_state(q), {Move::ToParent, 0, {}}});
                for (bool root : {true, false})
                    s.delta[TwtKey{a, up_state(q), from, root}] = Rhs::leaf(Target{back_state(q, i), {Move::ToChild, i, {}}});
            }
            for (int j = 1; j <= maxk; ++j)
                s.delta[TwtKey{a, back_state(q, j), {Prov::FromParent, 0}, false}] =
                    Rhs::leaf(Target{run_state(q, j), {Move::Stay, 0, {}}});
        }
    }
    validate(s);
    return s;
}

}  // namespace lt
