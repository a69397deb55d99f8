#include "lt/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "lt/error.hpp"

namespace lt {

const char* err_name(Err e) {
    switch (e) {
        case Err::Syntax: return "SyntaxError";
        case Err::UnknownConstant: return "UnknownConstant";
        case Err::TypeMismatch: return "TypeMismatch";
        case Err::AffineViolation: return "AffineViolation";
        case Err::BoxCapturesAffine: return "BoxCapturesAffine";
        case Err::UnboundVariable: return "UnboundVariable";
        case Err::NotAnEncoding: return "NotAnEncoding";
        case Err::MissingRule: return "MissingRule";
        case Err::InvalidPosition: return "InvalidPosition";
        case Err::FuelExhausted: return "FuelExhausted";
        case Err::ClassificationTooHigh: return "ClassificationTooHigh";
        case Err::AlphabetMismatch: return "AlphabetMismatch";
        case Err::NoNullaryLetter: return "NoNullaryLetter";
        case Err::NotAlmostAffine: return "NotAlmostAffine";
        case Err::NotReversible: return "NotReversible";
        case Err::Unreachable: return "Unreachable";
        case Err::Invariant: return "InvariantViolation";
        case Err::Unsupported: return "Unsupported";
        case Err::Io: return "IoError";
    }
    return "Error";
}

bool valid_letter_name(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '@'; });
}

int Alphabet::rank(const std::string& a) const {
    auto it = ranks.find(a);
    if (it == ranks.end()) fail(Err::UnknownConstant, "unknown letter '" + a + "'");
    return it->second;
}

int Alphabet::max_rank() const {
    int m = 0;
    for (auto& [_, r] : ranks) m = std::max(m, r);
    return m;
}

std::vector<std::string> Alphabet::letters() const {
    std::vector<std::string> out;
    for (auto& [a, _] : ranks) out.push_back(a);
    return out;
}

std::vector<std::string> Alphabet::nullary() const {
    std::vector<std::string> out;
    for (auto& [a, r] : ranks)
        if (r == 0) out.push_back(a);
    return out;
}

std::string Alphabet::to_string() const {
    std::string s = "{ ";
    bool first = true;
    for (auto& [a, r] : ranks) {
        if (!first) s += ", ";
        first = false;
        s += a + ":" + std::to_string(r);
    }
    return s + " }";
}

Alphabet Alphabet::parse(std::string_view text) {
    std::string s(text);
    auto l = s.find('{'), r = s.rfind('}');
    if (l == std::string::npos || r == std::string::npos || r < l) fail(Err::Syntax, "alphabet must be written { a:2, ... }");
    Alphabet out;
    std::string body = s.substr(l + 1, r - l - 1);
    std::size_t i = 0;
    while (i < body.size()) {
        auto comma = body.find(',', i);
        std::string item = body.substr(i, comma == std::string::npos ? std::string::npos : comma - i);
        i = comma == std::string::npos ? body.size() : comma + 1;
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) fail(Err::Syntax, "alphabet entry '" + item + "' lacks a rank");
        std::string name = item.substr(0, colon);
        if (!valid_letter_name(name)) fail(Err::Syntax, "bad letter name '" + name + "'");
        int rank = 0;
        try {
            rank = std::stoi(item.substr(colon + 1));
        } catch (...) {
            fail(Err::Syntax, "bad rank in '" + item + "'");
        }
        if (rank < 0) fail(Err::Syntax, "negative rank in '" + item + "'");
        if (out.ranks.count(name)) fail(Err::Syntax, "duplicate letter '" + name + "'");
        out.ranks[name] = rank;
    }
    if (out.ranks.empty()) fail(Err::Syntax, "empty alphabet");
    return out;
}

std::size_t Tree::size() const {
    std::size_t n = 1;
    for (auto& k : kids) n += k.size();
    return n;
}

int Tree::height() const {
    int h = 0;
    for (auto& k : kids) h = std::max(h, 1 + k.height());
    return h;
}

namespace {

struct TreeParser {
    std::string_view s;
    std::size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    [[noreturn]] void error(const std::string& what) {
        fail(Err::Syntax, "tree syntax error at column " + std::to_string(i + 1) + ": " + what);
    }
    Tree tree() {
        ws();
        std::size_t st = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '@')) ++i;
        if (st == i) error("expected a letter");
        Tree t(std::string(s.substr(st, i - st)));
        ws();
        if (i < s.size() && s[i] == '(') {
            ++i;
            for (;;) {
                t.kids.push_back(tree());
                ws();
                if (i < s.size() && s[i] == ',') {
                    ++i;
                    continue;
                }
                if (i < s.size() && s[i] == ')') {
                    ++i;
                    break;
                }
                error("expected ',' or ')'");
            }
        }
        return t;
    }
};

}  // namespace

Tree parse_tree(std::string_view text) {
    TreeParser p{text};
    Tree t = p.tree();
    p.ws();
    if (p.i != text.size()) p.error("trailing input");
    return t;
}

std::string to_string(const Tree& t) {
    std::string s = t.label;
    if (!t.kids.empty()) {
        s += '(';
        for (std::size_t i = 0; i < t.kids.size(); ++i) {
            if (i) s += ',';
            s += to_string(t.kids[i]);
        }
        s += ')';
    }
    return s;
}

void validate(const Tree& t, const Alphabet& sigma) {
    int r = sigma.rank(t.label);
    if (r != static_cast<int>(t.kids.size()))
        fail(Err::AlphabetMismatch, "letter '" + t.label + "' has rank " + std::to_string(r) + " but " +
                                        std::to_string(t.kids.size()) + " children");
    for (auto& k : t.kids) validate(k, sigma);
}

IndexedTree::IndexedTree(const Tree& t) {
    std::function<int(const Tree&, int, int)> go = [&](const Tree& x, int parent, int idx) {
        int id = static_cast<int>(nodes.size());
        nodes.push_back(Node{x.label, parent, idx, {}});
        for (std::size_t i = 0; i < x.kids.size(); ++i) {
            int c = go(x.kids[i], id, static_cast<int>(i) + 1);
            nodes[id].kids.push_back(c);
        }
        return id;
    };
    go(t, -1, 0);
}

}  // namespace lt
