#include "lt/type.hpp"

#include <algorithm>
#include <cctype>

#include "lt/error.hpp"

namespace lt {

Type base() {
    static const Type o = std::make_shared<TypeNode>(TypeNode{TK::Base, nullptr, nullptr});
    return o;
}

Type arrow(Type a, Type b) { return std::make_shared<TypeNode>(TypeNode{TK::Arrow, std::move(a), std::move(b)}); }
Type bang(Type a) { return std::make_shared<TypeNode>(TypeNode{TK::Bang, std::move(a), nullptr}); }

Type const_type(int rank) {
    Type t = base();
    for (int i = 0; i < rank; ++i) t = arrow(base(), t);
    return t;
}

bool type_eq(const Type& x, const Type& y) {
    if (x == y) return true;
    if (!x || !y || x->kind != y->kind) return false;
    switch (x->kind) {
        case TK::Base: return true;
        case TK::Arrow: return type_eq(x->a, y->a) && type_eq(x->b, y->b);
        case TK::Bang: return type_eq(x->a, y->a);
    }
    return false;
}

std::string to_string(const Type& t) {
    switch (t->kind) {
        case TK::Base: return "o";
        case TK::Bang: {
            std::string in = to_string(t->a);
            return t->a->kind == TK::Arrow ? "!(" + in + ")" : "!" + in;
        }
        case TK::Arrow: {
            std::string l = to_string(t->a);
            if (t->a->kind == TK::Arrow) l = "(" + l + ")";
            return l + " -o " + to_string(t->b);
        }
    }
    return "?";
}

namespace {

struct TypeParser {
    std::string_view s;
    std::size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    [[noreturn]] void error(const std::string& what) {
        fail(Err::Syntax, "type syntax error at column " + std::to_string(i + 1) + ": " + what);
    }
    Type arrow_type() {
        Type l = unary();
        ws();
        if (s.substr(i, 2) == "-o") {
            i += 2;
            return arrow(l, arrow_type());
        }
        return l;
    }
    Type unary() {
        ws();
        if (i >= s.size()) error("unexpected end of type");
        if (s[i] == '!') {
            ++i;
            return bang(unary());
        }
        if (s[i] == '(') {
            ++i;
            Type t = arrow_type();
            ws();
            if (i >= s.size() || s[i] != ')') error("expected ')'");
            ++i;
            return t;
        }
        if (s[i] == 'o' && (i + 1 >= s.size() || !std::isalnum(static_cast<unsigned char>(s[i + 1])))) {
            ++i;
            return base();
        }
        error("expected 'o', '!' or '('");
    }
};

}  // namespace

Type parse_type(std::string_view text) {
    TypeParser p{text};
    Type t = p.arrow_type();
    p.ws();
    if (p.i != text.size()) p.error("trailing input");
    return t;
}

const char* tier_name(Tier t) {
    switch (t) {
        case Tier::PurelyAffine: return "purely-affine";
        case Tier::AlmostPurelyAffine: return "almost-purely-affine";
        case Tier::AlmostDepth1: return "almost-depth-1";
        case Tier::General: return "general";
    }
    return "?";
}

namespace {

bool bang_free(const Type& t) {
    switch (t->kind) {
        case TK::Base: return true;
        case TK::Bang: return false;
        case TK::Arrow: return bang_free(t->a) && bang_free(t->b);
    }
    return false;
}

bool almost_pure(const Type& t) {
    switch (t->kind) {
        case TK::Base: return true;
        case TK::Bang: return t->a->kind == TK::Base;
        case TK::Arrow: return almost_pure(t->a) && almost_pure(t->b);
    }
    return false;
}

bool almost_depth1(const Type& t) {
    switch (t->kind) {
        case TK::Base: return true;
        case TK::Bang: return almost_pure(t->a);
        case TK::Arrow: return almost_depth1(t->a) && almost_depth1(t->b);
    }
    return false;
}

}  // namespace

bool in_tier(const Type& t, Tier tier) {
    switch (tier) {
        case Tier::PurelyAffine: return bang_free(t);
        case Tier::AlmostPurelyAffine: return almost_pure(t);
        case Tier::AlmostDepth1: return almost_depth1(t);
        case Tier::General: return true;
    }
    return false;
}

Tier classify_type(const Type& t) {
    for (Tier x : {Tier::PurelyAffine, Tier::AlmostPurelyAffine, Tier::AlmostDepth1})
        if (in_tier(t, x)) return x;
    return Tier::General;
}

std::optional<Type> navigate(const Type& t, std::string_view tape) {
    Type cur = t;
    std::size_t i = 0;
    for (;;) {
        if (i == tape.size()) return cur;
        if (cur->kind == TK::Bang) {
            cur = cur->a;
            continue;
        }
        if (cur->kind == TK::Base) return std::nullopt;
        cur = tape[i] == 'p' ? cur->b : cur->a;
        ++i;
    }
}

int type_height(const Type& t) {
    switch (t->kind) {
        case TK::Base: return 0;
        case TK::Bang: return type_height(t->a);
        case TK::Arrow: return 1 + std::max(type_height(t->a), type_height(t->b));
    }
    return 0;
}

Type subst_base(const Type& a, const Type& b) {
    switch (a->kind) {
        case TK::Base: return b;
        case TK::Bang: return bang(subst_base(a->a, b));
        case TK::Arrow: return arrow(subst_base(a->a, b), subst_base(a->b, b));
    }
    return a;
}

Type codomain(const Type& t, int n) {
    Type cur = t;
    for (int i = 0; i < n; ++i) {
        if (cur->kind != TK::Arrow) fail(Err::TypeMismatch, "expected a function type, got " + to_string(cur));
        cur = cur->b;
    }
    return cur;
}

}  // namespace lt
