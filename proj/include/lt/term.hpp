#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lt/tree.hpp"
#include "lt/type.hpp"

namespace lt {

enum class Kind { Const, Var, Lam, App, Box, Let };

struct Node;
using Term = std::shared_ptr<const Node>;

// Children: Lam/Box body is a; App is (a b); Let is `let !name = a in b`.
// `ty` and `depth` are filled by the type checker (depth = enclosing boxes of non-base content).
struct Node {
    Kind kind;
    std::string name;
    Term a, b;
    Type ty;
    int depth = -1;
};

Term mk_const(const std::string& c);
Term mk_var(const std::string& x);
Term mk_lam(const std::string& x, Term body);
Term mk_app(Term f, Term x);
Term mk_box(Term body);
Term mk_let(const std::string& x, Term bound, Term body);
Term apps(Term f, const std::vector<Term>& args);
Term with_ann(const Term& t, Term a, Term b, Type ty, int depth);

// Child selectors: 0 = a, 1 = b.
using Path = std::vector<int>;

int arity(const Term& t);
const Term& child(const Term& t, int i);
Term subterm_at(const Term& t, const Path& p);

struct Context {
    Term whole;  // the original term; the hole sits at `hole`
    Path hole;
};

std::pair<Context, Term> split_at(const Term& t, const Path& p);
Term plug(const Context& c, const Term& s);
// Number of enclosing boxes around the hole whose content is not of base type (needs annotations).
int context_depth(const Context& c);
std::string to_string(const Context& c);  // hole rendered as [.]

std::string to_string(const Term& t);
// Render with the subterm at `focus` marked: >t< when going down, <t> when going up.
std::string render_focus(const Term& t, const Path& focus, bool up);

// term := "\" x "." term | "let" "!" x "=" term "in" term | atom+ ; atom := x | "!" atom | "(" term ")".
// Identifiers that are not bound resolve to constants of `constants` or to `free`.
Term parse_term(std::string_view text, const Alphabet& constants, const std::set<std::string>& free = {});

std::size_t term_size(const Term& t);
std::set<std::string> free_vars(const Term& t);
std::set<std::string> constants_of(const Term& t);
bool alpha_equal(const Term& x, const Term& y);
Term canonical(const Term& t);
Term strip(const Term& t);

std::string fresh_name(const std::string& hint);
Term rename_bound(const Term& t, const std::string& from, const std::string& to);
// Capture-avoiding t{x := u}.
Term subst(const Term& t, const std::string& x, const Term& u);
// Replace constants by terms (closed terms are assumed, so no capture can occur).
Term subst_consts(const Term& t, const std::map<std::string, Term>& m);

Term encode_tree(const Tree& t);
// Throws NotAnEncoding unless t is an applicative term over constants (with matching arities when sigma is given).
Tree decode_tree(const Term& t, const Alphabet* sigma = nullptr);
Term instantiate(const Tree& tau, const std::map<std::string, Term>& family);

}  // namespace lt
