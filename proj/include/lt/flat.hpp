#pragma once

#include <string>
#include <vector>

#include "lt/term.hpp"

namespace lt {

// Placeholder constants <>i stand for the subtrees of a block.
std::string placeholder_name(int i);
int placeholder_index(const std::string& name);  // 0 when not a placeholder

// An annotated term laid out in preorder; node ids are positions.
struct FlatTerm {
    struct Node {
        Kind kind;
        std::string name;
        int kid[2] = {-1, -1};
        int parent = -1;
        int slot = -1;  // index in the parent
        Type ty;
        int depth = 0;
        int binder = -1;        // Var: the binding Lam/Let (-1 when free)
        std::vector<int> occs;  // Lam/Let: occurrences of the bound variable
        int placeholder = 0;    // Const <>i: i
    };

    Term source;
    std::vector<Node> nodes;

    explicit FlatTerm(const Term& annotated);

    const Node& operator[](int i) const { return nodes[i]; }
    int size() const { return static_cast<int>(nodes.size()); }
    Path path(int i) const;
    std::string render(int focus, bool up) const { return render_focus(source, path(i_check(focus)), up); }

private:
    int i_check(int i) const;
};

}  // namespace lt
