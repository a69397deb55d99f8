#include "lt/flat.hpp"

#include <functional>

#include "lt/error.hpp"

namespace lt {

std::string placeholder_name(int i) { return "<>" + std::to_string(i); }

int placeholder_index(const std::string& name) {
    if (name.size() < 3 || name.compare(0, 2, "<>") != 0) return 0;
    return std::stoi(name.substr(2));
}

FlatTerm::FlatTerm(const Term& annotated) : source(annotated) {
    std::vector<std::pair<std::string, int>> scope;
    std::function<int(const Term&, int, int)> go = [&](const Term& t, int parent, int slot) -> int {
        int id = static_cast<int>(nodes.size());
        nodes.push_back(Node{});
        Node n;
        n.kind = t->kind;
        n.name = t->name;
        n.parent = parent;
        n.slot = slot;
        n.ty = t->ty;
        n.depth = t->depth < 0 ? 0 : t->depth;
        if (t->kind == Kind::Const) n.placeholder = placeholder_index(t->name);
        if (t->kind == Kind::Var) {
            for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                if (it->first == t->name) {
                    n.binder = it->second;
                    break;
                }
        }
        nodes[id] = n;
        switch (t->kind) {
            case Kind::Lam:
                scope.emplace_back(t->name, id);
                nodes[id].kid[0] = go(t->a, id, 0);
                scope.pop_back();
                break;
            case Kind::Let:
                nodes[id].kid[0] = go(t->a, id, 0);
                scope.emplace_back(t->name, id);
                nodes[id].kid[1] = go(t->b, id, 1);
                scope.pop_back();
                break;
            case Kind::App:
                nodes[id].kid[0] = go(t->a, id, 0);
                nodes[id].kid[1] = go(t->b, id, 1);
                break;
            case Kind::Box: nodes[id].kid[0] = go(t->a, id, 0); break;
            default: break;
        }
        return id;
    };
    go(annotated, -1, -1);
    for (int i = 0; i < size(); ++i)
        if (nodes[i].kind == Kind::Var && nodes[i].binder >= 0) nodes[nodes[i].binder].occs.push_back(i);
}

int FlatTerm::i_check(int i) const {
    if (i < 0 || i >= size()) fail(Err::InvalidPosition, "node id out of range");
    return i;
}

Path FlatTerm::path(int i) const {
    Path p;
    for (int cur = i_check(i); nodes[cur].parent >= 0; cur = nodes[cur].parent) p.push_back(nodes[cur].slot);
    return {p.rbegin(), p.rend()};
}

}  // namespace lt
