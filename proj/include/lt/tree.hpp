#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lt {

// Letter name -> rank.
struct Alphabet {
    std::map<std::string, int> ranks;

    Alphabet() = default;
    Alphabet(std::initializer_list<std::pair<const std::string, int>> l) : ranks(l) {}

    bool contains(const std::string& a) const { return ranks.count(a) != 0; }
    int rank(const std::string& a) const;
    int max_rank() const;
    std::vector<std::string> letters() const;
    std::vector<std::string> nullary() const;
    std::string to_string() const;
    bool operator==(const Alphabet& o) const { return ranks == o.ranks; }

    // "{ a:2, b:1, c:0 }"
    static Alphabet parse(std::string_view text);
};

bool valid_letter_name(const std::string& s);

struct Tree {
    std::string label;
    std::vector<Tree> kids;

    Tree() = default;
    explicit Tree(std::string l, std::vector<Tree> k = {}) : label(std::move(l)), kids(std::move(k)) {}

    std::size_t size() const;
    int height() const;
    bool operator==(const Tree& o) const { return label == o.label && kids == o.kids; }
    bool operator!=(const Tree& o) const { return !(*this == o); }
};

Tree parse_tree(std::string_view text);
std::string to_string(const Tree& t);
// Throws unless every node's arity matches the alphabet.
void validate(const Tree& t, const Alphabet& sigma);

// Preorder node numbering used by walking machines and traces.
struct IndexedTree {
    struct Node {
        std::string label;
        int parent = -1;
        int index_in_parent = 0;  // 1-based child number, 0 at the root
        std::vector<int> kids;
    };
    std::vector<Node> nodes;  // nodes[0] is the root

    explicit IndexedTree(const Tree& t);
    std::string name(int v) const { return nodes[v].label + std::to_string(v + 1); }
};

}  // namespace lt
