#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lt/error.hpp"
#include "lt/reduce.hpp"
#include "lt/tree.hpp"
#include "lt/treegen.hpp"

namespace lt {

// Where the machine came from, relative to the current node.
struct Prov {
    enum Kind { FromParent, Self, FromChild } kind = Self;
    int child = 0;  // FromChild: 1-based
    auto operator<=>(const Prov&) const = default;
};

struct Move {
    enum Kind { ToParent, Stay, ToChild, Put, Remove } kind = Stay;
    int child = 0;      // ToChild: 1-based
    std::string color;  // Put
    auto operator<=>(const Move&) const = default;
};

std::string to_string(const Prov& p);  // from-parent | self | from-child i
std::string to_string(const Move& m);  // to-parent | stay | to-child i | put C | remove

struct Target {
    std::string state;
    Move move;
};
// An output tree whose leaves may be (state, move) pairs.
using Rhs = Gen<Target>;
std::string to_string(const Rhs& r);

struct TwtKey {
    std::string letter;
    std::string state;
    Prov prov;
    bool root = false;
    auto operator<=>(const TwtKey&) const = default;
};

struct TwtSpec {
    Alphabet input;
    Alphabet output;
    std::vector<std::string> states;  // declaration order
    std::string initial;
    std::map<TwtKey, Rhs> delta;  // root = true: the root transition functions
};

inline const std::string kAnyPebble = "*";

// pebble: "" for None, a color, or kAnyPebble for a rule that ignores the pebble.
struct IpttKey {
    TwtKey key;
    std::string pebble;
    auto operator<=>(const IpttKey&) const = default;
};

struct IpttSpec {
    Alphabet input;
    Alphabet output;
    std::vector<std::string> states;
    std::string initial;
    std::vector<std::string> colors;
    std::map<IpttKey, Rhs> delta;
};

struct TwtConfig {
    std::string state;
    Prov prov;
    int node = 0;
    bool operator==(const TwtConfig&) const = default;
};

struct IpttConfig {
    std::string state;
    Prov prov;
    int node = 0;
    std::vector<std::pair<std::string, int>> pebbles;  // (color, node), top at the back
    bool operator==(const IpttConfig&) const = default;
};

TwtSpec parse_twt(std::string_view text, const std::string& origin = "<input>");
IpttSpec parse_iptt(std::string_view text, const std::string& origin = "<input>");
TwtSpec load_twt(const std::string& path);
IpttSpec load_iptt(const std::string& path);
std::string to_text(const TwtSpec& spec);
std::string to_text(const IpttSpec& spec);
// Throws unless every rule respects arities and the shape constraints of its key.
void validate(const TwtSpec& spec);
void validate(const IpttSpec& spec);

std::string render(const IndexedTree& t, const TwtConfig& c);   // (q, self, a1)
std::string render(const IndexedTree& t, const IpttConfig& c);  // (q, self, a1, [(c, b2)]) with the top first

std::optional<Gen<TwtConfig>> twt_step(const TwtSpec& spec, const IndexedTree& t, const TwtConfig& c);
std::optional<Gen<IpttConfig>> iptt_step(const IpttSpec& spec, const IndexedTree& t, const IpttConfig& c);
// Color of the top pebble when it sits on the current node.
std::optional<std::string> visible_pebble(const IpttConfig& c);

TwtConfig twt_initial(const TwtSpec& spec);
IpttConfig iptt_initial(const IpttSpec& spec);
RunResult<TwtConfig> twt_run(const TwtSpec& spec, const Tree& tau, std::uint64_t fuel = kDefaultFuel,
                             const Observer<TwtConfig>& obs = {});
RunResult<IpttConfig> iptt_run(const IpttSpec& spec, const Tree& tau, std::uint64_t fuel = kDefaultFuel,
                               const Observer<IpttConfig>& obs = {});
// Output tree; throws on stuck or diverging runs.
Tree twt_eval(const TwtSpec& spec, const Tree& tau, std::uint64_t fuel = kDefaultFuel);
Tree iptt_eval(const IpttSpec& spec, const Tree& tau, std::uint64_t fuel = kDefaultFuel);

struct ReversibilityReport {
    bool reversible = true;
    std::string witness;  // the repeated (state, move) leaf and where it occurs
};

// Leaf-injectivity of every delta_a and every root map, each checked separately.
ReversibilityReport check_reversible(const TwtSpec& spec);

// The unique configuration whose step produces c, if any; throws NotReversible on irreversible specs.
std::optional<TwtConfig> predecessor(const TwtSpec& spec, const IndexedTree& t, const TwtConfig& c);

// A walking transducer that reads child numbers (0 at the root) instead of provenances.
struct ChildNumberKey {
    std::string letter;
    std::string state;
    int child_number = 0;
    auto operator<=>(const ChildNumberKey&) const = default;
};

struct ChildNumberTwt {
    Alphabet input;
    Alphabet output;
    std::vector<std::string> states;
    std::string initial;
    std::map<ChildNumberKey, Rhs> delta;
};

// Equivalent provenance-based transducer; the child number is kept in the state and recovered after
// upward moves by probing the grandparent.
TwtSpec adapt_child_numbers(const ChildNumberTwt& spec);

}  // namespace lt
