#pragma once

#include <map>
#include <string>
#include <vector>

#include "lt/iam.hpp"
#include "lt/transducer.hpp"
#include "lt/walking.hpp"

namespace lt {

// A local position of the token, as a state of the compiled machine.
struct SimState {
    enum Kind { I, U, T, Nabla, Delta } kind = I;
    bool up = false;
    std::string skeleton;  // T: text of the skeleton t_a <>1 ... <>k
    int node = -1;         // U: node of u; T: node of the skeleton
    std::string tape;      // multiplicative tape, top first
    int answer = -1;       // single-stack answer flag; -1 for tree-walking states
};

// Shared data for naming states and colors of one transducer.
class SimContext {
public:
    explicit SimContext(const TransducerSpec& spec);

    const TransducerSpec& spec() const { return *spec_; }
    const FlatTerm& u() const { return u_; }
    const FlatTerm& skeleton(const std::string& letter) const;
    const std::string& skeleton_text(const std::string& letter) const { return skeleton_text_.at(letter); }
    const FlatTerm& skeleton_by_text(const std::string& text) const { return by_text_.at(text); }

    // e.g. T[down,"(\l. \r. \x. >l< (r x)) <>1 <>2","pp"]
    std::string name(const SimState& s) const;
    // Pebble color for a let-bound occurrence: context ("u" or a skeleton text), occurrence node, nesting.
    std::string color(const std::string& ctx, int occ, int n) const;

private:
    const TransducerSpec* spec_;
    FlatTerm u_;
    std::map<std::string, std::string> skeleton_text_;  // letter -> text
    std::map<std::string, FlatTerm> by_text_;
};

// The configuration of the compiled transducer that simulates an IAM configuration of u (tau-hat).
TwtConfig sim_map(const SimContext& ctx, const GlobalProgram& g, const IamConfig& c);
IpttConfig sim_map(const SimContext& ctx, const GlobalProgram& g, const SsConfig& c);

TwtSpec compile_to_twt(const TransducerSpec& spec);
IpttSpec compile_to_iptt(const TransducerSpec& spec);

}  // namespace lt
