#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lt/error.hpp"
#include "lt/flat.hpp"
#include "lt/iam.hpp"
#include "lt/reduce.hpp"
#include "lt/tree.hpp"
#include "lt/typing.hpp"

namespace lt {

struct TransducerSpec {
    Alphabet input;
    Alphabet output;
    Type memory;
    std::map<std::string, Term> source_rules;  // as written
    Term source_out;
    std::map<std::string, Term> rules;  // normalized and annotated
    Term out;
    Tier tier = Tier::PurelyAffine;
    int height = 0;  // tape bound H
};

// Typechecks every term, normalizes it and annotates the normal form.
TransducerSpec make_spec(Alphabet input, Alphabet output, Type memory, std::map<std::string, Term> rules, Term out);
TransducerSpec parse_spec(std::string_view text, const std::string& origin = "<input>");
TransducerSpec load_spec(const std::string& path);
// The normalized spec in the .lt format.
std::string to_text(const TransducerSpec& spec);
std::string read_file(const std::string& path);

Term program_term(const TransducerSpec& spec, const Tree& tau);  // u (tau-hat)
Tree eval_normalize(const TransducerSpec& spec, const Tree& tau, std::uint64_t fuel = kDefaultFuel);
Tree eval_iam(const TransducerSpec& spec, const Tree& tau, Variant variant = Variant::Auto,
              std::uint64_t fuel = kDefaultFuel);

// t_a <>1 ... <>k, annotated.
Term skeleton_term(const TransducerSpec& spec, const std::string& letter);

// The program u (tau-hat) as a flat term, with each node traced back to u or to a block of the input.
struct Origin {
    enum Kind { Top, U, Block } kind = Top;
    int tree_node = -1;  // Block: input node
    int local = -1;      // U: node of u; Block: node of the skeleton
};

struct GlobalProgram {
    IndexedTree tree;
    FlatTerm flat;
    std::vector<Origin> origin;
};

GlobalProgram global_program(const TransducerSpec& spec, const Tree& tau);

TransducerSpec compose(const TransducerSpec& f, const TransducerSpec& g);
TransducerSpec identity_transducer(const Alphabet& sigma);

struct GlsSpec {
    struct Rule {
        Term term;
        std::vector<std::string> next;
    };
    Alphabet input;
    Alphabet output;
    std::vector<std::string> states;  // declaration order
    std::map<std::string, Type> state_types;
    std::string init;
    Term out;
    std::map<std::pair<std::string, std::string>, Rule> rules;  // (state, letter)
};

GlsSpec parse_gls(std::string_view text, const std::string& origin = "<input>");
GlsSpec load_gls(const std::string& path);
void check_gls(const GlsSpec& spec);
Term gls_term(const GlsSpec& spec, const Tree& tau);  // tau-down : A_{q0}
Tree gls_run(const GlsSpec& spec, const Tree& tau, std::uint64_t fuel = kDefaultFuel);

// Closed inhabitant \x1 ... xn. l of a purely affine type.
Term dummy_term(const Type& c, const std::string& leaf);
struct Conversions {
    Type common;
    std::map<std::string, Term> iota;  // A_q -o A
    std::map<std::string, Term> cast;  // A -o A_q
};
Conversions conversions(const GlsSpec& spec);
GlsSpec make_type_constant(const GlsSpec& spec);

struct Relabeling {
    std::function<Tree(const Tree&)> relabel;
    TransducerSpec transducer;
};
Relabeling split_state_relabeling(const GlsSpec& type_constant);

// Lambda-bound variables that a term never uses.
std::vector<std::string> discarded_variables(const Term& t);

// The ?-translation of an annotated almost-affine term.
Term wn_translate(const Term& annotated, const Alphabet& sigma);

// Eta-long form of a purely affine normal term of type a.
Term eta_long(const Term& t, const Type& a, const ConstTypes& constants);

}  // namespace lt
