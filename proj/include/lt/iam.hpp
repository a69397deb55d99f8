#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lt/flat.hpp"
#include "lt/reduce.hpp"
#include "lt/treegen.hpp"

namespace lt {

enum class Variant { Auto, PA, APA, Depth1, Single };
const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);

// A logged position: a variable occurrence with its log (nested entries, top first).
struct Logged;
using LoggedPtr = std::shared_ptr<const Logged>;
struct Logged {
    int occ;
    std::vector<LoggedPtr> log;
};

struct TapeItem {
    char sym;  // 'p', 'o' or 'L' (logged position)
    LoggedPtr logged;
};

// Two-stack configuration; PA and APA runs keep the log empty and the tape over {p, o}.
struct IamConfig {
    bool up = false;
    int node = 0;
    std::vector<TapeItem> tape;  // top at the back
    std::vector<LoggedPtr> log;  // top first

    std::string mult() const;  // the p/o symbols, top first
    std::string symbols() const;  // all symbols, top first, logged positions as 'L'
};

// Single-stack configuration: bounded multiplicative stack, exponential stack and answer flag.
struct SsConfig {
    bool up = false;
    int node = 0;
    std::string mult;             // top first
    std::vector<LoggedPtr> exp;   // top at the back
    int answer = 0;
};

// Rules that only read and write the multiplicative tape.
struct MultMove {
    enum Kind { Move, Output, Exponential, Boundary, Undefined } kind = Undefined;
    bool up = false;
    int node = -1;
    int pop = 0;       // symbols removed from the top
    std::string push;  // then prepended, first char on top
    int rank = 0;      // Output: rank of the constant
};

// `top` holds the visible tape symbols, top first.
MultMove mult_step(const FlatTerm& v, bool up, int node, std::string_view top);

// Exponential effect of a single-stack step.
struct ExpOp {
    enum Kind { None, Push, Pop, Drop } kind = None;
    int occ = -1;  // Push: the variable occurrence
    int n = 0;     // Push: entries nested; Drop: entries dropped
};

struct SsExpMove {
    bool ok = false;
    bool up = false;
    int node = -1;
    int answer = 0;
    ExpOp op;
};

// Exponential rows of the single-stack table. `top` is the (occurrence, nesting) of the top entry, if any.
SsExpMove single_exp_step(const FlatTerm& v, bool up, int node, int answer, std::optional<std::pair<int, int>> top);

std::optional<Gen<IamConfig>> iam_step(const FlatTerm& v, Variant variant, const IamConfig& c);
std::optional<Gen<SsConfig>> single_step(const FlatTerm& v, const SsConfig& c);

std::string render(const FlatTerm& v, const IamConfig& c);
std::string render(const FlatTerm& v, const SsConfig& c);

// Least machine admitted by the annotated program; throws ClassificationTooHigh.
Variant select_variant(const Term& annotated, Variant requested);

RunResult<IamConfig> run_iam(const FlatTerm& v, Variant variant, std::uint64_t fuel = kDefaultFuel,
                             const Observer<IamConfig>& obs = {});
RunResult<SsConfig> run_single(const FlatTerm& v, std::uint64_t fuel = kDefaultFuel, const Observer<SsConfig>& obs = {});

// Output tree of the chosen machine on a closed annotated v : o; throws on stuck or diverging runs.
Tree iam_run(const Term& annotated, Variant variant = Variant::Auto, std::uint64_t fuel = kDefaultFuel);

struct InvariantReport {
    bool ok = true;
    std::size_t index = 0;  // first violating configuration
    std::string message;
    std::size_t checked = 0;
};

// Typing invariant, tape bound, and for PA/APA runs the parity and upward-box exclusions.
InvariantReport assert_invariants(const FlatTerm& v, const std::vector<IamConfig>& configs, Variant variant);

// Two-stack to single-stack abstraction used by the bisimulation check.
SsConfig abstract_config(const IamConfig& c);
bool same_config(const SsConfig& x, const SsConfig& y);

}  // namespace lt
