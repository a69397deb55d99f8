// ltx: command-line front end for affine lambda-transducers and their machines.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "lt/compile.hpp"
#include "lt/difftest.hpp"
#include "lt/iam.hpp"
#include "lt/transducer.hpp"
#include "lt/walking.hpp"

using namespace lt;

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// An inline tree, or the contents of a file given as @path.
Tree tree_arg(const std::string& s) {
    std::string text = s;
    if (!s.empty() && s[0] == '@') text = read_file(s.substr(1));
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    return parse_tree(text);
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) fail(Err::Io, "cannot write " + out);
    f << text;
}

void print_trace(const std::vector<TraceEntry>& tr) {
    for (auto& e : tr) std::cout << trace_json_line(e) << "\n";
}

template <class K>
int finish_trace(const RunResult<K>& r) {
    if (r.status == Status::Output) return 0;
    std::cerr << "error: run " << (r.status == Status::Stuck ? "got stuck" : "ran out of fuel") << " after " << r.steps
              << " steps\n";
    return 1;
}

struct Opts {
    std::uint64_t fuel = kDefaultFuel;
    std::string file, file2, tree, machine = "normalize", target = "twt", variant = "auto", out;
    std::uint64_t seed = 42;
    int cases = 100;
    std::size_t max_size = 12;
};

int cmd_typecheck(const Opts& o) {
    if (ends_with(o.file, ".gls")) {
        auto g = load_gls(o.file);
        check_gls(g);
        std::cout << "ok: " << g.states.size() << " states\n";
    } else if (ends_with(o.file, ".twt")) {
        auto t = load_twt(o.file);
        std::cout << "ok: " << t.states.size() << " states, " << t.delta.size() << " rules\n";
    } else if (ends_with(o.file, ".iptt")) {
        auto t = load_iptt(o.file);
        std::cout << "ok: " << t.states.size() << " states, " << t.colors.size() << " colors, " << t.delta.size()
                  << " rules\n";
    } else {
        auto s = load_spec(o.file);
        std::cout << "ok: memory " << to_string(s.memory) << ", " << tier_name(s.tier) << ", tape bound " << s.height
                  << "\n";
    }
    return 0;
}

int cmd_run(const Opts& o) {
    Tree tau = tree_arg(o.tree);
    Tree out;
    if (ends_with(o.file, ".twt")) {
        if (o.machine != "twt") fail(Err::Unsupported, "a .twt file runs only with --machine twt");
        out = twt_eval(load_twt(o.file), tau, o.fuel);
    } else if (ends_with(o.file, ".iptt")) {
        if (o.machine != "iptt") fail(Err::Unsupported, "a .iptt file runs only with --machine iptt");
        out = iptt_eval(load_iptt(o.file), tau, o.fuel);
    } else if (ends_with(o.file, ".gls")) {
        if (o.machine != "normalize") fail(Err::Unsupported, "a .gls file runs only with --machine normalize");
        out = gls_run(load_gls(o.file), tau, o.fuel);
    } else {
        auto s = load_spec(o.file);
        if (o.machine == "normalize")
            out = eval_normalize(s, tau, o.fuel);
        else if (o.machine == "iam")
            out = eval_iam(s, tau, parse_variant(o.variant), o.fuel);
        else if (o.machine == "twt")
            out = twt_eval(compile_to_twt(s), tau, o.fuel);
        else
            out = iptt_eval(compile_to_iptt(s), tau, o.fuel);
    }
    std::cout << to_string(out) << "\n";
    return 0;
}

int cmd_trace(const Opts& o) {
    Tree tau = tree_arg(o.tree);
    IndexedTree it(tau);
    if (o.machine == "twt") {
        TwtSpec t = ends_with(o.file, ".twt") ? load_twt(o.file) : compile_to_twt(load_spec(o.file));
        StepFn<TwtConfig> step = [&](const TwtConfig& c) { return twt_step(t, it, c); };
        auto [tr, r] = trace<TwtConfig>(step, twt_initial(t), o.fuel, [&](const TwtConfig& c) { return render(it, c); });
        print_trace(tr);
        return finish_trace(r);
    }
    if (o.machine == "iptt") {
        IpttSpec t = ends_with(o.file, ".iptt") ? load_iptt(o.file) : compile_to_iptt(load_spec(o.file));
        StepFn<IpttConfig> step = [&](const IpttConfig& c) { return iptt_step(t, it, c); };
        auto [tr, r] = trace<IpttConfig>(step, iptt_initial(t), o.fuel, [&](const IpttConfig& c) { return render(it, c); });
        print_trace(tr);
        return finish_trace(r);
    }
    if (o.machine != "iam") fail(Err::Unsupported, "trace needs --machine iam, twt or iptt");
    auto s = load_spec(o.file);
    GlobalProgram g = global_program(s, tau);
    Variant v = select_variant(g.flat.source, parse_variant(o.variant));
    if (v == Variant::Single) {
        StepFn<SsConfig> step = [&](const SsConfig& c) { return single_step(g.flat, c); };
        auto [tr, r] = trace<SsConfig>(step, SsConfig{}, o.fuel, [&](const SsConfig& c) { return render(g.flat, c); });
        print_trace(tr);
        return finish_trace(r);
    }
    StepFn<IamConfig> step = [&](const IamConfig& c) { return iam_step(g.flat, v, c); };
    auto [tr, r] = trace<IamConfig>(step, IamConfig{}, o.fuel, [&](const IamConfig& c) { return render(g.flat, c); });
    print_trace(tr);
    return finish_trace(r);
}

int cmd_difftest(const Opts& o) {
    auto s = load_spec(o.file);
    DiffOptions d;
    d.seed = o.seed;
    d.cases = o.cases;
    d.max_size = o.max_size;
    d.fuel = o.fuel;
    DiffReport r = difftest(s, d);
    std::cerr << "seed " << o.seed << ", backends:";
    for (auto& b : r.backends) std::cerr << " " << b;
    std::cerr << "\n";
    for (auto& c : r.mismatches) std::cout << c.report;
    std::cout << r.agreed << "/" << r.cases << " agree\n";
    return r.agreed == r.cases ? 0 : 1;
}

int cmd_reversible(const Opts& o) {
    TwtSpec t = ends_with(o.file, ".twt") ? load_twt(o.file) : compile_to_twt(load_spec(o.file));
    auto rep = check_reversible(t);
    if (rep.reversible) {
        std::cout << "reversible\n";
        return 0;
    }
    std::cout << "not reversible: " << rep.witness << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Affine lambda-transducers, interaction abstract machines and tree-walking compilers"};
    app.require_subcommand(1);
    Opts o;
    app.add_option("--fuel", o.fuel, "Step limit for every machine")->capture_default_str();

    auto* typecheck = app.add_subcommand("typecheck", "Load and typecheck a .lt, .gls, .twt or .iptt file");
    typecheck->add_option("file", o.file)->required();

    auto* classify = app.add_subcommand("classify", "Print the tier of a transducer");
    classify->add_option("file", o.file)->required();

    auto* normalize = app.add_subcommand("normalize", "Print the transducer with normalized rules");
    normalize->add_option("file", o.file)->required();

    auto* run = app.add_subcommand("run", "Evaluate on an input tree (inline or @file)");
    run->add_option("--machine", o.machine)->check(CLI::IsMember({"normalize", "iam", "twt", "iptt"}))->capture_default_str();
    run->add_option("--variant", o.variant, "IAM variant: auto, pa, apa, depth1, single")->capture_default_str();
    run->add_option("file", o.file)->required();
    run->add_option("tree", o.tree)->required();

    auto* compile = app.add_subcommand("compile", "Compile to a tree-walking or pebble transducer");
    compile->add_option("--target", o.target)->check(CLI::IsMember({"twt", "iptt"}))->capture_default_str();
    compile->add_option("-o,--output", o.out, "Output file (default stdout)");
    compile->add_option("file", o.file)->required();

    auto* tr = app.add_subcommand("trace", "Stream a run as JSON lines");
    tr->add_option("--machine", o.machine)->check(CLI::IsMember({"iam", "twt", "iptt"}))->default_val("iam");
    tr->add_option("--variant", o.variant, "IAM variant: auto, pa, apa, depth1, single")->capture_default_str();
    tr->add_option("file", o.file)->required();
    tr->add_option("tree", o.tree)->required();

    auto* diff = app.add_subcommand("difftest", "Run every applicable backend on random inputs");
    diff->add_option("--seed", o.seed)->capture_default_str();
    diff->add_option("--cases", o.cases)->check(CLI::PositiveNumber)->capture_default_str();
    diff->add_option("--max-size", o.max_size, "Input size bound")->check(CLI::PositiveNumber)->capture_default_str();
    diff->add_option("file", o.file)->required();

    auto* comp = app.add_subcommand("compose", "Compose two transducers: first, then second");
    comp->add_option("-o,--output", o.out, "Output file (default stdout)");
    comp->add_option("first", o.file)->required();
    comp->add_option("second", o.file2)->required();

    auto* rev = app.add_subcommand("reversible", "Check reversibility of a .twt file or of a compiled .lt file");
    rev->add_option("file", o.file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*typecheck) return cmd_typecheck(o);
        if (*classify) {
            std::cout << tier_name(load_spec(o.file).tier) << "\n";
            return 0;
        }
        if (*normalize) {
            std::cout << to_text(load_spec(o.file));
            return 0;
        }
        if (*run) return cmd_run(o);
        if (*compile) {
            auto s = load_spec(o.file);
            emit(o.target == "twt" ? to_text(compile_to_twt(s)) : to_text(compile_to_iptt(s)), o.out);
            return 0;
        }
        if (*tr) return cmd_trace(o);
        if (*diff) return cmd_difftest(o);
        if (*comp) {
            emit(to_text(compose(load_spec(o.file), load_spec(o.file2))), o.out);
            return 0;
        }
        if (*rev) return cmd_reversible(o);
    } catch (const Error& e) {
        std::cerr << "error: " << err_name(e.code) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
