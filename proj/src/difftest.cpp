#include "lt/difftest.hpp"

#include <optional>
#include <sstream>

#include "lt/compile.hpp"
#include "lt/gen.hpp"

namespace lt {

std::vector<std::string> applicable_backends(const TransducerSpec& spec) {
    std::vector<std::string> b{"normalize", "iam"};
    if (spec.tier <= Tier::AlmostDepth1) b.push_back("iam-single");
    if (spec.tier <= Tier::AlmostPurelyAffine) b.push_back("twt");
    if (spec.tier <= Tier::AlmostDepth1) b.push_back("iptt");
    return b;
}

namespace {

struct Harness {
    const TransducerSpec& spec;
    std::uint64_t fuel;
    std::vector<std::string> backends;
    std::optional<TwtSpec> twt;
    std::optional<IpttSpec> iptt;
    std::optional<SimContext> ctx;

    Harness(const TransducerSpec& s, std::uint64_t f) : spec(s), fuel(f), backends(applicable_backends(s)) {
        for (auto& b : backends) {
            if (b == "twt") twt = compile_to_twt(spec);
            if (b == "iptt") iptt = compile_to_iptt(spec);
        }
        if (twt || iptt) ctx.emplace(spec);
    }

    Tree eval(const std::string& b, const Tree& tau) const {
        if (b == "normalize") return eval_normalize(spec, tau, fuel);
        if (b == "iam") return eval_iam(spec, tau, Variant::Auto, fuel);
        if (b == "iam-single") return eval_iam(spec, tau, Variant::Single, fuel);
        if (b == "twt") return twt_eval(*twt, tau, fuel);
        return iptt_eval(*iptt, tau, fuel);
    }

    // First step where the compiled machine leaves the image of the IAM run.
    std::string divergence(const std::string& b, const Tree& tau) const {
        GlobalProgram g = global_program(spec, tau);
        IndexedTree it(tau);
        std::ostringstream o;
        auto report = [&](std::size_t i, const std::string& want, const std::string& got) {
            o << "first divergent step " << i + 1 << ": IAM maps to " << want << ", " << b << " is at " << got;
        };
        if (b == "twt") {
            std::vector<TwtConfig> mapped, fired;
            run_iam(g.flat, Variant::APA, fuel,
                    [&](std::uint64_t, const IamConfig& c, const std::vector<int>&) { mapped.push_back(sim_map(*ctx, g, c)); });
            twt_run(*twt, tau, fuel, [&](std::uint64_t, const TwtConfig& c, const std::vector<int>&) { fired.push_back(c); });
            for (std::size_t i = 0; i < std::max(mapped.size(), fired.size()); ++i) {
                if (i < mapped.size() && i < fired.size() && mapped[i] == fired[i]) continue;
                report(i, i < mapped.size() ? render(it, mapped[i]) : "(end)", i < fired.size() ? render(it, fired[i]) : "(end)");
                break;
            }
        } else if (b == "iptt") {
            std::vector<IpttConfig> mapped, fired;
            run_single(g.flat, fuel,
                       [&](std::uint64_t, const SsConfig& c, const std::vector<int>&) { mapped.push_back(sim_map(*ctx, g, c)); });
            iptt_run(*iptt, tau, fuel, [&](std::uint64_t, const IpttConfig& c, const std::vector<int>&) { fired.push_back(c); });
            for (std::size_t i = 0; i < std::max(mapped.size(), fired.size()); ++i) {
                if (i < mapped.size() && i < fired.size() && mapped[i] == fired[i]) continue;
                report(i, i < mapped.size() ? render(it, mapped[i]) : "(end)", i < fired.size() ? render(it, fired[i]) : "(end)");
                break;
            }
        }
        return o.str();
    }

    DiffCase run(int index, const Tree& tau) const {
        DiffCase c;
        c.index = index;
        c.input = tau;
        for (auto& b : backends) {
            std::string out;
            try {
                out = to_string(eval(b, tau));
            } catch (const std::exception& e) {
                out = std::string("error: ") + e.what();
            }
            c.outputs.emplace_back(b, out);
        }
        const std::string& ref = c.outputs.front().second;
        for (auto& [b, out] : c.outputs)
            if (out != ref || out.rfind("error: ", 0) == 0) c.agree = false;
        if (c.agree) return c;
        std::ostringstream o;
        o << "case " << index << " input " << to_string(tau) << "\n";
        for (auto& [b, out] : c.outputs) o << "  " << b << ": " << out << "\n";
        for (auto& [b, out] : c.outputs) {
            if (out == ref || (b != "twt" && b != "iptt")) continue;
            try {
                std::string d = divergence(b, tau);
                if (!d.empty()) o << "  " << d << "\n";
            } catch (const std::exception& e) {
                o << "  " << b << " trace comparison failed: " << e.what() << "\n";
            }
        }
        c.report = o.str();
        return c;
    }
};

}  // namespace

DiffCase diff_one(const TransducerSpec& spec, const Tree& tau, std::uint64_t fuel) {
    Harness h(spec, fuel);
    return h.run(0, tau);
}

DiffReport difftest(const TransducerSpec& spec, const DiffOptions& opts) {
    Harness h(spec, opts.fuel);
    RandomTreeGenerator gen(opts.seed, spec.input, opts.max_size);
    DiffReport r;
    r.backends = h.backends;
    for (int i = 0; i < opts.cases; ++i) {
        DiffCase c = h.run(i, gen.next());
        ++r.cases;
        if (c.agree)
            ++r.agreed;
        else
            r.mismatches.push_back(std::move(c));
    }
    return r;
}

}  // namespace lt
