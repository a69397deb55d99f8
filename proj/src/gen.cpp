#include "lt/gen.hpp"

#include <vector>

#include "lt/error.hpp"

namespace lt {

RandomTreeGenerator::RandomTreeGenerator(std::uint64_t seed, Alphabet alphabet, std::size_t bound,
                                         std::map<std::string, double> weights)
    : seed_(seed), alphabet_(std::move(alphabet)), bound_(bound), weights_(std::move(weights)), rng_(seed) {
    if (alphabet_.nullary().empty()) fail(Err::NoNullaryLetter, "alphabet " + alphabet_.to_string() + " has no nullary letter");
    if (bound_ == 0) fail(Err::Invariant, "tree size bound must be positive");
}

const std::string& RandomTreeGenerator::pick(int max_rank) {
    static const std::string none;
    std::vector<const std::string*> names;
    std::vector<double> w;
    for (auto& [a, k] : alphabet_.ranks) {
        if (k > max_rank || (max_rank > 0 && k == 0)) continue;
        auto it = weights_.find(a);
        double x = it == weights_.end() ? 1.0 : it->second;
        if (x <= 0) continue;
        names.push_back(&a);
        w.push_back(x);
    }
    if (names.empty()) return none;
    std::discrete_distribution<std::size_t> d(w.begin(), w.end());
    return *names[d(rng_)];
}

Tree RandomTreeGenerator::grow(std::size_t budget) {
    // every child needs at least one node of the remaining budget; leaves only once it is spent
    int max_rank = static_cast<int>(std::min<std::size_t>(budget - 1, 64));
    std::string a = pick(max_rank);
    if (a.empty()) a = alphabet_.nullary().front();
    int k = alphabet_.rank(a);
    std::size_t left = budget - 1;
    std::vector<Tree> kids;
    for (int i = 0; i < k; ++i) {
        std::size_t reserve = static_cast<std::size_t>(k - i - 1);
        std::size_t most = left - reserve;
        std::size_t share = i + 1 == k ? most : std::uniform_int_distribution<std::size_t>(1, most)(rng_);
        kids.push_back(grow(share));
        left -= kids.back().size();
    }
    return Tree(a, std::move(kids));
}

Tree RandomTreeGenerator::next() {
    std::size_t target = std::uniform_int_distribution<std::size_t>(1, bound_)(rng_);
    return grow(target);
}

Tree gen_tree(RandomTreeGenerator& gen) { return gen.next(); }

namespace {

int args_of(Type t, std::vector<Type>& out) {
    while (t->kind == TK::Arrow) {
        out.push_back(t->a);
        t = t->b;
    }
    return static_cast<int>(out.size());
}

struct AffineGen {
    Rng& rng;
    const Alphabet& sigma;
    int budget;
    int counter = 0;
    struct Var {
        std::string name;
        Type ty;
        bool used = false;
    };
    std::vector<Var> vars;

    Term at(const Type& a) {
        if (a->kind == TK::Bang) fail(Err::Unsupported, "random terms are purely affine, got " + to_string(a));
        if (a->kind == TK::Arrow) {
            std::string x = "x" + std::to_string(counter++);
            vars.push_back({x, a->a});
            Term body = at(a->b);
            vars.pop_back();
            return mk_lam(x, body);
        }
        bool small = --budget <= 0;
        std::vector<int> heads;  // >= 0: variable index; < 0: -(constant index) - 1
        auto letters = sigma.letters();
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i].used || (small && vars[i].ty->kind != TK::Base)) continue;
            for (int r = 0; r < 3; ++r) heads.push_back(static_cast<int>(i));  // favour variables
        }
        for (std::size_t i = 0; i < letters.size(); ++i)
            if (!small || sigma.rank(letters[i]) == 0) heads.push_back(-static_cast<int>(i) - 1);
        if (heads.empty()) fail(Err::NoNullaryLetter, "no closed term of type o over " + sigma.to_string());
        int h = heads[std::uniform_int_distribution<std::size_t>(0, heads.size() - 1)(rng)];
        if (h < 0) {
            const std::string& c = letters[-h - 1];
            std::vector<Term> xs;
            for (int i = 0; i < sigma.rank(c); ++i) xs.push_back(at(base()));
            return apps(mk_const(c), xs);
        }
        vars[h].used = true;
        std::vector<Type> tys;
        args_of(vars[h].ty, tys);
        std::vector<Term> xs;
        for (auto& t : tys) xs.push_back(at(t));
        return apps(mk_var(vars[h].name), xs);
    }
};

struct AlmostGen {
    Rng& rng;
    const Alphabet& sigma;
    const std::vector<Term>& pieces;
    int budget;
    int counter = 0;
    std::vector<std::string> xs;

    Term go() {
        bool small = --budget <= 0;
        auto letters = sigma.letters();
        enum Pick { Const, Var, Piece, Redex };
        std::vector<Pick> opts{Const, Const};
        if (!xs.empty()) opts.insert(opts.end(), {Var, Var});
        if (!pieces.empty()) opts.push_back(Piece);
        if (!small) opts.insert(opts.end(), {Redex, Redex});
        switch (opts[std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng)]) {
            case Var: return mk_var(xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)]);
            case Piece: return pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
            case Redex: {
                Term arg = go();
                std::string x = "y" + std::to_string(counter++);
                xs.push_back(x);
                Term body = go();
                xs.pop_back();
                return mk_app(mk_lam(x, body), arg);
            }
            case Const: break;
        }
        std::vector<std::string> ok;
        for (auto& c : letters)
            if (!small || sigma.rank(c) == 0) ok.push_back(c);
        if (ok.empty()) fail(Err::NoNullaryLetter, "no closed term of type o over " + sigma.to_string());
        const std::string& c = ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)];
        std::vector<Term> args;
        for (int i = 0; i < sigma.rank(c); ++i) args.push_back(go());
        return apps(mk_const(c), args);
    }
};

}  // namespace

Term gen_affine_normal(Rng& rng, const Type& a, const Alphabet& sigma, int budget) {
    AffineGen g{rng, sigma, budget};
    return g.at(a);
}

Term gen_almost_affine(Rng& rng, const Alphabet& sigma, const std::vector<Term>& pieces, int budget) {
    AlmostGen g{rng, sigma, pieces, budget};
    return g.go();
}

}  // namespace lt
