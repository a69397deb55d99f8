#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lt/term.hpp"
#include "lt/tree.hpp"
#include "lt/type.hpp"

namespace lt {

using Rng = std::mt19937_64;

// Seeded source of random trees of size at most `bound`.
class RandomTreeGenerator {
public:
    // Throws NoNullaryLetter when the alphabet has no rank-0 letter.
    RandomTreeGenerator(std::uint64_t seed, Alphabet alphabet, std::size_t bound,
                        std::map<std::string, double> weights = {});

    Tree next();
    std::uint64_t seed() const { return seed_; }
    std::size_t bound() const { return bound_; }

private:
    Tree grow(std::size_t budget);
    const std::string& pick(int max_rank);

    std::uint64_t seed_;
    Alphabet alphabet_;
    std::size_t bound_;
    std::map<std::string, double> weights_;
    Rng rng_;
};

Tree gen_tree(RandomTreeGenerator& gen);

// A closed beta-normal purely affine term of type `a` over the constants of sigma; `budget` bounds its size.
Term gen_affine_normal(Rng& rng, const Type& a, const Alphabet& sigma, int budget);

// A closed almost-affine term of type o: constants of sigma, `pieces` (closed terms of type o) and redexes
// (\x. t) s whose bound variable x : o may occur any number of times.
Term gen_almost_affine(Rng& rng, const Alphabet& sigma, const std::vector<Term>& pieces, int budget);

}  // namespace lt
