#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lt/transducer.hpp"

namespace lt {

struct DiffOptions {
    std::uint64_t seed = 42;
    int cases = 100;
    std::size_t max_size = 12;
    std::uint64_t fuel = kDefaultFuel;
};

struct DiffCase {
    int index = 0;
    Tree input;
    std::vector<std::pair<std::string, std::string>> outputs;  // backend -> output tree or "error: ..."
    bool agree = true;
    std::string report;  // mismatches only
};

struct DiffReport {
    std::vector<std::string> backends;
    int cases = 0;
    int agreed = 0;
    std::vector<DiffCase> mismatches;
};

// normalize and iam always; iam-single and iptt up to almost depth-1; twt up to almost purely affine.
std::vector<std::string> applicable_backends(const TransducerSpec& spec);

// Runs every applicable backend on `opts.cases` seeded random inputs of size <= opts.max_size.
DiffReport difftest(const TransducerSpec& spec, const DiffOptions& opts);

// One input through every applicable backend.
DiffCase diff_one(const TransducerSpec& spec, const Tree& tau, std::uint64_t fuel = kDefaultFuel);

}  // namespace lt
