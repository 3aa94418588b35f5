// instance.hpp
//
// A problem instance: n components, a hidden support set S of size s whose
// components follow f1, everything else f0. Regenerating from the same
// (n, s, model, seed) reproduces the identical support.
#pragma once

#include <cstdint>
#include <vector>

#include "seqrec/models.hpp"

namespace seqrec {

struct ProblemInstance {
    std::uint32_t n;
    std::uint32_t s;
    std::vector<std::uint32_t> support;  // sorted, size s, indices in [0, n)
    Model model;
    std::uint64_t seed;

    Hypothesis hypothesis_of(std::uint32_t component) const;
};

// Support drawn uniformly without replacement from the seeded stream.
ProblemInstance generate_instance(std::uint32_t n, std::uint32_t s, const Model& model,
                                  std::uint64_t seed);

} // namespace seqrec
