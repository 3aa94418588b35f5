#include "seqrec/instance.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace seqrec {

Hypothesis ProblemInstance::hypothesis_of(std::uint32_t component) const {
    return std::binary_search(support.begin(), support.end(), component)
               ? Hypothesis::Alt
               : Hypothesis::Null;
}

ProblemInstance generate_instance(std::uint32_t n, std::uint32_t s, const Model& model,
                                  std::uint64_t seed) {
    if (n == 0) throw std::domain_error("generate_instance: n must be positive");
    if (s > n) throw std::domain_error("generate_instance: s must satisfy s <= n");

    rng::Stream stream(rng::derive(seed, rng::kSupportStream, 0));
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    // Partial Fisher-Yates: the first s slots become the support.
    for (std::uint32_t i = 0; i < s; ++i) {
        std::uint32_t j = i + static_cast<std::uint32_t>(stream.next_below(n - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<std::uint32_t> support(pool.begin(), pool.begin() + s);
    std::sort(support.begin(), support.end());
    return ProblemInstance{n, s, std::move(support), model, seed};
}

} // namespace seqrec
