#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>

namespace latt {

/// Size bounds and search budgets. Every bound that can trigger a
/// SizeExceeded / Timeout / BudgetExceeded outcome, and every sampling seed,
/// lives here so a run can be reproduced from its printed configuration.
struct Config {
    // Carrier-size bounds.
    std::size_t product_size_bound = 100'000;  // direct products of lattices
    std::size_t extent_bound = 100'000;        // stable-set enumeration

    // analyze_map: complete-homomorphism check is exhaustive over all 2^n
    // subsets up to this source size, sampled (with recorded seed) above it.
    std::size_t complete_hom_exhaustive_max = 14;
    std::uint64_t complete_hom_samples = 4096;

    // Isomorphism / embedding search.
    std::uint64_t iso_node_budget = 1'000'000;

    // Compactness check: exhaustive while 2^|L| * 2^|L| subset pairs fit in
    // the budget, sampled with recorded seed beyond.
    std::uint64_t compact_pair_budget = std::uint64_t{1} << 24;
    std::uint64_t compact_samples = 1 << 16;

    // Equation checking: assignment enumeration budget (term evaluations).
    std::uint64_t term_eval_budget = 10'000'000;

    // check_ultrafilter is doubly exponential in |I|.
    std::size_t ultrafilter_check_max = 5;

    std::uint64_t seed = 0x1a77'0001;  // seed for any sampling fallback

    friend std::ostream& operator<<(std::ostream& os, const Config& c) {
        return os << "product-bound=" << c.product_size_bound
                  << " extent-bound=" << c.extent_bound
                  << " complete-hom-exhaustive-max=" << c.complete_hom_exhaustive_max
                  << " iso-budget=" << c.iso_node_budget
                  << " compact-budget=" << c.compact_pair_budget
                  << " term-budget=" << c.term_eval_budget
                  << " seed=" << c.seed;
    }
};

}  // namespace latt
