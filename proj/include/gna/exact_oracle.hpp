#pragma once

#include <utility>
#include <vector>

#include "gna/instance.hpp"

namespace gna {

struct ExactResult {
    double value = 0.0;
    Alignment alignment;
};

// Exhaustive exact solve by depth-first search over all candidate-respecting
// partial injective mappings, with an admissible bound for pruning. Never
// used on the main solve path; it is the ground truth for small instances.
// Throws ConfigError when n1 exceeds node_limit or the upfront tree-size
// estimate exceeds tree_budget. Ties break toward the lexicographically
// smallest mapping (partners ascending, unmapped last).
ExactResult solve_exact(const AlignmentInstance& inst, int node_limit = 7,
                        double tree_budget = 1e8);

// Full enumeration of every partial injective candidate-respecting mapping
// with its score (the empty mapping included). For distribution-level tests;
// a tighter budget applies.
std::vector<std::pair<Alignment, double>> enumerate_all_scores(const AlignmentInstance& inst,
                                                               int node_limit = 5,
                                                               double tree_budget = 1e6);

} // namespace gna
