#include "gna/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gna/errors.hpp"

namespace gna {

namespace {

void check_budget(const AlignmentInstance& inst, int node_limit, double tree_budget) {
    if (inst.n1() > node_limit)
        throw ConfigError("instance exceeds the oracle node limit (" +
                          std::to_string(inst.n1()) + " > " + std::to_string(node_limit) + ")");
    double estimate = 1.0;
    for (int i = 0; i < inst.n1(); ++i) {
        estimate *= 1.0 + static_cast<double>(inst.candidates(i).size());
        if (estimate > tree_budget)
            throw ConfigError("instance exceeds the oracle enumeration budget");
    }
}

} // namespace

ExactResult solve_exact(const AlignmentInstance& inst, int node_limit, double tree_budget) {
    check_budget(inst, node_limit, tree_budget);
    const int n1 = inst.n1();
    const double w = inst.score_spec().topology_weight();

    // admissible per-node potential: the node's best score plus the best
    // conceivable contribution of each E1 edge ending at it
    std::vector<double> suffix(n1 + 1, 0.0);
    {
        std::vector<double> potential(n1, 0.0);
        for (int i = 0; i < n1; ++i) {
            double best_c = 0.0;
            for (int k : inst.candidates(i))
                best_c = std::max(best_c, inst.node_score(*inst.pair_index(i, k)));
            potential[i] += best_c;
        }
        for (const auto& [u, v] : inst.g1().edges()) {
            bool conceivable = false;
            for (int k : inst.candidates(u)) {
                for (int l : inst.candidates(v))
                    if (l != k && inst.g2().has_edge(k, l)) {
                        conceivable = true;
                        break;
                    }
                if (conceivable)
                    break;
            }
            if (conceivable)
                potential[std::max(u, v)] += w;
        }
        for (int i = n1 - 1; i >= 0; --i)
            suffix[i] = suffix[i + 1] + potential[i];
    }

    Alignment current(n1);
    std::vector<char> used(inst.n2(), 0);
    ExactResult best;
    best.value = -1.0;

    std::function<void(int, double)> dfs = [&](int i, double acc) {
        if (i == n1) {
            if (acc > best.value) {
                best.value = acc;
                best.alignment = current;
            }
            return;
        }
        if (acc + suffix[i] <= best.value)
            return; // cannot strictly improve; keeps the first maximum
        for (int k : inst.candidates(i)) {
            if (used[k])
                continue;
            double delta = inst.node_score(*inst.pair_index(i, k));
            for (int j : inst.g1().neighbors(i)) {
                if (j < i && current.target[j] >= 0 && current.target[j] != k &&
                    inst.g2().has_edge(current.target[j], k))
                    delta += w;
            }
            used[k] = 1;
            current.target[i] = k;
            dfs(i + 1, acc + delta);
            current.target[i] = -1;
            used[k] = 0;
        }
        dfs(i + 1, acc); // leave i unmapped (sorts after any partner)
    };
    dfs(0, 0.0);

    // report the score recomputed the same way callers will
    best.value = score_alignment(inst, best.alignment);
    return best;
}

std::vector<std::pair<Alignment, double>> enumerate_all_scores(const AlignmentInstance& inst,
                                                               int node_limit,
                                                               double tree_budget) {
    check_budget(inst, node_limit, tree_budget);
    const int n1 = inst.n1();

    std::vector<std::pair<Alignment, double>> out;
    Alignment current(n1);
    std::vector<char> used(inst.n2(), 0);

    std::function<void(int)> dfs = [&](int i) {
        if (i == n1) {
            out.emplace_back(current, score_alignment(inst, current));
            return;
        }
        for (int k : inst.candidates(i)) {
            if (used[k])
                continue;
            used[k] = 1;
            current.target[i] = k;
            dfs(i + 1);
            current.target[i] = -1;
            used[k] = 0;
        }
        dfs(i + 1);
    };
    dfs(0);
    return out;
}

} // namespace gna
