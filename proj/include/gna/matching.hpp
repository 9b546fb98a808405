#pragma once

#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

namespace gna {

struct BipartiteProblem {
    struct Edge {
        int left;
        int right;
        double weight;
    };
    int left_size = 0;
    int right_size = 0;
    std::vector<Edge> edges;
};

// Primal solution plus a dual certificate for the matching LP
//   max sum w x  s.t.  row/col sums <= 1, x >= 0
// Invariants at tolerance: duals_left[u] + duals_right[v] >= w(u,v) on every
// edge, both dual vectors nonnegative, sum of duals == value (strong duality),
// matched edges tight, nodes with positive dual matched.
struct MatchingResult {
    std::vector<std::pair<int, int>> matched; // sorted by left index
    double value = 0.0;
    std::vector<double> duals_left;
    std::vector<double> duals_right;
};

// Maximum-weight bipartite matching via successive shortest augmenting paths
// with node potentials. Matchings need not be perfect: edges with weight <= 0
// are dropped (leaving nodes unmatched is feasible), and an augmenting path
// may end by un-matching a node whose potential has dropped to zero. The
// potentials are the LP duals; they are maintained exactly, so no post-hoc
// shifting is needed. Deterministic: ties break toward smaller (left, right)
// indices. Scratch buffers are reused across solve() calls; one instance per
// thread.
class MwmSolver {
public:
    MatchingResult solve(const BipartiteProblem& p);
    void solve(const BipartiteProblem& p, MatchingResult& out);

private:
    struct Event {
        double threshold;
        std::int8_t kind; // 0 = edge became tight, 1 = potential hit zero
        int u;
        int v;
        bool operator>(const Event& o) const {
            if (threshold != o.threshold)
                return threshold > o.threshold;
            if (kind != o.kind)
                return kind > o.kind;
            if (u != o.u)
                return u > o.u;
            return v > o.v;
        }
    };

    void build_adjacency(const BipartiteProblem& p);
    void run_stage(int u0);
    void enter_left(int u, double delta);
    void finish_stage(double delta_end, int end_left, int end_right);
    double edge_weight(int u, int v) const;

    // problem (positive edges only), adjacency sorted by right index
    std::vector<int> adj_offsets_;
    std::vector<std::pair<int, double>> adj_;

    std::vector<double> alpha_, beta_;
    std::vector<int> match_left_, match_right_;

    // alternating-tree bookkeeping, stamped per stage
    std::vector<int> stamp_left_, stamp_right_;
    std::vector<double> entry_left_, entry_right_;
    std::vector<int> parent_right_;
    std::vector<int> tree_lefts_, tree_rights_;
    int stage_ = 0;

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
};

// convenience wrapper around a one-shot solver
MatchingResult solve_mwm(const BipartiteProblem& p);

// Checks matching validity, dual feasibility, strong duality and
// complementary slackness, all with relative-plus-absolute tolerance tol.
bool verify_certificate(const BipartiteProblem& p, const MatchingResult& r, double tol);

} // namespace gna
