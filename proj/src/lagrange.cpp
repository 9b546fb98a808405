#include "gna/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "gna/errors.hpp"
#include "gna/parallel.hpp"

namespace gna {

long MultiplierStore::key_index(int i, int k, int j, int l) const {
    const auto& keys = inst_->support().keys;
    WSupport::Key probe;
    probe.i = i;
    probe.k = k;
    probe.j = j;
    probe.l = l;
    auto cmp = [](const WSupport::Key& a, const WSupport::Key& b) {
        return std::tie(a.i, a.k, a.j, a.l) < std::tie(b.i, b.k, b.j, b.l);
    };
    auto it = std::lower_bound(keys.begin(), keys.end(), probe, cmp);
    if (it == keys.end() || std::tie(it->i, it->k, it->j, it->l) != std::tie(i, k, j, l))
        throw ConfigError("quadruple is not in the W support");
    return it - keys.begin();
}

double MultiplierStore::get(int i, int k, int j, int l) const {
    return values_[key_index(i, k, j, l)];
}

void MultiplierStore::set(int i, int k, int j, int l, double value) {
    values_[key_index(i, k, j, l)] = value;
}

double descent_spread(const AlignmentInstance& inst) {
    return 1.0 / (2.0 * (inst.n1() - 1)) + 1.0 / (2.0 * (inst.n2() - 1));
}

namespace {

// weight of a directed slot under the current multipliers
inline double slot_weight(const WSupport& sup, const WSupport::LocalEdge& e,
                          std::span<const double> lambda) {
    return sup.keys[e.support].w_split + (e.sign > 0 ? lambda[e.support] : -lambda[e.support]);
}

// Solves the local matching of candidate pair p into the flat result arrays.
// Scratch objects are caller-provided so a worker can reuse them.
void solve_local(const AlignmentInstance& inst, std::span<const double> lambda, long p,
                 MwmSolver& solver, BipartiteProblem& problem, MatchingResult& result,
                 LdEvaluation& out) {
    const WSupport& sup = inst.support();
    const int ebegin = sup.edge_offsets[p], eend = sup.edge_offsets[p + 1];
    if (ebegin == eend) {
        out.local_values[p] = 0.0;
        return;
    }
    problem.left_size = sup.row_offsets[p + 1] - sup.row_offsets[p];
    problem.right_size = sup.col_offsets[p + 1] - sup.col_offsets[p];
    problem.edges.clear();
    for (int e = ebegin; e < eend; ++e) {
        const auto& edge = sup.edges_flat[e];
        problem.edges.push_back({edge.row, edge.col, slot_weight(sup, edge, lambda)});
    }
    solver.solve(problem, result);

    out.local_values[p] = result.value;
    std::copy(result.duals_left.begin(), result.duals_left.end(),
              out.mu_flat.begin() + sup.row_offsets[p]);
    std::copy(result.duals_right.begin(), result.duals_right.end(),
              out.nu_flat.begin() + sup.col_offsets[p]);
    // matched (row,col) pairs back to directed slots; edges are sorted by
    // (row,col) within the pair's range
    for (auto [row, col] : result.matched) {
        auto begin = sup.edges_flat.begin() + ebegin;
        auto end = sup.edges_flat.begin() + eend;
        auto it = std::lower_bound(begin, end, std::make_pair(row, col),
                                   [](const WSupport::LocalEdge& e, std::pair<int, int> rc) {
                                       return std::tie(e.row, e.col) <
                                              std::tie(rc.first, rc.second);
                                   });
        out.y_local[it - sup.edges_flat.begin()] = 1;
    }
}

} // namespace

LocalResult local_problem(const AlignmentInstance& inst, const MultiplierStore& lambda,
                          int i, int k) {
    auto p = inst.pair_index(i, k);
    if (!p)
        throw ConfigError("(" + std::to_string(i) + "," + std::to_string(k) +
                          ") is not a candidate pair");
    const WSupport& sup = inst.support();

    LdEvaluation scratch;
    scratch.local_values.assign(inst.pair_count(), 0.0);
    scratch.mu_flat.assign(sup.rows_flat.size(), 0.0);
    scratch.nu_flat.assign(sup.cols_flat.size(), 0.0);
    scratch.y_local.assign(sup.edges_flat.size(), 0);

    MwmSolver solver;
    BipartiteProblem problem;
    MatchingResult result;
    solve_local(inst, lambda.values(), *p, solver, problem, result, scratch);

    LocalResult out;
    out.value = scratch.local_values[*p];
    out.mu.assign(scratch.mu_flat.begin() + sup.row_offsets[*p],
                  scratch.mu_flat.begin() + sup.row_offsets[*p + 1]);
    out.nu.assign(scratch.nu_flat.begin() + sup.col_offsets[*p],
                  scratch.nu_flat.begin() + sup.col_offsets[*p + 1]);
    for (int e = sup.edge_offsets[*p]; e < sup.edge_offsets[*p + 1]; ++e)
        if (scratch.y_local[e])
            out.matched.emplace_back(sup.rows_flat[sup.row_offsets[*p] + sup.edges_flat[e].row],
                                     sup.cols_flat[sup.col_offsets[*p] + sup.edges_flat[e].col]);
    return out;
}

LdEvaluation evaluate_ld(const AlignmentInstance& inst, const MultiplierStore& lambda,
                         int threads) {
    const WSupport& sup = inst.support();
    const long m = inst.pair_count();

    LdEvaluation eval;
    eval.local_values.assign(m, 0.0);
    eval.mu_flat.assign(sup.rows_flat.size(), 0.0);
    eval.nu_flat.assign(sup.cols_flat.size(), 0.0);
    eval.y_local.assign(sup.edges_flat.size(), 0);
    eval.alignment = Alignment(inst.n1());

    parallel_for(m, threads, [&](long begin, long end) {
        MwmSolver solver;
        BipartiteProblem problem;
        MatchingResult result;
        for (long p = begin; p < end; ++p)
            solve_local(inst, lambda.values(), p, solver, problem, result, eval);
    });

    // global matching over the alignment graph with weights c + v
    BipartiteProblem global;
    global.left_size = inst.n1();
    global.right_size = inst.n2();
    global.edges.reserve(m);
    for (long p = 0; p < m; ++p)
        global.edges.push_back({inst.pair_source(p), inst.pair_target(p),
                                inst.node_score(p) + eval.local_values[p]});
    MwmSolver solver;
    MatchingResult result = solver.solve(global);

    eval.upper_bound = result.value;
    eval.global_alpha = std::move(result.duals_left);
    eval.global_beta = std::move(result.duals_right);
    for (auto [i, k] : result.matched)
        eval.alignment.target[i] = k;
    eval.lower_bound = score_alignment(inst, eval.alignment);
    return eval;
}

SlackBundle compute_slacks(const AlignmentInstance& inst, const MultiplierStore& lambda,
                           const LdEvaluation& eval, double tol) {
    const WSupport& sup = inst.support();
    const long m = inst.pair_count();

    SlackBundle out;
    out.pi.resize(m);
    out.gamma.resize(sup.edges_flat.size());

    auto clamp = [tol](double slack, const char* what) {
        if (slack < -tol)
            throw InvariantError(std::string(what) +
                                 " slack is negative: " + std::to_string(slack));
        return std::max(0.0, slack);
    };

    for (long p = 0; p < m; ++p) {
        double pi = eval.global_alpha[inst.pair_source(p)] +
                    eval.global_beta[inst.pair_target(p)] - inst.node_score(p) -
                    eval.local_values[p];
        out.pi[p] = clamp(pi, "global");
        for (int e = sup.edge_offsets[p]; e < sup.edge_offsets[p + 1]; ++e) {
            const auto& edge = sup.edges_flat[e];
            double gamma = eval.mu_flat[sup.row_offsets[p] + edge.row] +
                           eval.nu_flat[sup.col_offsets[p] + edge.col] -
                           slot_weight(sup, edge, lambda.values());
            out.gamma[e] = clamp(gamma, "local");
        }
    }
    return out;
}

Subgradient subgradient_of(const AlignmentInstance& inst, const LdEvaluation& eval) {
    const WSupport& sup = inst.support();
    Subgradient out;
    out.g.assign(sup.size(), 0);
    for (long s = 0; s < sup.size(); ++s) {
        const auto& key = sup.keys[s];
        int fwd = eval.y_local[sup.fwd_slot[s]] && eval.pair_aligned(inst, key.p1);
        int bwd = eval.y_local[sup.bwd_slot[s]] && eval.pair_aligned(inst, key.p2);
        out.g[s] = static_cast<std::int8_t>(fwd - bwd);
        if (out.g[s] != 0)
            ++out.nonzero;
    }
    return out;
}

} // namespace gna
