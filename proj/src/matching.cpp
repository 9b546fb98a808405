#include "gna/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gna/errors.hpp"

namespace gna {

void MwmSolver::build_adjacency(const BipartiteProblem& p) {
    for (const auto& e : p.edges) {
        if (!std::isfinite(e.weight))
            throw ConfigError("non-finite edge weight");
        if (e.left < 0 || e.left >= p.left_size || e.right < 0 || e.right >= p.right_size)
            throw ConfigError("edge endpoint out of range");
    }
    std::vector<int> degree(p.left_size, 0);
    for (const auto& e : p.edges)
        if (e.weight > 0.0)
            ++degree[e.left];
    adj_offsets_.assign(p.left_size + 1, 0);
    for (int u = 0; u < p.left_size; ++u)
        adj_offsets_[u + 1] = adj_offsets_[u] + degree[u];
    adj_.resize(adj_offsets_[p.left_size]);
    std::vector<int> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (const auto& e : p.edges)
        if (e.weight > 0.0)
            adj_[fill[e.left]++] = {e.right, e.weight};
    for (int u = 0; u < p.left_size; ++u) {
        auto begin = adj_.begin() + adj_offsets_[u];
        auto end = adj_.begin() + adj_offsets_[u + 1];
        std::sort(begin, end);
        for (auto it = begin; it + 1 < end; ++it)
            if (it->first == (it + 1)->first)
                throw ConfigError("duplicate edge in bipartite problem");
    }
}

double MwmSolver::edge_weight(int u, int v) const {
    auto begin = adj_.begin() + adj_offsets_[u];
    auto end = adj_.begin() + adj_offsets_[u + 1];
    auto it = std::lower_bound(begin, end, std::make_pair(v, -std::numeric_limits<double>::infinity()));
    return it->second;
}

// adds a left node to the alternating tree at accumulated offset delta:
// schedules its zero-crossing and the tightening of each incident edge
void MwmSolver::enter_left(int u, double delta) {
    stamp_left_[u] = stage_;
    entry_left_[u] = delta;
    tree_lefts_.push_back(u);
    events_.push({delta + alpha_[u], 1, u, -1});
    for (int e = adj_offsets_[u]; e < adj_offsets_[u + 1]; ++e) {
        auto [v, w] = adj_[e];
        if (stamp_right_[v] == stage_)
            continue; // slack to tree rights is constant
        events_.push({delta + alpha_[u] + beta_[v] - w, 0, u, v});
    }
}

void MwmSolver::finish_stage(double delta_end, int end_left, int end_right) {
    for (int u : tree_lefts_)
        alpha_[u] = std::max(0.0, alpha_[u] - (delta_end - entry_left_[u]));
    for (int v : tree_rights_)
        beta_[v] += delta_end - entry_right_[v];

    // Re-match along the tree path back to the root. end_right < 0 means the
    // path ends by evicting end_left (its potential reached zero).
    int left, right;
    if (end_right >= 0) {
        left = end_left;
        right = end_right;
    } else {
        right = match_left_[end_left];
        match_left_[end_left] = -1;
        if (right < 0)
            return; // root evicted: it simply stays unmatched
        left = parent_right_[right];
    }
    while (true) {
        int old_right = match_left_[left];
        match_left_[left] = right;
        match_right_[right] = left;
        if (old_right < 0)
            break; // reached the stage root
        right = old_right;
        left = parent_right_[right];
    }
}

void MwmSolver::run_stage(int u0) {
    ++stage_;
    tree_lefts_.clear();
    tree_rights_.clear();
    while (!events_.empty())
        events_.pop();

    // feasible starting potential; zero means u0 can stay unmatched as-is
    double a0 = 0.0;
    for (int e = adj_offsets_[u0]; e < adj_offsets_[u0 + 1]; ++e)
        a0 = std::max(a0, adj_[e].second - beta_[adj_[e].first]);
    alpha_[u0] = a0;
    if (a0 == 0.0)
        return;
    enter_left(u0, 0.0);

    while (!events_.empty()) {
        Event ev = events_.top();
        events_.pop();
        if (ev.kind == 1) {
            finish_stage(ev.threshold, ev.u, -1);
            return;
        }
        if (stamp_right_[ev.v] == stage_)
            continue; // entered the tree through an earlier event
        if (match_right_[ev.v] < 0) {
            finish_stage(ev.threshold, ev.u, ev.v);
            return;
        }
        stamp_right_[ev.v] = stage_;
        entry_right_[ev.v] = ev.threshold;
        parent_right_[ev.v] = ev.u;
        tree_rights_.push_back(ev.v);
        enter_left(match_right_[ev.v], ev.threshold);
    }
    throw InvariantError("matching stage ran out of events");
}

void MwmSolver::solve(const BipartiteProblem& p, MatchingResult& out) {
    build_adjacency(p);

    alpha_.assign(p.left_size, 0.0);
    beta_.assign(p.right_size, 0.0);
    match_left_.assign(p.left_size, -1);
    match_right_.assign(p.right_size, -1);
    stamp_left_.assign(p.left_size, 0);
    stamp_right_.assign(p.right_size, 0);
    entry_left_.resize(p.left_size);
    entry_right_.resize(p.right_size);
    parent_right_.assign(p.right_size, -1);
    stage_ = 0;

    for (int u0 = 0; u0 < p.left_size; ++u0)
        if (adj_offsets_[u0] < adj_offsets_[u0 + 1])
            run_stage(u0);

    out.matched.clear();
    out.value = 0.0;
    for (int u = 0; u < p.left_size; ++u) {
        int v = match_left_[u];
        if (v >= 0) {
            out.matched.emplace_back(u, v);
            out.value += edge_weight(u, v);
        }
    }
    out.duals_left = alpha_;
    out.duals_right = beta_;
}

MatchingResult MwmSolver::solve(const BipartiteProblem& p) {
    MatchingResult out;
    solve(p, out);
    return out;
}

MatchingResult solve_mwm(const BipartiteProblem& p) {
    MwmSolver solver;
    return solver.solve(p);
}

bool verify_certificate(const BipartiteProblem& p, const MatchingResult& r, double tol) {
    if (static_cast<int>(r.duals_left.size()) != p.left_size ||
        static_cast<int>(r.duals_right.size()) != p.right_size)
        return false;

    auto near = [tol](double a, double b) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); };

    std::vector<char> used_left(p.left_size, 0), used_right(p.right_size, 0);
    std::vector<double> weight_of(p.left_size, std::numeric_limits<double>::quiet_NaN());
    double value = 0.0;
    for (auto [u, v] : r.matched) {
        if (u < 0 || u >= p.left_size || v < 0 || v >= p.right_size)
            return false;
        if (used_left[u] || used_right[v])
            return false; // shared endpoint
        used_left[u] = used_right[v] = 1;
    }
    // matched pairs must be edges; collect their weights
    std::vector<std::vector<std::pair<int, double>>> adj(p.left_size);
    for (const auto& e : p.edges)
        adj[e.left].emplace_back(e.right, e.weight);
    for (auto [u, v] : r.matched) {
        bool found = false;
        for (auto [rv, w] : adj[u])
            if (rv == v) {
                weight_of[u] = w;
                value += w;
                found = true;
                break;
            }
        if (!found)
            return false;
    }
    if (!near(r.value, value))
        return false;

    for (double a : r.duals_left)
        if (a < -tol)
            return false;
    for (double b : r.duals_right)
        if (b < -tol)
            return false;

    // feasibility and tightness of matched edges
    for (const auto& e : p.edges) {
        double slack = r.duals_left[e.left] + r.duals_right[e.right] - e.weight;
        if (slack < -tol * (1.0 + std::abs(e.weight)))
            return false;
    }
    for (auto [u, v] : r.matched)
        if (!near(r.duals_left[u] + r.duals_right[v], weight_of[u]))
            return false;

    // strong duality and complementary slackness on the nodes
    double dual_sum = 0.0;
    for (double a : r.duals_left)
        dual_sum += a;
    for (double b : r.duals_right)
        dual_sum += b;
    if (!near(dual_sum, r.value))
        return false;
    for (int u = 0; u < p.left_size; ++u)
        if (r.duals_left[u] > tol && !used_left[u])
            return false;
    for (int v = 0; v < p.right_size; ++v)
        if (r.duals_right[v] > tol && !used_right[v])
            return false;
    return true;
}

} // namespace gna
