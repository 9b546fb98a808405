#include "gna/instance.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "gna/errors.hpp"

namespace gna {

AlignmentInstance::AlignmentInstance(Network g1, Network g2,
                                     std::vector<std::vector<int>> candidates,
                                     std::vector<double> node_scores, ScoreSpec score)
    : g1_(std::move(g1)), g2_(std::move(g2)), score_(score) {
    g1_.seal();
    g2_.seal();
    if (score_.mode == ScoreMode::blended && (score_.beta < 0.0 || score_.beta > 1.0))
        throw ConfigError("beta must lie in [0,1]");
    if (static_cast<int>(candidates.size()) != n1())
        throw ConfigError("candidate list count does not match |V1|");

    cand_offsets_.reserve(n1() + 1);
    cand_offsets_.push_back(0);
    for (int i = 0; i < n1(); ++i) {
        auto& list = candidates[i];
        std::sort(list.begin(), list.end());
        if (std::adjacent_find(list.begin(), list.end()) != list.end())
            throw ConfigError("duplicate candidate for node " + g1_.id(i));
        for (int k : list) {
            if (k < 0 || k >= n2())
                throw ConfigError("candidate index out of range");
            cand_targets_.push_back(k);
            pair_source_.push_back(i);
        }
        cand_offsets_.push_back(static_cast<int>(cand_targets_.size()));
    }

    if (node_scores.empty())
        node_scores.assign(cand_targets_.size(), 0.0);
    if (node_scores.size() != cand_targets_.size())
        throw ConfigError("node score count does not match candidate pair count");
    for (double c : node_scores)
        if (!(c >= 0.0) || !std::isfinite(c))
            throw ConfigError("node scores must be finite and nonnegative");
    if (score_.topology_weight() < 0.0)
        throw ConfigError("negative interaction weights are not supported");
    node_scores_ = std::move(node_scores);
}

std::optional<long> AlignmentInstance::pair_index(int i, int k) const {
    if (i < 0 || i >= n1())
        return std::nullopt;
    const int* begin = cand_targets_.data() + cand_offsets_[i];
    const int* end = cand_targets_.data() + cand_offsets_[i + 1];
    const int* it = std::lower_bound(begin, end, k);
    if (it == end || *it != k)
        return std::nullopt;
    return it - cand_targets_.data();
}

void enumerate_w_support(const AlignmentInstance& inst,
                         const std::function<void(const WSupportEntry&)>& yield) {
    const Network& g1 = inst.g1();
    const Network& g2 = inst.g2();
    const double w = inst.score_spec().topology_weight();
    if (w <= 0.0)
        return; // all interaction scores are 0: empty support
    for (int i = 0; i < inst.n1(); ++i) {
        for (int k : inst.candidates(i)) {
            for (int j : g1.neighbors(i)) {
                if (j <= i)
                    continue;
                for (int l : inst.candidates(j)) {
                    if (l != k && g2.has_edge(k, l))
                        yield({i, k, j, l, w});
                }
            }
        }
    }
}

const WSupport& AlignmentInstance::support() const {
    std::call_once(support_once_, [this] {
        auto sup = std::make_unique<WSupport>();
        enumerate_w_support(*this, [&](const WSupportEntry& e) {
            WSupport::Key key;
            key.i = e.i;
            key.k = e.k;
            key.j = e.j;
            key.l = e.l;
            key.w_split = e.weight / 2.0;
            key.p1 = static_cast<int>(*pair_index(e.i, e.k));
            key.p2 = static_cast<int>(*pair_index(e.j, e.l));
            sup->keys.push_back(key);
        });

        const long m = pair_count();
        const long s = sup->size();

        // collect the directed edges per candidate pair: forward (partner j,l)
        // for problem (i,k), backward (partner i,k) for problem (j,l)
        struct Directed {
            int other_row, other_col;
            int support;
            std::int8_t sign;
        };
        std::vector<std::vector<Directed>> local(m);
        for (long si = 0; si < s; ++si) {
            const auto& key = sup->keys[si];
            local[key.p1].push_back({key.j, key.l, static_cast<int>(si), +1});
            local[key.p2].push_back({key.i, key.k, static_cast<int>(si), -1});
        }

        sup->row_offsets.assign(m + 1, 0);
        sup->col_offsets.assign(m + 1, 0);
        sup->edge_offsets.assign(m + 1, 0);
        sup->fwd_slot.assign(s, -1);
        sup->bwd_slot.assign(s, -1);

        std::vector<int> rows, cols;
        for (long p = 0; p < m; ++p) {
            auto& edges = local[p];
            rows.clear();
            cols.clear();
            for (const auto& d : edges) {
                rows.push_back(d.other_row);
                cols.push_back(d.other_col);
            }
            std::sort(rows.begin(), rows.end());
            rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
            std::sort(cols.begin(), cols.end());
            cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

            std::sort(edges.begin(), edges.end(), [](const Directed& a, const Directed& b) {
                return std::tie(a.other_row, a.other_col) < std::tie(b.other_row, b.other_col);
            });
            for (const auto& d : edges) {
                int row = static_cast<int>(
                    std::lower_bound(rows.begin(), rows.end(), d.other_row) - rows.begin());
                int col = static_cast<int>(
                    std::lower_bound(cols.begin(), cols.end(), d.other_col) - cols.begin());
                int slot = static_cast<int>(sup->edges_flat.size());
                sup->edges_flat.push_back({row, col, d.support, d.sign});
                (d.sign > 0 ? sup->fwd_slot : sup->bwd_slot)[d.support] = slot;
            }
            sup->rows_flat.insert(sup->rows_flat.end(), rows.begin(), rows.end());
            sup->cols_flat.insert(sup->cols_flat.end(), cols.begin(), cols.end());
            sup->row_offsets[p + 1] = static_cast<int>(sup->rows_flat.size());
            sup->col_offsets[p + 1] = static_cast<int>(sup->cols_flat.size());
            sup->edge_offsets[p + 1] = static_cast<int>(sup->edges_flat.size());
        }
        support_ = std::move(sup);
    });
    return *support_;
}

AlignmentInstance build_instance(const Network& g1, const Network& g2,
                                 const SimilarityTable& sim, double filter_threshold,
                                 ScoreSpec score, std::vector<std::string>* warnings) {
    if (score.mode == ScoreMode::blended && (score.beta < 0.0 || score.beta > 1.0))
        throw ConfigError("beta must lie in [0,1]");
    if (score.mode == ScoreMode::blended && sim.kind != SimilarityKind::bitscore)
        throw ConfigError("blended scoring requires a bitscore similarity table");

    struct Surviving {
        int i, k;
        double value;
    };
    std::vector<Surviving> surviving;
    double max_value = 0.0;
    for (const auto& entry : sim.entries) {
        auto i = g1.index_of(entry.id1);
        if (!i)
            throw ConfigError("similarity id '" + entry.id1 + "' not found in first network");
        auto k = g2.index_of(entry.id2);
        if (!k)
            throw ConfigError("similarity id '" + entry.id2 + "' not found in second network");
        bool keep = sim.kind == SimilarityKind::evalue ? entry.value <= filter_threshold
                                                       : entry.value >= filter_threshold;
        if (!keep)
            continue;
        surviving.push_back({*i, *k, entry.value});
        max_value = std::max(max_value, entry.value);
    }
    if (surviving.empty() && warnings)
        warnings->push_back("candidate graph is empty after filtering");

    std::sort(surviving.begin(), surviving.end(), [](const Surviving& a, const Surviving& b) {
        return std::tie(a.i, a.k) < std::tie(b.i, b.k);
    });

    std::vector<std::vector<int>> candidates(g1.node_count());
    std::vector<double> scores;
    scores.reserve(surviving.size());
    const bool scored = score.mode == ScoreMode::blended && max_value > 0.0;
    for (const auto& sv : surviving) {
        candidates[sv.i].push_back(sv.k);
        scores.push_back(scored ? (1.0 - score.beta) * sv.value / max_value : 0.0);
    }
    return AlignmentInstance(g1, g2, std::move(candidates), std::move(scores), score);
}

AlignmentInstance make_complete_instance(Network g1, Network g2, ScoreSpec score) {
    std::vector<std::vector<int>> candidates(g1.node_count());
    for (auto& list : candidates) {
        list.resize(g2.node_count());
        for (int k = 0; k < g2.node_count(); ++k)
            list[k] = k;
    }
    return AlignmentInstance(std::move(g1), std::move(g2), std::move(candidates), {}, score);
}

void validate_alignment(const AlignmentInstance& inst, const Alignment& a) {
    if (static_cast<int>(a.target.size()) != inst.n1())
        throw ConfigError("alignment size does not match |V1|");
    std::vector<char> used(inst.n2(), 0);
    for (int i = 0; i < inst.n1(); ++i) {
        int k = a.target[i];
        if (k < 0)
            continue;
        if (k >= inst.n2())
            throw ConfigError("alignment target out of range");
        if (used[k])
            throw ConfigError("alignment is not injective: node " + inst.g2().id(k) +
                              " has two sources");
        used[k] = 1;
        if (!inst.pair_index(i, k))
            throw ConfigError("pair (" + inst.g1().id(i) + "," + inst.g2().id(k) +
                              ") is not a candidate");
    }
}

double score_alignment(const AlignmentInstance& inst, const Alignment& a) {
    validate_alignment(inst, a);
    double score = 0.0;
    for (int i = 0; i < inst.n1(); ++i) {
        int k = a.target[i];
        if (k >= 0)
            score += inst.node_score(*inst.pair_index(i, k));
    }
    const double w = inst.score_spec().topology_weight();
    for (const auto& [u, v] : inst.g1().edges()) {
        int ku = a.target[u], kv = a.target[v];
        if (ku >= 0 && kv >= 0 && inst.g2().has_edge(ku, kv))
            score += w;
    }
    return score;
}

long conserved_edges(const AlignmentInstance& inst, const Alignment& a) {
    validate_alignment(inst, a);
    long count = 0;
    for (const auto& [u, v] : inst.g1().edges()) {
        int ku = a.target[u], kv = a.target[v];
        if (ku >= 0 && kv >= 0 && inst.g2().has_edge(ku, kv))
            ++count;
    }
    return count;
}

} // namespace gna
