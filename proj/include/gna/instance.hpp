#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gna/graph_io.hpp"
#include "gna/network.hpp"

namespace gna {

enum class ScoreMode { topology_only, blended };

// Scoring descriptor. The interaction score of a quadruple (i,k,j,l) is
// topology_weight() when (i,j) in E1 and (k,l) in E2, and 0 otherwise; node
// scores live on the candidate pairs. All reachable scores are >= 0.
struct ScoreSpec {
    ScoreMode mode = ScoreMode::topology_only;
    double beta = 1.0; // weight of the topology term in blended mode

    double topology_weight() const { return mode == ScoreMode::topology_only ? 1.0 : beta; }
};

// partial injective mapping V1 -> V2; -1 = unmapped
struct Alignment {
    std::vector<int> target;

    Alignment() = default;
    explicit Alignment(int n1) : target(n1, -1) {}

    int mapped_count() const {
        int n = 0;
        for (int t : target)
            if (t >= 0)
                ++n;
        return n;
    }
};

// one quadruple of the sparse W support: i<j, k!=l, (i,j) in E1, (k,l) in E2,
// (i,k) and (j,l) candidate pairs; weight is the original (unsplit) w'
struct WSupportEntry {
    int i, k, j, l;
    double weight;
};

class AlignmentInstance;

// Sparse support of W plus the per-candidate-pair local matching templates,
// built once and reused by every bound evaluation. Directed slots: entry s
// appears as a forward edge in the local problem of (i,k) and as a backward
// edge in the local problem of (j,l); slots index gamma/y arrays of size
// 2*size().
struct WSupport {
    struct Key {
        int i, k, j, l;   // canonical orientation, i < j
        double w_split;   // w' / 2
        int p1, p2;       // candidate-pair indices of (i,k) and (j,l)
    };
    struct LocalEdge {
        int row, col;     // local indices into the pair's row/col id lists
        int support;      // index into keys
        std::int8_t sign; // +1: weight w+lambda, -1: weight w-lambda
    };

    std::vector<Key> keys; // sorted by (i,k,j,l)

    // per candidate pair p: rows/cols (sorted node ids) and edges
    std::vector<int> row_offsets, rows_flat;
    std::vector<int> col_offsets, cols_flat;
    std::vector<int> edge_offsets;
    std::vector<LocalEdge> edges_flat; // per pair, sorted by (row,col)

    std::vector<int> fwd_slot, bwd_slot; // support index -> edges_flat index

    long size() const { return static_cast<long>(keys.size()); }
    long directed_size() const { return 2 * size(); }
};

// Two networks, the sparse candidate-match graph E_m (CSR over V1), node
// scores on the candidate pairs, and the interaction-score descriptor.
// Immutable after construction; the support structure is materialized lazily
// under a once_flag and shared by concurrent readers.
class AlignmentInstance {
public:
    AlignmentInstance(Network g1, Network g2, std::vector<std::vector<int>> candidates,
                      std::vector<double> node_scores, ScoreSpec score);

    const Network& g1() const { return g1_; }
    const Network& g2() const { return g2_; }
    int n1() const { return g1_.node_count(); }
    int n2() const { return g2_.node_count(); }

    long pair_count() const { return static_cast<long>(cand_targets_.size()); }
    std::span<const int> candidates(int i) const {
        return {cand_targets_.data() + cand_offsets_[i],
                cand_targets_.data() + cand_offsets_[i + 1]};
    }
    std::optional<long> pair_index(int i, int k) const;
    int pair_source(long p) const { return pair_source_[p]; }
    int pair_target(long p) const { return cand_targets_[p]; }
    double node_score(long p) const { return node_scores_[p]; }

    const ScoreSpec& score_spec() const { return score_; }

    const WSupport& support() const;

private:
    Network g1_, g2_;
    std::vector<int> cand_offsets_;  // n1+1
    std::vector<int> cand_targets_;  // sorted within each source's range
    std::vector<int> pair_source_;   // pair index -> i
    std::vector<double> node_scores_;
    ScoreSpec score_;

    mutable std::once_flag support_once_;
    mutable std::unique_ptr<WSupport> support_;
};

// Builds the instance from a similarity table: for kind=evalue pairs with
// value <= threshold survive, for kind=bitscore pairs with value >= threshold.
// In blended mode node scores are (1-beta) * value / max surviving value
// (bitscore tables only); in topology_only mode they are 0.
AlignmentInstance build_instance(const Network& g1, const Network& g2,
                                 const SimilarityTable& sim, double filter_threshold,
                                 ScoreSpec score, std::vector<std::string>* warnings = nullptr);

// candidate graph = complete bipartite, node scores 0
AlignmentInstance make_complete_instance(Network g1, Network g2,
                                         ScoreSpec score = {ScoreMode::topology_only, 1.0});

// Streams the W support in (i,k,j,l)-sorted order without materializing it.
void enumerate_w_support(const AlignmentInstance& inst,
                         const std::function<void(const WSupportEntry&)>& yield);

// throws ConfigError if the mapping violates injectivity or candidacy
void validate_alignment(const AlignmentInstance& inst, const Alignment& a);

// s(a) = sum of node scores over mapped pairs + sum of original interaction
// weights over conserved edges
double score_alignment(const AlignmentInstance& inst, const Alignment& a);

// number of E1 edges whose endpoint images form an E2 edge
long conserved_edges(const AlignmentInstance& inst, const Alignment& a);

} // namespace gna
