#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "gna/graph_io.hpp"
#include "gna/instance.hpp"
#include "gna/network.hpp"

namespace gna {

struct EvalReport {
    double score = 0.0;
    long conserved = 0;
    double edge_correctness = 0.0;
    std::optional<double> coherence;
    int mapped_nodes = 0;
};

// conserved edges / min(|E1|, |E2|); error when either network is edgeless
double edge_correctness(const AlignmentInstance& inst, const Alignment& a);

// Annotation-based functional coherence of an alignment (an artifact-defined
// stand-in measure, see README). Per aligned pair with both endpoints
// annotated:
//
//   sim(u,v) = sum_{t in A(u) ^ A(v)} idf(t)
//              / max(sum_{t in A(u)} idf(t), sum_{t in A(v)} idf(t))
//
// with multiset intersection/sums, idf(t) = -log(freq(t)), freq over all
// annotated nodes of both networks. The network-wide value is the sum of pair
// similarities divided by the smaller annotated-node count. Returns nullopt
// when no aligned pair is annotated on both sides.
std::optional<double> coherence(const AlignmentInstance& inst, const Alignment& a);

EvalReport evaluate_alignment(const AlignmentInstance& inst, const Alignment& a);

// ----------------------------------------------------------- benchmark data

struct PlantedClique {
    int k;
    int host_n;
    double host_p;
};
struct NoisyCopy {
    int n;
    double p;
    double edge_flip_rate;
};
struct RandomPair {
    int n1;
    double p1;
    int n2;
    double p2;
};
using BenchmarkKind = std::variant<PlantedClique, NoisyCopy, RandomPair>;

struct Benchmark {
    Network g1;
    Network g2;
    SimilarityTable sim;
};

// Deterministic generator: identical (kind, seed) gives byte-identical
// networks and tables. planted_clique pairs K_k against a G(host_n, host_p)
// host with a clique planted on a random k-subset, complete similarity;
// noisy_copy perturbs each node pair's edge membership with the flip rate and
// favors the identity in the similarity table; random_pair is two independent
// G(n,p) graphs with complete similarity.
Benchmark generate_benchmark(const BenchmarkKind& kind, std::uint64_t seed);

} // namespace gna
