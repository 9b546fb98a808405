#include "gna/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

#include "gna/errors.hpp"

namespace gna {

double edge_correctness(const AlignmentInstance& inst, const Alignment& a) {
    long min_edges = std::min(inst.g1().edge_count(), inst.g2().edge_count());
    if (min_edges == 0)
        throw ConfigError("edge-correctness is undefined for edgeless networks");
    return static_cast<double>(conserved_edges(inst, a)) / static_cast<double>(min_edges);
}

namespace {

// multiset operations on sorted term vectors
double idf_mass(const std::vector<std::string>& terms,
                const std::unordered_map<std::string, double>& idf) {
    double mass = 0.0;
    for (const auto& t : terms)
        mass += idf.at(t);
    return mass;
}

double shared_idf_mass(const std::vector<std::string>& a, const std::vector<std::string>& b,
                       const std::unordered_map<std::string, double>& idf) {
    double mass = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            mass += idf.at(a[i]);
            ++i;
            ++j;
        }
    }
    return mass;
}

} // namespace

std::optional<double> coherence(const AlignmentInstance& inst, const Alignment& a) {
    validate_alignment(inst, a);
    const Network& g1 = inst.g1();
    const Network& g2 = inst.g2();
    long annotated1 = g1.annotated_count();
    long annotated2 = g2.annotated_count();
    if (annotated1 == 0 || annotated2 == 0)
        return std::nullopt;

    // term frequency over all annotated nodes of both networks (multiplicity
    // within one node's multiset does not add occurrences)
    std::unordered_map<std::string, double> idf;
    long total = annotated1 + annotated2;
    auto count_terms = [&](const Network& g) {
        for (int v = 0; v < g.node_count(); ++v) {
            const auto& terms = g.annotations(v);
            for (size_t t = 0; t < terms.size(); ++t)
                if (t == 0 || terms[t] != terms[t - 1])
                    idf[terms[t]] += 1.0;
        }
    };
    count_terms(g1);
    count_terms(g2);
    for (auto& [term, value] : idf)
        value = -std::log(value / static_cast<double>(total));

    double sum = 0.0;
    long scored_pairs = 0;
    for (int i = 0; i < inst.n1(); ++i) {
        int k = a.target[i];
        if (k < 0 || g1.annotations(i).empty() || g2.annotations(k).empty())
            continue;
        ++scored_pairs;
        double denom = std::max(idf_mass(g1.annotations(i), idf),
                                idf_mass(g2.annotations(k), idf));
        if (denom > 0.0)
            sum += shared_idf_mass(g1.annotations(i), g2.annotations(k), idf) / denom;
    }
    if (scored_pairs == 0)
        return std::nullopt;
    return sum / static_cast<double>(std::min(annotated1, annotated2));
}

EvalReport evaluate_alignment(const AlignmentInstance& inst, const Alignment& a) {
    EvalReport report;
    report.score = score_alignment(inst, a);
    report.conserved = conserved_edges(inst, a);
    report.edge_correctness = edge_correctness(inst, a);
    report.coherence = coherence(inst, a);
    report.mapped_nodes = a.mapped_count();
    return report;
}

// --------------------------------------------------------------- benchmarks

namespace {

// fixed-algorithm draws so outputs are stable across standard libraries
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    double real01() { return (engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

Network random_graph(int n, double p, SeededRng& rng, const std::string& prefix) {
    Network net;
    for (int v = 0; v < n; ++v)
        net.add_node(prefix + std::to_string(v));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.real01() < p)
                net.add_edge(u, v);
    net.seal();
    return net;
}

SimilarityTable complete_similarity(const Network& g1, const Network& g2) {
    SimilarityTable sim;
    sim.kind = SimilarityKind::evalue;
    for (int i = 0; i < g1.node_count(); ++i)
        for (int k = 0; k < g2.node_count(); ++k)
            sim.entries.push_back({g1.id(i), g2.id(k), 1.0});
    return sim;
}

Benchmark make_planted_clique(const PlantedClique& spec, SeededRng& rng) {
    if (spec.k > spec.host_n)
        throw ConfigError("clique size exceeds host size");
    if (spec.k < 1)
        throw ConfigError("clique size must be positive");

    Benchmark bench;
    Network pattern;
    for (int v = 0; v < spec.k; ++v)
        pattern.add_node("p" + std::to_string(v));
    for (int u = 0; u < spec.k; ++u)
        for (int v = u + 1; v < spec.k; ++v)
            pattern.add_edge(u, v);
    pattern.seal();

    Network host = random_graph(spec.host_n, spec.host_p, rng, "h");
    // plant the clique on a random k-subset (partial Fisher-Yates)
    std::vector<int> nodes(spec.host_n);
    for (int v = 0; v < spec.host_n; ++v)
        nodes[v] = v;
    for (int v = 0; v < spec.k; ++v)
        std::swap(nodes[v], nodes[v + static_cast<int>(rng.below(spec.host_n - v))]);
    for (int a = 0; a < spec.k; ++a)
        for (int b = a + 1; b < spec.k; ++b)
            host.add_edge(nodes[a], nodes[b]);
    host.seal();

    bench.sim = complete_similarity(pattern, host);
    bench.g1 = std::move(pattern);
    bench.g2 = std::move(host);
    return bench;
}

Benchmark make_noisy_copy(const NoisyCopy& spec, SeededRng& rng) {
    Benchmark bench;
    bench.g1 = random_graph(spec.n, spec.p, rng, "v");
    Network copy;
    for (int v = 0; v < spec.n; ++v)
        copy.add_node("v" + std::to_string(v));
    for (int u = 0; u < spec.n; ++u)
        for (int v = u + 1; v < spec.n; ++v) {
            bool present = bench.g1.has_edge(u, v);
            if (spec.edge_flip_rate > 0.0 && rng.real01() < spec.edge_flip_rate)
                present = !present;
            if (present)
                copy.add_edge(u, v);
        }
    copy.seal();
    bench.g2 = std::move(copy);

    bench.sim.kind = SimilarityKind::evalue;
    for (int v = 0; v < spec.n; ++v)
        bench.sim.entries.push_back(
            {bench.g1.id(v), bench.g2.id(v), 1.0}); // identity-favoring
    return bench;
}

Benchmark make_random_pair(const RandomPair& spec, SeededRng& rng) {
    Benchmark bench;
    bench.g1 = random_graph(spec.n1, spec.p1, rng, "a");
    bench.g2 = random_graph(spec.n2, spec.p2, rng, "b");
    bench.sim = complete_similarity(bench.g1, bench.g2);
    return bench;
}

} // namespace

Benchmark generate_benchmark(const BenchmarkKind& kind, std::uint64_t seed) {
    SeededRng rng(seed);
    return std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, PlantedClique>)
                return make_planted_clique(spec, rng);
            else if constexpr (std::is_same_v<T, NoisyCopy>)
                return make_noisy_copy(spec, rng);
            else
                return make_random_pair(spec, rng);
        },
        kind);
}

} // namespace gna
