#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <tuple>

#include "gna/errors.hpp"
#include "gna/instance.hpp"
#include "oracles.hpp"

using namespace gna;
using testutil::Rng;

namespace {

SimilarityTable table(SimilarityKind kind, std::vector<SimEntry> entries) {
    SimilarityTable t;
    t.kind = kind;
    t.entries = std::move(entries);
    return t;
}

Network two_nodes(const char* a, const char* b) {
    Network net;
    net.add_node(a);
    net.add_node(b);
    net.seal();
    return net;
}

// quadruple enumeration oracle: count all (i,k,j,l), i<j, k!=l, with
// (i,j) in E1, (k,l) in E2 and both pairs candidates
long brute_support_count(const AlignmentInstance& inst) {
    long count = 0;
    for (int i = 0; i < inst.n1(); ++i)
        for (int j = i + 1; j < inst.n1(); ++j)
            for (int k = 0; k < inst.n2(); ++k)
                for (int l = 0; l < inst.n2(); ++l) {
                    if (k == l)
                        continue;
                    if (!inst.g1().has_edge(i, j) || !inst.g2().has_edge(k, l))
                        continue;
                    if (inst.pair_index(i, k) && inst.pair_index(j, l))
                        ++count;
                }
    return count;
}

} // namespace

TEST_CASE("build_instance: e-value filter keeps pairs at most threshold") {
    Network g1 = two_nodes("a", "b");
    Network g2 = two_nodes("x", "y");
    auto sim = table(SimilarityKind::evalue, {{"a", "x", 50.0}, {"a", "y", 200.0}});
    AlignmentInstance inst = build_instance(g1, g2, sim, 100.0, {});
    auto cands = inst.candidates(0);
    REQUIRE(cands.size() == 1);
    CHECK(inst.g2().id(cands[0]) == "x");
    CHECK(inst.candidates(1).empty());
}

TEST_CASE("build_instance: bitscore filter keeps pairs at least threshold") {
    Network g1 = two_nodes("a", "b");
    Network g2 = two_nodes("x", "y");
    auto sim = table(SimilarityKind::bitscore, {{"a", "x", 50.0}, {"a", "y", 200.0}});
    AlignmentInstance inst =
        build_instance(g1, g2, sim, 100.0, {ScoreMode::blended, 0.5});
    auto cands = inst.candidates(0);
    REQUIRE(cands.size() == 1);
    CHECK(inst.g2().id(cands[0]) == "y");
    // normalized by the instance-wide maximum surviving bitscore (200)
    CHECK(inst.node_score(*inst.pair_index(0, cands[0])) == doctest::Approx(0.5));
}

TEST_CASE("build_instance: empty table yields empty candidates, warning") {
    std::vector<std::string> warnings;
    AlignmentInstance inst = build_instance(two_nodes("a", "b"), two_nodes("x", "y"),
                                            table(SimilarityKind::evalue, {}), 100.0, {},
                                            &warnings);
    CHECK(inst.pair_count() == 0);
    CHECK(warnings.size() == 1);
    CHECK(score_alignment(inst, Alignment(2)) == 0.0);
}

TEST_CASE("build_instance: unresolvable id is an error") {
    auto sim = table(SimilarityKind::evalue, {{"nope", "x", 1.0}});
    CHECK_THROWS_AS(build_instance(two_nodes("a", "b"), two_nodes("x", "y"), sim, 100.0, {}),
                    ConfigError);
}

TEST_CASE("build_instance: beta outside [0,1] rejected") {
    auto sim = table(SimilarityKind::bitscore, {{"a", "x", 1.0}});
    CHECK_THROWS_AS(build_instance(two_nodes("a", "b"), two_nodes("x", "y"), sim, 0.0,
                                   {ScoreMode::blended, 1.5}),
                    ConfigError);
}

TEST_CASE("build_instance: blended mode needs bitscores") {
    auto sim = table(SimilarityKind::evalue, {{"a", "x", 1.0}});
    CHECK_THROWS_AS(build_instance(two_nodes("a", "b"), two_nodes("x", "y"), sim, 100.0,
                                   {ScoreMode::blended, 0.5}),
                    ConfigError);
}

TEST_CASE("complete 4x4 topology-only instance has 16 candidate pairs") {
    Rng rng(1);
    AlignmentInstance inst = make_complete_instance(testutil::random_graph(4, 0.5, rng),
                                                    testutil::random_graph(4, 0.5, rng));
    CHECK(inst.pair_count() == 16);
}

TEST_CASE("w support: two single-edge graphs, complete candidates") {
    Network g1 = two_nodes("a", "b");
    Network g2 = two_nodes("x", "y");
    // sealing happens inside the instance; add the edges first
    Network g1e = g1, g2e = g2;
    g1e.add_edge(0, 1);
    g2e.add_edge(0, 1);
    AlignmentInstance inst = make_complete_instance(g1e, g2e);
    std::vector<std::tuple<int, int, int, int>> seen;
    enumerate_w_support(inst, [&](const WSupportEntry& e) {
        CHECK(e.weight == 1.0);
        seen.emplace_back(e.i, e.k, e.j, e.l);
    });
    std::vector<std::tuple<int, int, int, int>> expected = {{0, 0, 1, 1}, {0, 1, 1, 0}};
    CHECK(seen == expected);
}

TEST_CASE("w support: empty E2 gives empty support") {
    Network g1 = two_nodes("a", "b");
    g1.add_edge(0, 1);
    AlignmentInstance inst = make_complete_instance(g1, two_nodes("x", "y"));
    long count = 0;
    enumerate_w_support(inst, [&](const WSupportEntry&) { ++count; });
    CHECK(count == 0);
    CHECK(inst.support().size() == 0);
}

TEST_CASE("w support: random G(8,0.3) pair matches quadruple oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        AlignmentInstance inst = make_complete_instance(testutil::random_graph(8, 0.3, rng),
                                                        testutil::random_graph(8, 0.3, rng));
        long streamed = 0;
        std::set<std::tuple<int, int, int, int>> uniq;
        enumerate_w_support(inst, [&](const WSupportEntry& e) {
            ++streamed;
            CHECK(e.i < e.j);
            CHECK(e.k != e.l);
            CHECK(e.weight > 0.0);
            CHECK(inst.g1().has_edge(e.i, e.j));
            CHECK(inst.g2().has_edge(e.k, e.l));
            CHECK(inst.pair_index(e.i, e.k).has_value());
            CHECK(inst.pair_index(e.j, e.l).has_value());
            uniq.insert({e.i, e.k, e.j, e.l});
        });
        CHECK(streamed == brute_support_count(inst));
        CHECK(static_cast<long>(uniq.size()) == streamed); // each emitted once
    }
}

TEST_CASE("w support: materialized structure is consistent with the stream") {
    Rng rng(77);
    AlignmentInstance inst = make_complete_instance(testutil::random_graph(6, 0.5, rng),
                                                    testutil::random_graph(6, 0.5, rng));
    const WSupport& sup = inst.support();
    long streamed = 0;
    enumerate_w_support(inst, [&](const WSupportEntry& e) {
        const auto& key = sup.keys[streamed];
        CHECK(std::tuple(key.i, key.k, key.j, key.l) == std::tuple(e.i, e.k, e.j, e.l));
        CHECK(key.w_split == e.weight / 2.0);
        ++streamed;
    });
    REQUIRE(streamed == sup.size());
    CHECK(sup.edges_flat.size() == static_cast<size_t>(sup.directed_size()));
    // every support key has one forward and one backward slot, in the right pairs
    for (long s = 0; s < sup.size(); ++s) {
        const auto& key = sup.keys[s];
        int fs = sup.fwd_slot[s], bs = sup.bwd_slot[s];
        REQUIRE(fs >= 0);
        REQUIRE(bs >= 0);
        CHECK(sup.edges_flat[fs].sign == 1);
        CHECK(sup.edges_flat[bs].sign == -1);
        CHECK(fs >= sup.edge_offsets[key.p1]);
        CHECK(fs < sup.edge_offsets[key.p1 + 1]);
        CHECK(bs >= sup.edge_offsets[key.p2]);
        CHECK(bs < sup.edge_offsets[key.p2 + 1]);
        // slots point back at node ids consistent with the key
        const auto& fe = sup.edges_flat[fs];
        CHECK(sup.rows_flat[sup.row_offsets[key.p1] + fe.row] == key.j);
        CHECK(sup.cols_flat[sup.col_offsets[key.p1] + fe.col] == key.l);
        const auto& be = sup.edges_flat[bs];
        CHECK(sup.rows_flat[sup.row_offsets[key.p2] + be.row] == key.i);
        CHECK(sup.cols_flat[sup.col_offsets[key.p2] + be.col] == key.k);
    }
}

TEST_CASE("score_alignment: empty alignment scores 0") {
    Rng rng(3);
    AlignmentInstance inst = make_complete_instance(testutil::random_graph(4, 0.5, rng),
                                                    testutil::random_graph(4, 0.5, rng));
    CHECK(score_alignment(inst, Alignment(4)) == 0.0);
}

TEST_CASE("score_alignment: K3 identity scores 3") {
    AlignmentInstance inst =
        make_complete_instance(testutil::complete_graph(3), testutil::complete_graph(3));
    Alignment a(3);
    a.target = {0, 1, 2};
    CHECK(score_alignment(inst, a) == 3.0);
    CHECK(conserved_edges(inst, a) == 3);
}

TEST_CASE("score_alignment: planted K4 clique scores C(4,2)=6 under the planting map") {
    Rng rng(4);
    Network host = testutil::random_graph(10, 0.2, rng, "h");
    // plant the clique on nodes 2,4,5,8
    int planted[] = {2, 4, 5, 8};
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            host.add_edge(planted[a], planted[b]);
    host.seal();
    AlignmentInstance inst = make_complete_instance(testutil::complete_graph(4, "p"), host);
    Alignment a(4);
    for (int v = 0; v < 4; ++v)
        a.target[v] = planted[v];
    CHECK(score_alignment(inst, a) == 6.0);
}

TEST_CASE("score_alignment: rejects invalid mappings") {
    Network g1 = two_nodes("a", "b");
    Network g2 = two_nodes("x", "y");
    auto sim = table(SimilarityKind::evalue, {{"a", "x", 1.0}});
    AlignmentInstance inst = build_instance(g1, g2, sim, 100.0, {});
    Alignment non_candidate(2);
    non_candidate.target = {1, -1}; // (a,y) is not a candidate
    CHECK_THROWS_AS(score_alignment(inst, non_candidate), ConfigError);

    AlignmentInstance complete = make_complete_instance(g1, g2);
    Alignment dup(2);
    dup.target = {0, 0};
    CHECK_THROWS_AS(score_alignment(complete, dup), ConfigError);
}

TEST_CASE("conserved_edges: identity self-alignment conserves everything") {
    Rng rng(5);
    Network g = testutil::random_graph(8, 0.4, rng);
    AlignmentInstance inst = make_complete_instance(g, g);
    Alignment a(8);
    for (int v = 0; v < 8; ++v)
        a.target[v] = v;
    CHECK(conserved_edges(inst, a) == g.edge_count());
}

TEST_CASE("conserved_edges: path onto independent set conserves nothing") {
    Network p3;
    p3.add_node("a");
    p3.add_node("b");
    p3.add_node("c");
    p3.add_edge(0, 1);
    p3.add_edge(1, 2);
    p3.seal();
    Network empty3;
    empty3.add_node("x");
    empty3.add_node("y");
    empty3.add_node("z");
    empty3.seal();
    AlignmentInstance inst = make_complete_instance(p3, empty3);
    Alignment a(3);
    a.target = {0, 1, 2};
    CHECK(conserved_edges(inst, a) == 0);
    CHECK(score_alignment(inst, a) == 0.0);
}

TEST_CASE("property: topology-only score equals conserved edge count") {
    Rng rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        AlignmentInstance inst =
            make_complete_instance(testutil::random_graph(rng.range(2, 6), 0.5, rng),
                                   testutil::random_graph(rng.range(2, 6), 0.5, rng));
        Alignment a(inst.n1());
        std::vector<char> used(inst.n2(), 0);
        for (int i = 0; i < inst.n1(); ++i) {
            if (rng.real01() < 0.3)
                continue;
            int k = rng.range(0, inst.n2() - 1);
            if (!used[k]) {
                used[k] = 1;
                a.target[i] = k;
            }
        }
        CHECK(score_alignment(inst, a) == static_cast<double>(conserved_edges(inst, a)));
    }
}

TEST_CASE("property: extending an alignment never decreases the score") {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        AlignmentInstance inst =
            make_complete_instance(testutil::random_graph(5, 0.5, rng),
                                   testutil::random_graph(6, 0.5, rng));
        Alignment a(5);
        std::vector<char> used(6, 0);
        double prev = 0.0;
        for (int i = 0; i < 5; ++i) {
            int k = rng.range(0, 5);
            if (used[k])
                continue;
            used[k] = 1;
            a.target[i] = k;
            double score = score_alignment(inst, a);
            CHECK(score >= prev);
            prev = score;
        }
    }
}
