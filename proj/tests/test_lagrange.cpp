#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gna/errors.hpp"
#include "gna/instance.hpp"
#include "gna/lagrange.hpp"
#include "gna/solver.hpp"
#include "oracles.hpp"

using namespace gna;
using testutil::Rng;

namespace {

Network single_edge_pair_graph() {
    Network g;
    g.add_node("a");
    g.add_node("b");
    g.add_edge(0, 1);
    g.seal();
    return g;
}

// independent evaluation of v_ik(lambda): rebuild the local bipartite graph
// from the support stream and brute-force the matching
double brute_local_value(const AlignmentInstance& inst, const MultiplierStore& lambda, int i,
                         int k) {
    std::vector<int> rows, cols;
    struct E {
        int j, l;
        double w;
    };
    std::vector<E> edges;
    enumerate_w_support(inst, [&](const WSupportEntry& e) {
        if (e.i == i && e.k == k)
            edges.push_back({e.j, e.l, e.weight / 2.0 + lambda.get(e.i, e.k, e.j, e.l)});
        else if (e.j == i && e.l == k)
            edges.push_back({e.i, e.k, e.weight / 2.0 - lambda.get(e.i, e.k, e.j, e.l)});
    });
    for (const auto& e : edges) {
        rows.push_back(e.j);
        cols.push_back(e.l);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    BipartiteProblem p;
    p.left_size = static_cast<int>(rows.size());
    p.right_size = static_cast<int>(cols.size());
    for (const auto& e : edges) {
        int r = static_cast<int>(std::lower_bound(rows.begin(), rows.end(), e.j) - rows.begin());
        int c = static_cast<int>(std::lower_bound(cols.begin(), cols.end(), e.l) - cols.begin());
        p.edges.push_back({r, c, e.w});
    }
    return testutil::brute_force_mwm(p).value;
}

// independent evaluation of Z_LD(lambda): brute-force local values, then a
// brute-force global matching with weights c + v
double brute_ld_value(const AlignmentInstance& inst, const MultiplierStore& lambda) {
    BipartiteProblem global;
    global.left_size = inst.n1();
    global.right_size = inst.n2();
    for (long p = 0; p < inst.pair_count(); ++p) {
        int i = inst.pair_source(p), k = inst.pair_target(p);
        global.edges.push_back({i, k, inst.node_score(p) + brute_local_value(inst, lambda, i, k)});
    }
    return testutil::brute_force_mwm(global).value;
}

MultiplierStore random_multipliers(const AlignmentInstance& inst, Rng& rng, double scale = 1.0) {
    MultiplierStore lambda(inst);
    for (long s = 0; s < lambda.size(); ++s)
        lambda[s] = (2.0 * rng.real01() - 1.0) * scale;
    return lambda;
}

} // namespace

TEST_CASE("local_problem: isolated node has value 0") {
    Network g1; // one edge plus an isolated node
    g1.add_node("a");
    g1.add_node("b");
    g1.add_node("iso");
    g1.add_edge(0, 1);
    g1.seal();
    AlignmentInstance inst = make_complete_instance(g1, single_edge_pair_graph());
    MultiplierStore lambda(inst);
    LocalResult r = local_problem(inst, lambda, 2, 0);
    CHECK(r.value == 0.0);
    CHECK(r.matched.empty());
}

TEST_CASE("local_problem: single conserved pair yields the split weight") {
    AlignmentInstance inst =
        make_complete_instance(single_edge_pair_graph(), single_edge_pair_graph());
    MultiplierStore lambda(inst);
    LocalResult r = local_problem(inst, lambda, 0, 0);
    CHECK(r.value == 0.5); // w' = 1, split in half
    REQUIRE(r.matched.size() == 1);
    CHECK(r.matched[0] == std::pair<int, int>{1, 1});
}

TEST_CASE("local_problem: non-candidate pair rejected") {
    Network g1 = single_edge_pair_graph();
    Network g2 = single_edge_pair_graph();
    SimilarityTable sim;
    sim.kind = SimilarityKind::evalue;
    sim.entries = {{"a", "a", 1.0}};
    AlignmentInstance inst = build_instance(g1, g2, sim, 100.0, {});
    MultiplierStore lambda(inst);
    CHECK_THROWS_AS(local_problem(inst, lambda, 0, 1), ConfigError);
}

TEST_CASE("local_problem: random instances match brute force under random lambda") {
    Rng rng(606);
    for (int trial = 0; trial < 25; ++trial) {
        AlignmentInstance inst =
            make_complete_instance(testutil::random_graph(6, 0.5, rng),
                                   testutil::random_graph(6, 0.5, rng));
        MultiplierStore lambda = random_multipliers(inst, rng);
        for (int probe = 0; probe < 5; ++probe) {
            int i = rng.range(0, 5), k = rng.range(0, 5);
            LocalResult r = local_problem(inst, lambda, i, k);
            double brute = brute_local_value(inst, lambda, i, k);
            CHECK(r.value == doctest::Approx(brute).epsilon(1e-12));
        }
    }
}

TEST_CASE("evaluate_ld: empty candidate graph gives (0,0)") {
    SimilarityTable empty;
    AlignmentInstance inst =
        build_instance(single_edge_pair_graph(), single_edge_pair_graph(), empty, 100.0, {});
    MultiplierStore lambda(inst);
    LdEvaluation eval = evaluate_ld(inst, lambda);
    CHECK(eval.upper_bound == 0.0);
    CHECK(eval.lower_bound == 0.0);
    CHECK(eval.alignment.mapped_count() == 0);
}

TEST_CASE("evaluate_ld: two identical single-edge graphs close at lambda 0") {
    AlignmentInstance inst =
        make_complete_instance(single_edge_pair_graph(), single_edge_pair_graph());
    MultiplierStore lambda(inst);
    LdEvaluation eval = evaluate_ld(inst, lambda);
    // each conserving local problem contributes 1/2; the global matching
    // picks two conserving pairs; the optimum is 1 conserved edge
    CHECK(eval.upper_bound == doctest::Approx(1.0));
    CHECK(eval.lower_bound == doctest::Approx(1.0));
    CHECK(eval.upper_bound == doctest::Approx(testutil::brute_force_best_alignment(inst)));
    Subgradient g = subgradient_of(inst, eval);
    CHECK(g.nonzero == 0);
}

TEST_CASE("evaluate_ld: upper bound matches the two-level brute force") {
    Rng rng(707);
    for (int trial = 0; trial < 15; ++trial) {
        AlignmentInstance inst =
            make_complete_instance(testutil::random_graph(rng.range(2, 5), 0.6, rng),
                                   testutil::random_graph(rng.range(2, 5), 0.6, rng));
        MultiplierStore lambda = random_multipliers(inst, rng, 0.7);
        LdEvaluation eval = evaluate_ld(inst, lambda);
        CHECK(eval.upper_bound == doctest::Approx(brute_ld_value(inst, lambda)).epsilon(1e-10));
    }
}

TEST_CASE("property: sandwich lb <= opt <= ub for every lambda") {
    Rng rng(808);
    for (int trial = 0; trial < 30; ++trial) {
        AlignmentInstance inst =
            make_complete_instance(testutil::random_graph(rng.range(2, 5), 0.5, rng),
                                   testutil::random_graph(rng.range(2, 5), 0.5, rng));
        double opt = testutil::brute_force_best_alignment(inst);
        for (int probe = 0; probe < 3; ++probe) {
            MultiplierStore lambda = random_multipliers(inst, rng, probe * 0.5);
            LdEvaluation eval = evaluate_ld(inst, lambda);
            CHECK(eval.lower_bound <= opt + 1e-9);
            CHECK(opt <= eval.upper_bound + 1e-9);
            CHECK(eval.lower_bound <= eval.upper_bound + 1e-9);
            CHECK(eval.lower_bound == doctest::Approx(score_alignment(inst, eval.alignment)));
        }
    }
}

TEST_CASE("evaluate_ld: parallel evaluation is identical to sequential") {
    Rng rng(909);
    AlignmentInstance inst = make_complete_instance(testutil::random_graph(6, 0.5, rng),
                                                    testutil::random_graph(6, 0.5, rng));
    MultiplierStore lambda = random_multipliers(inst, rng);
    LdEvaluation a = evaluate_ld(inst, lambda, 1);
    LdEvaluation b = evaluate_ld(inst, lambda, 4);
    CHECK(a.upper_bound == b.upper_bound);
    CHECK(a.lower_bound == b.lower_bound);
    CHECK(a.alignment.target == b.alignment.target);
    CHECK(a.local_values == b.local_values);
    CHECK(a.y_local == b.y_local);
    CHECK(a.mu_flat == b.mu_flat);
}

TEST_CASE("compute_slacks: complementary slackness and nonnegativity") {
    Rng rng(1010);
    for (int trial = 0; trial < 20; ++trial) {
        AlignmentInstance inst =
            make_complete_instance(testutil::random_graph(5, 0.6, rng),
                                   testutil::random_graph(5, 0.6, rng));
        MultiplierStore lambda = random_multipliers(inst, rng, 0.4);
        LdEvaluation eval = evaluate_ld(inst, lambda);
        SlackBundle slacks = compute_slacks(inst, lambda, eval);
        const WSupport& sup = inst.support();

        for (long p = 0; p < inst.pair_count(); ++p) {
            CHECK(slacks.pi[p] >= 0.0);
            // independent recomputation from first principles
            double expect = eval.global_alpha[inst.pair_source(p)] +
                            eval.global_beta[inst.pair_target(p)] - inst.node_score(p) -
                            eval.local_values[p];
            CHECK(slacks.pi[p] == doctest::Approx(std::max(0.0, expect)).epsilon(1e-12));
            // matched global pairs sit on tight dual edges
            if (eval.pair_aligned(inst, p))
                CHECK(slacks.pi[p] <= 1e-9);
        }
        for (size_t e = 0; e < slacks.gamma.size(); ++e) {
            CHECK(slacks.gamma[e] >= 0.0);
            if (eval.y_local[e]) // matched local edges are tight
                CHECK(slacks.gamma[e] <= 1e-9);
        }
        (void)sup;
    }
}

TEST_CASE("compute_slacks: broken certificate raises InvariantError") {
    AlignmentInstance inst =
        make_complete_instance(single_edge_pair_graph(), single_edge_pair_graph());
    MultiplierStore lambda(inst);
    LdEvaluation eval = evaluate_ld(inst, lambda);
    eval.global_alpha[0] -= 1.0; // sabotage dual feasibility
    CHECK_THROWS_AS(compute_slacks(inst, lambda, eval), InvariantError);
}

TEST_CASE("subgradient: disagreement signs") {
    // P2 vs P3: alignments disagree on how to use the middle node
    Network g1 = single_edge_pair_graph();
    Network g2;
    g2.add_node("x");
    g2.add_node("y");
    g2.add_node("z");
    g2.add_edge(0, 1);
    g2.add_edge(1, 2);
    g2.seal();
    AlignmentInstance inst = make_complete_instance(g1, g2);
    MultiplierStore lambda(inst);
    LdEvaluation eval = evaluate_ld(inst, lambda);
    Subgradient g = subgradient_of(inst, eval);
    const WSupport& sup = inst.support();
    REQUIRE(static_cast<long>(g.g.size()) == sup.size());
    for (long s = 0; s < sup.size(); ++s) {
        const auto& key = sup.keys[s];
        int fwd = eval.y_local[sup.fwd_slot[s]] && eval.pair_aligned(inst, key.p1) ? 1 : 0;
        int bwd = eval.y_local[sup.bwd_slot[s]] && eval.pair_aligned(inst, key.p2) ? 1 : 0;
        CHECK(static_cast<int>(g.g[s]) == fwd - bwd);
    }
}

TEST_CASE("property: zero subgradient implies closed gap") {
    Rng rng(1111);
    int zero_cases = 0;
    for (int trial = 0; trial < 60; ++trial) {
        AlignmentInstance inst =
            make_complete_instance(testutil::random_graph(rng.range(2, 4), 0.5, rng),
                                   testutil::random_graph(rng.range(2, 4), 0.5, rng));
        MultiplierStore lambda(inst);
        LdEvaluation eval = evaluate_ld(inst, lambda);
        Subgradient g = subgradient_of(inst, eval);
        if (g.nonzero == 0) {
            ++zero_cases;
            CHECK(eval.upper_bound - eval.lower_bound <= 1e-9 * (1.0 + eval.upper_bound));
            CHECK(eval.lower_bound ==
                  doctest::Approx(testutil::brute_force_best_alignment(inst)));
        }
    }
    CHECK(zero_cases > 0); // the family does produce consistent evaluations
}

TEST_CASE("multiplier store: keyed access validates support membership") {
    AlignmentInstance inst =
        make_complete_instance(single_edge_pair_graph(), single_edge_pair_graph());
    MultiplierStore lambda(inst);
    REQUIRE(lambda.size() == 2);
    lambda.set(0, 0, 1, 1, 0.25);
    CHECK(lambda.get(0, 0, 1, 1) == 0.25);
    CHECK(lambda.get(0, 1, 1, 0) == 0.0);
    CHECK_THROWS_AS(lambda.get(0, 0, 1, 0), ConfigError); // k == l is off-support
}

TEST_CASE("planted K4 clique: solver multipliers certify the optimum") {
    Rng rng(1212);
    Network host = testutil::random_graph(10, 0.2, rng, "h");
    int planted[] = {1, 3, 6, 9};
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            host.add_edge(planted[a], planted[b]);
    host.seal();
    AlignmentInstance inst = make_complete_instance(testutil::complete_graph(4, "p"), host);

    SolverParams params;
    LagrangeSolver solver(inst, params);
    MultiplierStore lambda(inst);
    for (int round = 0; round < params.rounds && solver.gap() > params.tol; ++round) {
        solver.subgradient_phase(lambda);
        if (solver.gap() <= params.tol)
            break;
        solver.dual_descent_phase(lambda);
    }
    REQUIRE(solver.gap() <= 1e-6);
    // the final multipliers reproduce the certified bound on re-evaluation
    LdEvaluation eval = evaluate_ld(inst, lambda);
    CHECK(eval.lower_bound == doctest::Approx(6.0));
}
