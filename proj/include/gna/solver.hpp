#pragma once

#include <chrono>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gna/instance.hpp"
#include "gna/lagrange.hpp"

namespace gna {

struct SolverParams {
    int rounds = 3;             // K: rounds of (subgradient -> dual descent)
    int descent_sweeps = 100;   // L: dual-descent sweeps per round
    int improve_streak = 10;    // M: consecutive improvements that double the step
    int stagnation_streak = 20; // N: consecutive stagnations that halve the step
    double phi = 0.5;
    double tau = 1.0;
    std::optional<double> time_limit_s;
    std::optional<long> max_evaluations;
    double tol = 1e-9;
    int threads = 1;

    void validate() const; // throws ConfigError
};

enum class Termination { zero_subgradient, step_underflow, time_limit, iter_limit, rounds_done };
enum class Phase { subgradient, dual_descent };

std::string to_string(Termination t);
std::string to_string(Phase p);

// one row per LD evaluation; step_size is the Held-Karp step that produced
// the evaluation (phi during dual descent)
struct TraceRow {
    long iter;
    Phase phase;
    double z_ld;
    double z_lb;
    double step_size;
    double elapsed_s;
};

struct SolveReport {
    double best_lb = 0.0;
    double best_ub = std::numeric_limits<double>::infinity();
    Alignment best_alignment;
    std::vector<TraceRow> trace;
    Termination termination = Termination::rounds_done;
    long evaluations = 0;
};

// Adaptive step control: the step halves after `stagnation` consecutive
// non-improving iterations and doubles after `improve` consecutive improving
// ones; an iteration of one kind resets the other streak.
class StepController {
public:
    StepController(int improve, int stagnation)
        : improve_(improve), stagnation_(stagnation), m_(improve), n_(stagnation) {}

    double step() const { return step_; }
    bool underflowed() const { return step_ < 0x1.0p-52; }

    void on_iteration(bool improved) {
        if (improved) {
            n_ = stagnation_;
            if (--m_ == 0) {
                step_ *= 2.0;
                m_ = improve_;
            }
        } else {
            m_ = improve_;
            if (--n_ == 0) {
                step_ *= 0.5;
                n_ = stagnation_;
            }
        }
    }

private:
    int improve_, stagnation_;
    int m_, n_;
    double step_ = 1.0;
};

// Alternates subgradient optimization and dual descent over a shared
// multiplier vector, folding every evaluation into the running best bounds.
// Phases are public so they can be driven individually in tests.
class LagrangeSolver {
public:
    enum class PhaseExit { converged, zero_subgradient, step_underflow, time_limit, iter_limit, done };

    LagrangeSolver(const AlignmentInstance& inst, SolverParams params);

    SolveReport run();

    PhaseExit subgradient_phase(MultiplierStore& lambda);
    PhaseExit dual_descent_phase(MultiplierStore& lambda);

    const SolveReport& report() const { return report_; }
    double gap() const { return report_.best_ub - report_.best_lb; }

private:
    const LdEvaluation& evaluate(const MultiplierStore& lambda, Phase phase, double step);
    std::optional<PhaseExit> budget_exceeded() const;

    const AlignmentInstance& inst_;
    SolverParams params_;
    SolveReport report_;
    LdEvaluation last_eval_;
    std::chrono::steady_clock::time_point start_;
};

SolveReport solve(const AlignmentInstance& inst, const SolverParams& params = {});

} // namespace gna
