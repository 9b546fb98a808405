#include "gna/solver.hpp"

#include <cmath>

#include "gna/errors.hpp"

namespace gna {

void SolverParams::validate() const {
    if (rounds < 1 || descent_sweeps < 1 || improve_streak < 1 || stagnation_streak < 1)
        throw ConfigError("solver counters must be at least 1");
    if (phi < 0.0 || phi > 1.0 || tau < 0.0 || tau > 1.0)
        throw ConfigError("phi and tau must lie in [0,1]");
    if (time_limit_s && *time_limit_s < 0.0)
        throw ConfigError("time limit must be nonnegative");
    if (max_evaluations && *max_evaluations < 1)
        throw ConfigError("evaluation limit must be at least 1");
    if (threads < 1)
        throw ConfigError("thread count must be at least 1");
}

std::string to_string(Termination t) {
    switch (t) {
    case Termination::zero_subgradient: return "zero_subgradient";
    case Termination::step_underflow: return "step_underflow";
    case Termination::time_limit: return "time_limit";
    case Termination::iter_limit: return "iter_limit";
    case Termination::rounds_done: return "rounds_done";
    }
    return "unknown";
}

std::string to_string(Phase p) {
    return p == Phase::subgradient ? "subgradient" : "dual_descent";
}

LagrangeSolver::LagrangeSolver(const AlignmentInstance& inst, SolverParams params)
    : inst_(inst), params_(params), start_(std::chrono::steady_clock::now()) {
    params_.validate();
    report_.best_alignment = Alignment(inst.n1());
}

std::optional<LagrangeSolver::PhaseExit> LagrangeSolver::budget_exceeded() const {
    if (report_.evaluations == 0)
        return std::nullopt; // always evaluate at least once
    if (params_.max_evaluations && report_.evaluations >= *params_.max_evaluations)
        return PhaseExit::iter_limit;
    if (params_.time_limit_s) {
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (elapsed >= *params_.time_limit_s)
            return PhaseExit::time_limit;
    }
    return std::nullopt;
}

const LdEvaluation& LagrangeSolver::evaluate(const MultiplierStore& lambda, Phase phase,
                                             double step) {
    last_eval_ = evaluate_ld(inst_, lambda, params_.threads);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    report_.trace.push_back({report_.evaluations, phase, last_eval_.upper_bound,
                             last_eval_.lower_bound, step, elapsed});
    ++report_.evaluations;

    if (last_eval_.lower_bound > report_.best_lb) {
        report_.best_lb = last_eval_.lower_bound;
        report_.best_alignment = last_eval_.alignment;
    }
    report_.best_ub = std::min(report_.best_ub, last_eval_.upper_bound);
#ifndef NDEBUG
    validate_alignment(inst_, last_eval_.alignment);
#endif
    return last_eval_;
}

LagrangeSolver::PhaseExit LagrangeSolver::subgradient_phase(MultiplierStore& lambda) {
    if (auto exit = budget_exceeded())
        return *exit;
    StepController ctl(params_.improve_streak, params_.stagnation_streak);
    evaluate(lambda, Phase::subgradient, ctl.step());

    // phase-local interval for the improvement test
    double phase_lb = last_eval_.lower_bound;
    double phase_ub = last_eval_.upper_bound;

    while (true) {
        Subgradient g = subgradient_of(inst_, last_eval_);
        if (g.nonzero == 0)
            return PhaseExit::zero_subgradient;
        if (gap() <= params_.tol)
            return PhaseExit::converged;
        if (ctl.underflowed())
            return PhaseExit::step_underflow;
        if (auto exit = budget_exceeded())
            return *exit;

        double coef = ctl.step() * (last_eval_.upper_bound - last_eval_.lower_bound) /
                      static_cast<double>(g.nonzero);
        for (long s = 0; s < lambda.size(); ++s)
            if (g.g[s] != 0)
                lambda[s] -= coef * g.g[s];

        evaluate(lambda, Phase::subgradient, ctl.step());
        bool improved = last_eval_.lower_bound > phase_lb + params_.tol ||
                        last_eval_.upper_bound < phase_ub - params_.tol;
        phase_lb = std::max(phase_lb, last_eval_.lower_bound);
        phase_ub = std::min(phase_ub, last_eval_.upper_bound);
        ctl.on_iteration(improved);
    }
}

LagrangeSolver::PhaseExit LagrangeSolver::dual_descent_phase(MultiplierStore& lambda) {
    if (auto exit = budget_exceeded())
        return *exit;
    evaluate(lambda, Phase::dual_descent, params_.phi);
    if (lambda.size() == 0)
        return PhaseExit::done; // no quadratic coupling: nothing to update

    const WSupport& sup = inst_.support();
    const double spread = descent_spread(inst_);

    for (int sweep = 0; sweep < params_.descent_sweeps; ++sweep) {
        if (gap() <= params_.tol)
            return PhaseExit::converged;
        if (auto exit = budget_exceeded())
            return *exit;

        SlackBundle slacks = compute_slacks(inst_, lambda, last_eval_, params_.tol);
        for (long s = 0; s < lambda.size(); ++s) {
            const auto& key = sup.keys[s];
            lambda[s] +=
                params_.phi * (slacks.gamma[sup.fwd_slot[s]] +
                               params_.tau * spread * slacks.pi[key.p1]) -
                params_.phi * (slacks.gamma[sup.bwd_slot[s]] +
                               params_.tau * spread * slacks.pi[key.p2]);
        }

        double prev_ub = last_eval_.upper_bound;
        evaluate(lambda, Phase::dual_descent, params_.phi);
        if (last_eval_.upper_bound > prev_ub + 1e-7 * (1.0 + std::abs(prev_ub)))
            throw InvariantError("dual descent increased the upper bound: " +
                                 std::to_string(prev_ub) + " -> " +
                                 std::to_string(last_eval_.upper_bound));
    }
    return PhaseExit::done;
}

SolveReport LagrangeSolver::run() {
    start_ = std::chrono::steady_clock::now();
    MultiplierStore lambda(inst_);

    for (int round = 0; round < params_.rounds; ++round) {
        for (Phase phase : {Phase::subgradient, Phase::dual_descent}) {
            PhaseExit exit = phase == Phase::subgradient ? subgradient_phase(lambda)
                                                         : dual_descent_phase(lambda);
            if (exit == PhaseExit::time_limit) {
                report_.termination = Termination::time_limit;
                return report_;
            }
            if (exit == PhaseExit::iter_limit) {
                report_.termination = Termination::iter_limit;
                return report_;
            }
            if (gap() <= params_.tol) {
                // remaining rounds cannot move either bound
                report_.termination = exit == PhaseExit::zero_subgradient
                                          ? Termination::zero_subgradient
                                          : Termination::rounds_done;
                return report_;
            }
        }
    }
    report_.termination = Termination::rounds_done;
    return report_;
}

SolveReport solve(const AlignmentInstance& inst, const SolverParams& params) {
    LagrangeSolver solver(inst, params);
    return solver.run();
}

} // namespace gna
