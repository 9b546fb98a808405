#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gna/instance.hpp"
#include "gna/matching.hpp"

namespace gna {

// Lagrangian multipliers lambda_{ikjl}, one per W-support key (i<j, k!=l).
// Quadruples outside the support carry no weight in either split copy, so
// their multipliers stay implicitly zero.
class MultiplierStore {
public:
    explicit MultiplierStore(const AlignmentInstance& inst)
        : inst_(&inst), values_(inst.support().size(), 0.0) {}

    long size() const { return static_cast<long>(values_.size()); }
    double operator[](long s) const { return values_[s]; }
    double& operator[](long s) { return values_[s]; }

    // keyed access; throws ConfigError when the quadruple is off-support
    double get(int i, int k, int j, int l) const;
    void set(int i, int k, int j, int l, double value);

    void reset() { values_.assign(values_.size(), 0.0); }
    std::span<const double> values() const { return values_; }
    const AlignmentInstance& instance() const { return *inst_; }

private:
    long key_index(int i, int k, int j, int l) const;

    const AlignmentInstance* inst_;
    std::vector<double> values_;
};

// One evaluation of the decomposed dual bound: all local matchings, then the
// global matching with weights c_ik + v_ik(lambda).
//
//   upper_bound = Z_LD(lambda), the global matching value
//   lower_bound = s(alignment read off the global x)
//
// mu_flat / nu_flat are the local dual variables, laid out per candidate pair
// by the support's row/col offsets; y_local marks the locally matched
// directed slots (unmasked by x, aligned with WSupport::edges_flat).
struct LdEvaluation {
    double upper_bound = 0.0;
    double lower_bound = 0.0;
    Alignment alignment;
    std::vector<double> local_values;           // v_ik per candidate pair
    std::vector<double> global_alpha;           // per V1 node, >= 0
    std::vector<double> global_beta;            // per V2 node, >= 0
    std::vector<double> mu_flat, nu_flat;       // local duals, >= 0
    std::vector<std::uint8_t> y_local;          // per directed slot

    bool pair_aligned(const AlignmentInstance& inst, long p) const {
        return alignment.target[inst.pair_source(p)] == inst.pair_target(p);
    }
};

// Dual slacks driving the multiplier update:
//   pi[p]    = alpha_i + beta_k - c_ik - v_ik(lambda)      per candidate pair
//   gamma[e] = mu_j + nu_l - (w +/- lambda)                per directed slot
// All nonnegative up to float noise; values in (-tol, 0) are clamped to 0 and
// anything below -tol raises InvariantError.
struct SlackBundle {
    std::vector<double> pi;
    std::vector<double> gamma;
};

// g = y_ikjl - y_jlik over support keys, taken from the joint (x,y) solution:
// a local choice counts only when its pair is picked by the global matching.
struct Subgradient {
    std::vector<std::int8_t> g; // one of {-1, 0, +1} per support key
    long nonzero = 0;
};

// Solves the local problem LD^{ik} for one candidate pair: a max-weight
// matching over the pair's directed support with weights w_split + lambda on
// forward slots and w_split - lambda on backward slots.
struct LocalResult {
    double value = 0.0;
    std::vector<double> mu, nu;                 // per template row/col
    std::vector<std::pair<int, int>> matched;   // node ids (j, l)
};
LocalResult local_problem(const AlignmentInstance& inst, const MultiplierStore& lambda,
                          int i, int k);

LdEvaluation evaluate_ld(const AlignmentInstance& inst, const MultiplierStore& lambda,
                         int threads = 1);

SlackBundle compute_slacks(const AlignmentInstance& inst, const MultiplierStore& lambda,
                           const LdEvaluation& eval, double tol = 1e-9);

Subgradient subgradient_of(const AlignmentInstance& inst, const LdEvaluation& eval);

// the pi spread factor of the multiplier update: 1/(2(n1-1)) + 1/(2(n2-1))
double descent_spread(const AlignmentInstance& inst);

} // namespace gna
