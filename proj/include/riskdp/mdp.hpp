#pragma once

#include "riskdp/distributions.hpp"
#include "riskdp/risk_mappings.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace riskdp {

using StateId = std::size_t;
using ControlId = std::size_t;

/// One admissible control at a (stage, state): its cost and next-state kernel.
struct MdpAction {
    ControlId control;
    double cost;
    /// Distribution over StateId; empty at the final stage.
    std::vector<double> next;
};

/**
 * Finite-horizon controlled Markov model with stage-dependent admissible
 * sets, costs, kernels and transition risk mappings.
 *
 * Stages are 0-based internally (stage 0 is the first decision epoch); the
 * textual interfaces report them 1-based. Actions at each (stage, state) are
 * kept sorted by control id, which is the tie-breaking order of the solver.
 */
class FiniteHorizonMdp {
public:
    struct Stage {
        /// actions[x] lists the admissible controls at state x.
        std::vector<std::vector<MdpAction>> actions;
        /// risk[x]: mapping applied to continuation values from state x.
        std::vector<TransitionRiskMapping> risk;
    };

    FiniteHorizonMdp(std::vector<std::string> states, std::vector<std::string> controls,
                     std::vector<Stage> stages);

    /// Same actions and risk mapping at every stage; kernels are dropped at the last stage.
    static FiniteHorizonMdp stationary(std::vector<std::string> states, std::vector<std::string> controls,
                                       std::vector<std::vector<MdpAction>> actions,
                                       const TransitionRiskMapping& risk, std::size_t horizon);

    std::size_t horizon() const noexcept { return stages_.size(); }
    std::size_t state_count() const noexcept { return states_.size(); }
    const std::vector<std::string>& states() const noexcept { return states_; }
    const std::vector<std::string>& controls() const noexcept { return controls_; }
    const Stage& stage(std::size_t t) const { return stages_.at(t); }
    const std::vector<MdpAction>& actions(std::size_t t, StateId x) const { return stages_.at(t).actions.at(x); }
    const TransitionRiskMapping& risk(std::size_t t, StateId x) const { return stages_.at(t).risk.at(x); }

    /// Kernel row as a distribution over all states (zero masses kept).
    const FiniteDistribution& kernel(std::size_t t, StateId x, std::size_t action_index) const;

    /// Copy with c_t(x, u) += delta for every (x, u) at stage t.
    FiniteHorizonMdp with_cost_shift(std::size_t t, double delta) const;

    /// Copy with the same structure and the given costs, indexed [t][x][action].
    FiniteHorizonMdp with_costs(const std::vector<std::vector<std::vector<double>>>& costs) const;

private:
    std::vector<std::string> states_;
    std::vector<std::string> controls_;
    std::vector<Stage> stages_;
    std::vector<std::vector<std::vector<FiniteDistribution>>> kernels_;
};

/// Values indexed [t][x].
using ValueTable = std::vector<std::vector<double>>;
/// Controls indexed [t][x].
using MarkovPolicy = std::vector<std::vector<ControlId>>;

struct MdpSolution {
    ValueTable values;
    MarkovPolicy policy;
};

/// Risk-averse backward induction; ties go to the smallest control id.
MdpSolution solve(const FiniteHorizonMdp& model);

/// Risk of a Markov policy by the same backward recursion with the control fixed.
ValueTable evaluate_policy(const FiniteHorizonMdp& model, const MarkovPolicy& policy);

struct DynamicAxiomReport {
    PropertyCheck monotonicity{"cost monotonicity", 0, 0, {}};
    PropertyCheck translation{"stage translation invariance", 0, 0, {}};
    PropertyCheck dominance{"conditional dominance", 0, 0, {}};

    bool all_passed() const noexcept {
        return monotonicity.passed() && translation.passed() && dominance.passed();
    }
};

/**
 * Randomized checks on composed policy values: raising costs never lowers a
 * value; adding a constant to stage-t costs shifts every earlier-or-equal
 * value by that constant and leaves later ones alone; and when the
 * continuation values under a perturbed future are stochastically larger
 * under the one-step kernel, the current value is not smaller.
 */
DynamicAxiomReport verify_dynamic_axioms(const FiniteHorizonMdp& model, std::size_t trials,
                                         std::uint64_t seed);

} // namespace riskdp
