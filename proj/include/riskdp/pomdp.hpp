#pragma once

#include "riskdp/distributions.hpp"
#include "riskdp/mdp.hpp"
#include "riskdp/risk_mappings.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace riskdp {

using HiddenId = std::size_t;
using RowId = std::size_t;

/// Probability vector over the hidden states.
class BeliefState {
public:
    explicit BeliefState(std::vector<double> weights);

    static BeliefState uniform(std::size_t n);
    static BeliefState point(std::size_t n, HiddenId y);

    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](HiddenId y) const { return weights_.at(y); }

    friend bool operator==(const BeliefState&, const BeliefState&) = default;

private:
    std::vector<double> weights_;
};

/// One atom of the joint next-state mass q(x', y' | x, y, u).
struct JointEntry {
    StateId next_obs;
    HiddenId next_hidden;
    double prob;

    friend auto operator<=>(const JointEntry&, const JointEntry&) = default;
};

struct PomdpAction {
    ControlId control;
    double cost;
    /// Index of the per-hidden-state row list in FinitePomdp::signature().
    std::size_t signature;
};

/**
 * Finite partially observable model: observable states X, hidden states Y,
 * stage-dependent admissible controls and costs c_t(x, u), joint kernels
 * q_t(x', y' | x, y, u), and one transition risk mapping per (stage, x).
 *
 * Kernel rows are stored once and referenced by id, so models whose rows
 * repeat across stages and states (discretized densities in particular) stay
 * small. Stages are 0-based internally.
 */
class FinitePomdp {
public:
    class Builder {
    public:
        Builder(std::vector<std::string> obs_states, std::vector<std::string> hidden_states,
                std::vector<std::string> controls, std::size_t horizon);

        /// Adds a kernel row; entries with the same (x', y') are summed.
        RowId add_row(std::vector<JointEntry> entries);
        /// Like add_row, but returns the existing id of an identical row.
        RowId intern_row(std::vector<JointEntry> entries);

        /// rows_by_hidden[y] is the joint row when the hidden state is y; ignored at the final stage.
        Builder& add_action(std::size_t t, StateId x, ControlId control, double cost,
                            std::vector<RowId> rows_by_hidden);
        Builder& set_risk(std::size_t t, StateId x, const TransitionRiskMapping& risk);
        Builder& set_stage_risk(std::size_t t, const TransitionRiskMapping& risk);
        Builder& set_risk_everywhere(const TransitionRiskMapping& risk);
        Builder& set_initial_belief(BeliefState belief);
        Builder& set_initial_states(std::vector<StateId> states);

        FinitePomdp build();

    private:
        std::vector<std::string> obs_;
        std::vector<std::string> hidden_;
        std::vector<std::string> controls_;
        std::size_t horizon_;
        std::vector<std::vector<JointEntry>> rows_;
        std::map<std::vector<JointEntry>, RowId> row_index_;
        std::vector<std::vector<std::vector<std::pair<PomdpAction, std::vector<RowId>>>>> actions_;
        std::vector<std::vector<TransitionRiskMapping>> risk_;
        std::optional<BeliefState> initial_;
        std::vector<StateId> initial_states_;
    };

    std::size_t horizon() const noexcept { return actions_.size(); }
    std::size_t obs_count() const noexcept { return obs_.size(); }
    std::size_t hidden_count() const noexcept { return hidden_.size(); }
    const std::vector<std::string>& obs_states() const noexcept { return obs_; }
    const std::vector<std::string>& hidden_states() const noexcept { return hidden_; }
    const std::vector<std::string>& controls() const noexcept { return controls_; }

    const std::vector<PomdpAction>& actions(std::size_t t, StateId x) const { return actions_.at(t).at(x); }
    const PomdpAction* find_action(std::size_t t, StateId x, ControlId u) const;
    const TransitionRiskMapping& risk(std::size_t t, StateId x) const { return risks_.at(risk_ids_.at(t).at(x)); }
    std::size_t risk_id(std::size_t t, StateId x) const { return risk_ids_.at(t).at(x); }
    const std::vector<JointEntry>& row(RowId id) const { return rows_.at(id); }
    const std::vector<RowId>& signature(std::size_t id) const { return signatures_.at(id); }

    const BeliefState& initial_belief() const noexcept { return initial_; }
    const std::vector<StateId>& initial_states() const noexcept { return initial_states_; }

private:
    FinitePomdp() : initial_(std::vector<double>{1.0}) {}

    std::vector<std::string> obs_;
    std::vector<std::string> hidden_;
    std::vector<std::string> controls_;
    std::vector<std::vector<JointEntry>> rows_;
    std::vector<std::vector<RowId>> signatures_;
    std::vector<std::vector<std::vector<PomdpAction>>> actions_;
    std::vector<TransitionRiskMapping> risks_;
    std::vector<std::vector<std::size_t>> risk_ids_;
    BeliefState initial_;
    std::vector<StateId> initial_states_;
};

struct BayesUpdate {
    BeliefState posterior;
    /// The observation has zero probability; posterior is the fallback belief.
    bool degenerate;
};

/// Posterior over y' after observing x_next from (x, xi) under control u at stage t.
BayesUpdate bayes_update(const FinitePomdp& model, std::size_t t, StateId x, const BeliefState& xi,
                         ControlId u, StateId x_next);

/// Marginal law of the next observable state, over all of X (zero masses kept).
FiniteDistribution observable_kernel(const FinitePomdp& model, std::size_t t, StateId x,
                                     const BeliefState& xi, ControlId u);

struct PomdpNode {
    std::size_t t;
    StateId x;
    BeliefState belief;
    double value;
    ControlId control;
};

/// Value and decision at every reachable (stage, observable state, belief).
class PomdpSolution {
public:
    PomdpSolution() = default;
    explicit PomdpSolution(std::vector<PomdpNode> nodes);

    /// Sorted by (t, x, belief coordinates).
    const std::vector<PomdpNode>& nodes() const noexcept { return nodes_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    const PomdpNode* find(std::size_t t, StateId x, const BeliefState& belief) const;
    /// find() that throws when the node was not reached.
    const PomdpNode& at(std::size_t t, StateId x, const BeliefState& belief) const;

private:
    std::vector<PomdpNode> nodes_;
    std::unordered_map<std::string, std::size_t> index_;
};

using PomdpPolicy = std::function<ControlId(std::size_t t, StateId x, const BeliefState& belief)>;

struct PomdpSolveOptions {
    std::size_t node_budget = 1'000'000;
    /// Do not expand observations of zero probability.
    bool skip_null_observations = true;
    /// Posterior used for zero-probability observations; uniform when unset.
    std::optional<BeliefState> null_posterior;
};

/**
 * Exact backward induction over the beliefs reachable from the initial
 * belief at every initial observable state. Nodes are memoized on
 * (t, x, belief rounded to 1e-12 per coordinate); ties go to the smallest
 * control id. Throws ResourceError when more than node_budget nodes are
 * created.
 */
PomdpSolution solve_reachable(const FinitePomdp& model, const PomdpSolveOptions& options = {});

/// Risk of a Markov policy over the beliefs it reaches.
PomdpSolution evaluate_markov_policy(const FinitePomdp& model, const PomdpPolicy& policy,
                                     const PomdpSolveOptions& options = {});

/// Decision rule that replays a solution's stored controls.
PomdpPolicy policy_of(const PomdpSolution& solution);

} // namespace riskdp
