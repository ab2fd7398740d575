#include "riskdp/pomdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace riskdp {

namespace {

constexpr double kBeliefTolerance = 1e-9;
constexpr double kRoundingSlack = 1e-14;
constexpr double kBeliefResolution = 1e12;
constexpr std::size_t kNoSignature = std::numeric_limits<std::size_t>::max();

void append(std::string& key, std::int64_t value) {
    char bytes[sizeof value];
    std::memcpy(bytes, &value, sizeof value);
    key.append(bytes, sizeof value);
}

std::string belief_key(std::size_t tag, std::size_t a, std::size_t b, const BeliefState& belief) {
    std::string key;
    key.reserve(8 * (3 + belief.size()));
    append(key, static_cast<std::int64_t>(tag));
    append(key, static_cast<std::int64_t>(a));
    append(key, static_cast<std::int64_t>(b));
    for (double w : belief.weights()) {
        append(key, std::llround(w * kBeliefResolution));
    }
    return key;
}

std::string where(const FinitePomdp& m, std::size_t t, StateId x) {
    return "stage " + std::to_string(t + 1) + ", state '" + m.obs_states().at(x) + "'";
}

std::string describe(const BeliefState& belief) {
    std::string out = "(";
    for (std::size_t i = 0; i < belief.size(); ++i) {
        out += (i ? "," : "") + std::to_string(belief[i]);
    }
    return out + ")";
}

// Joint mass over (x', y') given the current belief, stored densely as acc[x' * |Y| + y'].
struct JointMass {
    std::vector<double> acc;
    std::vector<StateId> support;  // observable states with an entry, ascending
};

JointMass joint_mass(const FinitePomdp& m, const std::vector<RowId>& rows, const BeliefState& xi) {
    const std::size_t ny = m.hidden_count();
    JointMass out{std::vector<double>(m.obs_count() * ny, 0.0), {}};
    std::vector<char> seen(m.obs_count(), 0);
    for (HiddenId y = 0; y < ny; ++y) {
        const double w = xi[y];
        if (w == 0.0) {
            continue;
        }
        for (const auto& e : m.row(rows[y])) {
            out.acc[e.next_obs * ny + e.next_hidden] += w * e.prob;
            if (!seen[e.next_obs]) {
                seen[e.next_obs] = 1;
                out.support.push_back(e.next_obs);
            }
        }
    }
    std::sort(out.support.begin(), out.support.end());
    return out;
}

const PomdpAction& require_action(const FinitePomdp& m, std::size_t t, StateId x, ControlId u) {
    if (t + 1 >= m.horizon()) {
        throw DomainError("pomdp: no transition after the final stage");
    }
    const auto* action = m.find_action(t, x, u);
    if (action == nullptr) {
        throw DomainError("pomdp: control is not admissible at " + where(m, t, x));
    }
    return *action;
}

} // namespace

BeliefState::BeliefState(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw ValidationError("belief: empty");
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ValidationError("belief: weights must be finite and non-negative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > kBeliefTolerance) {
        throw ValidationError("belief: weights sum to " + std::to_string(total));
    }
    if (std::abs(total - 1.0) > kRoundingSlack) {
        for (double& w : weights_) {
            w /= total;
        }
    }
}

BeliefState BeliefState::uniform(std::size_t n) {
    return BeliefState(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

BeliefState BeliefState::point(std::size_t n, HiddenId y) {
    std::vector<double> w(n, 0.0);
    w.at(y) = 1.0;
    return BeliefState(std::move(w));
}

FinitePomdp::Builder::Builder(std::vector<std::string> obs_states, std::vector<std::string> hidden_states,
                              std::vector<std::string> controls, std::size_t horizon)
    : obs_(std::move(obs_states)), hidden_(std::move(hidden_states)), controls_(std::move(controls)),
      horizon_(horizon) {
    if (obs_.empty() || hidden_.empty() || controls_.empty()) {
        throw ValidationError("pomdp: observable states, hidden states and controls must be non-empty");
    }
    if (horizon_ == 0) {
        throw ValidationError("pomdp: horizon must be positive");
    }
    actions_.assign(horizon_, std::vector<std::vector<std::pair<PomdpAction, std::vector<RowId>>>>(obs_.size()));
    risk_.assign(horizon_, std::vector<TransitionRiskMapping>(obs_.size(), TransitionRiskMapping::expectation()));
}

RowId FinitePomdp::Builder::add_row(std::vector<JointEntry> entries) {
    double total = 0.0;
    for (const auto& e : entries) {
        if (e.next_obs >= obs_.size() || e.next_hidden >= hidden_.size()) {
            throw ValidationError("pomdp: kernel row refers to an undeclared state");
        }
        if (!std::isfinite(e.prob) || e.prob < 0.0) {
            throw ValidationError("pomdp: kernel row has a negative or non-finite mass");
        }
        total += e.prob;
    }
    if (std::abs(total - 1.0) > kBeliefTolerance) {
        throw ValidationError("pomdp: kernel row sums to " + std::to_string(total));
    }
    std::sort(entries.begin(), entries.end(), [](const JointEntry& a, const JointEntry& b) {
        return std::tie(a.next_obs, a.next_hidden) < std::tie(b.next_obs, b.next_hidden);
    });
    std::vector<JointEntry> merged;
    for (const auto& e : entries) {
        if (!merged.empty() && merged.back().next_obs == e.next_obs && merged.back().next_hidden == e.next_hidden) {
            merged.back().prob += e.prob;
        } else {
            merged.push_back(e);
        }
    }
    std::erase_if(merged, [](const JointEntry& e) { return e.prob == 0.0; });
    if (std::abs(total - 1.0) > kRoundingSlack) {
        for (auto& e : merged) {
            e.prob /= total;
        }
    }
    rows_.push_back(std::move(merged));
    return rows_.size() - 1;
}

RowId FinitePomdp::Builder::intern_row(std::vector<JointEntry> entries) {
    const RowId id = add_row(std::move(entries));
    const auto [it, inserted] = row_index_.emplace(rows_.back(), id);
    if (!inserted) {
        rows_.pop_back();
        return it->second;
    }
    return id;
}

FinitePomdp::Builder& FinitePomdp::Builder::add_action(std::size_t t, StateId x, ControlId control, double cost,
                                                       std::vector<RowId> rows_by_hidden) {
    if (t >= horizon_ || x >= obs_.size()) {
        throw ValidationError("pomdp: action outside the model's stages or states");
    }
    actions_[t][x].push_back({PomdpAction{control, cost, kNoSignature}, std::move(rows_by_hidden)});
    return *this;
}

FinitePomdp::Builder& FinitePomdp::Builder::set_risk(std::size_t t, StateId x, const TransitionRiskMapping& risk) {
    risk_.at(t).at(x) = risk;
    return *this;
}

FinitePomdp::Builder& FinitePomdp::Builder::set_stage_risk(std::size_t t, const TransitionRiskMapping& risk) {
    std::fill(risk_.at(t).begin(), risk_.at(t).end(), risk);
    return *this;
}

FinitePomdp::Builder& FinitePomdp::Builder::set_risk_everywhere(const TransitionRiskMapping& risk) {
    for (std::size_t t = 0; t < horizon_; ++t) {
        set_stage_risk(t, risk);
    }
    return *this;
}

FinitePomdp::Builder& FinitePomdp::Builder::set_initial_belief(BeliefState belief) {
    initial_ = std::move(belief);
    return *this;
}

FinitePomdp::Builder& FinitePomdp::Builder::set_initial_states(std::vector<StateId> states) {
    initial_states_ = std::move(states);
    return *this;
}

FinitePomdp FinitePomdp::Builder::build() {
    FinitePomdp m;
    m.obs_ = obs_;
    m.hidden_ = hidden_;
    m.controls_ = controls_;
    m.rows_ = rows_;
    std::map<std::vector<RowId>, std::size_t> signature_index;
    m.actions_.assign(horizon_, std::vector<std::vector<PomdpAction>>(obs_.size()));
    m.risk_ids_.assign(horizon_, std::vector<std::size_t>(obs_.size()));

    for (std::size_t t = 0; t < horizon_; ++t) {
        const bool last = t + 1 == horizon_;
        for (StateId x = 0; x < obs_.size(); ++x) {
            auto listed = actions_[t][x];
            if (listed.empty()) {
                throw ValidationError("pomdp: " + where(m, t, x) + " has no admissible control");
            }
            std::sort(listed.begin(), listed.end(),
                      [](const auto& a, const auto& b) { return a.first.control < b.first.control; });
            for (std::size_t k = 0; k < listed.size(); ++k) {
                auto& [action, rows] = listed[k];
                if (action.control >= controls_.size()) {
                    throw ValidationError("pomdp: " + where(m, t, x) + ": unknown control");
                }
                const std::string here = where(m, t, x) + ", control '" + controls_[action.control] + "'";
                if (k > 0 && listed[k - 1].first.control == action.control) {
                    throw ValidationError("pomdp: " + here + ": control listed twice");
                }
                if (!std::isfinite(action.cost)) {
                    throw ValidationError("pomdp: " + here + ": cost is not finite");
                }
                if (!last) {
                    if (rows.size() != hidden_.size()) {
                        throw ValidationError("pomdp: " + here + ": needs one kernel row per hidden state");
                    }
                    for (RowId r : rows) {
                        if (r >= rows_.size()) {
                            throw ValidationError("pomdp: " + here + ": unknown kernel row");
                        }
                    }
                    const auto [it, inserted] = signature_index.emplace(rows, m.signatures_.size());
                    if (inserted) {
                        m.signatures_.push_back(rows);
                    }
                    action.signature = it->second;
                }
                m.actions_[t][x].push_back(action);
            }

            const auto& risk = risk_[t][x];
            const auto it = std::find(m.risks_.begin(), m.risks_.end(), risk);
            m.risk_ids_[t][x] = static_cast<std::size_t>(it - m.risks_.begin());
            if (it == m.risks_.end()) {
                m.risks_.push_back(risk);
            }
        }
    }

    m.initial_ = initial_.value_or(BeliefState::uniform(hidden_.size()));
    if (m.initial_.size() != hidden_.size()) {
        throw ValidationError("pomdp: initial belief has the wrong dimension");
    }
    m.initial_states_ = initial_states_;
    if (m.initial_states_.empty()) {
        for (StateId x = 0; x < obs_.size(); ++x) {
            m.initial_states_.push_back(x);
        }
    }
    for (StateId x : m.initial_states_) {
        if (x >= obs_.size()) {
            throw ValidationError("pomdp: unknown initial state");
        }
    }
    return m;
}

const PomdpAction* FinitePomdp::find_action(std::size_t t, StateId x, ControlId u) const {
    for (const auto& a : actions(t, x)) {
        if (a.control == u) {
            return &a;
        }
    }
    return nullptr;
}

BayesUpdate bayes_update(const FinitePomdp& model, std::size_t t, StateId x, const BeliefState& xi, ControlId u,
                         StateId x_next) {
    const auto& action = require_action(model, t, x, u);
    if (xi.size() != model.hidden_count() || x_next >= model.obs_count()) {
        throw DomainError("pomdp: belief or observation outside the model");
    }
    const auto joint = joint_mass(model, model.signature(action.signature), xi);
    const std::size_t ny = model.hidden_count();
    std::vector<double> post(joint.acc.begin() + static_cast<std::ptrdiff_t>(x_next * ny),
                             joint.acc.begin() + static_cast<std::ptrdiff_t>((x_next + 1) * ny));
    double total = 0.0;
    for (double w : post) {
        total += w;
    }
    if (total == 0.0) {
        return {BeliefState::uniform(ny), true};
    }
    for (double& w : post) {
        w /= total;
    }
    return {BeliefState(std::move(post)), false};
}

FiniteDistribution observable_kernel(const FinitePomdp& model, std::size_t t, StateId x, const BeliefState& xi,
                                     ControlId u) {
    const auto& action = require_action(model, t, x, u);
    const auto joint = joint_mass(model, model.signature(action.signature), xi);
    const std::size_t ny = model.hidden_count();
    std::vector<double> marginal(model.obs_count(), 0.0);
    for (StateId xn = 0; xn < model.obs_count(); ++xn) {
        for (HiddenId y = 0; y < ny; ++y) {
            marginal[xn] += joint.acc[xn * ny + y];
        }
    }
    return FiniteDistribution::over_indices(std::move(marginal));
}

PomdpSolution::PomdpSolution(std::vector<PomdpNode> nodes) : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end(), [](const PomdpNode& a, const PomdpNode& b) {
        return std::tie(a.t, a.x, a.belief.weights()) < std::tie(b.t, b.x, b.belief.weights());
    });
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        index_.emplace(belief_key(0, nodes_[i].t, nodes_[i].x, nodes_[i].belief), i);
    }
}

const PomdpNode* PomdpSolution::find(std::size_t t, StateId x, const BeliefState& belief) const {
    const auto it = index_.find(belief_key(0, t, x, belief));
    return it == index_.end() ? nullptr : &nodes_[it->second];
}

const PomdpNode& PomdpSolution::at(std::size_t t, StateId x, const BeliefState& belief) const {
    const auto* node = find(t, x, belief);
    if (node == nullptr) {
        throw DomainError("pomdp: node at stage " + std::to_string(t + 1) + ", state " + std::to_string(x) +
                          ", belief " + describe(belief) + " was not reached");
    }
    return *node;
}

namespace {

class ReachableTree {
public:
    ReachableTree(const FinitePomdp& model, const PomdpSolveOptions& options, const PomdpPolicy* policy)
        : m_(model), options_(options), policy_(policy),
          null_posterior_(options.null_posterior.value_or(BeliefState::uniform(model.hidden_count()))) {
        if (null_posterior_.size() != model.hidden_count()) {
            throw ValidationError("pomdp: fallback posterior has the wrong dimension");
        }
    }

    PomdpSolution run() {
        for (StateId x : m_.initial_states()) {
            node(0, x, m_.initial_belief());
        }
        std::vector<PomdpNode> out;
        out.reserve(nodes_.size());
        for (auto& [key, n] : nodes_) {
            out.push_back(std::move(n));
        }
        nodes_.clear();
        return PomdpSolution(std::move(out));
    }

private:
    const PomdpNode& node(std::size_t t, StateId x, const BeliefState& belief) {
        auto key = belief_key(0, t, x, belief);
        if (const auto it = nodes_.find(key); it != nodes_.end()) {
            return it->second;
        }
        if (++created_ > options_.node_budget) {
            throw ResourceError("pomdp: node budget of " + std::to_string(options_.node_budget) +
                                    " exceeded after " + std::to_string(created_) + " nodes",
                                created_);
        }

        const auto& actions = m_.actions(t, x);
        double best = 0.0;
        ControlId best_control = actions.front().control;
        if (policy_ != nullptr) {
            const ControlId u = (*policy_)(t, x, belief);
            const auto* action = m_.find_action(t, x, u);
            if (action == nullptr) {
                throw ValidationError("policy: control " + std::to_string(u) + " is not admissible at " +
                                      where(m_, t, x) + ", belief " + describe(belief));
            }
            best = action->cost + continuation(t, x, *action, belief);
            best_control = u;
        } else {
            for (std::size_t k = 0; k < actions.size(); ++k) {
                const double value = actions[k].cost + continuation(t, x, actions[k], belief);
                if (k == 0 || value < best) {
                    best = value;
                    best_control = actions[k].control;
                }
            }
        }
        const auto [it, inserted] = nodes_.emplace(std::move(key), PomdpNode{t, x, belief, best, best_control});
        return it->second;
    }

    // sigma_t(x, xi, Q, x' -> v_{t+1}(x', Phi(x, xi, u, x'))); zero at the final stage.
    double continuation(std::size_t t, StateId x, const PomdpAction& action, const BeliefState& belief) {
        if (t + 1 >= m_.horizon()) {
            return 0.0;
        }
        const std::size_t risk_id = m_.risk_id(t, x);
        auto key = belief_key(t, action.signature, risk_id, belief);
        if (const auto it = terms_.find(key); it != terms_.end()) {
            return it->second;
        }

        const auto joint = joint_mass(m_, m_.signature(action.signature), belief);
        const std::size_t ny = m_.hidden_count();
        std::vector<StateId> outcomes;
        if (options_.skip_null_observations) {
            outcomes = joint.support;
        } else {
            outcomes.resize(m_.obs_count());
            for (StateId xn = 0; xn < m_.obs_count(); ++xn) {
                outcomes[xn] = xn;
            }
        }

        std::vector<OutcomeId> kept;
        std::vector<double> masses;
        std::vector<double> values;
        kept.reserve(outcomes.size());
        masses.reserve(outcomes.size());
        values.reserve(outcomes.size());
        std::vector<double> post(ny);
        for (StateId xn : outcomes) {
            double mass = 0.0;
            for (HiddenId y = 0; y < ny; ++y) {
                post[y] = joint.acc[xn * ny + y];
                mass += post[y];
            }
            if (mass == 0.0 && options_.skip_null_observations) {
                continue;
            }
            double value = 0.0;
            if (mass > 0.0) {
                for (double& w : post) {
                    w /= mass;
                }
                value = node(t + 1, xn, BeliefState(post)).value;
            } else {
                value = node(t + 1, xn, null_posterior_).value;
            }
            kept.push_back(xn);
            masses.push_back(mass);
            values.push_back(value);
        }
        const double term = m_.risk(t, x).evaluate(FiniteDistribution(std::move(kept), std::move(masses)), values);
        terms_.emplace(std::move(key), term);
        return term;
    }

    const FinitePomdp& m_;
    const PomdpSolveOptions& options_;
    const PomdpPolicy* policy_;
    BeliefState null_posterior_;
    std::size_t created_ = 0;
    std::unordered_map<std::string, PomdpNode> nodes_;
    std::unordered_map<std::string, double> terms_;
};

} // namespace

PomdpSolution solve_reachable(const FinitePomdp& model, const PomdpSolveOptions& options) {
    return ReachableTree(model, options, nullptr).run();
}

PomdpSolution evaluate_markov_policy(const FinitePomdp& model, const PomdpPolicy& policy,
                                     const PomdpSolveOptions& options) {
    return ReachableTree(model, options, &policy).run();
}

PomdpPolicy policy_of(const PomdpSolution& solution) {
    return [&solution](std::size_t t, StateId x, const BeliefState& belief) {
        return solution.at(t, x, belief).control;
    };
}

} // namespace riskdp
