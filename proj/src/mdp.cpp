#include "riskdp/mdp.hpp"

#include "riskdp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace riskdp {

namespace {

std::string where(const std::vector<std::string>& states, const std::vector<std::string>& controls,
                  std::size_t t, StateId x, ControlId u) {
    return "stage " + std::to_string(t + 1) + ", state '" + states.at(x) + "', control '" +
           (u < controls.size() ? controls[u] : std::to_string(u)) + "'";
}

std::size_t pick(CounterRng& rng, std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
}

} // namespace

FiniteHorizonMdp::FiniteHorizonMdp(std::vector<std::string> states, std::vector<std::string> controls,
                                   std::vector<Stage> stages)
    : states_(std::move(states)), controls_(std::move(controls)), stages_(std::move(stages)) {
    if (states_.empty()) {
        throw ValidationError("mdp: no states");
    }
    if (controls_.empty()) {
        throw ValidationError("mdp: no controls");
    }
    if (stages_.empty()) {
        throw ValidationError("mdp: horizon must be positive");
    }
    const std::size_t n = states_.size();
    kernels_.resize(stages_.size());
    for (std::size_t t = 0; t < stages_.size(); ++t) {
        auto& stage = stages_[t];
        const bool last = t + 1 == stages_.size();
        if (stage.actions.size() != n) {
            throw ValidationError("mdp: stage " + std::to_string(t + 1) + " lists " +
                                  std::to_string(stage.actions.size()) + " states, expected " + std::to_string(n));
        }
        if (!last && stage.risk.size() != n) {
            throw ValidationError("mdp: stage " + std::to_string(t + 1) + " needs one risk mapping per state");
        }
        kernels_[t].resize(n);
        for (StateId x = 0; x < n; ++x) {
            auto& actions = stage.actions[x];
            if (actions.empty()) {
                throw ValidationError("mdp: stage " + std::to_string(t + 1) + ", state '" + states_[x] +
                                      "' has no admissible control");
            }
            std::sort(actions.begin(), actions.end(),
                      [](const MdpAction& a, const MdpAction& b) { return a.control < b.control; });
            for (std::size_t k = 0; k < actions.size(); ++k) {
                auto& action = actions[k];
                const auto here = where(states_, controls_, t, x, action.control);
                if (action.control >= controls_.size()) {
                    throw ValidationError("mdp: " + here + ": unknown control");
                }
                if (k > 0 && actions[k - 1].control == action.control) {
                    throw ValidationError("mdp: " + here + ": control listed twice");
                }
                if (!std::isfinite(action.cost)) {
                    throw ValidationError("mdp: " + here + ": cost is not finite");
                }
                if (last) {
                    action.next.clear();
                    continue;
                }
                if (action.next.size() != n) {
                    throw ValidationError("mdp: " + here + ": kernel row has " +
                                          std::to_string(action.next.size()) + " entries, expected " +
                                          std::to_string(n));
                }
                try {
                    kernels_[t][x].push_back(FiniteDistribution::over_indices(action.next));
                } catch (const ValidationError& e) {
                    throw ValidationError("mdp: " + here + ": kernel row invalid (" + e.what() + ")");
                }
                action.next = kernels_[t][x].back().probs();
            }
        }
    }
}

FiniteHorizonMdp FiniteHorizonMdp::stationary(std::vector<std::string> states, std::vector<std::string> controls,
                                              std::vector<std::vector<MdpAction>> actions,
                                              const TransitionRiskMapping& risk, std::size_t horizon) {
    const std::size_t n = states.size();
    std::vector<Stage> stages(horizon, Stage{actions, std::vector<TransitionRiskMapping>(n, risk)});
    return FiniteHorizonMdp(std::move(states), std::move(controls), std::move(stages));
}

const FiniteDistribution& FiniteHorizonMdp::kernel(std::size_t t, StateId x, std::size_t action_index) const {
    if (t + 1 >= stages_.size()) {
        throw DomainError("mdp: no kernel at the final stage");
    }
    return kernels_.at(t).at(x).at(action_index);
}

FiniteHorizonMdp FiniteHorizonMdp::with_cost_shift(std::size_t t, double delta) const {
    auto stages = stages_;
    for (auto& actions : stages.at(t).actions) {
        for (auto& action : actions) {
            action.cost += delta;
        }
    }
    return FiniteHorizonMdp(states_, controls_, std::move(stages));
}

FiniteHorizonMdp FiniteHorizonMdp::with_costs(const std::vector<std::vector<std::vector<double>>>& costs) const {
    auto stages = stages_;
    for (std::size_t t = 0; t < stages.size(); ++t) {
        for (StateId x = 0; x < states_.size(); ++x) {
            auto& actions = stages[t].actions[x];
            for (std::size_t k = 0; k < actions.size(); ++k) {
                actions[k].cost = costs.at(t).at(x).at(k);
            }
        }
    }
    return FiniteHorizonMdp(states_, controls_, std::move(stages));
}

MdpSolution solve(const FiniteHorizonMdp& model) {
    const std::size_t horizon = model.horizon();
    const std::size_t n = model.state_count();
    MdpSolution out{ValueTable(horizon, std::vector<double>(n)), MarkovPolicy(horizon, std::vector<ControlId>(n))};

    for (std::size_t t = horizon; t-- > 0;) {
        const bool last = t + 1 == horizon;
        for (StateId x = 0; x < n; ++x) {
            const auto& actions = model.actions(t, x);
            double best = 0.0;
            ControlId best_control = actions.front().control;
            for (std::size_t k = 0; k < actions.size(); ++k) {
                double value = actions[k].cost;
                if (!last) {
                    value += model.risk(t, x).evaluate(model.kernel(t, x, k), out.values[t + 1]);
                }
                if (k == 0 || value < best) {
                    best = value;
                    best_control = actions[k].control;
                }
            }
            out.values[t][x] = best;
            out.policy[t][x] = best_control;
        }
    }
    return out;
}

ValueTable evaluate_policy(const FiniteHorizonMdp& model, const MarkovPolicy& policy) {
    const std::size_t horizon = model.horizon();
    const std::size_t n = model.state_count();
    if (policy.size() != horizon) {
        throw ValidationError("policy: expected " + std::to_string(horizon) + " stages");
    }
    std::vector<std::vector<std::size_t>> chosen(horizon, std::vector<std::size_t>(n));
    for (std::size_t t = 0; t < horizon; ++t) {
        if (policy[t].size() != n) {
            throw ValidationError("policy: stage " + std::to_string(t + 1) + " does not cover every state");
        }
        for (StateId x = 0; x < n; ++x) {
            const auto& actions = model.actions(t, x);
            const auto it = std::find_if(actions.begin(), actions.end(),
                                         [&](const MdpAction& a) { return a.control == policy[t][x]; });
            if (it == actions.end()) {
                throw ValidationError("policy: " + where(model.states(), model.controls(), t, x, policy[t][x]) +
                                      " is not admissible");
            }
            chosen[t][x] = static_cast<std::size_t>(it - actions.begin());
        }
    }

    ValueTable values(horizon, std::vector<double>(n));
    for (std::size_t t = horizon; t-- > 0;) {
        for (StateId x = 0; x < n; ++x) {
            const std::size_t k = chosen[t][x];
            double value = model.actions(t, x)[k].cost;
            if (t + 1 < horizon) {
                value += model.risk(t, x).evaluate(model.kernel(t, x, k), values[t + 1]);
            }
            values[t][x] = value;
        }
    }
    return values;
}

namespace {

using CostTable = std::vector<std::vector<std::vector<double>>>;

CostTable costs_of(const FiniteHorizonMdp& model) {
    CostTable costs(model.horizon());
    for (std::size_t t = 0; t < model.horizon(); ++t) {
        for (StateId x = 0; x < model.state_count(); ++x) {
            auto& row = costs[t].emplace_back();
            for (const auto& a : model.actions(t, x)) {
                row.push_back(a.cost);
            }
        }
    }
    return costs;
}

double tolerance(double a, double b) {
    return 1e-9 * (1.0 + std::abs(a) + std::abs(b));
}

void tally(PropertyCheck& check, bool ok, const std::string& detail) {
    ++check.trials;
    if (!ok) {
        if (check.failures == 0) {
            check.counterexample = detail;
        }
        ++check.failures;
    }
}

std::string cell(const FiniteHorizonMdp& model, std::size_t t, StateId x) {
    return "stage " + std::to_string(t + 1) + ", state '" + model.states()[x] + "'";
}

} // namespace

DynamicAxiomReport verify_dynamic_axioms(const FiniteHorizonMdp& model, std::size_t trials, std::uint64_t seed) {
    DynamicAxiomReport report;
    const std::size_t horizon = model.horizon();
    const std::size_t n = model.state_count();
    const CostTable base_costs = costs_of(model);

    for (std::size_t trial = 0; trial < trials; ++trial) {
        CounterRng rng(seed, trial);

        MarkovPolicy policy(horizon, std::vector<ControlId>(n));
        std::vector<std::vector<std::size_t>> chosen(horizon, std::vector<std::size_t>(n));
        for (std::size_t t = 0; t < horizon; ++t) {
            for (StateId x = 0; x < n; ++x) {
                chosen[t][x] = pick(rng, model.actions(t, x).size());
                policy[t][x] = model.actions(t, x)[chosen[t][x]].control;
            }
        }
        const ValueTable base = evaluate_policy(model, policy);

        // Monotonicity under a non-negative cost perturbation.
        {
            CostTable raised = base_costs;
            for (auto& stage : raised) {
                for (auto& row : stage) {
                    for (auto& c : row) {
                        if (rng.bernoulli(0.5)) {
                            c += rng.uniform(0.0, 2.0);
                        }
                    }
                }
            }
            const auto higher = evaluate_policy(model.with_costs(raised), policy);
            bool ok = true;
            std::string detail;
            for (std::size_t t = 0; t < horizon && ok; ++t) {
                for (StateId x = 0; x < n && ok; ++x) {
                    if (higher[t][x] < base[t][x] - tolerance(higher[t][x], base[t][x])) {
                        ok = false;
                        detail = cell(model, t, x) + ": value dropped after raising costs";
                    }
                }
            }
            tally(report.monotonicity, ok, detail);
        }

        // Translation by a constant at one stage.
        {
            const std::size_t s = pick(rng, horizon);
            const double shift = rng.uniform(-5.0, 5.0);
            const auto moved = evaluate_policy(model.with_cost_shift(s, shift), policy);
            bool ok = true;
            std::string detail;
            for (std::size_t t = 0; t < horizon && ok; ++t) {
                const double expected = t <= s ? shift : 0.0;
                for (StateId x = 0; x < n && ok; ++x) {
                    const double diff = moved[t][x] - base[t][x];
                    if (std::abs(diff - expected) > tolerance(moved[t][x], base[t][x])) {
                        ok = false;
                        detail = cell(model, t, x) + ": shift of " + std::to_string(shift) + " at stage " +
                                 std::to_string(s + 1) + " moved value by " + std::to_string(diff);
                    }
                }
            }
            tally(report.translation, ok, detail);
        }

        // Conditional dominance of continuation values.
        if (horizon >= 2) {
            const std::size_t t = pick(rng, horizon - 1);
            const StateId x = pick(rng, n);
            CostTable future = base_costs;
            const bool integral = rng.bernoulli(0.5);
            for (std::size_t s = t + 1; s < horizon; ++s) {
                for (auto& row : future[s]) {
                    for (auto& c : row) {
                        const double delta = rng.uniform(-3.0, 3.0);
                        c += integral ? std::round(delta) : delta;
                    }
                }
            }
            const auto other = evaluate_policy(model.with_costs(future), policy);
            const auto& q = model.kernel(t, x, chosen[t][x]);
            const auto& mine = base[t + 1];
            const auto& theirs = other[t + 1];
            const auto check = [&](const std::vector<double>& low_next, double low_now,
                                   const std::vector<double>& high_next, double high_now) {
                if (stochastically_dominated(low_next, q, high_next, q)) {
                    std::ostringstream os;
                    os << cell(model, t, x) << ": continuation (";
                    for (std::size_t i = 0; i < n; ++i) {
                        os << (i ? "," : "") << low_next[i];
                    }
                    os << ") is dominated by (";
                    for (std::size_t i = 0; i < n; ++i) {
                        os << (i ? "," : "") << high_next[i];
                    }
                    os << ") but " << low_now << " > " << high_now;
                    tally(report.dominance, low_now <= high_now + tolerance(low_now, high_now), os.str());
                }
            };
            check(mine, base[t][x], theirs, other[t][x]);
            check(theirs, other[t][x], mine, base[t][x]);
        }
    }
    return report;
}

} // namespace riskdp
