#pragma once

#include "riskdp/mdp.hpp"
#include "riskdp/pomdp.hpp"
#include "riskdp/rng.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace fixtures {

inline std::size_t pick(riskdp::CounterRng& rng, std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
}

/// Probability vector with small-integer weights (at least one positive).
inline std::vector<double> rational_row(riskdp::CounterRng& rng, std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    while (total == 0.0) {
        total = 0.0;
        for (auto& x : w) {
            x = static_cast<double>(pick(rng, 5));
            total += x;
        }
    }
    for (auto& x : w) {
        x /= total;
    }
    return w;
}

inline std::vector<std::string> labels(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

/// Model with the given sizes, random admissible subsets, costs k/4 for k in 0..19.
inline riskdp::FiniteHorizonMdp random_mdp(riskdp::CounterRng& rng, std::size_t states, std::size_t controls,
                                           std::size_t horizon, const riskdp::TransitionRiskMapping& risk) {
    std::vector<riskdp::FiniteHorizonMdp::Stage> stages(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        stages[t].actions.resize(states);
        stages[t].risk.assign(states, risk);
        for (std::size_t x = 0; x < states; ++x) {
            for (std::size_t u = 0; u < controls; ++u) {
                const bool last = u + 1 == controls && stages[t].actions[x].empty();
                if (!last && rng.uniform() < 0.25) {
                    continue;
                }
                stages[t].actions[x].push_back(
                    {u, static_cast<double>(pick(rng, 20)) / 4.0, rational_row(rng, states)});
            }
        }
    }
    return riskdp::FiniteHorizonMdp(labels("x", states), labels("u", controls), std::move(stages));
}

/// Random mdp with |X| in {1,2,3}, |U| in {1,2}, T in {1,2,3}.
inline riskdp::FiniteHorizonMdp random_small_mdp(riskdp::CounterRng& rng, const riskdp::TransitionRiskMapping& risk) {
    return random_mdp(rng, 1 + pick(rng, 3), 1 + pick(rng, 2), 1 + pick(rng, 3), risk);
}

/// Random pomdp; every (t, x) admits all controls.
inline riskdp::FinitePomdp random_pomdp(riskdp::CounterRng& rng, std::size_t obs, std::size_t hidden,
                                        std::size_t controls, std::size_t horizon,
                                        const riskdp::TransitionRiskMapping& risk) {
    riskdp::FinitePomdp::Builder b(labels("x", obs), labels("y", hidden), labels("u", controls), horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t x = 0; x < obs; ++x) {
            for (std::size_t u = 0; u < controls; ++u) {
                std::vector<riskdp::RowId> rows;
                if (t + 1 < horizon) {
                    for (std::size_t y = 0; y < hidden; ++y) {
                        const auto p = rational_row(rng, obs * hidden);
                        std::vector<riskdp::JointEntry> e;
                        for (std::size_t k = 0; k < p.size(); ++k) {
                            e.push_back({k / hidden, k % hidden, p[k]});
                        }
                        rows.push_back(b.add_row(std::move(e)));
                    }
                }
                b.add_action(t, x, u, static_cast<double>(pick(rng, 20)) / 4.0, std::move(rows));
            }
        }
    }
    b.set_risk_everywhere(risk);
    b.set_initial_belief(riskdp::BeliefState(rational_row(rng, hidden)));
    return b.build();
}

} // namespace fixtures
