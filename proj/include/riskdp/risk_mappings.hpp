#pragma once

#include "riskdp/distributions.hpp"

#include <cstdint>
#include <string>

namespace riskdp {

/**
 * One-step risk functional sigma(q, v): the risk of the random value v when
 * the next outcome is distributed according to q.
 *
 *   Expectation           sum_i q_i v_i
 *   Entropic(gamma)       (1/gamma) ln sum_i q_i exp(gamma v_i)
 *   MeanSemideviation     m + kappa (sum_i q_i [(v_i - m)+]^p)^(1/p),  m = E_q v
 *   Selection(x)          v(x); law invariant for some q but not monotone with
 *                         respect to stochastic dominance, kept as a test fixture
 */
class TransitionRiskMapping {
public:
    enum class Kind { expectation, entropic, mean_semideviation, selection };

    static TransitionRiskMapping expectation() noexcept;
    static TransitionRiskMapping entropic(double gamma);
    static TransitionRiskMapping mean_semideviation(double kappa, double order = 1.0);
    static TransitionRiskMapping selection(OutcomeId outcome) noexcept;

    Kind kind() const noexcept { return kind_; }
    double gamma() const noexcept { return gamma_; }
    double kappa() const noexcept { return kappa_; }
    double order() const noexcept { return order_; }
    OutcomeId selected() const noexcept { return selected_; }

    /// False only for the Selection fixture.
    bool monotone() const noexcept { return kind_ != Kind::selection; }

    double evaluate(const FiniteDistribution& q, Valuation v) const;

    /**
     * Exact evaluation over a piecewise-uniform density of a valuation that is
     * affine on pieces. Supported for Expectation and MeanSemideviation with
     * order 1; other kinds throw UnsupportedError.
     */
    double evaluate(const PiecewiseUniformDensity& f, const PiecewiseLinear& v) const;

    std::string describe() const;

    friend bool operator==(const TransitionRiskMapping&, const TransitionRiskMapping&) = default;

private:
    TransitionRiskMapping() = default;

    Kind kind_ = Kind::expectation;
    double gamma_ = 0.0;
    double kappa_ = 0.0;
    double order_ = 1.0;
    OutcomeId selected_ = 0;
};

struct PropertyCheck {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::string counterexample;

    bool passed() const noexcept { return failures == 0; }
};

struct AxiomReport {
    PropertyCheck normalization{"normalization", 0, 0, {}};
    PropertyCheck translation{"translation equivariance", 0, 0, {}};
    PropertyCheck monotonicity{"dominance monotonicity", 0, 0, {}};
    PropertyCheck law_invariance{"law invariance", 0, 0, {}};

    bool all_passed() const noexcept {
        return normalization.passed() && translation.passed() && monotonicity.passed() &&
               law_invariance.passed();
    }
};

/**
 * Randomized check of normalization, translation equivariance, monotonicity
 * with respect to stochastic dominance, and law invariance. The first
 * monotonicity trial is always the two-state pair v = (3, 1), w = (2, 4) under
 * q = (1/3, 2/3); the remaining trials draw masses from a flat Dirichlet and
 * values uniform in [-10, 10].
 */
AxiomReport check_axioms(const TransitionRiskMapping& sigma, std::size_t trials, std::uint64_t seed);

} // namespace riskdp
