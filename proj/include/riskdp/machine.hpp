#pragma once

#include "riskdp/distributions.hpp"
#include "riskdp/pomdp.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <variant>
#include <vector>

/**
 * Machine deterioration under partial observation.
 *
 * The machine is good (y = 1) or bad (y = 2). Continuing keeps a good machine
 * good with probability 1 - p and a bad machine bad; replacing resets it so
 * that the next condition is good with probability 1 - p. The operating cost
 * x_{t+1} of period t is drawn from f1 when the machine is good or was just
 * replaced and from f2 when it is bad. The belief xi is the probability of
 * the good condition. Stage cost is R * u_t + x_t, plus x_{T+1} at the end.
 *
 * Stage indices in this namespace are 1-based: t = 1..T are decision epochs
 * and w(T + 1, .) = 0.
 */
namespace riskdp::machine {

struct Uniform {
    double lower;
    double upper;
};

/// Density exp(-(x - shift) / scale) / scale on [shift, inf).
struct Exponential {
    double shift;
    double scale;
};

/// Normal(mu, sigma^2) truncated to [0, inf).
struct TruncatedNormal {
    double mu;
    double sigma;
};

using CostDensity = std::variant<Uniform, Exponential, TruncatedNormal>;

class MachineModel {
public:
    /**
     * @param deterioration  p, in [0, 1)
     * @param replacement    R >= 0
     * @param horizon        T >= 1 decision epochs
     * @param gamma          semideviation weight in [0, 1]; 0 is risk neutral
     * @param initial_belief probability that the machine is good before the
     *                       first cost is observed; 1 means a fresh machine
     */
    MachineModel(CostDensity good, CostDensity bad, double deterioration, double replacement, std::size_t horizon,
                 double gamma, double initial_belief = 1.0);

    static MachineModel uniform(double m1, double m2, double M1, double M2, double p, double R, std::size_t T,
                                double gamma);
    /// m1=0, m2=80, M1=100, M2=500, p=0.2, T=6, R=50, gamma=0.9.
    static MachineModel reference();

    const CostDensity& good() const noexcept { return good_; }
    const CostDensity& bad() const noexcept { return bad_; }
    double p() const noexcept { return p_; }
    double replacement_cost() const noexcept { return replacement_; }
    std::size_t horizon() const noexcept { return horizon_; }
    double gamma() const noexcept { return gamma_; }
    double initial_belief() const noexcept { return initial_belief_; }

    bool is_uniform() const noexcept;
    /// Throws UnsupportedError unless both densities are uniform.
    std::pair<Uniform, Uniform> uniform_densities() const;

    MachineModel with_gamma(double gamma) const;
    MachineModel with_initial_belief(double xi) const;

private:
    CostDensity good_;
    CostDensity bad_;
    double p_;
    double replacement_;
    std::size_t horizon_;
    double gamma_;
    double initial_belief_;
};

struct BandProbs {
    double q1;  ///< mass on [m1, m2)
    double q2;  ///< mass on [m2, M1]
    double q3;  ///< mass on (M1, M2]
};

/// Posterior good-probability after a cost in [m2, M1].
double phi_hat(const MachineModel& model, double xi);

/// Bayes operator: belief in the good condition after observing cost x_prime under "continue".
double phi(const MachineModel& model, double xi, double x_prime);

BandProbs band_probs(const MachineModel& model, double xi);

/// E[(X - a3)+] for X uniform on [a1, a2].
double theta(double a1, double a2, double a3);

/// Next-stage values at the three beliefs reachable under "continue".
struct NextValues {
    double fresh;      ///< w(t+1, 1 - p), after a low cost
    double posterior;  ///< w(t+1, phi_hat(xi)), after a middle cost
    double bad;        ///< w(t+1, 0), after a high cost
};

/// Expected next cost plus next value under "continue".
double e_star(const MachineModel& model, double xi, const NextValues& next);

/// Mean-semideviation risk of x' + w(t+1, Phi(xi, x')) under "continue".
double continue_risk(const MachineModel& model, double xi, const NextValues& next);

class ThresholdPolicy {
public:
    ThresholdPolicy() = default;
    explicit ThresholdPolicy(std::vector<double> thresholds);

    const std::vector<double>& thresholds() const noexcept { return thresholds_; }
    /// Replace at epoch t (1-based) iff xi <= threshold.
    bool replace(std::size_t t, double xi) const { return xi <= thresholds_.at(t - 1); }

private:
    std::vector<double> thresholds_;
};

/**
 * Optimal value functions w(t, xi) and thresholds. w is evaluated lazily by
 * an exact recursion memoized on (t, xi); each evaluation needs w(t + 1, .)
 * at 1 - p, phi_hat(xi) and 0 only. Not safe for concurrent use.
 */
class MachineSolution {
public:
    explicit MachineSolution(MachineModel model);

    const MachineModel& model() const noexcept { return model_; }
    double w(std::size_t t, double xi) const;
    double continue_value(std::size_t t, double xi) const;
    double replace_value(std::size_t t) const;
    const ThresholdPolicy& policy() const noexcept { return policy_; }
    std::size_t memo_size() const noexcept { return memo_.size(); }

private:
    NextValues next(std::size_t t, double xi) const;
    double locate_threshold(std::size_t t) const;

    MachineModel model_;
    mutable std::map<std::pair<std::size_t, double>, double> memo_;
    ThresholdPolicy policy_;
};

/// Throws UnsupportedError for non-uniform densities.
MachineSolution solve(const MachineModel& model);

/// Risk of following a threshold policy from epoch t with belief xi.
double evaluate_policy(const MachineModel& model, const ThresholdPolicy& policy, std::size_t t, double xi);

struct CostSummary {
    std::size_t runs = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double upper_semideviation = 0.0;
    double min = 0.0;
    double max = 0.0;
    /// (level, value) pairs at 0.05, 0.25, 0.5, 0.75, 0.95.
    std::vector<std::pair<double, double>> quantiles;

    double quantile(double level) const;
    double interquartile_range() const { return quantile(0.75) - quantile(0.25); }
};

CostSummary summarize(const std::vector<double>& sample);

struct SimulationResult {
    std::vector<double> totals;
    CostSummary summary;
};

/**
 * Total cost of independent runs under a threshold policy. Run r draws from
 * its own counter-based stream (seed, r), so the sample does not depend on
 * the number of workers.
 */
SimulationResult simulate(const MachineModel& model, const ThresholdPolicy& policy, std::size_t runs,
                          std::uint64_t seed, std::size_t workers = 1);

/// f1 / f2 is non-increasing (sufficient for monotone value functions).
bool density_ratio_monotone(const CostDensity& f1, const CostDensity& f2);
bool density_ratio_monotone(const MachineModel& model);

PiecewiseUniformDensity to_density(const Uniform& u);

/**
 * Finite model with the cost range [m1, M2] cut into `cells` equal cells:
 * observable states are cells (cost = midpoint), hidden states are
 * {good, bad}, controls are {continue, replace}, the horizon is T + 1 with a
 * single control at the last stage, and every stage uses the model's
 * mean-semideviation mapping.
 */
FinitePomdp to_pomdp(const MachineModel& model, std::size_t cells, double xi, StateId initial_cell = 0);

/// Midpoint cost of a cell produced by to_pomdp.
double cell_midpoint(const MachineModel& model, std::size_t cells, StateId cell);

} // namespace riskdp::machine
