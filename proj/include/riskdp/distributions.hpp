#pragma once

#include "riskdp/errors.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace riskdp {

/// Opaque, ordered outcome identifier (state index, cell index, ...).
using OutcomeId = std::size_t;

/// Values of a real function aligned with the outcomes of a FiniteDistribution.
using Valuation = std::span<const double>;

/**
 * Probability mass over a finite set of distinct outcomes.
 *
 * Masses are renormalized on construction when their sum is within 1e-9 of
 * one; a larger deviation is a ValidationError. Zero masses are kept, so an
 * outcome may be listed with probability 0.
 */
class FiniteDistribution {
public:
    FiniteDistribution(std::vector<OutcomeId> outcomes, std::vector<double> probs);

    /// Outcomes 0..n-1 with the given masses.
    static FiniteDistribution over_indices(std::vector<double> probs);
    static FiniteDistribution point_mass(OutcomeId outcome);

    std::size_t size() const noexcept { return outcomes_.size(); }
    const std::vector<OutcomeId>& outcomes() const noexcept { return outcomes_; }
    const std::vector<double>& probs() const noexcept { return probs_; }
    OutcomeId outcome(std::size_t i) const { return outcomes_.at(i); }
    double prob(std::size_t i) const { return probs_.at(i); }

    /// Position of an outcome, or size() when absent.
    std::size_t index_of(OutcomeId outcome) const noexcept;

    friend bool operator==(const FiniteDistribution&, const FiniteDistribution&) = default;

private:
    std::vector<OutcomeId> outcomes_;
    std::vector<double> probs_;
};

/// Distribution of a real random variable with finitely many atoms, sorted by value.
struct Law {
    std::vector<double> values;
    std::vector<double> masses;

    /// P(X > eta).
    double survival(double eta) const noexcept;
};

/// Distribution of v under q; equal values are merged exactly.
Law pushforward(const FiniteDistribution& q, Valuation v);

/**
 * (v; q1) is stochastically dominated by (w; q2):
 * P_q1(v > eta) <= P_q2(w > eta) for every eta.
 */
bool stochastically_dominated(Valuation v, const FiniteDistribution& q1, Valuation w,
                              const FiniteDistribution& q2);

struct UniformPiece {
    double lower;
    double upper;
    double mass;

    friend bool operator==(const UniformPiece&, const UniformPiece&) = default;
};

/// Density that is constant on each of finitely many sorted, non-overlapping intervals.
class PiecewiseUniformDensity {
public:
    explicit PiecewiseUniformDensity(std::vector<UniformPiece> pieces);

    static PiecewiseUniformDensity uniform(double lower, double upper);

    const std::vector<UniformPiece>& pieces() const noexcept { return pieces_; }
    double lower() const noexcept { return pieces_.front().lower; }
    double upper() const noexcept { return pieces_.back().upper; }

    double cdf(double x) const noexcept;
    double density(double x) const noexcept;
    double mean() const noexcept;

    friend bool operator==(const PiecewiseUniformDensity&, const PiecewiseUniformDensity&) = default;

private:
    std::vector<UniformPiece> pieces_;
};

/// CDF of f1 lies above the CDF of f2 everywhere (f1 is stochastically smaller).
bool density_dominated(const PiecewiseUniformDensity& f1, const PiecewiseUniformDensity& f2);

/// Density of xi*f1 + (1-xi)*f2, refined over the union of breakpoints.
PiecewiseUniformDensity mixture(const PiecewiseUniformDensity& f1,
                                const PiecewiseUniformDensity& f2, double xi);

/// E[(X - a3)+] for X uniform on [a1, a2]; a degenerate interval is a point mass.
double uniform_partial_expectation(double a1, double a2, double a3);

/// Function that is affine on each of finitely many sorted, contiguous intervals.
class PiecewiseLinear {
public:
    struct Segment {
        double lower;
        double upper;
        double value_at_lower;
        double value_at_upper;
    };

    explicit PiecewiseLinear(std::vector<Segment> segments);

    /// x -> slope * x + intercept on [lower, upper].
    static PiecewiseLinear affine(double lower, double upper, double slope, double intercept);

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    double operator()(double x) const;

private:
    std::vector<Segment> segments_;
};

} // namespace riskdp
