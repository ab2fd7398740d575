#include "riskdp/risk_mappings.hpp"

#include "riskdp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

namespace riskdp {

TransitionRiskMapping TransitionRiskMapping::expectation() noexcept {
    return TransitionRiskMapping{};
}

TransitionRiskMapping TransitionRiskMapping::entropic(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("entropic mapping: gamma must be positive");
    }
    TransitionRiskMapping m;
    m.kind_ = Kind::entropic;
    m.gamma_ = gamma;
    return m;
}

TransitionRiskMapping TransitionRiskMapping::mean_semideviation(double kappa, double order) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) {
        throw DomainError("mean-semideviation mapping: kappa must lie in [0, 1]");
    }
    if (!(order >= 1.0) || !std::isfinite(order)) {
        throw DomainError("mean-semideviation mapping: order must be >= 1");
    }
    TransitionRiskMapping m;
    m.kind_ = Kind::mean_semideviation;
    m.kappa_ = kappa;
    m.order_ = order;
    return m;
}

TransitionRiskMapping TransitionRiskMapping::selection(OutcomeId outcome) noexcept {
    TransitionRiskMapping m;
    m.kind_ = Kind::selection;
    m.selected_ = outcome;
    return m;
}

double TransitionRiskMapping::evaluate(const FiniteDistribution& q, Valuation v) const {
    if (v.size() != q.size()) {
        throw DomainError("risk mapping: valuation size does not match the distribution");
    }
    const auto& probs = q.probs();
    switch (kind_) {
    case Kind::expectation:
        return std::inner_product(probs.begin(), probs.end(), v.begin(), 0.0);
    case Kind::entropic: {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (probs[i] > 0.0) {
                top = std::max(top, v[i]);
            }
        }
        // sum q_i (exp(gamma (v_i - top)) - 1) stays accurate as gamma -> 0.
        double excess = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (probs[i] > 0.0) {
                excess += probs[i] * std::expm1(gamma_ * (v[i] - top));
            }
        }
        return top + std::log1p(excess) / gamma_;
    }
    case Kind::mean_semideviation: {
        const double mean = std::inner_product(probs.begin(), probs.end(), v.begin(), 0.0);
        if (kappa_ == 0.0) {
            return mean;
        }
        double dev = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double up = std::max(v[i] - mean, 0.0);
            dev += probs[i] * (order_ == 1.0 ? up : std::pow(up, order_));
        }
        return mean + kappa_ * (order_ == 1.0 ? dev : std::pow(dev, 1.0 / order_));
    }
    case Kind::selection: {
        const auto idx = q.index_of(selected_);
        if (idx == q.size()) {
            throw DomainError("selection mapping: selected outcome is not in the distribution");
        }
        return v[idx];
    }
    }
    return 0.0;
}

double TransitionRiskMapping::evaluate(const PiecewiseUniformDensity& f, const PiecewiseLinear& v) const {
    const bool supported = kind_ == Kind::expectation ||
                           (kind_ == Kind::mean_semideviation && order_ == 1.0);
    if (!supported) {
        throw UnsupportedError("risk mapping: " + describe() +
                               " is not supported over continuous densities");
    }

    // Split density pieces at segment boundaries; on each part v is affine and
    // its image under a uniform law is uniform between the endpoint values.
    struct Part {
        double mass;
        double low;
        double high;
    };
    std::vector<Part> parts;
    const auto& segments = v.segments();
    for (const auto& piece : f.pieces()) {
        if (piece.mass == 0.0) {
            continue;
        }
        double covered = piece.lower;
        for (const auto& s : segments) {
            const double a = std::max(piece.lower, s.lower);
            const double b = std::min(piece.upper, s.upper);
            if (!(b > a)) {
                continue;
            }
            if (a != covered) {
                throw DomainError("risk mapping: valuation does not cover the density support");
            }
            const auto at = [&s](double x) {
                return s.value_at_lower + (x - s.lower) / (s.upper - s.lower) * (s.value_at_upper - s.value_at_lower);
            };
            const double va = at(a);
            const double vb = at(b);
            parts.push_back({piece.mass * (b - a) / (piece.upper - piece.lower), std::min(va, vb), std::max(va, vb)});
            covered = b;
        }
        if (covered != piece.upper) {
            throw DomainError("risk mapping: valuation does not cover the density support");
        }
    }

    double mean = 0.0;
    for (const auto& p : parts) {
        mean += p.mass * 0.5 * (p.low + p.high);
    }
    if (kind_ == Kind::expectation || kappa_ == 0.0) {
        return mean;
    }
    double dev = 0.0;
    for (const auto& p : parts) {
        dev += p.mass * uniform_partial_expectation(p.low, p.high, mean);
    }
    return mean + kappa_ * dev;
}

std::string TransitionRiskMapping::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::expectation:
        os << "expectation";
        break;
    case Kind::entropic:
        os << "entropic(gamma=" << gamma_ << ")";
        break;
    case Kind::mean_semideviation:
        os << "mean_semideviation(kappa=" << kappa_ << ", order=" << order_ << ")";
        break;
    case Kind::selection:
        os << "selection(outcome=" << selected_ << ")";
        break;
    }
    return os.str();
}

namespace {

struct Sample {
    FiniteDistribution q;
    std::vector<double> v;
};

std::vector<double> random_simplex(CounterRng& rng, std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
        x = rng.exponential() + 1e-12;
        total += x;
    }
    for (auto& x : w) {
        x /= total;
    }
    return w;
}

std::size_t random_index(CounterRng& rng, std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
}

Sample random_sample(CounterRng& rng, std::size_t min_size) {
    const std::size_t n = min_size + random_index(rng, 6);
    std::vector<double> v(n);
    // Integer values in half the trials so that ties occur.
    const bool discrete = rng.bernoulli(0.5);
    for (auto& x : v) {
        x = rng.uniform(-10.0, 10.0);
        if (discrete) {
            x = std::round(x);
        }
    }
    return {FiniteDistribution::over_indices(random_simplex(rng, n)), std::move(v)};
}

// Splits every atom into up to three pieces, lifts each piece by a random
// non-negative amount when `lift` is set, and shuffles outcome identifiers.
// Without lifting the result has the same law; with lifting it dominates.
Sample refine(CounterRng& rng, const Sample& base, bool lift) {
    std::vector<double> probs;
    std::vector<double> values;
    for (std::size_t i = 0; i < base.q.size(); ++i) {
        const std::size_t parts = 1 + random_index(rng, 3);
        const auto split = random_simplex(rng, parts);
        for (double share : split) {
            probs.push_back(base.q.prob(i) * share);
            double value = base.v[i];
            if (lift && rng.bernoulli(0.5)) {
                value += rng.uniform(0.0, 3.0);
            }
            values.push_back(value);
        }
    }
    std::vector<std::size_t> order(probs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[random_index(rng, i)]);
    }
    std::vector<double> p(order.size());
    std::vector<double> v(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        p[k] = probs[order[k]];
        v[k] = values[order[k]];
    }
    return {FiniteDistribution::over_indices(std::move(p)), std::move(v)};
}

std::string show(const Sample& s) {
    std::ostringstream os;
    os << "v=(";
    for (std::size_t i = 0; i < s.v.size(); ++i) {
        os << (i ? "," : "") << s.v[i];
    }
    os << ") q=(";
    for (std::size_t i = 0; i < s.q.size(); ++i) {
        os << (i ? "," : "") << s.q.prob(i);
    }
    os << ")";
    return os.str();
}

double slack(double a, double b) {
    return 1e-9 * (1.0 + std::abs(a) + std::abs(b));
}

void record(PropertyCheck& check, bool ok, const std::string& detail) {
    ++check.trials;
    if (!ok) {
        if (check.failures == 0) {
            check.counterexample = detail;
        }
        ++check.failures;
    }
}

} // namespace

AxiomReport check_axioms(const TransitionRiskMapping& sigma, std::size_t trials, std::uint64_t seed) {
    AxiomReport report;
    // Selection needs its outcome to be present in every sampled distribution.
    const std::size_t min_size =
        sigma.kind() == TransitionRiskMapping::Kind::selection ? sigma.selected() + 1 : 1;

    {
        const auto q = FiniteDistribution::over_indices({1.0 / 3.0, 2.0 / 3.0});
        const Sample lower{q, {3.0, 1.0}};
        const Sample upper{q, {2.0, 4.0}};
        if (min_size <= 2) {
            const double a = sigma.evaluate(lower.q, lower.v);
            const double b = sigma.evaluate(upper.q, upper.v);
            record(report.monotonicity, a <= b + slack(a, b),
                   show(lower) + " vs " + show(upper) + ": " + std::to_string(a) + " > " + std::to_string(b));
        }
    }

    for (std::size_t trial = 0; trial < trials; ++trial) {
        CounterRng rng(seed, trial);
        const Sample base = random_sample(rng, min_size);

        const std::vector<double> zeros(base.q.size(), 0.0);
        const double at_zero = sigma.evaluate(base.q, zeros);
        record(report.normalization, std::abs(at_zero) <= 1e-12,
               show(Sample{base.q, zeros}) + ": value " + std::to_string(at_zero));

        const double shift = rng.uniform(-10.0, 10.0);
        std::vector<double> shifted = base.v;
        for (auto& x : shifted) {
            x += shift;
        }
        const double plain = sigma.evaluate(base.q, base.v);
        const double moved = sigma.evaluate(base.q, shifted);
        record(report.translation, std::abs(moved - plain - shift) <= slack(plain, shift),
               show(base) + " shift " + std::to_string(shift));

        const Sample same_law = refine(rng, base, false);
        const double relabeled = sigma.evaluate(same_law.q, same_law.v);
        record(report.law_invariance, std::abs(relabeled - plain) <= slack(plain, relabeled),
               show(base) + " vs " + show(same_law));

        const Sample upper = refine(rng, base, true);
        if (stochastically_dominated(base.v, base.q, upper.v, upper.q)) {
            const double high = sigma.evaluate(upper.q, upper.v);
            record(report.monotonicity, plain <= high + slack(plain, high),
                   show(base) + " vs " + show(upper) + ": " + std::to_string(plain) + " > " +
                       std::to_string(high));
        }
    }
    return report;
}

} // namespace riskdp
