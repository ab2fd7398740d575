#include "riskdp/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace riskdp {

namespace {

constexpr double kRenormalizeTolerance = 1e-9;
constexpr double kOrderSlack = 1e-12;
// Sums this close to 1 are rounding noise; rescaling them again would not be idempotent.
constexpr double kRoundingSlack = 1e-14;

double checked_total(const std::vector<double>& probs, const char* what) {
    double total = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0) {
            throw ValidationError(std::string(what) + ": probabilities must be finite and non-negative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kRenormalizeTolerance) {
        throw ValidationError(std::string(what) + ": probabilities sum to " + std::to_string(total) +
                              ", expected 1");
    }
    return total;
}

// Mass of a density on [a, b].
double interval_mass(const PiecewiseUniformDensity& f, double a, double b) {
    double mass = 0.0;
    for (const auto& piece : f.pieces()) {
        const double lo = std::max(a, piece.lower);
        const double hi = std::min(b, piece.upper);
        if (hi > lo) {
            mass += piece.mass * (hi - lo) / (piece.upper - piece.lower);
        }
    }
    return mass;
}

std::vector<double> breakpoints(const PiecewiseUniformDensity& f1, const PiecewiseUniformDensity& f2) {
    std::vector<double> points;
    for (const auto* f : {&f1, &f2}) {
        for (const auto& piece : f->pieces()) {
            points.push_back(piece.lower);
            points.push_back(piece.upper);
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

} // namespace

FiniteDistribution::FiniteDistribution(std::vector<OutcomeId> outcomes, std::vector<double> probs)
    : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
    if (outcomes_.empty()) {
        throw ValidationError("distribution: empty outcome set");
    }
    if (outcomes_.size() != probs_.size()) {
        throw ValidationError("distribution: outcome and probability counts differ");
    }
    auto sorted = outcomes_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ValidationError("distribution: duplicate outcome");
    }
    const double total = checked_total(probs_, "distribution");
    if (std::abs(total - 1.0) > kRoundingSlack) {
        for (double& p : probs_) {
            p /= total;
        }
    }
}

FiniteDistribution FiniteDistribution::over_indices(std::vector<double> probs) {
    std::vector<OutcomeId> outcomes(probs.size());
    std::iota(outcomes.begin(), outcomes.end(), OutcomeId{0});
    return FiniteDistribution(std::move(outcomes), std::move(probs));
}

FiniteDistribution FiniteDistribution::point_mass(OutcomeId outcome) {
    return FiniteDistribution({outcome}, {1.0});
}

std::size_t FiniteDistribution::index_of(OutcomeId outcome) const noexcept {
    const auto it = std::find(outcomes_.begin(), outcomes_.end(), outcome);
    return static_cast<std::size_t>(it - outcomes_.begin());
}

double Law::survival(double eta) const noexcept {
    double tail = 0.0;
    for (std::size_t i = values.size(); i-- > 0 && values[i] > eta;) {
        tail += masses[i];
    }
    return tail;
}

Law pushforward(const FiniteDistribution& q, Valuation v) {
    if (v.size() != q.size()) {
        throw DomainError("pushforward: valuation has " + std::to_string(v.size()) +
                          " entries for " + std::to_string(q.size()) + " outcomes");
    }
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw DomainError("pushforward: valuation is not finite");
        }
        atoms.emplace_back(v[i], q.prob(i));
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Law law;
    for (const auto& [value, mass] : atoms) {
        if (!law.values.empty() && law.values.back() == value) {
            law.masses.back() += mass;
        } else {
            law.values.push_back(value);
            law.masses.push_back(mass);
        }
    }
    return law;
}

bool stochastically_dominated(Valuation v, const FiniteDistribution& q1, Valuation w,
                              const FiniteDistribution& q2) {
    const Law lhs = pushforward(q1, v);
    const Law rhs = pushforward(q2, w);

    std::vector<double> levels = lhs.values;
    levels.insert(levels.end(), rhs.values.begin(), rhs.values.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    // Sweep thresholds from the top, accumulating P(> eta) for both sides.
    std::size_t i = lhs.values.size();
    std::size_t j = rhs.values.size();
    double tail_lhs = 0.0;
    double tail_rhs = 0.0;
    for (std::size_t k = levels.size(); k-- > 0;) {
        const double eta = levels[k];
        while (i > 0 && lhs.values[i - 1] > eta) {
            tail_lhs += lhs.masses[--i];
        }
        while (j > 0 && rhs.values[j - 1] > eta) {
            tail_rhs += rhs.masses[--j];
        }
        if (tail_lhs > tail_rhs + kOrderSlack) {
            return false;
        }
    }
    return true;
}

PiecewiseUniformDensity::PiecewiseUniformDensity(std::vector<UniformPiece> pieces)
    : pieces_(std::move(pieces)) {
    if (pieces_.empty()) {
        throw ValidationError("density: no pieces");
    }
    std::vector<double> masses;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& piece = pieces_[i];
        if (!std::isfinite(piece.lower) || !std::isfinite(piece.upper) || !(piece.lower < piece.upper)) {
            throw ValidationError("density: piece " + std::to_string(i) + " needs lower < upper");
        }
        if (i > 0 && piece.lower < pieces_[i - 1].upper) {
            throw ValidationError("density: pieces overlap or are unsorted at piece " + std::to_string(i));
        }
        masses.push_back(piece.mass);
    }
    const double total = checked_total(masses, "density");
    if (std::abs(total - 1.0) > kRoundingSlack) {
        for (auto& piece : pieces_) {
            piece.mass /= total;
        }
    }
}

PiecewiseUniformDensity PiecewiseUniformDensity::uniform(double lower, double upper) {
    return PiecewiseUniformDensity({{lower, upper, 1.0}});
}

double PiecewiseUniformDensity::cdf(double x) const noexcept {
    double acc = 0.0;
    for (const auto& piece : pieces_) {
        if (x >= piece.upper) {
            acc += piece.mass;
        } else {
            if (x > piece.lower) {
                acc += piece.mass * (x - piece.lower) / (piece.upper - piece.lower);
            }
            break;
        }
    }
    return acc;
}

double PiecewiseUniformDensity::density(double x) const noexcept {
    for (const auto& piece : pieces_) {
        if (x >= piece.lower && (x < piece.upper || (x == piece.upper && &piece == &pieces_.back()))) {
            return piece.mass / (piece.upper - piece.lower);
        }
    }
    return 0.0;
}

double PiecewiseUniformDensity::mean() const noexcept {
    double acc = 0.0;
    for (const auto& piece : pieces_) {
        acc += piece.mass * 0.5 * (piece.lower + piece.upper);
    }
    return acc;
}

bool density_dominated(const PiecewiseUniformDensity& f1, const PiecewiseUniformDensity& f2) {
    // Both CDFs are linear between consecutive breakpoints.
    for (double b : breakpoints(f1, f2)) {
        if (f1.cdf(b) < f2.cdf(b) - kOrderSlack) {
            return false;
        }
    }
    return true;
}

PiecewiseUniformDensity mixture(const PiecewiseUniformDensity& f1,
                                const PiecewiseUniformDensity& f2, double xi) {
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw DomainError("mixture: weight must lie in [0, 1]");
    }
    if (xi == 1.0) {
        return f1;
    }
    if (xi == 0.0) {
        return f2;
    }
    const auto points = breakpoints(f1, f2);
    std::vector<UniformPiece> pieces;
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        const double a = points[k];
        const double b = points[k + 1];
        const double mass = xi * interval_mass(f1, a, b) + (1.0 - xi) * interval_mass(f2, a, b);
        if (mass > 0.0) {
            pieces.push_back({a, b, mass});
        }
    }
    return PiecewiseUniformDensity(std::move(pieces));
}

double uniform_partial_expectation(double a1, double a2, double a3) {
    if (a1 > a2) {
        throw DomainError("uniform_partial_expectation: requires a1 <= a2");
    }
    if (a3 >= a2) {
        return 0.0;
    }
    if (a3 <= a1) {
        return 0.5 * (a1 + a2) - a3;
    }
    const double excess = a2 - a3;
    return excess * excess / (2.0 * (a2 - a1));
}

PiecewiseLinear::PiecewiseLinear(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) {
        throw ValidationError("piecewise linear: no segments");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (!(s.lower < s.upper) || !std::isfinite(s.value_at_lower) || !std::isfinite(s.value_at_upper)) {
            throw ValidationError("piecewise linear: malformed segment " + std::to_string(i));
        }
        if (i > 0 && s.lower != segments_[i - 1].upper) {
            throw ValidationError("piecewise linear: segments must be contiguous");
        }
    }
}

PiecewiseLinear PiecewiseLinear::affine(double lower, double upper, double slope, double intercept) {
    return PiecewiseLinear({{lower, upper, slope * lower + intercept, slope * upper + intercept}});
}

double PiecewiseLinear::operator()(double x) const {
    for (const auto& s : segments_) {
        if (x >= s.lower && x <= s.upper) {
            const double t = (x - s.lower) / (s.upper - s.lower);
            return s.value_at_lower + t * (s.value_at_upper - s.value_at_lower);
        }
    }
    throw DomainError("piecewise linear: argument outside the domain");
}

} // namespace riskdp
