#include "riskdp/machine.hpp"

#include "riskdp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>

namespace riskdp::machine {

namespace {

void validate_density(const CostDensity& f, const char* which) {
    const std::string name(which);
    std::visit(
        [&](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, Uniform>) {
                if (!std::isfinite(d.lower) || !std::isfinite(d.upper) || !(d.lower < d.upper)) {
                    throw ValidationError("machine: " + name + " uniform density needs lower < upper");
                }
            } else if constexpr (std::is_same_v<D, Exponential>) {
                if (!std::isfinite(d.shift) || !(d.scale > 0.0)) {
                    throw ValidationError("machine: " + name + " exponential density needs a positive scale");
                }
            } else {
                if (!std::isfinite(d.mu) || !(d.sigma > 0.0)) {
                    throw ValidationError("machine: " + name + " truncated normal density needs sigma > 0");
                }
            }
        },
        f);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

MachineModel::MachineModel(CostDensity good, CostDensity bad, double deterioration, double replacement,
                           std::size_t horizon, double gamma, double initial_belief)
    : good_(good), bad_(bad), p_(deterioration), replacement_(replacement), horizon_(horizon), gamma_(gamma),
      initial_belief_(initial_belief) {
    validate_density(good_, "good-state");
    validate_density(bad_, "bad-state");
    if (!(p_ >= 0.0 && p_ < 1.0)) {
        throw ValidationError("machine: deterioration probability must lie in [0, 1)");
    }
    if (!(replacement_ >= 0.0) || !std::isfinite(replacement_)) {
        throw ValidationError("machine: replacement cost must be finite and non-negative");
    }
    if (horizon_ == 0) {
        throw ValidationError("machine: horizon must be positive");
    }
    if (!(gamma_ >= 0.0 && gamma_ <= 1.0)) {
        throw ValidationError("machine: gamma must lie in [0, 1]");
    }
    if (!(initial_belief_ >= 0.0 && initial_belief_ <= 1.0)) {
        throw ValidationError("machine: initial belief must lie in [0, 1]");
    }
    if (is_uniform()) {
        const auto [f1, f2] = uniform_densities();
        if (!(f1.lower <= f2.lower && f2.lower <= f1.upper && f1.upper <= f2.upper)) {
            throw ValidationError("machine: uniform costs need m1 <= m2 <= M1 <= M2, got " + fmt(f1.lower) + ", " +
                                  fmt(f2.lower) + ", " + fmt(f1.upper) + ", " + fmt(f2.upper));
        }
    }
}

MachineModel MachineModel::uniform(double m1, double m2, double M1, double M2, double p, double R, std::size_t T,
                                   double gamma) {
    return MachineModel(Uniform{m1, M1}, Uniform{m2, M2}, p, R, T, gamma);
}

MachineModel MachineModel::reference() {
    return uniform(0.0, 80.0, 100.0, 500.0, 0.2, 50.0, 6, 0.9);
}

bool MachineModel::is_uniform() const noexcept {
    return std::holds_alternative<Uniform>(good_) && std::holds_alternative<Uniform>(bad_);
}

std::pair<Uniform, Uniform> MachineModel::uniform_densities() const {
    if (!is_uniform()) {
        throw UnsupportedError(
            "machine: closed-form recursion needs uniform cost densities; discretize the model with to_pomdp "
            "and use the pomdp solver instead");
    }
    return {std::get<Uniform>(good_), std::get<Uniform>(bad_)};
}

MachineModel MachineModel::with_gamma(double gamma) const {
    return MachineModel(good_, bad_, p_, replacement_, horizon_, gamma, initial_belief_);
}

MachineModel MachineModel::with_initial_belief(double xi) const {
    return MachineModel(good_, bad_, p_, replacement_, horizon_, gamma_, xi);
}

double phi_hat(const MachineModel& model, double xi) {
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw DomainError("machine: belief must lie in [0, 1]");
    }
    const double keep = 1.0 - model.p();
    if (xi == 0.0) {
        return 0.0;
    }
    if (xi == 1.0) {
        return keep;
    }
    const auto [f1, f2] = model.uniform_densities();
    const double good = xi * (f2.upper - f2.lower);
    return keep * good / (good + (1.0 - xi) * (f1.upper - f1.lower));
}

double phi(const MachineModel& model, double xi, double x_prime) {
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw DomainError("machine: belief must lie in [0, 1]");
    }
    const auto [f1, f2] = model.uniform_densities();
    if (!(x_prime >= f1.lower && x_prime <= f2.upper)) {
        throw DomainError("machine: cost " + fmt(x_prime) + " lies outside the support");
    }
    // A cost below m2 cannot occur at xi = 0; keep phi(0, .) = 0 there too.
    if (x_prime < f2.lower) {
        return xi == 0.0 ? 0.0 : 1.0 - model.p();
    }
    if (x_prime <= f1.upper) {
        return phi_hat(model, xi);
    }
    return 0.0;
}

BandProbs band_probs(const MachineModel& model, double xi) {
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw DomainError("machine: belief must lie in [0, 1]");
    }
    const auto [f1, f2] = model.uniform_densities();
    const double w1 = f1.upper - f1.lower;
    const double w2 = f2.upper - f2.lower;
    return {xi * (f2.lower - f1.lower) / w1, (f1.upper - f2.lower) * (xi / w1 + (1.0 - xi) / w2),
            (1.0 - xi) * (f2.upper - f1.upper) / w2};
}

double theta(double a1, double a2, double a3) {
    return uniform_partial_expectation(a1, a2, a3);
}

double e_star(const MachineModel& model, double xi, const NextValues& next) {
    const auto [f1, f2] = model.uniform_densities();
    const auto q = band_probs(model, xi);
    return q.q1 * (0.5 * (f1.lower + f2.lower) + next.fresh) +
           q.q2 * (0.5 * (f2.lower + f1.upper) + next.posterior) +
           q.q3 * (0.5 * (f1.upper + f2.upper) + next.bad);
}

double continue_risk(const MachineModel& model, double xi, const NextValues& next) {
    const double mean = e_star(model, xi, next);
    if (model.gamma() == 0.0) {
        return mean;
    }
    const auto [f1, f2] = model.uniform_densities();
    const auto q = band_probs(model, xi);
    double dev = 0.0;
    if (q.q1 > 0.0) {
        dev += q.q1 * theta(f1.lower, f2.lower, mean - next.fresh);
    }
    if (q.q2 > 0.0) {
        dev += q.q2 * theta(f2.lower, f1.upper, mean - next.posterior);
    }
    if (q.q3 > 0.0) {
        dev += q.q3 * theta(f1.upper, f2.upper, mean - next.bad);
    }
    return mean + model.gamma() * dev;
}

ThresholdPolicy::ThresholdPolicy(std::vector<double> thresholds) : thresholds_(std::move(thresholds)) {
    for (double x : thresholds_) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw ValidationError("threshold policy: thresholds must lie in [0, 1]");
        }
    }
}

MachineSolution::MachineSolution(MachineModel model) : model_(std::move(model)) {
    model_.uniform_densities();
    std::vector<double> thresholds;
    for (std::size_t t = 1; t <= model_.horizon(); ++t) {
        thresholds.push_back(locate_threshold(t));
    }
    policy_ = ThresholdPolicy(std::move(thresholds));
}

NextValues MachineSolution::next(std::size_t t, double xi) const {
    return {w(t + 1, 1.0 - model_.p()), w(t + 1, phi_hat(model_, xi)), w(t + 1, 0.0)};
}

double MachineSolution::w(std::size_t t, double xi) const {
    if (t == 0 || t > model_.horizon() + 1) {
        throw DomainError("machine: stage outside 1..T+1");
    }
    if (t == model_.horizon() + 1) {
        return 0.0;
    }
    const auto key = std::make_pair(t, xi);
    if (const auto it = memo_.find(key); it != memo_.end()) {
        return it->second;
    }
    const double value = std::min(replace_value(t), continue_value(t, xi));
    memo_.emplace(key, value);
    return value;
}

double MachineSolution::continue_value(std::size_t t, double xi) const {
    return continue_risk(model_, xi, next(t, xi));
}

double MachineSolution::replace_value(std::size_t t) const {
    const double fresh = w(t + 1, 1.0 - model_.p());
    return model_.replacement_cost() + continue_risk(model_, 1.0, {fresh, fresh, fresh});
}

double MachineSolution::locate_threshold(std::size_t t) const {
    const double replace = replace_value(t);
    const auto replace_optimal = [&](double xi) { return replace <= continue_value(t, xi); };
    if (replace_optimal(1.0)) {
        return 1.0;
    }
    if (!replace_optimal(0.0)) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (replace_optimal(mid) ? lo : hi) = mid;
    }
    return lo;
}

MachineSolution solve(const MachineModel& model) {
    return MachineSolution(model);
}

double evaluate_policy(const MachineModel& model, const ThresholdPolicy& policy, std::size_t t, double xi) {
    model.uniform_densities();
    if (policy.thresholds().size() != model.horizon()) {
        throw ValidationError("threshold policy: expected one threshold per decision epoch");
    }
    std::map<std::pair<std::size_t, double>, double> memo;
    const auto value = [&](const auto& self, std::size_t s, double b) -> double {
        if (s == model.horizon() + 1) {
            return 0.0;
        }
        const auto key = std::make_pair(s, b);
        if (const auto it = memo.find(key); it != memo.end()) {
            return it->second;
        }
        const double fresh = self(self, s + 1, 1.0 - model.p());
        double v = 0.0;
        if (policy.replace(s, b)) {
            v = model.replacement_cost() + continue_risk(model, 1.0, {fresh, fresh, fresh});
        } else {
            v = continue_risk(model, b, {fresh, self(self, s + 1, phi_hat(model, b)), self(self, s + 1, 0.0)});
        }
        memo.emplace(key, v);
        return v;
    };
    return value(value, t, xi);
}

double CostSummary::quantile(double level) const {
    for (const auto& [l, v] : quantiles) {
        if (l == level) {
            return v;
        }
    }
    throw DomainError("summary: quantile level not tabulated");
}

CostSummary summarize(const std::vector<double>& sample) {
    CostSummary s;
    s.runs = sample.size();
    if (sample.empty()) {
        return s;
    }
    const double n = static_cast<double>(sample.size());
    double sum = 0.0;
    for (double x : sample) {
        sum += x;
    }
    s.mean = sum / n;
    double sq = 0.0;
    double up = 0.0;
    for (double x : sample) {
        sq += (x - s.mean) * (x - s.mean);
        up += std::max(x - s.mean, 0.0);
    }
    s.std_error = sample.size() > 1 ? std::sqrt(sq / (n - 1.0) / n) : 0.0;
    s.upper_semideviation = up / n;

    auto sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    for (double level : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        // Linear interpolation between order statistics.
        const double h = (n - 1.0) * level;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        s.quantiles.emplace_back(level, sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]));
    }
    return s;
}

SimulationResult simulate(const MachineModel& model, const ThresholdPolicy& policy, std::size_t runs,
                          std::uint64_t seed, std::size_t workers) {
    if (runs == 0) {
        throw DomainError("simulate: runs must be positive");
    }
    if (policy.thresholds().size() != model.horizon()) {
        throw ValidationError("threshold policy: expected one threshold per decision epoch");
    }
    const auto [f1, f2] = model.uniform_densities();
    const double p = model.p();
    const double R = model.replacement_cost();
    const std::size_t T = model.horizon();

    const auto one_run = [&](std::size_t run) {
        CounterRng rng(seed, run);
        const auto draw = [&](bool good) {
            return good ? rng.uniform(f1.lower, f1.upper) : rng.uniform(f2.lower, f2.upper);
        };
        // Period 0: condition y0 from the prior, cost x1 from f_{y0}, y1 by deterioration.
        bool good = rng.bernoulli(model.initial_belief());
        double x = draw(good);
        double xi = phi(model, model.initial_belief(), x);
        good = good && !rng.bernoulli(p);

        double total = 0.0;
        for (std::size_t t = 1; t <= T; ++t) {
            const bool replace = policy.replace(t, xi);
            total += (replace ? R : 0.0) + x;
            x = draw(replace || good);
            if (replace) {
                good = !rng.bernoulli(p);
                xi = 1.0 - p;
            } else {
                good = good && !rng.bernoulli(p);
                xi = phi(model, xi, x);
            }
        }
        return total + x;
    };

    SimulationResult result;
    result.totals.resize(runs);
    workers = std::max<std::size_t>(1, std::min(workers, runs));
    if (workers == 1) {
        for (std::size_t r = 0; r < runs; ++r) {
            result.totals[r] = one_run(r);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t r = w; r < runs; r += workers) {
                    result.totals[r] = one_run(r);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    result.summary = summarize(result.totals);
    return result;
}

bool density_ratio_monotone(const CostDensity& f1, const CostDensity& f2) {
    if (f1.index() != f2.index()) {
        throw UnsupportedError("machine: density ratio of different families is not supported");
    }
    if (const auto* a = std::get_if<Uniform>(&f1)) {
        const auto& b = std::get<Uniform>(f2);
        return a->lower <= b.lower && a->upper <= b.upper;
    }
    if (const auto* a = std::get_if<Exponential>(&f1)) {
        const auto& b = std::get<Exponential>(f2);
        return a->shift <= b.shift && a->scale >= b.scale;
    }
    const auto& a = std::get<TruncatedNormal>(f1);
    const auto& b = std::get<TruncatedNormal>(f2);
    return a.sigma <= b.sigma && a.mu / (a.sigma * a.sigma) <= b.mu / (b.sigma * b.sigma);
}

bool density_ratio_monotone(const MachineModel& model) {
    return density_ratio_monotone(model.good(), model.bad());
}

PiecewiseUniformDensity to_density(const Uniform& u) {
    return PiecewiseUniformDensity::uniform(u.lower, u.upper);
}

double cell_midpoint(const MachineModel& model, std::size_t cells, StateId cell) {
    const auto [f1, f2] = model.uniform_densities();
    const double width = (f2.upper - f1.lower) / static_cast<double>(cells);
    return f1.lower + (static_cast<double>(cell) + 0.5) * width;
}

FinitePomdp to_pomdp(const MachineModel& model, std::size_t cells, double xi, StateId initial_cell) {
    if (cells == 0) {
        throw DomainError("machine: need at least one cell");
    }
    const auto [f1, f2] = model.uniform_densities();
    const double lo = f1.lower;
    const double width = (f2.upper - lo) / static_cast<double>(cells);
    const double p = model.p();

    std::vector<std::string> names;
    std::vector<double> good_mass(cells);
    std::vector<double> bad_mass(cells);
    const auto overlap = [](double a, double b, const Uniform& u) {
        return std::max(0.0, std::min(b, u.upper) - std::max(a, u.lower)) / (u.upper - u.lower);
    };
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = lo + static_cast<double>(i) * width;
        const double b = i + 1 == cells ? f2.upper : lo + static_cast<double>(i + 1) * width;
        good_mass[i] = overlap(a, b, f1);
        bad_mass[i] = overlap(a, b, f2);
        names.push_back(fmt(cell_midpoint(model, cells, i)));
    }

    constexpr HiddenId kGood = 0;
    constexpr HiddenId kBad = 1;
    constexpr ControlId kContinue = 0;
    constexpr ControlId kReplace = 1;
    FinitePomdp::Builder builder(names, {"good", "bad"}, {"continue", "replace"}, model.horizon() + 1);

    std::vector<JointEntry> fresh_row;
    std::vector<JointEntry> bad_row;
    for (StateId c = 0; c < cells; ++c) {
        if (good_mass[c] > 0.0) {
            fresh_row.push_back({c, kGood, good_mass[c] * (1.0 - p)});
            fresh_row.push_back({c, kBad, good_mass[c] * p});
        }
        if (bad_mass[c] > 0.0) {
            bad_row.push_back({c, kBad, bad_mass[c]});
        }
    }
    const RowId fresh = builder.add_row(std::move(fresh_row));
    const RowId worn = builder.add_row(std::move(bad_row));

    const auto risk = TransitionRiskMapping::mean_semideviation(model.gamma(), 1.0);
    for (std::size_t t = 0; t <= model.horizon(); ++t) {
        for (StateId c = 0; c < cells; ++c) {
            const double cost = cell_midpoint(model, cells, c);
            builder.add_action(t, c, kContinue, cost, {fresh, worn});
            if (t < model.horizon()) {
                builder.add_action(t, c, kReplace, cost + model.replacement_cost(), {fresh, fresh});
            }
        }
    }
    builder.set_risk_everywhere(risk);
    builder.set_initial_belief(BeliefState({xi, 1.0 - xi}));
    builder.set_initial_states({initial_cell});
    return builder.build();
}

} // namespace riskdp::machine
