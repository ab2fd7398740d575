#include "riskdp/distributions.hpp"
#include "riskdp/rng.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace riskdp;

namespace {

FiniteDistribution two_point(double a, double b) {
    return FiniteDistribution::over_indices({a, b});
}

} // namespace

TEST_CASE("finite distribution validates and renormalizes") {
    CHECK_THROWS_AS(FiniteDistribution::over_indices({0.5, 0.4}), ValidationError);
    CHECK_THROWS_AS(FiniteDistribution::over_indices({1.5, -0.5}), ValidationError);
    CHECK_THROWS_AS(FiniteDistribution::over_indices({}), ValidationError);
    CHECK_THROWS_AS(FiniteDistribution({0, 0}, {0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(FiniteDistribution({0, 1}, {1.0}), ValidationError);

    const auto q = FiniteDistribution::over_indices({0.5 + 4e-10, 0.5});
    CHECK(q.prob(0) + q.prob(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q.index_of(1) == 1);
    CHECK(q.index_of(7) == q.size());
    CHECK(FiniteDistribution::point_mass(3).outcome(0) == 3);
}

TEST_CASE("pushforward merges equal values") {
    SUBCASE("constant valuation gives a point mass") {
        const std::vector<double> v{7.0, 7.0};
        const auto law = pushforward(two_point(0.5, 0.5), v);
        REQUIRE(law.values.size() == 1);
        CHECK(law.values[0] == 7.0);
        CHECK(law.masses[0] == 1.0);
    }
    SUBCASE("two-state example") {
        const std::vector<double> v{3.0, 1.0};
        const auto law = pushforward(two_point(1.0 / 3.0, 2.0 / 3.0), v);
        REQUIRE(law.values == std::vector<double>{1.0, 3.0});
        CHECK(law.masses[0] == doctest::Approx(2.0 / 3.0));
        CHECK(law.masses[1] == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("three outcomes with a tie") {
        const std::vector<double> v{1.0, 1.0, 0.0};
        const auto law = pushforward(FiniteDistribution::over_indices({0.25, 0.25, 0.5}), v);
        CHECK(law.values == std::vector<double>{0.0, 1.0});
        CHECK(law.masses == std::vector<double>{0.5, 0.5});
    }
    SUBCASE("domain mismatch") {
        const std::vector<double> v{1.0};
        CHECK_THROWS_AS(pushforward(two_point(0.5, 0.5), v), DomainError);
    }
}

TEST_CASE("pushforward preserves mass") {
    CounterRng rng(11, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + fixtures::pick(rng, 8);
        const auto q = FiniteDistribution::over_indices(fixtures::rational_row(rng, n));
        std::vector<double> v(n);
        for (auto& x : v) {
            x = static_cast<double>(fixtures::pick(rng, 4));
        }
        const auto law = pushforward(q, v);
        double total = 0.0;
        for (std::size_t i = 0; i < law.masses.size(); ++i) {
            CHECK(law.masses[i] >= 0.0);
            total += law.masses[i];
            if (i > 0) {
                CHECK(law.values[i - 1] < law.values[i]);
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("stochastic dominance examples") {
    const auto q = two_point(1.0 / 3.0, 2.0 / 3.0);
    const std::vector<double> v{3.0, 1.0};
    const std::vector<double> w{2.0, 4.0};
    CHECK(stochastically_dominated(v, q, w, q));
    CHECK_FALSE(stochastically_dominated(w, q, v, q));
    CHECK(stochastically_dominated(v, q, v, q));

    const auto half = two_point(0.5, 0.5);
    const std::vector<double> a{0.0, 10.0};
    const std::vector<double> b{0.0, 1.0};
    CHECK_FALSE(stochastically_dominated(a, half, b, half));
    CHECK(stochastically_dominated(b, half, a, half));

    const std::vector<double> short_v{1.0};
    CHECK_THROWS_AS(stochastically_dominated(short_v, half, a, half), DomainError);
}

TEST_CASE("stochastic dominance is reflexive, transitive and implied by pointwise order") {
    CounterRng rng(12, 0);
    const auto sample = [&](std::size_t n, std::vector<double>& v) {
        v.resize(n);
        for (auto& x : v) {
            x = static_cast<double>(fixtures::pick(rng, 5));
        }
        return FiniteDistribution::over_indices(fixtures::rational_row(rng, n));
    };
    int chains = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> v1, v2, v3;
        const auto q1 = sample(1 + fixtures::pick(rng, 4), v1);
        const auto q2 = sample(1 + fixtures::pick(rng, 4), v2);
        const auto q3 = sample(1 + fixtures::pick(rng, 4), v3);
        CHECK(stochastically_dominated(v1, q1, v1, q1));
        if (stochastically_dominated(v1, q1, v2, q2) && stochastically_dominated(v2, q2, v3, q3)) {
            ++chains;
            CHECK(stochastically_dominated(v1, q1, v3, q3));
        }
        std::vector<double> up = v1;
        for (auto& x : up) {
            x += static_cast<double>(fixtures::pick(rng, 3));
        }
        CHECK(stochastically_dominated(v1, q1, up, q1));
    }
    CHECK(chains > 50);
}

TEST_CASE("piecewise uniform density") {
    const auto f = PiecewiseUniformDensity::uniform(0.0, 100.0);
    CHECK(f.cdf(-1.0) == 0.0);
    CHECK(f.cdf(25.0) == doctest::Approx(0.25));
    CHECK(f.cdf(200.0) == 1.0);
    CHECK(f.density(50.0) == doctest::Approx(0.01));
    CHECK(f.mean() == doctest::Approx(50.0));

    CHECK_THROWS_AS(PiecewiseUniformDensity({{0.0, 1.0, 0.5}, {0.5, 2.0, 0.5}}), ValidationError);
    CHECK_THROWS_AS(PiecewiseUniformDensity({{1.0, 1.0, 1.0}}), ValidationError);
    CHECK_THROWS_AS(PiecewiseUniformDensity({{0.0, 1.0, 0.7}}), ValidationError);
}

TEST_CASE("density dominance examples") {
    const auto f1 = PiecewiseUniformDensity::uniform(0.0, 100.0);
    const auto f2 = PiecewiseUniformDensity::uniform(80.0, 500.0);
    CHECK(density_dominated(f1, f2));
    CHECK(density_dominated(f1, f1));
    CHECK_FALSE(density_dominated(f2, f1));
}

TEST_CASE("density dominance agrees with the discretized finite order") {
    CounterRng rng(13, 0);
    constexpr std::size_t kCells = 10000;
    constexpr double kHi = 100.0;
    const auto random_density = [&] {
        const double a = static_cast<double>(fixtures::pick(rng, 60));
        const double b = a + 1.0 + static_cast<double>(fixtures::pick(rng, 20));
        if (rng.uniform() < 0.5) {
            return PiecewiseUniformDensity::uniform(a, b);
        }
        const double c = b + 1.0 + static_cast<double>(fixtures::pick(rng, 18));
        const double m = (1.0 + static_cast<double>(fixtures::pick(rng, 3))) / 4.0;
        return PiecewiseUniformDensity({{a, b, m}, {b, c, 1.0 - m}});
    };
    const auto discretize = [&](const PiecewiseUniformDensity& f) {
        std::vector<double> mass(kCells);
        for (std::size_t i = 0; i < kCells; ++i) {
            const double lo = kHi * static_cast<double>(i) / kCells;
            const double hi = kHi * static_cast<double>(i + 1) / kCells;
            mass[i] = f.cdf(hi) - f.cdf(lo);
        }
        return FiniteDistribution::over_indices(std::move(mass));
    };
    std::vector<double> mid(kCells);
    for (std::size_t i = 0; i < kCells; ++i) {
        mid[i] = kHi * (static_cast<double>(i) + 0.5) / kCells;
    }
    int positives = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto f1 = random_density();
        auto f2 = random_density();
        if (trial % 3 == 0) {
            f2 = f1;
        }
        const bool exact = density_dominated(f1, f2);
        positives += exact ? 1 : 0;
        CHECK(exact == stochastically_dominated(mid, discretize(f1), mid, discretize(f2)));
    }
    CHECK(positives > 20);
}

TEST_CASE("mixture") {
    const auto f1 = PiecewiseUniformDensity::uniform(0.0, 100.0);
    const auto f2 = PiecewiseUniformDensity::uniform(80.0, 500.0);
    CHECK(mixture(f1, f2, 1.0) == f1);
    CHECK(mixture(f1, f2, 0.0) == f2);
    CHECK_THROWS_AS(mixture(f1, f2, 1.5), DomainError);
    CHECK_THROWS_AS(mixture(f1, f2, -0.1), DomainError);

    const auto m = mixture(f1, f2, 0.5);
    REQUIRE(m.pieces().size() == 3);
    CHECK(m.pieces()[0].lower == 0.0);
    CHECK(m.pieces()[1].lower == 80.0);
    CHECK(m.pieces()[2].lower == 100.0);
    CHECK(m.pieces()[0].mass == doctest::Approx(0.4).epsilon(1e-5));
    CHECK(m.pieces()[1].mass == doctest::Approx(0.12381).epsilon(1e-5));
    CHECK(m.pieces()[2].mass == doctest::Approx(0.47619).epsilon(1e-5));
    // Band masses from direct overlap arithmetic.
    CHECK(m.pieces()[1].mass == doctest::Approx(0.5 * 20.0 / 100.0 + 0.5 * 20.0 / 420.0));
}

TEST_CASE("uniform partial expectation") {
    CHECK(uniform_partial_expectation(0.0, 2.0, 3.0) == 0.0);
    CHECK(uniform_partial_expectation(0.0, 2.0, -1.0) == doctest::Approx(2.0));
    CHECK(uniform_partial_expectation(0.0, 2.0, 1.0) == doctest::Approx(0.25));
    CHECK(uniform_partial_expectation(3.0, 3.0, 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(uniform_partial_expectation(2.0, 1.0, 0.0), DomainError);
}

TEST_CASE("piecewise linear valuation") {
    const auto v = PiecewiseLinear::affine(0.0, 10.0, 2.0, 1.0);
    CHECK(v(0.0) == 1.0);
    CHECK(v(5.0) == doctest::Approx(11.0));
    CHECK_THROWS_AS(v(11.0), DomainError);
    CHECK_THROWS_AS(PiecewiseLinear({{0.0, 1.0, 0.0, 1.0}, {2.0, 3.0, 0.0, 1.0}}), ValidationError);
}
