#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qslab/flows.hpp"
#include "qslab/integrator.hpp"
#include "qslab/model_core.hpp"

using namespace qslab;

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(integrate([](double, const std::vector<double>&, std::vector<double>&) {},
                              {1.0}, TimeGrid{0.0, 0.0, 0.1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate([](double, const std::vector<double>&, std::vector<double>&) {},
                              {1.0}, TimeGrid{0.0, 1.0, 2.0, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate([](double, const std::vector<double>&, std::vector<double>&) {},
                              {1.0}, TimeGrid{0.0, 1.0, 0.1, 0}),
                    std::invalid_argument);
}

TEST_CASE("linear decay against the exact solution") {
    const double nu = 0.01;
    auto rhs = [nu](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy = {-nu * y[0]};
    };
    const Trajectory traj = integrate(rhs, {1.0}, TimeGrid{0.0, 100.0, 1e-2, 100});
    CHECK(traj.times.back() == 100.0);
    CHECK(std::abs(traj.states.back()[0] - std::exp(-1.0)) < 1e-10);
}

TEST_CASE("bar-state run matches the closed-form rate") {
    const ModelParams p{0.02, 0.9};
    std::vector<double> y0 = {0.1, 0, 0, 0, 0, 0, 0, 0};
    const Trajectory traj =
        integrate(reduced_flow(p), y0, TimeGrid{0.0, 10.0, default_reduced_dt(p.nu), 50});
    const double expected = 0.1 * std::exp(-p.nu / (p.delta * p.delta) * 10.0);
    CHECK(std::abs(traj.states.back()[0] - expected) / expected < 1e-8);
}

TEST_CASE("fourth-order convergence by step halving") {
    // nonlinear reduced run, error measured against a dt/4 reference
    const ModelParams p{0.05, 1.05};
    const std::vector<double> y0 = {0.12, 0.03, 0.10, -0.02, 0.04, 0.01, -0.03, 0.02};
    auto final_state = [&](double dt) {
        return integrate(reduced_flow(p), y0, TimeGrid{0.0, 4.0, dt, 1 << 20}).states.back();
    };
    const auto ref = final_state(0.02 / 4.0);
    auto err = [&](double dt) {
        const auto s = final_state(dt);
        double e = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) e = std::max(e, std::abs(s[i] - ref[i]));
        return e;
    };
    const double e1 = err(0.02), e2 = err(0.01);
    const double ratio = e1 / e2;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("determinism: identical inputs give identical trajectories") {
    const ModelParams p{0.03, 0.95};
    const std::vector<double> y0 = {0.05, 0.01, 0.02, 0.0, 0.01, -0.01, 0.0, 0.02};
    const TimeGrid g{0.0, 5.0, 1e-3, 7};
    const Trajectory a = integrate(reduced_flow(p), y0, g);
    const Trajectory b = integrate(reduced_flow(p), y0, g);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.times[i] == b.times[i]);
        CHECK(a.states[i] == b.states[i]);
    }
}

TEST_CASE("blow-up guard aborts with a diagnostic") {
    auto rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
        dy = {y[0] * y[0]};  // finite-time blow-up
    };
    CHECK_THROWS_AS(integrate(rhs, {10.0}, TimeGrid{0.0, 10.0, 1e-2, 1}), BlowupError);
}

TEST_CASE("sampling stride and endpoints") {
    auto rhs = [](double, const std::vector<double>&, std::vector<double>& dy) {
        dy = {1.0};
    };
    const Trajectory traj = integrate(rhs, {0.0}, TimeGrid{0.0, 1.0, 0.1, 3});
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == 1.0);
    // strictly increasing times
    for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
}

TEST_CASE("adaptive variant tracks the exact solution") {
    auto rhs = [](double t, const std::vector<double>& y, std::vector<double>& dy) {
        dy = {std::cos(t) * y[0]};  // y = exp(sin t)
    };
    const Trajectory traj = integrate_adaptive(rhs, {1.0}, 0.0, 6.0, 1e-10);
    const double expected = std::exp(std::sin(6.0));
    CHECK(std::abs(traj.states.back()[0] - expected) / expected < 1e-8);
    CHECK(traj.times.back() == doctest::Approx(6.0));
}

TEST_CASE("default reduced step resolves the fast scale") {
    CHECK(default_reduced_dt(0.05) == doctest::Approx(0.005));
    CHECK(default_reduced_dt(0.5) == doctest::Approx(1e-2));
}
