#include <doctest.h>

#include "uniqd/env.hpp"

#include <cmath>
#include <random>

using namespace uniqd;
using namespace uniqd::env;

namespace {

Genotype zero_genotype() { return Genotype::Zero(kGenotypeDim); }

Genotype random_genotype(unsigned seed)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Genotype g(kGenotypeDim);
    for (int i = 0; i < kGenotypeDim; ++i) g[i] = dist(gen);
    return g;
}

// Straight-line re-implementation of the 6-8-2 tanh MLP used as an oracle.
Eigen::Vector2d mlp_oracle(const Genotype& g, const Eigen::Matrix<double, 6, 1>& obs)
{
    Eigen::Matrix<double, 8, 6> w1;
    Eigen::Matrix<double, 8, 1> b1;
    Eigen::Matrix<double, 2, 8> w2;
    Eigen::Matrix<double, 2, 1> b2;
    int p = 0;
    for (int h = 0; h < 8; ++h) {
        for (int i = 0; i < 6; ++i) w1(h, i) = g[p++];
        b1(h) = g[p++];
    }
    for (int o = 0; o < 2; ++o) {
        for (int h = 0; h < 8; ++h) w2(o, h) = g[p++];
        b2(o) = g[p++];
    }
    const Eigen::Matrix<double, 8, 1> hidden = (w1 * obs + b1).array().tanh();
    return (w2 * hidden + b2).array().tanh();
}

}  // namespace

TEST_CASE("controller_forward")
{
    Eigen::Matrix<double, 6, 1> obs;
    obs << 0.3, -0.2, 1.0, 0.0, 0.5, -0.5;

    SUBCASE("all-zero genotype outputs zero commands")
    {
        const Eigen::Vector2d out = controller_forward(zero_genotype(), obs);
        CHECK(out[0] == 0.0);
        CHECK(out[1] == 0.0);
    }

    SUBCASE("output biases only give tanh(b) on both commands")
    {
        Genotype g = zero_genotype();
        g[8 * 7 + 8] = 0.7;       // bias of output 0
        g[8 * 7 + 17] = 0.7;      // bias of output 1
        const Eigen::Vector2d out = controller_forward(g, obs);
        CHECK(out[0] == doctest::Approx(std::tanh(0.7)).epsilon(1e-15));
        CHECK(out[1] == doctest::Approx(std::tanh(0.7)).epsilon(1e-15));
    }

    SUBCASE("matches the matrix-multiply oracle on random genotypes")
    {
        for (unsigned seed = 0; seed < 20; ++seed) {
            const Genotype g = random_genotype(seed);
            const Eigen::Vector2d expected = mlp_oracle(g, obs);
            const Eigen::Vector2d got = controller_forward(g, obs);
            CHECK(got[0] == doctest::Approx(expected[0]).epsilon(1e-14));
            CHECK(got[1] == doctest::Approx(expected[1]).epsilon(1e-14));
        }
    }

    SUBCASE("genotype length mismatch throws")
    {
        CHECK_THROWS_AS(controller_forward(Genotype::Zero(10), obs), std::invalid_argument);
    }
}

TEST_CASE("simulate_episode with no actuation stays at the origin")
{
    const Evaluation ev = simulate_episode(zero_genotype());
    for (int t = 0; t < kNumSamples; ++t) {
        CHECK(ev.trajectory.streams(0, t) == 0.0);
        CHECK(ev.trajectory.streams(1, t) == 0.0);
        CHECK(ev.trajectory.streams(2, t) == 1.0);
        CHECK(ev.trajectory.streams(3, t) == 0.0);
        CHECK(ev.trajectory.streams(4, t) == 0.0);
        CHECK(ev.trajectory.streams(5, t) == 0.0);
    }
    CHECK(ev.bd_nav[0] == doctest::Approx(0.5));
    CHECK(ev.bd_nav[1] == doctest::Approx(0.5));
    CHECK(ev.f_nav == 0.0);
    CHECK(ev.f_forw == 0.0);
    CHECK(ev.f_turn == doctest::Approx(-M_PI));
    CHECK(ev.bd_mes[0] == doctest::Approx(0.5));
    CHECK(ev.bd_mes[2] == doctest::Approx(1.0));
}

TEST_CASE("saturated forward command follows the first-order-lag rollout")
{
    Genotype g = zero_genotype();
    g[8 * 7 + 8] = 20.0;  // v command saturates at tanh(20) ~= 1

    const Evaluation ev = simulate_episode(g);

    // Independent recurrence: v' = v + dt*(c - v)/tau, x' = x + dt*v.
    const double c = std::tanh(20.0);
    double v = 0.0, x = 0.0;
    int sample = 0;
    for (int step = 1; step <= kSteps; ++step) {
        const double x_new = x + kDt * v;
        const double v_new = v + kDt * (c * kVMax - v) / kTau;
        x = x_new;
        v = v_new;
        if (step % kRecordEvery == 0) {
            CHECK(ev.trajectory.streams(0, sample) == doctest::Approx(x).epsilon(1e-12));
            CHECK(ev.trajectory.streams(4, sample) == doctest::Approx(v).epsilon(1e-12));
            ++sample;
        }
    }
    for (int t = 1; t < kNumSamples; ++t) {
        CHECK(ev.trajectory.streams(0, t) > ev.trajectory.streams(0, t - 1));
        CHECK(ev.trajectory.streams(1, t) == 0.0);
    }
}

TEST_CASE("recorded states respect the dynamic bounds")
{
    for (unsigned seed = 0; seed < 20; ++seed) {
        const Evaluation ev = simulate_episode(random_genotype(seed));
        for (int t = 0; t < kNumSamples; ++t) {
            CHECK(std::abs(ev.trajectory.streams(4, t)) <= kVMax + 1e-12);
            CHECK(std::abs(ev.trajectory.streams(5, t)) <= kOmegaMax + 1e-12);
            CHECK(std::hypot(ev.trajectory.streams(0, t), ev.trajectory.streams(1, t)) <=
                  kVMax * 3.0 + 1e-12);
            if (t > 0) {
                const double dx =
                    std::abs(ev.trajectory.streams(0, t) - ev.trajectory.streams(0, t - 1));
                CHECK(dx <= kVMax * 0.5 + 1e-12);
            }
        }
        CHECK(ev.trajectory.flatten().size() == 180);
    }
}

TEST_CASE("simulate_episode is deterministic")
{
    const Genotype g = random_genotype(7);
    const Evaluation a = simulate_episode(g);
    const Evaluation b = simulate_episode(g);
    CHECK((a.trajectory.streams.array() == b.trajectory.streams.array()).all());
    CHECK(a.f_nav == b.f_nav);
    CHECK((a.bd_forw.array() == b.bd_forw.array()).all());
}

TEST_CASE("negating the turn command reflects the trajectory about the x-axis")
{
    for (unsigned seed = 0; seed < 10; ++seed) {
        Genotype g = random_genotype(seed);
        // Decouple the controller from the sign-sensitive observations
        // (y, sin(theta), omega) so mirroring is exact.
        for (int h = 0; h < 8; ++h) {
            g[h * 7 + 1] = 0.0;
            g[h * 7 + 3] = 0.0;
            g[h * 7 + 5] = 0.0;
        }
        Genotype mirrored = g;
        for (int h = 0; h < 8; ++h) mirrored[8 * 7 + 9 + h] = -g[8 * 7 + 9 + h];
        mirrored[8 * 7 + 17] = -g[8 * 7 + 17];

        const Evaluation ev = simulate_episode(g);
        const Evaluation evm = simulate_episode(mirrored);
        for (int t = 0; t < kNumSamples; ++t) {
            CHECK(evm.trajectory.streams(0, t) == doctest::Approx(ev.trajectory.streams(0, t)).epsilon(1e-10));
            CHECK(evm.trajectory.streams(1, t) == doctest::Approx(-ev.trajectory.streams(1, t)).epsilon(1e-10));
            CHECK(evm.trajectory.streams(5, t) == doctest::Approx(-ev.trajectory.streams(5, t)).epsilon(1e-10));
        }
        CHECK(evm.f_forw == doctest::Approx(ev.f_forw).epsilon(1e-10));
        CHECK(evm.bd_nav[1] == doctest::Approx(1.0 - ev.bd_nav[1]).epsilon(1e-10));
        CHECK(evm.bd_forw[1] == doctest::Approx(1.0 - ev.bd_forw[1]).epsilon(1e-10));
    }
}

TEST_CASE("task_nav orientation error")
{
    Trajectory traj;
    traj.streams.setZero();

    SUBCASE("straight run ending on the positive x-axis with zero heading")
    {
        traj.streams(0, kNumSamples - 1) = 1.5;
        traj.streams(2, kNumSamples - 1) = 1.0;  // theta = 0
        auto [bd, f] = task_nav(traj);
        CHECK(f == doctest::Approx(0.0));
        CHECK(bd[0] == doctest::Approx((1.5 + 3.0) / 6.0));
    }

    SUBCASE("arc ending at (0, y) facing backwards has zero error")
    {
        traj.streams(1, kNumSamples - 1) = 1.0;
        traj.streams(2, kNumSamples - 1) = -1.0;  // theta = pi
        auto [bd, f] = task_nav(traj);
        CHECK(f == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(bd[1] == doctest::Approx(4.0 / 6.0));
    }

    SUBCASE("stationary robot uses the origin convention")
    {
        traj.streams(2, kNumSamples - 1) = 1.0;
        auto [bd, f] = task_nav(traj);
        CHECK(f == 0.0);
        CHECK(bd[0] == doctest::Approx(0.5));
        CHECK(bd[1] == doctest::Approx(0.5));
    }
}

TEST_CASE("task_turn rewards ending with a half-turn")
{
    Trajectory traj;
    traj.streams.setZero();

    SUBCASE("theta = pi is optimal")
    {
        traj.streams(2, kNumSamples - 1) = -1.0;
        auto [bd, f] = task_turn(traj);
        CHECK(f == doctest::Approx(0.0));
        CHECK(bd[0] == doctest::Approx(0.5));
    }

    SUBCASE("theta = -pi/2 wraps to -pi/2 error")
    {
        traj.streams(3, kNumSamples - 1) = -1.0;  // theta = -pi/2
        auto [bd, f] = task_turn(traj);
        CHECK(f == doctest::Approx(-M_PI / 2));
    }
}

TEST_CASE("task_forw reports the final x and mean actuation")
{
    Trajectory traj;
    traj.streams.setZero();
    traj.streams(0, kNumSamples - 1) = 2.0;
    traj.streams.row(4).setConstant(0.8);
    auto [bd, f] = task_forw(traj);
    CHECK(f == 2.0);
    CHECK(bd[0] == doctest::Approx(0.9));
    CHECK(bd[1] == doctest::Approx(0.5));
}

TEST_CASE("mes_descriptor is the normalized per-stream mean")
{
    Trajectory traj;
    traj.streams.setZero();
    traj.streams.row(2).setConstant(1.0);

    SUBCASE("stationary robot")
    {
        const auto mes = mes_descriptor(traj);
        CHECK(mes[0] == doctest::Approx(0.5));
        CHECK(mes[1] == doctest::Approx(0.5));
        CHECK(mes[2] == doctest::Approx(1.0));
        CHECK(mes[3] == doctest::Approx(0.5));
        CHECK(mes[4] == doctest::Approx(0.5));
        CHECK(mes[5] == doctest::Approx(0.5));
    }

    SUBCASE("arithmetic x stream has mean 14.5 c")
    {
        const double c = 0.05;
        for (int t = 0; t < kNumSamples; ++t) traj.streams(0, t) = t * c;
        const auto mes = mes_descriptor(traj);
        CHECK(mes[0] == doctest::Approx((14.5 * c + 3.0) / 6.0));
    }

    SUBCASE("components always in the unit box")
    {
        traj.streams.row(0).setConstant(100.0);  // out of range, clamped
        const auto mes = mes_descriptor(traj);
        for (int i = 0; i < 6; ++i) {
            CHECK(mes[i] >= 0.0);
            CHECK(mes[i] <= 1.0);
        }
    }
}
