#include "uniqd/env.hpp"

#include <cmath>

namespace uniqd::env {

double wrap_angle(double a)
{
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    else if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

Eigen::Matrix<double, kTrajectoryDim, 1> Trajectory::flatten() const
{
    Eigen::Matrix<double, kTrajectoryDim, 1> out;
    for (int s = 0; s < kNumStreams; ++s)
        out.segment<kNumSamples>(s * kNumSamples) = streams.row(s).transpose();
    return out;
}

const Eigen::Vector2d& Evaluation::task_bd(Task t) const
{
    switch (t) {
        case Task::Nav: return bd_nav;
        case Task::Forw: return bd_forw;
        case Task::Turn: return bd_turn;
    }
    throw std::logic_error("bad task");
}

double Evaluation::task_score(Task t) const
{
    switch (t) {
        case Task::Nav: return f_nav;
        case Task::Forw: return f_forw;
        case Task::Turn: return f_turn;
    }
    throw std::logic_error("bad task");
}

Eigen::Vector2d controller_forward(const Genotype& genotype,
                                   const Eigen::Matrix<double, kObsDim, 1>& observation)
{
    if (genotype.size() != kGenotypeDim)
        throw std::invalid_argument("controller_forward: genotype length must be 74");

    // Layout: per hidden unit, 6 weights then a bias; per output unit, 8 weights then a bias.
    Eigen::Matrix<double, kHiddenDim, 1> hidden;
    int p = 0;
    for (int h = 0; h < kHiddenDim; ++h) {
        double acc = 0.0;
        for (int i = 0; i < kObsDim; ++i) acc += genotype[p++] * observation[i];
        acc += genotype[p++];
        hidden[h] = std::tanh(acc);
    }
    Eigen::Vector2d out;
    for (int o = 0; o < kActDim; ++o) {
        double acc = 0.0;
        for (int h = 0; h < kHiddenDim; ++h) acc += genotype[p++] * hidden[h];
        acc += genotype[p++];
        out[o] = std::tanh(acc);
    }
    return out;
}

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }
double clamp_unit(double x) { return std::min(1.0, std::max(-1.0, x)); }

}  // namespace

Evaluation simulate_episode(const Genotype& genotype)
{
    RobotState s;
    Trajectory traj;
    int sample = 0;
    for (int step = 1; step <= kSteps; ++step) {
        Eigen::Matrix<double, kObsDim, 1> obs;
        obs << clamp_unit(s.x / kArenaHalfWidth), clamp_unit(s.y / kArenaHalfWidth),
            std::cos(s.theta), std::sin(s.theta),
            clamp_unit(s.v / kVMax), clamp_unit(s.omega / kOmegaMax);
        const Eigen::Vector2d cmd = controller_forward(genotype, obs);

        // Explicit Euler on the first-order-lag unicycle; derivatives from the pre-step state.
        const double dv = (cmd[0] * kVMax - s.v) / kTau;
        const double domega = (cmd[1] * kOmegaMax - s.omega) / kTau;
        const double dx = s.v * std::cos(s.theta);
        const double dy = s.v * std::sin(s.theta);
        const double dtheta = s.omega;
        s.x += kDt * dx;
        s.y += kDt * dy;
        s.theta = wrap_angle(s.theta + kDt * dtheta);
        s.v += kDt * dv;
        s.omega += kDt * domega;

        if (step % kRecordEvery == 0) {
            traj.streams(0, sample) = s.x;
            traj.streams(1, sample) = s.y;
            traj.streams(2, sample) = std::cos(s.theta);
            traj.streams(3, sample) = std::sin(s.theta);
            traj.streams(4, sample) = s.v;
            traj.streams(5, sample) = s.omega;
            ++sample;
        }
    }

    Evaluation ev;
    ev.trajectory = traj;
    std::tie(ev.bd_nav, ev.f_nav) = task_nav(traj);
    std::tie(ev.bd_forw, ev.f_forw) = task_forw(traj);
    std::tie(ev.bd_turn, ev.f_turn) = task_turn(traj);
    ev.bd_mes = mes_descriptor(traj);
    return ev;
}

std::pair<Eigen::Vector2d, double> task_nav(const Trajectory& trajectory)
{
    const double xT = trajectory.streams(0, kNumSamples - 1);
    const double yT = trajectory.streams(1, kNumSamples - 1);
    const double thetaT = std::atan2(trajectory.streams(3, kNumSamples - 1),
                                     trajectory.streams(2, kNumSamples - 1));
    Eigen::Vector2d bd(clamp01((xT + kArenaHalfWidth) / (2.0 * kArenaHalfWidth)),
                       clamp01((yT + kArenaHalfWidth) / (2.0 * kArenaHalfWidth)));
    // Desired heading for a circular arc from the origin through (xT, yT).
    const double desired = (xT == 0.0 && yT == 0.0) ? 0.0 : 2.0 * std::atan2(yT, xT);
    const double f = -std::abs(wrap_angle(thetaT - desired));
    return {bd, f};
}

std::pair<Eigen::Vector2d, double> task_forw(const Trajectory& trajectory)
{
    const double xT = trajectory.streams(0, kNumSamples - 1);
    const double mean_v = trajectory.streams.row(4).mean();
    const double mean_omega = trajectory.streams.row(5).mean();
    Eigen::Vector2d bd(clamp01((mean_v / kVMax + 1.0) / 2.0),
                       clamp01((mean_omega / kOmegaMax + 1.0) / 2.0));
    return {bd, xT};
}

std::pair<Eigen::Vector2d, double> task_turn(const Trajectory& trajectory)
{
    const double thetaT = std::atan2(trajectory.streams(3, kNumSamples - 1),
                                     trajectory.streams(2, kNumSamples - 1));
    const double vT = trajectory.streams(4, kNumSamples - 1);
    const double omegaT = trajectory.streams(5, kNumSamples - 1);
    Eigen::Vector2d bd(clamp01((vT / kVMax + 1.0) / 2.0),
                       clamp01((omegaT / kOmegaMax + 1.0) / 2.0));
    const double f = -std::abs(wrap_angle(thetaT - M_PI));
    return {bd, f};
}

void stream_bounds(Eigen::Matrix<double, kNumStreams, 1>& lo,
                   Eigen::Matrix<double, kNumStreams, 1>& hi)
{
    lo << -kArenaHalfWidth, -kArenaHalfWidth, -1.0, -1.0, -kVMax, -kOmegaMax;
    hi << kArenaHalfWidth, kArenaHalfWidth, 1.0, 1.0, kVMax, kOmegaMax;
}

Eigen::Matrix<double, kNumStreams, 1> mes_descriptor(const Trajectory& trajectory)
{
    Eigen::Matrix<double, kNumStreams, 1> lo, hi, out;
    stream_bounds(lo, hi);
    for (int s = 0; s < kNumStreams; ++s) {
        const double mean = trajectory.streams.row(s).mean();
        out[s] = clamp01((mean - lo[s]) / (hi[s] - lo[s]));
    }
    return out;
}

}  // namespace uniqd::env
