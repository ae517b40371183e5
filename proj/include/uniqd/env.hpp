#ifndef UNIQD_ENV_HPP
#define UNIQD_ENV_HPP

#include "uniqd/core.hpp"

#include <Eigen/Core>

namespace uniqd::env {

// Planar unicycle constants.
constexpr double kVMax = 1.0;        // m/s
constexpr double kOmegaMax = 2.0;    // rad/s
constexpr double kTau = 0.2;         // actuator lag, s
constexpr double kArenaHalfWidth = 3.0;  // m, observation scaling
constexpr double kDt = 0.02;         // 50 Hz control
constexpr int kSteps = 150;          // 3 s episode
constexpr int kRecordEvery = 5;      // 10 Hz recording
constexpr int kNumStreams = 6;       // x, y, cos(theta), sin(theta), v, omega
constexpr int kNumSamples = 30;
constexpr int kTrajectoryDim = kNumStreams * kNumSamples;

constexpr int kObsDim = 6;
constexpr int kHiddenDim = 8;
constexpr int kActDim = 2;
constexpr int kGenotypeDim = (kObsDim + 1) * kHiddenDim + (kHiddenDim + 1) * kActDim;  // 74

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

struct RobotState {
    double x = 0.0, y = 0.0;
    double theta = 0.0;
    double v = 0.0, omega = 0.0;
};

/// Recorded state streams of one episode: 6 streams x 30 samples at 10 Hz.
struct Trajectory {
    Eigen::Matrix<double, kNumStreams, kNumSamples> streams;

    /// Stream-major flattening: stream 0 samples 0..29, then stream 1, ...
    Eigen::Matrix<double, kTrajectoryDim, 1> flatten() const;
};

struct Evaluation {
    Trajectory trajectory;
    Eigen::Vector2d bd_nav;
    Eigen::Vector2d bd_forw;
    Eigen::Vector2d bd_turn;
    Eigen::Matrix<double, kNumStreams, 1> bd_mes;
    double f_nav = 0.0;
    double f_forw = 0.0;
    double f_turn = 0.0;

    const Eigen::Vector2d& task_bd(Task t) const;
    double task_score(Task t) const;
};

/// One forward pass of the 6-8-2 tanh MLP controller.
Eigen::Vector2d controller_forward(const Genotype& genotype,
                                   const Eigen::Matrix<double, kObsDim, 1>& observation);

/// Deterministic rollout from the origin; fills trajectory, descriptors and scores.
Evaluation simulate_episode(const Genotype& genotype);

std::pair<Eigen::Vector2d, double> task_nav(const Trajectory& trajectory);
std::pair<Eigen::Vector2d, double> task_forw(const Trajectory& trajectory);
std::pair<Eigen::Vector2d, double> task_turn(const Trajectory& trajectory);

/// Per-stream temporal mean, min-max normalized to [0,1] with the fixed stream bounds.
Eigen::Matrix<double, kNumStreams, 1> mes_descriptor(const Trajectory& trajectory);

/// Fixed per-stream bounds (lo, hi) used for normalization and entropy binning.
void stream_bounds(Eigen::Matrix<double, kNumStreams, 1>& lo,
                   Eigen::Matrix<double, kNumStreams, 1>& hi);

}  // namespace uniqd::env

#endif
