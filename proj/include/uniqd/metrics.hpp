#ifndef UNIQD_METRICS_HPP
#define UNIQD_METRICS_HPP

#include "uniqd/dimred.hpp"
#include "uniqd/snapshot.hpp"

#include <filesystem>
#include <vector>

namespace uniqd::metrics {

constexpr int kGridResolution = 50;
constexpr int kEntropyBins = 10;

struct CoverageCurve {
    Task task;
    std::vector<double> thresholds;  // ascending; starts at -infinity
    std::vector<int> coverage;
};

/// Occupied 50x50 grid cells holding at least one entry scoring above f_min.
int coverage(const std::vector<SnapshotEntry>& snapshot, Task task, double f_min);

/// Thresholds linearly spaced from min to max observed score, prefixed by -inf.
CoverageCurve coverage_curve(const std::vector<SnapshotEntry>& snapshot, Task task,
                             int n_thresholds);

/// Plug-in histogram entropy in nats over occupied multi-dimensional cells.
double empirical_entropy(const std::vector<Eigen::VectorXd>& samples, int bins_per_dim,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

struct EntropyReport {
    double h_trajectories = 0.0;
    double h_descriptors = 0.0;
    bool holds = false;
};

/// Compares the trajectory entropy with the encoded-descriptor entropy
/// (10 bins per dimension); the descriptor entropy can never exceed the
/// trajectory entropy beyond binning artifacts.
EntropyReport entropy_inequality_report(const std::vector<env::Trajectory>& trajectories,
                                        const EncoderModel& encoder);

void write_coverage_csv(const std::filesystem::path& path, const CoverageCurve& curve,
                        std::uint64_t seed, const std::string& variant);

/// Static SVG scatter of a 2-D bd projection colored by score.
void write_scatter_svg(const std::filesystem::path& path,
                       const std::vector<SnapshotEntry>& snapshot, Task task);

}  // namespace uniqd::metrics

#endif
