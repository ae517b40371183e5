#include "uniqd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace uniqd::metrics {

namespace {

int cell_index(double coord)
{
    const int c = static_cast<int>(std::floor(coord * kGridResolution));
    return std::min(kGridResolution - 1, std::max(0, c));
}

}  // namespace

int coverage(const std::vector<SnapshotEntry>& snapshot, Task task, double f_min)
{
    std::unordered_set<int> cells;
    for (const auto& e : snapshot) {
        if (e.task_score(task) <= f_min) continue;
        const Eigen::Vector2d bd = e.task_bd(task);
        cells.insert(cell_index(bd[0]) * kGridResolution + cell_index(bd[1]));
    }
    return static_cast<int>(cells.size());
}

CoverageCurve coverage_curve(const std::vector<SnapshotEntry>& snapshot, Task task,
                             int n_thresholds)
{
    if (snapshot.empty()) throw SnapshotError("coverage_curve: empty snapshot");
    if (n_thresholds < 2) throw std::invalid_argument("coverage_curve: need >= 2 thresholds");

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& e : snapshot) {
        lo = std::min(lo, e.task_score(task));
        hi = std::max(hi, e.task_score(task));
    }

    CoverageCurve curve;
    curve.task = task;
    curve.thresholds.push_back(-std::numeric_limits<double>::infinity());
    for (int i = 0; i < n_thresholds; ++i)
        curve.thresholds.push_back(lo + (hi - lo) * i / (n_thresholds - 1));
    for (double t : curve.thresholds) curve.coverage.push_back(coverage(snapshot, task, t));
    return curve;
}

double empirical_entropy(const std::vector<Eigen::VectorXd>& samples, int bins_per_dim,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi)
{
    if (samples.empty()) throw std::invalid_argument("empirical_entropy: no samples");
    std::unordered_map<std::string, int> counts;
    std::string key;
    for (const auto& s : samples) {
        key.clear();
        for (Eigen::Index d = 0; d < s.size(); ++d) {
            const double span = hi[d] - lo[d];
            double u = span > 0 ? (s[d] - lo[d]) / span : 0.0;
            u = std::min(1.0, std::max(0.0, u));
            int bin = std::min(bins_per_dim - 1, static_cast<int>(u * bins_per_dim));
            key += static_cast<char>('a' + bin % 26);
            if (bins_per_dim > 26) key += static_cast<char>('a' + bin / 26);
        }
        ++counts[key];
    }
    const double n = static_cast<double>(samples.size());
    double h = 0.0;
    for (const auto& [cell, c] : counts) {
        const double p = c / n;
        h -= p * std::log(p);
    }
    return h;
}

EntropyReport entropy_inequality_report(const std::vector<env::Trajectory>& trajectories,
                                        const EncoderModel& encoder)
{
    Eigen::Matrix<double, env::kNumStreams, 1> slo, shi;
    env::stream_bounds(slo, shi);
    Eigen::VectorXd tlo(env::kTrajectoryDim), thi(env::kTrajectoryDim);
    for (int s = 0; s < env::kNumStreams; ++s)
        for (int t = 0; t < env::kNumSamples; ++t) {
            tlo[s * env::kNumSamples + t] = slo[s];
            thi[s * env::kNumSamples + t] = shi[s];
        }

    std::vector<Eigen::VectorXd> flat, bds;
    flat.reserve(trajectories.size());
    bds.reserve(trajectories.size());
    for (const auto& tr : trajectories) {
        flat.push_back(tr.flatten());
        bds.push_back(encode(encoder, flat.back()));
    }

    const int d = encoder.latent_dim();
    EntropyReport r;
    r.h_trajectories = empirical_entropy(flat, kEntropyBins, tlo, thi);
    r.h_descriptors = empirical_entropy(bds, kEntropyBins, Eigen::VectorXd::Zero(d),
                                        Eigen::VectorXd::Ones(d));
    r.holds = r.h_descriptors <= r.h_trajectories + 1e-9;
    return r;
}

void write_coverage_csv(const std::filesystem::path& path, const CoverageCurve& curve,
                        std::uint64_t seed, const std::string& variant)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "threshold,coverage,seed,variant\n";
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        out << (std::isinf(curve.thresholds[i]) ? "-inf" : format_double(curve.thresholds[i]))
            << ',' << curve.coverage[i] << ',' << seed << ',' << variant << '\n';
    }
}

void write_scatter_svg(const std::filesystem::path& path,
                       const std::vector<SnapshotEntry>& snapshot, Task task)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());

    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -std::numeric_limits<double>::infinity();
    for (const auto& e : snapshot) {
        fmin = std::min(fmin, e.task_score(task));
        fmax = std::max(fmax, e.task_score(task));
    }
    const double span = fmax > fmin ? fmax - fmin : 1.0;

    constexpr int kSize = 500;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
        << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
        << "<rect width=\"" << kSize << "\" height=\"" << kSize << "\" fill=\"white\"/>\n";
    for (const auto& e : snapshot) {
        const Eigen::Vector2d bd = e.task_bd(task);
        const double u = (e.task_score(task) - fmin) / span;
        const int red = static_cast<int>(255 * u);
        const int blue = 255 - red;
        out << "<circle cx=\"" << bd[0] * kSize << "\" cy=\"" << (1.0 - bd[1]) * kSize
            << "\" r=\"2\" fill=\"rgb(" << red << ",0," << blue << ")\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace uniqd::metrics
