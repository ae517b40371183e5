#ifndef UNIQD_SNAPSHOT_HPP
#define UNIQD_SNAPSHOT_HPP

#include "uniqd/container.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace uniqd {

/// One exported container entry: genotype, active descriptor, and all three
/// hand-coded task descriptors with their scores.
struct SnapshotEntry {
    Eigen::VectorXd genotype;
    Eigen::VectorXd bd;
    Eigen::Vector2d bd_nav, bd_forw, bd_turn;
    double f_nav = 0.0, f_forw = 0.0, f_turn = 0.0;

    Eigen::Vector2d task_bd(Task t) const;
    double task_score(Task t) const;
};

class SnapshotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Locale-independent decimal with 17 significant digits.
std::string format_double(double v);

std::vector<SnapshotEntry> snapshot_from_container(const Container& container);

void write_snapshot(const std::filesystem::path& path, const std::vector<SnapshotEntry>& entries);

/// Throws SnapshotError naming the offending row on malformed input.
std::vector<SnapshotEntry> read_snapshot(const std::filesystem::path& path);

}  // namespace uniqd

#endif
