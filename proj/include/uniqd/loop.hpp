#ifndef UNIQD_LOOP_HPP
#define UNIQD_LOOP_HPP

#include "uniqd/container.hpp"
#include "uniqd/core.hpp"
#include "uniqd/dimred.hpp"
#include "uniqd/metrics.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace uniqd {

constexpr int kBootstrapSize = 256;

struct RunMetrics {
    long evaluation_count = 0;
    std::vector<long> encoder_phase_iterations;
    std::vector<FitStats> encoder_phase_losses;
    std::optional<FitStats> bootstrap_fit;
};

struct RunState {
    ExperimentConfig config;
    Container container;
    EncoderModel encoder;  // AURORA only
    AdamState adam;        // AURORA + AE only
    long iteration = 0;
    int encoder_update_index = 1;      // k of the next scheduled phase
    long next_encoder_iteration = 0;   // 0 when the variant has no encoder
    RunMetrics metrics;
};

/// Task whose score drives replacement for this variant.
Task scored_task(const ExperimentConfig& config);

/// Descriptor dimension of the container for this variant.
int bd_dimension(const ExperimentConfig& config);

/// Active descriptor of one evaluation under the current state.
Eigen::VectorXd active_bd(const RunState& state, const env::Evaluation& evaluation);

/// Bootstrap: 256 uniform random genotypes, initial encoder fit (AURORA),
/// and insertion of the bootstrap population.
RunState init_run(const ExperimentConfig& config);

/// One QD iteration: select, mutate, evaluate, insert, and periodically
/// rescale the container threshold.
void qd_iteration(RunState& state);

/// Train the encoder on all archived trajectories and recompute every bd.
void encoder_phase(RunState& state);

/// Full run; writes snapshot, coverage/entropy CSVs and the manifest
/// into config.out_dir.
RunState run(const ExperimentConfig& config);

/// FNV-1a 64-bit hash of a file, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

}  // namespace uniqd

#endif
