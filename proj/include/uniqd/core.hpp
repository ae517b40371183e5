#ifndef UNIQD_CORE_HPP
#define UNIQD_CORE_HPP

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uniqd {

/// Flat parameter vector of a policy network, each gene in [-1, 1].
using Genotype = Eigen::VectorXd;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter count of a one-hidden-layer MLP with bias terms.
inline int controller_param_count(int n_in, int n_hidden, int n_out)
{
    if (n_in < 1 || n_hidden < 1 || n_out < 1)
        throw std::invalid_argument("controller_param_count: layer sizes must be >= 1");
    return (n_in + 1) * n_hidden + (n_hidden + 1) * n_out;
}

/// Named substream purposes. Anything else is rejected by rng_split.
enum class RngPurpose { Init, Selection, Variation, Evaluation, Encoder };

RngPurpose rng_purpose_from_label(std::string_view label);

/// Deterministic random stream. Substreams are derived from
/// (seed, purpose, index) so parallel workers never share state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : _gen(mix(seed)) {}

    std::mt19937_64& gen() { return _gen; }

    double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(_gen); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(_gen); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(_gen); }

    static Rng split(std::uint64_t seed, RngPurpose purpose, std::uint64_t index);
    static Rng split(std::uint64_t seed, std::string_view purpose, std::uint64_t index);

private:
    static std::uint64_t mix(std::uint64_t x);
    std::mt19937_64 _gen;
};

enum class Variant { Aurora, HcNav, HcForw, HcTurn, MeS };
enum class Task { Nav, Forw, Turn };
enum class EncoderKind { Pca, Ae };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);
std::string to_string(Task t);
Task task_from_string(const std::string& s);

struct EncoderConfig {
    EncoderKind kind = EncoderKind::Ae;
    int latent_dim = 2;
    int hidden_dim = 64;
    int train_steps = 3000;   // Adam steps per encoder phase
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int first_update = 10;    // iteration of the first encoder phase
};

struct ContainerConfig {
    int target = 5000;
    int update_period = 10;
    int k_novelty = 15;
    double initial_threshold = 0.01;
};

struct MutationConfig {
    double eta = 10.0;
    double rate = 0.3;
};

struct ExperimentConfig {
    Variant variant = Variant::Aurora;
    Task scored_task = Task::Nav;  // drives fitness for AURORA and MeS runs
    int n_iterations = 15000;
    int batch_size = 64;
    ContainerConfig container;
    MutationConfig mutation;
    EncoderConfig encoder;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = "out";

    void validate() const;

    /// Parse from a JSON config file. Unknown keys are an error.
    static ExperimentConfig load(const std::filesystem::path& path);
    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
};

}  // namespace uniqd

#endif
