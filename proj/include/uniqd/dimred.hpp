#ifndef UNIQD_DIMRED_HPP
#define UNIQD_DIMRED_HPP

#include "uniqd/container.hpp"
#include "uniqd/core.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <vector>

namespace uniqd {

/// Per-latent-dimension min-max state mapping raw latents into [0,1]^d.
struct LatentNorm {
    Eigen::VectorXd min;
    Eigen::VectorXd max;

    bool valid() const { return min.size() > 0 && min.size() == max.size(); }
};

struct PcaModel {
    Eigen::VectorXd mean;        // input_dim
    Eigen::MatrixXd components;  // d x input_dim, orthonormal rows
};

/// Fully connected autoencoder in -> hidden -> d -> hidden -> in with
/// leaky-rectifier (slope 0.01) hidden activations and linear outputs.
struct AeModel {
    Eigen::MatrixXd w1, w2, w3, w4;
    Eigen::VectorXd b1, b2, b3, b4;

    int input_dim() const { return static_cast<int>(w1.cols()); }
    int hidden_dim() const { return static_cast<int>(w1.rows()); }
    int latent_dim() const { return static_cast<int>(w2.rows()); }

    static AeModel init(int input_dim, int hidden_dim, int latent_dim, Rng& rng);
};

struct EncoderModel {
    EncoderKind kind = EncoderKind::Pca;
    PcaModel pca;
    AeModel ae;
    LatentNorm norm;

    int latent_dim() const
    {
        return kind == EncoderKind::Pca ? static_cast<int>(pca.components.rows())
                                        : ae.latent_dim();
    }

    void save(const std::filesystem::path& path) const;
    static EncoderModel load(const std::filesystem::path& path);
};

struct AdamState {
    std::vector<Eigen::MatrixXd> m, v;  // per-parameter moments, weights then biases
    long step = 0;
    double alpha = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState init(const AeModel& model, const EncoderConfig& cfg);
};

/// Top-d principal directions of the row dataset (covariance normalized by n).
/// Sign convention: the largest-magnitude coordinate of each component is positive.
PcaModel pca_fit(const Eigen::MatrixXd& dataset, int d);

/// Raw (unnormalized) PCA latent.
Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& input);
Eigen::VectorXd pca_reconstruct(const PcaModel& model, const Eigen::VectorXd& latent);

struct AeForwardResult {
    Eigen::VectorXd latent;
    Eigen::VectorXd reconstruction;
};
AeForwardResult ae_forward(const AeModel& model, const Eigen::VectorXd& input);

struct AeGradients {
    Eigen::MatrixXd w1, w2, w3, w4;
    Eigen::VectorXd b1, b2, b3, b4;
    double loss = 0.0;
};

/// Backpropagated gradients of the batch-mean squared reconstruction error.
AeGradients ae_gradients(const AeModel& model, const Eigen::MatrixXd& batch);

/// Bias-corrected Adam update of all model parameters.
void adam_update(AdamState& adam, AeModel& model, const AeGradients& grads);

/// One Adam step on the batch (rows are samples); returns the pre-update loss.
double ae_train_step(AeModel& model, AdamState& adam, const Eigen::MatrixXd& batch);

/// Mean squared reconstruction error over the rows of the dataset.
double reconstruction_loss(const EncoderModel& model, const Eigen::MatrixXd& dataset);

/// Raw latent of one input, before normalization.
Eigen::VectorXd raw_latent(const EncoderModel& model, const Eigen::VectorXd& input);

/// Normalized descriptor in [0,1]^d.
Eigen::VectorXd encode(const EncoderModel& model, const Eigen::VectorXd& input);

/// Recompute the min-max normalization over the rows of the dataset.
void fit_norm(EncoderModel& model, const Eigen::MatrixXd& dataset);

/// Iteration of the k-th encoder update: first * k * (k+1) / 2.
long schedule_next_update(int k, int first = 10);

struct FitStats {
    double loss_before = 0.0;
    double loss_after = 0.0;
};

/// Refit (PCA) or continue training (AE) on the rows of the dataset,
/// then recompute the latent normalization.
FitStats fit_encoder(EncoderModel& model, AdamState& adam, const Eigen::MatrixXd& dataset,
                     const EncoderConfig& cfg, Rng& rng);
FitStats fit_encoder(EncoderModel& model, AdamState& adam, const Container& container,
                     const EncoderConfig& cfg, Rng& rng);

/// Row matrix of flattened trajectories of all container entries.
Eigen::MatrixXd container_trajectories(const Container& container);

}  // namespace uniqd

#endif
