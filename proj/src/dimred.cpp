#include "uniqd/dimred.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace uniqd {

namespace {

constexpr double kLeakySlope = 0.01;

Eigen::MatrixXd leaky(const Eigen::MatrixXd& z)
{
    return z.unaryExpr([](double x) { return x > 0.0 ? x : kLeakySlope * x; });
}

Eigen::MatrixXd leaky_grad(const Eigen::MatrixXd& z)
{
    return z.unaryExpr([](double x) { return x > 0.0 ? 1.0 : kLeakySlope; });
}

}  // namespace

AeModel AeModel::init(int input_dim, int hidden_dim, int latent_dim, Rng& rng)
{
    auto glorot = [&rng](int rows, int cols) {
        const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
        Eigen::MatrixXd w(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) w(i, j) = rng.uniform(-bound, bound);
        return w;
    };
    AeModel m;
    m.w1 = glorot(hidden_dim, input_dim);
    m.b1 = Eigen::VectorXd::Zero(hidden_dim);
    m.w2 = glorot(latent_dim, hidden_dim);
    m.b2 = Eigen::VectorXd::Zero(latent_dim);
    m.w3 = glorot(hidden_dim, latent_dim);
    m.b3 = Eigen::VectorXd::Zero(hidden_dim);
    m.w4 = glorot(input_dim, hidden_dim);
    m.b4 = Eigen::VectorXd::Zero(input_dim);
    return m;
}

AdamState AdamState::init(const AeModel& model, const EncoderConfig& cfg)
{
    AdamState s;
    s.alpha = cfg.learning_rate;
    s.beta1 = cfg.beta1;
    s.beta2 = cfg.beta2;
    s.epsilon = cfg.epsilon;
    for (const Eigen::MatrixXd& p : {model.w1, Eigen::MatrixXd(model.b1), model.w2,
                                     Eigen::MatrixXd(model.b2), model.w3, Eigen::MatrixXd(model.b3),
                                     model.w4, Eigen::MatrixXd(model.b4)}) {
        s.m.push_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
        s.v.push_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
    }
    return s;
}

PcaModel pca_fit(const Eigen::MatrixXd& dataset, int d)
{
    const Eigen::Index n = dataset.rows();
    const Eigen::Index dim = dataset.cols();
    if (d < 1 || n < d) throw std::invalid_argument("pca_fit: need n >= d >= 1");

    PcaModel model;
    model.mean = dataset.colwise().mean();
    Eigen::MatrixXd centered = dataset.rowwise() - model.mean.transpose();

    if (centered.cwiseAbs().maxCoeff() == 0.0) {
        // All rows identical: no principal directions exist; fall back to unit axes.
        model.components = Eigen::MatrixXd::Identity(d, dim);
        return model;
    }

    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw std::runtime_error("pca_fit: eigensolver failed");

    model.components.resize(d, dim);
    for (int i = 0; i < d; ++i) {
        Eigen::VectorXd comp = solver.eigenvectors().col(dim - 1 - i);  // descending eigenvalue
        int argmax = 0;
        for (Eigen::Index j = 1; j < dim; ++j)
            if (std::abs(comp[j]) > std::abs(comp[argmax])) argmax = static_cast<int>(j);
        if (comp[argmax] < 0.0) comp = -comp;
        model.components.row(i) = comp.transpose();
    }
    return model;
}

Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& input)
{
    return model.components * (input - model.mean);
}

Eigen::VectorXd pca_reconstruct(const PcaModel& model, const Eigen::VectorXd& latent)
{
    return model.mean + model.components.transpose() * latent;
}

AeForwardResult ae_forward(const AeModel& model, const Eigen::VectorXd& input)
{
    const Eigen::VectorXd h1 = leaky(model.w1 * input + model.b1);
    AeForwardResult r;
    r.latent = model.w2 * h1 + model.b2;
    const Eigen::VectorXd h2 = leaky(model.w3 * r.latent + model.b3);
    r.reconstruction = model.w4 * h2 + model.b4;
    return r;
}

AeGradients ae_gradients(const AeModel& model, const Eigen::MatrixXd& batch)
{
    if (batch.rows() < 1) throw std::invalid_argument("ae_gradients: empty batch");
    const Eigen::MatrixXd x = batch.transpose();  // columns are samples

    const Eigen::MatrixXd z1 = (model.w1 * x).colwise() + model.b1;
    const Eigen::MatrixXd h1 = leaky(z1);
    const Eigen::MatrixXd lat = (model.w2 * h1).colwise() + model.b2;
    const Eigen::MatrixXd z3 = (model.w3 * lat).colwise() + model.b3;
    const Eigen::MatrixXd h2 = leaky(z3);
    const Eigen::MatrixXd y = (model.w4 * h2).colwise() + model.b4;

    const Eigen::MatrixXd err = y - x;
    AeGradients g;
    g.loss = err.squaredNorm() / static_cast<double>(err.size());
    if (!std::isfinite(g.loss)) throw std::runtime_error("ae_gradients: non-finite loss");

    const Eigen::MatrixXd dy = 2.0 * err / static_cast<double>(err.size());
    const Eigen::MatrixXd dz3 = (model.w4.transpose() * dy).cwiseProduct(leaky_grad(z3));
    const Eigen::MatrixXd dlat = model.w3.transpose() * dz3;
    const Eigen::MatrixXd dz1 = (model.w2.transpose() * dlat).cwiseProduct(leaky_grad(z1));

    g.w4 = dy * h2.transpose();
    g.b4 = dy.rowwise().sum();
    g.w3 = dz3 * lat.transpose();
    g.b3 = dz3.rowwise().sum();
    g.w2 = dlat * h1.transpose();
    g.b2 = dlat.rowwise().sum();
    g.w1 = dz1 * x.transpose();
    g.b1 = dz1.rowwise().sum();
    return g;
}

void adam_update(AdamState& adam, AeModel& model, const AeGradients& g)
{
    adam.step += 1;
    const double bc1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
    const double bc2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));

    Eigen::MatrixXd* params[8] = {&model.w1, nullptr, &model.w2, nullptr,
                                  &model.w3, nullptr, &model.w4, nullptr};
    Eigen::VectorXd* bias_params[8] = {nullptr, &model.b1, nullptr, &model.b2,
                                       nullptr, &model.b3, nullptr, &model.b4};
    const Eigen::MatrixXd grads[8] = {g.w1, g.b1, g.w2, g.b2, g.w3, g.b3, g.w4, g.b4};

    for (int i = 0; i < 8; ++i) {
        adam.m[i] = adam.beta1 * adam.m[i] + (1.0 - adam.beta1) * grads[i];
        adam.v[i] = adam.beta2 * adam.v[i] + (1.0 - adam.beta2) * grads[i].cwiseProduct(grads[i]);
        const Eigen::MatrixXd denom =
            ((adam.v[i] / bc2).cwiseSqrt().array() + adam.epsilon).matrix();
        const Eigen::MatrixXd update = (adam.alpha / bc1) * adam.m[i].cwiseQuotient(denom);
        if (params[i]) *params[i] -= update;
        else *bias_params[i] -= update.col(0);
    }
}

double ae_train_step(AeModel& model, AdamState& adam, const Eigen::MatrixXd& batch)
{
    const AeGradients g = ae_gradients(model, batch);
    adam_update(adam, model, g);
    return g.loss;
}

double reconstruction_loss(const EncoderModel& model, const Eigen::MatrixXd& dataset)
{
    double acc = 0.0;
    for (Eigen::Index i = 0; i < dataset.rows(); ++i) {
        const Eigen::VectorXd x = dataset.row(i).transpose();
        Eigen::VectorXd xhat;
        if (model.kind == EncoderKind::Pca)
            xhat = pca_reconstruct(model.pca, pca_project(model.pca, x));
        else
            xhat = ae_forward(model.ae, x).reconstruction;
        acc += (xhat - x).squaredNorm() / static_cast<double>(x.size());
    }
    return acc / static_cast<double>(dataset.rows());
}

Eigen::VectorXd raw_latent(const EncoderModel& model, const Eigen::VectorXd& input)
{
    if (model.kind == EncoderKind::Pca) {
        if (model.pca.components.size() == 0) throw std::logic_error("encode: unfitted model");
        return pca_project(model.pca, input);
    }
    if (model.ae.w1.size() == 0) throw std::logic_error("encode: unfitted model");
    return ae_forward(model.ae, input).latent;
}

Eigen::VectorXd encode(const EncoderModel& model, const Eigen::VectorXd& input)
{
    if (!model.norm.valid()) throw std::logic_error("encode: model has no normalization state");
    const Eigen::VectorXd z = raw_latent(model, input);
    Eigen::VectorXd out(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double v = (z[i] - model.norm.min[i]) / (model.norm.max[i] - model.norm.min[i]);
        out[i] = std::min(1.0, std::max(0.0, v));
    }
    return out;
}

void fit_norm(EncoderModel& model, const Eigen::MatrixXd& dataset)
{
    const int d = model.latent_dim();
    LatentNorm norm;
    norm.min = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::infinity());
    norm.max = Eigen::VectorXd::Constant(d, -std::numeric_limits<double>::infinity());
    for (Eigen::Index i = 0; i < dataset.rows(); ++i) {
        const Eigen::VectorXd z = raw_latent(model, dataset.row(i).transpose());
        norm.min = norm.min.cwiseMin(z);
        norm.max = norm.max.cwiseMax(z);
    }
    for (int i = 0; i < d; ++i)
        if (!(norm.min[i] < norm.max[i])) norm.max[i] = norm.min[i] + 1e-9;
    model.norm = norm;
}

long schedule_next_update(int k, int first)
{
    if (k < 1) throw std::invalid_argument("schedule_next_update: k must be >= 1");
    return static_cast<long>(first) * k * (k + 1) / 2;
}

Eigen::MatrixXd container_trajectories(const Container& container)
{
    Eigen::MatrixXd data(container.size(), env::kTrajectoryDim);
    for (std::size_t i = 0; i < container.size(); ++i)
        data.row(i) = container.entries()[i].evaluation.trajectory.flatten().transpose();
    return data;
}

FitStats fit_encoder(EncoderModel& model, AdamState& adam, const Eigen::MatrixXd& data,
                     const EncoderConfig& cfg, Rng& rng)
{
    if (data.rows() < 1) throw std::logic_error("fit_encoder: empty dataset");

    FitStats stats;
    if (model.kind == EncoderKind::Pca) {
        stats.loss_before = model.pca.components.size() > 0 ? reconstruction_loss(model, data) : 0.0;
        model.pca = pca_fit(data, cfg.latent_dim);
        stats.loss_after = reconstruction_loss(model, data);
    } else {
        stats.loss_before = reconstruction_loss(model, data);
        const Eigen::Index batch_size = std::min<Eigen::Index>(256, data.rows());
        Eigen::MatrixXd batch(batch_size, data.cols());
        for (int step = 0; step < cfg.train_steps; ++step) {
            for (Eigen::Index r = 0; r < batch_size; ++r)
                batch.row(r) = data.row(rng.index(data.rows()));
            ae_train_step(model.ae, adam, batch);
        }
        stats.loss_after = reconstruction_loss(model, data);
    }
    fit_norm(model, data);
    return stats;
}

FitStats fit_encoder(EncoderModel& model, AdamState& adam, const Container& container,
                     const EncoderConfig& cfg, Rng& rng)
{
    if (container.empty()) throw std::logic_error("fit_encoder: empty container");
    return fit_encoder(model, adam, container_trajectories(container), cfg, rng);
}

namespace {

constexpr char kMagic[8] = {'U', 'Q', 'D', 'E', 'N', 'C', '0', '1'};

void write_matrix(std::ofstream& out, const Eigen::MatrixXd& m)
{
    const std::int64_t rows = m.rows(), cols = m.cols();
    out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double v = m(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
}

Eigen::MatrixXd read_matrix(std::ifstream& in)
{
    std::int64_t rows = 0, cols = 0;
    in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
    in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
    if (!in || rows < 0 || cols < 0) throw std::runtime_error("encoder file truncated");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            double v = 0;
            in.read(reinterpret_cast<char*>(&v), sizeof(v));
            m(i, j) = v;
        }
    if (!in) throw std::runtime_error("encoder file truncated");
    return m;
}

}  // namespace

void EncoderModel::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out.write(kMagic, sizeof(kMagic));
    const std::uint8_t tag = kind == EncoderKind::Pca ? 0 : 1;
    out.write(reinterpret_cast<const char*>(&tag), 1);
    if (kind == EncoderKind::Pca) {
        write_matrix(out, pca.mean);
        write_matrix(out, pca.components);
    } else {
        write_matrix(out, ae.w1);
        write_matrix(out, ae.b1);
        write_matrix(out, ae.w2);
        write_matrix(out, ae.b2);
        write_matrix(out, ae.w3);
        write_matrix(out, ae.b3);
        write_matrix(out, ae.w4);
        write_matrix(out, ae.b4);
    }
    write_matrix(out, norm.min);
    write_matrix(out, norm.max);
}

EncoderModel EncoderModel::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("bad encoder file magic");
    std::uint8_t tag = 0;
    in.read(reinterpret_cast<char*>(&tag), 1);
    EncoderModel model;
    model.kind = tag == 0 ? EncoderKind::Pca : EncoderKind::Ae;
    if (model.kind == EncoderKind::Pca) {
        model.pca.mean = read_matrix(in);
        model.pca.components = read_matrix(in);
    } else {
        model.ae.w1 = read_matrix(in);
        model.ae.b1 = read_matrix(in);
        model.ae.w2 = read_matrix(in);
        model.ae.b2 = read_matrix(in);
        model.ae.w3 = read_matrix(in);
        model.ae.b3 = read_matrix(in);
        model.ae.w4 = read_matrix(in);
        model.ae.b4 = read_matrix(in);
    }
    model.norm.min = read_matrix(in);
    model.norm.max = read_matrix(in);
    return model;
}

}  // namespace uniqd
