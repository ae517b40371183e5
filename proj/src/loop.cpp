#include "uniqd/loop.hpp"

#include "uniqd/snapshot.hpp"
#include "uniqd/variation.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <thread>

namespace uniqd {

using nlohmann::json;

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& fn)
{
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) fn(i);
        });
    for (auto& th : pool) th.join();
}

ContainerEntry make_entry(const RunState& state, Genotype genotype, env::Evaluation evaluation)
{
    ContainerEntry e;
    e.bd = active_bd(state, evaluation);
    e.fitness = evaluation.task_score(scored_task(state.config));
    e.genotype = std::move(genotype);
    e.evaluation = std::move(evaluation);
    return e;
}

}  // namespace

Task scored_task(const ExperimentConfig& config)
{
    switch (config.variant) {
        case Variant::HcNav: return Task::Nav;
        case Variant::HcForw: return Task::Forw;
        case Variant::HcTurn: return Task::Turn;
        default: return config.scored_task;
    }
}

int bd_dimension(const ExperimentConfig& config)
{
    switch (config.variant) {
        case Variant::Aurora: return config.encoder.latent_dim;
        case Variant::MeS: return env::kNumStreams;
        default: return 2;
    }
}

Eigen::VectorXd active_bd(const RunState& state, const env::Evaluation& evaluation)
{
    switch (state.config.variant) {
        case Variant::Aurora: return encode(state.encoder, evaluation.trajectory.flatten());
        case Variant::HcNav: return evaluation.bd_nav;
        case Variant::HcForw: return evaluation.bd_forw;
        case Variant::HcTurn: return evaluation.bd_turn;
        case Variant::MeS: return Eigen::VectorXd(evaluation.bd_mes);
    }
    throw std::logic_error("bad variant");
}

RunState init_run(const ExperimentConfig& config)
{
    config.validate();
    RunState state{config,
                   Container(bd_dimension(config), config.container.initial_threshold,
                             config.container.k_novelty)};

    std::vector<Genotype> genotypes(kBootstrapSize);
    std::vector<env::Evaluation> evaluations(kBootstrapSize);
    parallel_for(kBootstrapSize, config.threads, [&](int i) {
        Rng rng = Rng::split(config.seed, RngPurpose::Init, i);
        Genotype g(env::kGenotypeDim);
        for (int j = 0; j < env::kGenotypeDim; ++j) g[j] = rng.uniform(-1.0, 1.0);
        evaluations[i] = env::simulate_episode(g);
        genotypes[i] = std::move(g);
    });
    state.metrics.evaluation_count += kBootstrapSize;

    if (config.variant == Variant::Aurora) {
        state.encoder.kind = config.encoder.kind;
        if (config.encoder.kind == EncoderKind::Ae) {
            Rng init_rng = Rng::split(config.seed, RngPurpose::Encoder, 0);
            state.encoder.ae = AeModel::init(env::kTrajectoryDim, config.encoder.hidden_dim,
                                             config.encoder.latent_dim, init_rng);
            state.adam = AdamState::init(state.encoder.ae, config.encoder);
        }
        Eigen::MatrixXd data(kBootstrapSize, env::kTrajectoryDim);
        for (int i = 0; i < kBootstrapSize; ++i)
            data.row(i) = evaluations[i].trajectory.flatten().transpose();
        Rng fit_rng = Rng::split(config.seed, RngPurpose::Encoder, 1);
        state.metrics.bootstrap_fit =
            fit_encoder(state.encoder, state.adam, data, config.encoder, fit_rng);
        state.next_encoder_iteration =
            schedule_next_update(state.encoder_update_index, config.encoder.first_update);
    }

    for (int i = 0; i < kBootstrapSize; ++i)
        state.container.try_add(make_entry(state, std::move(genotypes[i]), std::move(evaluations[i])));
    return state;
}

void qd_iteration(RunState& state)
{
    const ExperimentConfig& cfg = state.config;
    const long iter = ++state.iteration;
    const int batch = cfg.batch_size;

    Rng sel = Rng::split(cfg.seed, RngPurpose::Selection, iter);
    std::vector<Genotype> parents = select_uniform(state.container, batch, sel);

    const MutationParams mutation{cfg.mutation.eta, cfg.mutation.rate, -1.0, 1.0};
    std::vector<Genotype> offspring(batch);
    std::vector<env::Evaluation> evaluations(batch);
    parallel_for(batch, cfg.threads, [&](int j) {
        Rng rng = Rng::split(cfg.seed, RngPurpose::Variation,
                             static_cast<std::uint64_t>(iter - 1) * batch + j);
        offspring[j] = polynomial_mutate(parents[j], mutation, rng);
        evaluations[j] = env::simulate_episode(offspring[j]);
    });
    state.metrics.evaluation_count += batch;

    for (int j = 0; j < batch; ++j)
        state.container.try_add(make_entry(state, std::move(offspring[j]), std::move(evaluations[j])));

    if (iter % cfg.container.update_period == 0)
        state.container.container_update(cfg.container.target);
}

void encoder_phase(RunState& state)
{
    const ExperimentConfig& cfg = state.config;
    // Substream index 0/1 are reserved for the bootstrap fit.
    Rng rng = Rng::split(cfg.seed, RngPurpose::Encoder, 1 + state.encoder_update_index);
    const FitStats stats = fit_encoder(state.encoder, state.adam, state.container, cfg.encoder, rng);
    state.container.refresh_descriptors([&state](const env::Evaluation& ev) {
        return encode(state.encoder, ev.trajectory.flatten());
    });
    state.metrics.encoder_phase_iterations.push_back(state.next_encoder_iteration);
    state.metrics.encoder_phase_losses.push_back(stats);
    state.encoder_update_index += 1;
    state.next_encoder_iteration =
        schedule_next_update(state.encoder_update_index, cfg.encoder.first_update);
}

std::string file_hash(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("file_hash: cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

RunState run(const ExperimentConfig& config)
{
    namespace fs = std::filesystem;
    const auto start = std::chrono::steady_clock::now();

    RunState state = init_run(config);
    for (long iter = 1; iter <= config.n_iterations; ++iter) {
        if (config.variant == Variant::Aurora && iter == state.next_encoder_iteration)
            encoder_phase(state);
        qd_iteration(state);
    }

    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);

    const auto snapshot = snapshot_from_container(state.container);
    write_snapshot(out_dir / "snapshot.csv", snapshot);

    std::vector<fs::path> hashed_files = {out_dir / "snapshot.csv"};
    if (!snapshot.empty()) {
        for (Task t : {Task::Nav, Task::Forw, Task::Turn}) {
            const auto curve = metrics::coverage_curve(snapshot, t, 11);
            const fs::path p = out_dir / ("coverage_" + to_string(t) + ".csv");
            metrics::write_coverage_csv(p, curve, config.seed, to_string(config.variant));
            hashed_files.push_back(p);
        }
    }

    if (config.variant == Variant::Aurora) {
        std::vector<env::Trajectory> trajectories;
        trajectories.reserve(state.container.size());
        for (const auto& e : state.container.entries())
            trajectories.push_back(e.evaluation.trajectory);
        const auto report = metrics::entropy_inequality_report(trajectories, state.encoder);
        std::ofstream ent(out_dir / "entropy.csv");
        ent << "h_trajectories,h_descriptors,holds,seed,variant\n"
            << format_double(report.h_trajectories) << ',' << format_double(report.h_descriptors)
            << ',' << (report.holds ? 1 : 0) << ',' << config.seed << ','
            << to_string(config.variant) << '\n';
        ent.close();
        hashed_files.push_back(out_dir / "entropy.csv");

        state.encoder.save(out_dir / "encoder.bin");
        hashed_files.push_back(out_dir / "encoder.bin");

        std::ofstream phases(out_dir / "encoder_phases.csv");
        phases << "iteration,loss_start,loss_end\n";
        for (std::size_t i = 0; i < state.metrics.encoder_phase_iterations.size(); ++i)
            phases << state.metrics.encoder_phase_iterations[i] << ','
                   << format_double(state.metrics.encoder_phase_losses[i].loss_before) << ','
                   << format_double(state.metrics.encoder_phase_losses[i].loss_after) << '\n';
        phases.close();
        hashed_files.push_back(out_dir / "encoder_phases.csv");
    }

    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

    json manifest;
    manifest["variant"] = to_string(config.variant);
    manifest["seed"] = config.seed;
    manifest["config"] = json::parse(config.to_json_text());
    manifest["evaluation_count"] = state.metrics.evaluation_count;
    manifest["final_container_size"] = state.container.size();
    manifest["final_threshold"] = state.container.threshold();
    manifest["encoder_phase_iterations"] = state.metrics.encoder_phase_iterations;
    manifest["wall_clock_seconds"] = elapsed.count();
    json files = json::object();
    std::uint64_t combined = 0xcbf29ce484222325ULL;
    for (const auto& p : hashed_files) {
        const std::string h = file_hash(p);
        files[p.filename().string()] = h;
        for (char c : h) {
            combined ^= static_cast<unsigned char>(c);
            combined *= 0x100000001b3ULL;
        }
    }
    manifest["files"] = files;
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(combined));
    manifest["content_hash"] = hex;

    std::ofstream mf(out_dir / "manifest.json");
    mf << manifest.dump(2) << '\n';
    return state;
}

}  // namespace uniqd
