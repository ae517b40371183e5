#include "uniqd/core.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>

namespace uniqd {

using nlohmann::json;

RngPurpose rng_purpose_from_label(std::string_view label)
{
    if (label == "init") return RngPurpose::Init;
    if (label == "selection") return RngPurpose::Selection;
    if (label == "variation") return RngPurpose::Variation;
    if (label == "evaluation") return RngPurpose::Evaluation;
    if (label == "encoder") return RngPurpose::Encoder;
    throw std::invalid_argument("unknown rng purpose: " + std::string(label));
}

std::uint64_t Rng::mix(std::uint64_t x)
{
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::split(std::uint64_t seed, RngPurpose purpose, std::uint64_t index)
{
    std::uint64_t h = mix(seed);
    h = mix(h ^ (static_cast<std::uint64_t>(purpose) + 1));
    h = mix(h ^ index);
    return Rng(h);
}

Rng Rng::split(std::uint64_t seed, std::string_view purpose, std::uint64_t index)
{
    return split(seed, rng_purpose_from_label(purpose), index);
}

std::string to_string(Variant v)
{
    switch (v) {
        case Variant::Aurora: return "AURORA";
        case Variant::HcNav: return "HC-Nav";
        case Variant::HcForw: return "HC-Forw";
        case Variant::HcTurn: return "HC-Turn";
        case Variant::MeS: return "MeS";
    }
    throw std::logic_error("bad variant");
}

Variant variant_from_string(const std::string& s)
{
    if (s == "AURORA") return Variant::Aurora;
    if (s == "HC-Nav") return Variant::HcNav;
    if (s == "HC-Forw") return Variant::HcForw;
    if (s == "HC-Turn") return Variant::HcTurn;
    if (s == "MeS") return Variant::MeS;
    throw ConfigError("unknown variant: " + s);
}

std::string to_string(Task t)
{
    switch (t) {
        case Task::Nav: return "nav";
        case Task::Forw: return "forw";
        case Task::Turn: return "turn";
    }
    throw std::logic_error("bad task");
}

Task task_from_string(const std::string& s)
{
    if (s == "nav") return Task::Nav;
    if (s == "forw") return Task::Forw;
    if (s == "turn") return Task::Turn;
    throw ConfigError("unknown task: " + s);
}

void ExperimentConfig::validate() const
{
    if (n_iterations < 0) throw ConfigError("n_iterations must be >= 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (container.target < 1) throw ConfigError("container.target must be >= 1");
    if (container.update_period < 1) throw ConfigError("container.update_period must be >= 1");
    if (container.k_novelty < 1) throw ConfigError("container.k_novelty must be >= 1");
    if (container.initial_threshold <= 0) throw ConfigError("container.initial_threshold must be > 0");
    if (mutation.eta <= 0) throw ConfigError("mutation.eta must be > 0");
    if (mutation.rate <= 0 || mutation.rate > 1) throw ConfigError("mutation.rate must be in (0,1]");
    if (encoder.latent_dim < 1) throw ConfigError("encoder.latent_dim must be >= 1");
    if (encoder.hidden_dim < 1) throw ConfigError("encoder.hidden_dim must be >= 1");
    if (encoder.train_steps < 1) throw ConfigError("encoder.train_steps must be >= 1");
    if (encoder.learning_rate <= 0) throw ConfigError("encoder.learning_rate must be > 0");
    if (encoder.first_update < 1) throw ConfigError("encoder.first_update must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown config key: " + where + it.key());
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    check_keys(j, "", {"variant", "scored_task", "n_iterations", "batch_size",
                       "container", "mutation", "encoder", "seed", "threads", "out_dir"});

    ExperimentConfig c;
    if (j.contains("variant")) c.variant = variant_from_string(j.at("variant").get<std::string>());
    if (j.contains("scored_task")) c.scored_task = task_from_string(j.at("scored_task").get<std::string>());
    if (j.contains("n_iterations")) c.n_iterations = j.at("n_iterations").get<int>();
    if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();

    bool target_given = false;
    if (j.contains("container")) {
        const json& jc = j.at("container");
        check_keys(jc, "container.", {"target", "update_period", "k_novelty", "initial_threshold"});
        if (jc.contains("target")) { c.container.target = jc.at("target").get<int>(); target_given = true; }
        if (jc.contains("update_period")) c.container.update_period = jc.at("update_period").get<int>();
        if (jc.contains("k_novelty")) c.container.k_novelty = jc.at("k_novelty").get<int>();
        if (jc.contains("initial_threshold")) c.container.initial_threshold = jc.at("initial_threshold").get<double>();
    }
    if (!target_given && c.variant == Variant::HcNav)
        c.container.target = 1500;

    if (j.contains("mutation")) {
        const json& jm = j.at("mutation");
        check_keys(jm, "mutation.", {"eta", "rate"});
        if (jm.contains("eta")) c.mutation.eta = jm.at("eta").get<double>();
        if (jm.contains("rate")) c.mutation.rate = jm.at("rate").get<double>();
    }
    if (j.contains("encoder")) {
        const json& je = j.at("encoder");
        check_keys(je, "encoder.", {"kind", "latent_dim", "hidden_dim", "train_steps",
                                    "learning_rate", "beta1", "beta2", "epsilon", "first_update"});
        if (je.contains("kind")) {
            std::string k = je.at("kind").get<std::string>();
            if (k == "pca") c.encoder.kind = EncoderKind::Pca;
            else if (k == "ae") c.encoder.kind = EncoderKind::Ae;
            else throw ConfigError("encoder.kind must be \"pca\" or \"ae\"");
        }
        if (je.contains("latent_dim")) c.encoder.latent_dim = je.at("latent_dim").get<int>();
        if (je.contains("hidden_dim")) c.encoder.hidden_dim = je.at("hidden_dim").get<int>();
        if (je.contains("train_steps")) c.encoder.train_steps = je.at("train_steps").get<int>();
        if (je.contains("learning_rate")) c.encoder.learning_rate = je.at("learning_rate").get<double>();
        if (je.contains("beta1")) c.encoder.beta1 = je.at("beta1").get<double>();
        if (je.contains("beta2")) c.encoder.beta2 = je.at("beta2").get<double>();
        if (je.contains("epsilon")) c.encoder.epsilon = je.at("epsilon").get<double>();
        if (je.contains("first_update")) c.encoder.first_update = je.at("first_update").get<int>();
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

std::string ExperimentConfig::to_json_text() const
{
    json j;
    j["variant"] = to_string(variant);
    j["scored_task"] = to_string(scored_task);
    j["n_iterations"] = n_iterations;
    j["batch_size"] = batch_size;
    j["seed"] = seed;
    j["threads"] = threads;
    j["out_dir"] = out_dir;
    j["container"] = {{"target", container.target},
                      {"update_period", container.update_period},
                      {"k_novelty", container.k_novelty},
                      {"initial_threshold", container.initial_threshold}};
    j["mutation"] = {{"eta", mutation.eta}, {"rate", mutation.rate}};
    j["encoder"] = {{"kind", encoder.kind == EncoderKind::Pca ? "pca" : "ae"},
                    {"latent_dim", encoder.latent_dim},
                    {"hidden_dim", encoder.hidden_dim},
                    {"train_steps", encoder.train_steps},
                    {"learning_rate", encoder.learning_rate},
                    {"beta1", encoder.beta1},
                    {"beta2", encoder.beta2},
                    {"epsilon", encoder.epsilon},
                    {"first_update", encoder.first_update}};
    return j.dump(2);
}

}  // namespace uniqd
