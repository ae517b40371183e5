#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "uniqd/env.hpp"
#include "uniqd/loop.hpp"
#include "uniqd/metrics.hpp"
#include "uniqd/snapshot.hpp"
#include "uniqd/variation.hpp"

namespace py = pybind11;
using namespace uniqd;

PYBIND11_MODULE(_uniqd, m)
{
    m.doc() = "Quality-diversity toolkit on a planar unicycle";

    py::enum_<Variant>(m, "Variant")
        .value("Aurora", Variant::Aurora)
        .value("HcNav", Variant::HcNav)
        .value("HcForw", Variant::HcForw)
        .value("HcTurn", Variant::HcTurn)
        .value("MeS", Variant::MeS);

    py::enum_<Task>(m, "Task")
        .value("Nav", Task::Nav)
        .value("Forw", Task::Forw)
        .value("Turn", Task::Turn);

    py::enum_<EncoderKind>(m, "EncoderKind")
        .value("Pca", EncoderKind::Pca)
        .value("Ae", EncoderKind::Ae);

    m.def("controller_param_count", &controller_param_count, py::arg("n_in"),
          py::arg("n_hidden"), py::arg("n_out"));
    m.attr("GENOTYPE_DIM") = env::kGenotypeDim;
    m.attr("TRAJECTORY_DIM") = env::kTrajectoryDim;

    py::class_<env::Evaluation>(m, "Evaluation")
        .def_property_readonly("trajectory",
                               [](const env::Evaluation& e) {
                                   return Eigen::MatrixXd(e.trajectory.streams);
                               })
        .def_property_readonly(
            "flat_trajectory",
            [](const env::Evaluation& e) { return Eigen::VectorXd(e.trajectory.flatten()); })
        .def_readonly("bd_nav", &env::Evaluation::bd_nav)
        .def_readonly("bd_forw", &env::Evaluation::bd_forw)
        .def_readonly("bd_turn", &env::Evaluation::bd_turn)
        .def_property_readonly(
            "bd_mes", [](const env::Evaluation& e) { return Eigen::VectorXd(e.bd_mes); })
        .def_readonly("f_nav", &env::Evaluation::f_nav)
        .def_readonly("f_forw", &env::Evaluation::f_forw)
        .def_readonly("f_turn", &env::Evaluation::f_turn);

    m.def("simulate_episode", &env::simulate_episode, py::arg("genotype"),
          "Deterministic rollout of one genotype from the origin");
    m.def("wrap_angle", &env::wrap_angle);

    m.def("polynomial_delta", &polynomial_delta, py::arg("u"), py::arg("eta"));
    m.def(
        "polynomial_mutate",
        [](const Genotype& g, double eta, double rate, std::uint64_t seed, std::uint64_t index) {
            MutationParams params;
            params.eta = eta;
            params.rate = rate;
            Rng rng = Rng::split(seed, RngPurpose::Variation, index);
            return polynomial_mutate(g, params, rng);
        },
        py::arg("genotype"), py::arg("eta") = 10.0, py::arg("rate") = 0.3, py::arg("seed") = 0,
        py::arg("index") = 0);

    py::class_<PcaModel>(m, "PcaModel")
        .def_readonly("mean", &PcaModel::mean)
        .def_readonly("components", &PcaModel::components);
    m.def("pca_fit", &pca_fit, py::arg("dataset"), py::arg("d"));
    m.def("pca_project", &pca_project);
    m.def("pca_reconstruct", &pca_reconstruct);
    m.def("schedule_next_update", &schedule_next_update, py::arg("k"), py::arg("first") = 10);

    py::class_<SnapshotEntry>(m, "SnapshotEntry")
        .def_readonly("genotype", &SnapshotEntry::genotype)
        .def_readonly("bd", &SnapshotEntry::bd)
        .def_readonly("bd_nav", &SnapshotEntry::bd_nav)
        .def_readonly("bd_forw", &SnapshotEntry::bd_forw)
        .def_readonly("bd_turn", &SnapshotEntry::bd_turn)
        .def_readonly("f_nav", &SnapshotEntry::f_nav)
        .def_readonly("f_forw", &SnapshotEntry::f_forw)
        .def_readonly("f_turn", &SnapshotEntry::f_turn);
    m.def("read_snapshot", &read_snapshot, py::arg("path"));

    m.def("coverage", &metrics::coverage, py::arg("snapshot"), py::arg("task"),
          py::arg("f_min") = -std::numeric_limits<double>::infinity());

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init([](const std::string& json_text) {
                 return ExperimentConfig::from_json_text(json_text);
             }),
             py::arg("json_text"))
        .def_static("load", &ExperimentConfig::load, py::arg("path"))
        .def_readwrite("variant", &ExperimentConfig::variant)
        .def_readwrite("n_iterations", &ExperimentConfig::n_iterations)
        .def_readwrite("batch_size", &ExperimentConfig::batch_size)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("threads", &ExperimentConfig::threads)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir)
        .def("to_json", &ExperimentConfig::to_json_text);

    m.def(
        "run",
        [](const ExperimentConfig& config) {
            const RunState state = run(config);
            py::dict out;
            out["container_size"] = state.container.size();
            out["evaluation_count"] = state.metrics.evaluation_count;
            out["encoder_phase_iterations"] = state.metrics.encoder_phase_iterations;
            out["out_dir"] = state.config.out_dir;
            return out;
        },
        py::arg("config"), "Execute a full run; artifacts land in config.out_dir");
}
