#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsv/experiment.hpp"

namespace py = pybind11;
using namespace qsv;

namespace {

std::vector<std::vector<std::vector<cxd>>> bases_as_lists(const MubSet& m) {
    std::vector<std::vector<std::vector<cxd>>> out;
    for (const auto& basis : m.bases) {
        std::vector<std::vector<cxd>> b;
        for (const ComplexVector& v : basis) b.push_back(v.entries());
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<std::vector<cxd>> matrix_as_lists(const ComplexMatrix& m) {
    std::vector<std::vector<cxd>> out(m.dim(), std::vector<cxd>(m.dim()));
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) out[i][j] = m(i, j);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "MUB verification strategies, noisy-source simulation and "
              "Chernoff-bound confidence statistics";
    m.attr("__version__") = "0.1.0";

    py::register_exception<Error>(m, "QsvError");

    py::class_<MubSet>(m, "MubSet")
        .def_readonly("d", &MubSet::d)
        .def_property_readonly("bases", &bases_as_lists);

    py::class_<VerificationStrategy>(m, "Strategy")
        .def_readonly("d", &VerificationStrategy::d)
        .def_readonly("lambda2", &VerificationStrategy::lambda2)
        .def_readonly("probabilities", &VerificationStrategy::probabilities)
        .def_property_readonly("delta_eps_coeff", &VerificationStrategy::delta_eps_coeff)
        .def_property_readonly("target",
                               [](const VerificationStrategy& s) { return s.target.entries(); })
        .def_property_readonly("omega",
                               [](const VerificationStrategy& s) { return matrix_as_lists(s.omega); })
        .def_property_readonly("mubs", [](const VerificationStrategy& s) { return s.mubs; });

    m.def("build_mub", &build_mub, py::arg("d"), "complete MUB set for a prime dimension");
    m.def("build_mub_generic", &build_mub_generic, py::arg("d"));
    m.def(
        "build_strategy", [](const MubSet& mubs) { return build_strategy(mubs); },
        py::arg("mubs"));
    m.def(
        "build_strategy", [](std::size_t d) { return build_strategy(build_mub(d)); },
        py::arg("d"));
    m.def(
        "maximally_entangled_state",
        [](std::size_t d) { return maximally_entangled_state(d).entries(); }, py::arg("d"));

    m.def("min_copies", &min_copies, py::arg("epsilon"), py::arg("delta"), py::arg("lambda2"));
    m.def("min_copies_real", &min_copies_real, py::arg("epsilon"), py::arg("delta"),
          py::arg("lambda2"));
    m.def("rejection_probability", &rejection_probability, py::arg("epsilon"),
          py::arg("lambda2"));
    m.def("worst_case_pass_probability", &worst_case_pass_probability, py::arg("epsilon"),
          py::arg("lambda2"));

    m.def("kl_divergence", &kl_divergence, py::arg("x"), py::arg("y"));
    m.def("confidence_delta", &confidence_delta, py::arg("n"), py::arg("m"), py::arg("epsilon"),
          py::arg("lambda2"));
    m.def("confidence_delta_rate", &confidence_delta_rate, py::arg("n"), py::arg("pass_rate"),
          py::arg("epsilon"), py::arg("lambda2"));
    m.def("solve_epsilon", &solve_epsilon, py::arg("n"), py::arg("m"), py::arg("delta"),
          py::arg("lambda2"));
    m.def("solve_epsilon_rate", &solve_epsilon_rate, py::arg("n"), py::arg("pass_rate"),
          py::arg("delta"), py::arg("lambda2"));
    m.def("asymptotic_epsilon", &asymptotic_epsilon, py::arg("pass_rate"), py::arg("lambda2"));
    m.def("slope_sigma_excess", &slope_sigma_excess, py::arg("slope"), py::arg("stderr"),
          py::arg("bound"));

    py::class_<ScalingFit>(m, "ScalingFit")
        .def_readonly("slope", &ScalingFit::slope)
        .def_readonly("slope_stderr", &ScalingFit::slope_stderr)
        .def_readonly("intercept", &ScalingFit::intercept)
        .def_readonly("n_low", &ScalingFit::n_low)
        .def_readonly("n_high", &ScalingFit::n_high)
        .def_readonly("n_points", &ScalingFit::n_points);
    m.def(
        "fit_scaling",
        [](const std::vector<std::pair<std::int64_t, double>>& points, std::int64_t n_low,
           std::int64_t n_high) { return fit_scaling(points, {n_low, n_high}); },
        py::arg("points"), py::arg("n_low"), py::arg("n_high"));

    py::class_<NoiseChannel>(m, "NoiseChannel")
        .def_static("none", &NoiseChannel::none)
        .def_static("white", &NoiseChannel::white, py::arg("visibility"))
        .def_static("dephase", &NoiseChannel::dephase, py::arg("p"));

    py::class_<DeviceModel>(m, "DeviceModel")
        .def_readonly("d", &DeviceModel::d)
        .def_readonly("coefficients", &DeviceModel::coefficients)
        .def_property_readonly("rho",
                               [](const DeviceModel& dev) { return matrix_as_lists(dev.rho); })
        .def_property_readonly("fidelity", [](const DeviceModel& dev) {
            return fidelity_pure(dev.rho, maximally_entangled_state(dev.d));
        });
    m.def("build_device", &build_device, py::arg("d"), py::arg("coefficients"),
          py::arg("noise"));
    m.def("pass_probability", &pass_probability, py::arg("device"), py::arg("strategy"));

    py::class_<TestRecord>(m, "TestRecord")
        .def_readonly("copy_index", &TestRecord::copy_index)
        .def_readonly("setting", &TestRecord::setting)
        .def_readonly("k_alice", &TestRecord::k_alice)
        .def_readonly("k_bob", &TestRecord::k_bob)
        .def_readonly("passed", &TestRecord::passed);

    py::class_<RunLedger>(m, "RunLedger")
        .def_readonly("records", &RunLedger::records)
        .def_property_readonly("cumulative_passes",
                               [](const RunLedger& l) { return l.cumulative_passes; })
        .def("copies", &RunLedger::copies)
        .def("passes_at", &RunLedger::passes_at, py::arg("n"));

    m.def(
        "run_copies",
        [](const DeviceModel& device, const VerificationStrategy& strategy,
           std::int64_t n_copies, std::uint64_t seed, std::uint64_t trial) {
            RandomStream stream(seed, trial);
            return run_copies(device, strategy, n_copies, stream);
        },
        py::arg("device"), py::arg("strategy"), py::arg("n_copies"), py::arg("seed"),
        py::arg("trial") = 0);
    m.def(
        "sample_copy",
        [](const DeviceModel& device, const VerificationStrategy& strategy, std::uint64_t seed,
           std::uint64_t trial) {
            RandomStream stream(seed, trial);
            return sample_copy(device, strategy, stream, 1);
        },
        py::arg("device"), py::arg("strategy"), py::arg("seed"), py::arg("trial") = 0);

    py::class_<CurvePoint>(m, "CurvePoint")
        .def_readonly("n", &CurvePoint::n)
        .def_readonly("m", &CurvePoint::m)
        .def_readonly("pass_rate", &CurvePoint::pass_rate)
        .def_readonly("delta", &CurvePoint::delta)
        .def_readonly("epsilon", &CurvePoint::epsilon)
        .def_readonly("log_delta", &CurvePoint::log_delta);
    m.def("analysis_grid", &analysis_grid, py::arg("n_copies"));
    m.def("analyze_ledger", &analyze_ledger, py::arg("ledger"), py::arg("epsilon"),
          py::arg("delta"), py::arg("lambda2"));
}
