// Python bindings for the core simulation, geometry, training, metrology
// and superposition operations.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "npqc/circuit.hpp"
#include "npqc/geometry.hpp"
#include "npqc/metrology.hpp"
#include "npqc/rng.hpp"
#include "npqc/statevec.hpp"
#include "npqc/superposition.hpp"
#include "npqc/train.hpp"

namespace py = pybind11;
using namespace npqc;

namespace {

py::array_t<cplx> amplitudes_array(const StateVector& s) {
    auto span = s.amplitudes();
    py::array_t<cplx> out(static_cast<py::ssize_t>(span.size()));
    std::copy(span.begin(), span.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_npqc, m) {
    m.doc() = "statevector simulator for natural parameterized quantum circuits";

    py::enum_<Variant>(m, "Variant")
        .value("FULL", Variant::FULL)
        .value("Y_ONLY", Variant::Y_ONLY);

    py::enum_<Method>(m, "Method")
        .value("ADAPTIVE_GA", Method::ADAPTIVE_GA)
        .value("STANDARD_GA", Method::STANDARD_GA)
        .value("ADAM", Method::ADAM);

    py::enum_<InitMode>(m, "InitMode")
        .value("REFERENCE", InitMode::REFERENCE)
        .value("RANDOM", InitMode::RANDOM);

    py::class_<NpqcSpec>(m, "NpqcSpec")
        .def(py::init<int, int, Variant, std::optional<std::uint64_t>>(), py::arg("n_qubits"),
             py::arg("n_layers"), py::arg("variant") = Variant::FULL,
             py::arg("shift_pick_seed") = std::nullopt)
        .def_property_readonly("n_qubits", &NpqcSpec::n_qubits)
        .def_property_readonly("n_layers", &NpqcSpec::n_layers)
        .def_property_readonly("variant", &NpqcSpec::variant)
        .def_property_readonly("shifts", &NpqcSpec::shifts)
        .def_property_readonly("num_params", &NpqcSpec::num_params)
        .def("to_json", &NpqcSpec::to_json)
        .def_static("from_json", &NpqcSpec::from_json)
        .def("__repr__", [](const NpqcSpec& s) {
            return "NpqcSpec(n_qubits=" + std::to_string(s.n_qubits()) +
                   ", n_layers=" + std::to_string(s.n_layers()) + ", variant=" +
                   (s.variant() == Variant::FULL ? std::string("FULL") : std::string("Y_ONLY")) +
                   ")";
        });

    py::class_<StateVector>(m, "StateVector")
        .def(py::init<int>(), py::arg("n_qubits"))
        .def_property_readonly("n_qubits", &StateVector::n_qubits)
        .def_property_readonly("dim", &StateVector::dim)
        .def("amplitude", &StateVector::amplitude, py::arg("basis_index"))
        .def("amplitudes", &amplitudes_array)
        .def("norm_sq", &StateVector::norm_sq);

    m.def("reference_params", &reference_params, py::arg("spec"));
    m.def("prepare_state",
          [](const NpqcSpec& spec, const ParamVector& theta) {
              return prepare_state(spec, theta);
          },
          py::arg("spec"), py::arg("theta"));
    m.def("prepare_y_state", &prepare_y_state, py::arg("spec"), py::arg("theta"));
    m.def("fidelity", &fidelity, py::arg("a"), py::arg("b"));
    m.def("inner_product", &inner_product, py::arg("a"), py::arg("b"));
    m.def("random_haar_state", &random_haar_state, py::arg("n_qubits"), py::arg("seed"));
    m.def("sample_basis", &sample_basis, py::arg("state"), py::arg("shots"), py::arg("seed"));

    m.def("qfim",
          [](const NpqcSpec& spec, const ParamVector& theta) { return qfim(spec, theta); },
          py::arg("spec"), py::arg("theta"));
    m.def("fidelity_and_gradient",
          [](const NpqcSpec& spec, const ParamVector& theta, const StateVector& target) {
              const FidelityGradient fg = fidelity_and_gradient(spec, theta, target);
              return py::make_tuple(fg.value, fg.gradient);
          },
          py::arg("spec"), py::arg("theta"), py::arg("target"));
    m.def("gaussian_fidelity",
          py::overload_cast<double>(&gaussian_fidelity), py::arg("dtheta_norm"));
    m.def("qng", &qng, py::arg("gradient"), py::arg("fisher"), py::arg("ridge"));

    m.def("adaptive_rate_initial",
          [](double k, const Eigen::VectorXd& grad) { return adaptive_rate_initial(k, grad); },
          py::arg("k"), py::arg("grad"));
    m.def("adaptive_rates",
          [](double k, double k1, const Eigen::VectorXd& grad) {
              return adaptive_rates(k, k1, grad);
          },
          py::arg("k"), py::arg("k1"), py::arg("grad"));

    py::class_<OptimizerConfig>(m, "OptimizerConfig")
        .def(py::init<>())
        .def_readwrite("method", &OptimizerConfig::method)
        .def_readwrite("adaptive_iters", &OptimizerConfig::adaptive_iters)
        .def_readwrite("post_adaptive_rate", &OptimizerConfig::post_adaptive_rate)
        .def_readwrite("fixed_rate", &OptimizerConfig::fixed_rate)
        .def_readwrite("adam_rate", &OptimizerConfig::adam_rate)
        .def_readwrite("max_iters", &OptimizerConfig::max_iters)
        .def_readwrite("target_infidelity", &OptimizerConfig::target_infidelity);

    py::class_<TrainRecord>(m, "TrainRecord")
        .def_readonly("iteration", &TrainRecord::iteration)
        .def_readonly("fidelity", &TrainRecord::fidelity)
        .def_readonly("grad_norm", &TrainRecord::grad_norm)
        .def_readonly("rate", &TrainRecord::rate);

    py::class_<TrainTrace>(m, "TrainTrace")
        .def_readonly("records", &TrainTrace::records)
        .def_readonly("final_theta", &TrainTrace::final_theta)
        .def_readonly("fidelity_evaluations", &TrainTrace::fidelity_evaluations);

    m.def("train", &train, py::arg("spec"), py::arg("theta0"), py::arg("target"),
          py::arg("config"), py::arg("seed"));
    m.def("target_from_distance", &target_from_distance, py::arg("spec"), py::arg("distance"),
          py::arg("k_target"), py::arg("seed"));

    py::class_<ScanPoint>(m, "ScanPoint")
        .def_readonly("infidelity_before", &ScanPoint::infidelity_before)
        .def_readonly("mean_infidelity_after", &ScanPoint::mean_infidelity_after);

    py::class_<ScanResult>(m, "ScanResult")
        .def_readonly("points", &ScanResult::points)
        .def_readonly("fit_c", &ScanResult::fit_c)
        .def_readonly("fit_nu", &ScanResult::fit_nu);

    m.def("single_step_scan", &single_step_scan, py::arg("spec"), py::arg("infidelities"),
          py::arg("init"), py::arg("seeds"));

    py::class_<BasisIndexMap>(m, "BasisIndexMap").def_readonly("v", &BasisIndexMap::v);
    m.def("basis_index_map", &basis_index_map, py::arg("spec"));
    m.def("encode", &encode, py::arg("spec"), py::arg("dtheta"));
    m.def("estimate", &estimate, py::arg("counts"), py::arg("map"), py::arg("shots"));
    m.def("estimate_exact", &estimate_exact, py::arg("state"), py::arg("map"));

    py::class_<SenseRow>(m, "SenseRow")
        .def_readonly("n_qubits", &SenseRow::n_qubits)
        .def_readonly("n_layers", &SenseRow::n_layers)
        .def_readonly("m", &SenseRow::m)
        .def_readonly("norm_dtheta", &SenseRow::norm_dtheta)
        .def_readonly("shots", &SenseRow::shots)
        .def_readonly("instance", &SenseRow::instance)
        .def_readonly("rel_rmse", &SenseRow::rel_rmse)
        .def_readonly("leakage_fraction", &SenseRow::leakage_fraction);

    m.def("sense_experiment", &sense_experiment, py::arg("spec"), py::arg("norm_dtheta"),
          py::arg("shot_list"), py::arg("instances"), py::arg("seed"), py::arg("threads") = 1);

    py::class_<CraoReport>(m, "CraoReport")
        .def_readonly("trace_f", &CraoReport::trace_f)
        .def_readonly("trace_f_inv", &CraoReport::trace_f_inv)
        .def_readonly("m", &CraoReport::m)
        .def_readonly("rank", &CraoReport::rank)
        .def_readonly("full_rank", &CraoReport::full_rank)
        .def_readonly("trace_bound_ok", &CraoReport::trace_bound_ok)
        .def_readonly("inverse_bound_ok", &CraoReport::inverse_bound_ok);

    m.def("crao_check", &crao_check, py::arg("spec"), py::arg("theta"));

    py::class_<SuperposeRequest>(m, "SuperposeRequest")
        .def(py::init([](ParamVector theta_r, ParamVector theta_t, double k_rs, double k_ts) {
                 return SuperposeRequest{std::move(theta_r), std::move(theta_t), k_rs, k_ts};
             }),
             py::arg("theta_r"), py::arg("theta_t"), py::arg("k_rs"), py::arg("k_ts"))
        .def_readwrite("k_rs", &SuperposeRequest::k_rs)
        .def_readwrite("k_ts", &SuperposeRequest::k_ts);

    py::class_<SuperposeResult>(m, "SuperposeResult")
        .def_readonly("feasible", &SuperposeResult::feasible)
        .def_readonly("cos_angle", &SuperposeResult::cos_angle)
        .def_readonly("theta_s", &SuperposeResult::theta_s)
        .def_readonly("realized_k_rs", &SuperposeResult::realized_k_rs)
        .def_readonly("realized_k_ts", &SuperposeResult::realized_k_ts)
        .def_readonly("delta_c", &SuperposeResult::delta_c);

    m.def("feasibility_bounds", &feasibility_bounds, py::arg("k_rs"), py::arg("dist_rt"));
    m.def("solve_superposition", &solve_superposition, py::arg("request"),
          py::arg("perp_seed") = std::nullopt);
    m.def("superposition_error", &superposition_error, py::arg("spec"), py::arg("result"),
          py::arg("request"));
}
