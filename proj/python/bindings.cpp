#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heralded_fock/correlation.hpp"
#include "heralded_fock/covariance.hpp"
#include "heralded_fock/fock.hpp"
#include "heralded_fock/optimizer.hpp"
#include "heralded_fock/two_mode.hpp"
#include "heralded_fock/wick.hpp"
#include "heralded_fock/wigner.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace hfock;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Heralded photon-number state generation from a continuous-wave OPO";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", PyExc_RuntimeError);

    py::class_<OpoParams>(m, "OpoParams")
        .def(py::init<double, double, double, double>(), "epsilon"_a, "gamma"_a, "eta_t"_a = 1.0,
             "eta_s"_a = 1.0)
        .def_property_readonly("epsilon", &OpoParams::epsilon)
        .def_property_readonly("gamma", &OpoParams::gamma)
        .def_property_readonly("eta_t", &OpoParams::eta_t)
        .def_property_readonly("eta_s", &OpoParams::eta_s)
        .def_property_readonly("lam", &OpoParams::lambda)
        .def_property_readonly("mu", &OpoParams::mu)
        .def("__repr__", [](const OpoParams& p) {
            return "OpoParams(epsilon=" + std::to_string(p.epsilon()) +
                   ", gamma=" + std::to_string(p.gamma()) + ", eta_t=" + std::to_string(p.eta_t()) +
                   ", eta_s=" + std::to_string(p.eta_s()) + ")";
        });

    py::class_<ClickTimes>(m, "ClickTimes")
        .def(py::init<std::vector<double>>(), "times"_a)
        .def_property_readonly("times", &ClickTimes::times)
        .def("__len__", &ClickTimes::size);

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, double, std::size_t>(), "start"_a, "step"_a, "size"_a)
        .def_static("covering", &TimeGrid::covering, "lo"_a, "hi"_a, "step_hint"_a)
        .def_property_readonly("start", &TimeGrid::start)
        .def_property_readonly("step", &TimeGrid::step)
        .def("__len__", &TimeGrid::size)
        .def("times", [](const TimeGrid& g) {
            std::vector<double> t(g.size());
            for (std::size_t k = 0; k < g.size(); ++k) t[k] = g.time(k);
            return to_array(t);
        });

    py::class_<SampledModeFunction>(m, "SampledModeFunction")
        .def(py::init<TimeGrid, std::vector<double>>(), "grid"_a, "values"_a)
        .def_static("from_shape", &SampledModeFunction::from_shape, "grid"_a, "values"_a)
        .def_property_readonly("grid", &SampledModeFunction::grid)
        .def_property_readonly("values",
                               [](const SampledModeFunction& f) { return to_array(f.values()); })
        .def_property_readonly("norm_sq", &SampledModeFunction::norm_sq);

    m.def("default_grid", &default_grid, "t_min_click"_a, "t_max_click"_a, "gamma"_a = 1.0,
          "window"_a = 10.0, "step"_a = 0.01);

    // correlation kernels
    m.def("cross_correlation", &cross_correlation, "params"_a, "tau"_a);
    m.def("auto_correlation", &auto_correlation, "params"_a, "tau"_a);
    m.def("cross_correlation_low_intensity", &cross_correlation_low_intensity, "params"_a,
          "tau"_a);
    m.def("auto_correlation_low_intensity", &auto_correlation_low_intensity, "params"_a, "tau"_a);
    m.def(
        "g_mode",
        [](double t_click, const TimeGrid& grid, double gamma) {
            const GMode g = g_mode(t_click, grid, gamma);
            return py::make_tuple(g.f, g.truncated);
        },
        "t_click"_a, "grid"_a, "gamma"_a = 1.0,
        "Click mode function; returns (mode, truncated_flag).");
    m.def("overlap", &overlap, "t_ci"_a, "t_cj"_a, "gamma"_a = 1.0);
    m.def("bunching_ratio", &bunching_ratio, "params"_a, "dt"_a);

    // covariance
    py::class_<CovMatrix6>(m, "CovMatrix6")
        .def_property_readonly("matrix",
                               [](const CovMatrix6& v) -> Eigen::MatrixXd { return v.matrix(); })
        .def_property_readonly("v11", &CovMatrix6::v11)
        .def_property_readonly("v13", &CovMatrix6::v13)
        .def_property_readonly("v15", &CovMatrix6::v15)
        .def_property_readonly("v33", &CovMatrix6::v33)
        .def_property_readonly("v35", &CovMatrix6::v35)
        .def_property_readonly("v55", &CovMatrix6::v55)
        .def("physicality_min_eigenvalue", &CovMatrix6::physicality_min_eigenvalue);
    m.def("trigger_top_hat", &trigger_top_hat, "grid"_a, "click_time"_a, "width"_a);
    m.def("assemble_covariance", &assemble_covariance, "params"_a, "trigger1"_a, "trigger2"_a,
          "signal"_a);

    // two-mode reference model
    m.def("conditional_number_distribution",
          [](double r, int n_max) {
              const NumberDistribution d = conditional_number_distribution(r, n_max);
              return py::make_tuple(to_array(d.p), d.tail);
          },
          "r"_a, "n_max"_a = 50, "Returns (p, tail) with p[n] the photon number probabilities.");
    m.def("two_mode_fidelity_closed_form", &two_mode_fidelity_closed_form, "r"_a);
    m.def("two_mode_fidelity_via_wigner", &two_mode_fidelity_via_wigner, "r"_a);
    m.def("two_mode_wigner_click", &two_mode_wigner_click, "r"_a, "x"_a, "p"_a);

    // conditional Wigner function
    py::class_<WignerCoefficients>(m, "WignerCoefficients")
        .def_readonly("c1", &WignerCoefficients::c1)
        .def_readonly("c2", &WignerCoefficients::c2)
        .def_readonly("c3", &WignerCoefficients::c3)
        .def_readonly("c4", &WignerCoefficients::c4)
        .def_readonly("c5", &WignerCoefficients::c5)
        .def_readonly("d1", &WignerCoefficients::d1)
        .def_readonly("d2", &WignerCoefficients::d2);
    m.def("wigner_coefficients", &wigner_coefficients, "cov"_a);
    m.def("evaluate_wigner", &evaluate_wigner, "coeffs"_a, "x"_a, "p"_a);
    m.def("fock_wigner", &fock_wigner, "n"_a, "x"_a, "p"_a);
    m.def("fidelity_two_photon", &fidelity_two_photon, "cov"_a);
    m.def("fidelity_two_photon_zero_intensity", &fidelity_two_photon_zero_intensity, "cov"_a);

    // optimizer
    py::class_<OptimizerSettings>(m, "OptimizerSettings")
        .def(py::init<>())
        .def_readwrite("basis_size", &OptimizerSettings::basis_size)
        .def_readwrite("max_iters", &OptimizerSettings::max_iters)
        .def_readwrite("tol", &OptimizerSettings::tol)
        .def_readwrite("restarts", &OptimizerSettings::restarts);
    m.def("optimal_mode_zero_intensity", &optimal_mode_zero_intensity, "t_c1"_a, "t_c2"_a,
          "grid"_a, "gamma"_a = 1.0);
    m.def("two_photon_fidelity_for_mode", &two_photon_fidelity_for_mode, "params"_a, "clicks"_a,
          "signal"_a);
    m.def(
        "optimize_mode",
        [](const OpoParams& params, const ClickTimes& clicks, const OptimizerSettings& settings) {
            const OptimizeResult r = optimize_mode(params, clicks, settings);
            return py::make_tuple(r.mode, r.fidelity, r.converged);
        },
        "params"_a, "clicks"_a, "settings"_a = OptimizerSettings{},
        "Returns (mode, fidelity, converged).");
    m.def(
        "fidelity_curve",
        [](const OpoParams& params, const std::vector<double>& separations, bool use_optimal) {
            const auto pts = fidelity_curve(params, separations, use_optimal);
            std::vector<double> x, f;
            for (const auto& p : pts) {
                x.push_back(p.gamma_dt);
                f.push_back(p.fidelity);
            }
            return py::make_tuple(to_array(x), to_array(f));
        },
        "params"_a, "separations"_a, "use_optimal"_a = true);
    m.def("fidelity_two_photon_low_intensity", &fidelity_two_photon_low_intensity, "gamma_dt"_a);

    // low-intensity n-photon machinery
    m.def("permanent", &permanent, "matrix"_a);
    m.def("gram_matrix", &gram_matrix, "clicks"_a, "gamma"_a = 1.0);
    m.def("fidelity_n", &fidelity_n, "clicks"_a, "mode"_a, "gamma"_a = 1.0);
    m.def("fidelity_n_in_span", &fidelity_n_in_span, "clicks"_a, "coeffs"_a, "gamma"_a = 1.0);
    m.def(
        "two_click_state_decomposition",
        [](const ClickTimes& clicks, double gamma) {
            const auto d = two_click_state_decomposition(clicks, gamma);
            return py::make_tuple(d.p_a2, d.p_b2);
        },
        "clicks"_a, "gamma"_a = 1.0);
    py::class_<GramSolution>(m, "GramSolution")
        .def_property_readonly("gram",
                               [](const GramSolution& s) -> Eigen::MatrixXd { return s.gram; })
        .def_property_readonly("coeffs",
                               [](const GramSolution& s) -> Eigen::VectorXd { return s.coeffs; })
        .def_readonly("xi", &GramSolution::xi)
        .def_readonly("fidelity", &GramSolution::fidelity)
        .def_readonly("residual", &GramSolution::residual)
        .def_readonly("mode", &GramSolution::mode);
    m.def("solve_coefficients",
          [](const ClickTimes& clicks, double gamma) { return solve_coefficients(clicks, gamma); },
          "clicks"_a, "gamma"_a = 1.0);
    py::enum_<ThreeClickPattern>(m, "ThreeClickPattern")
        .value("EQUAL_SPACING", ThreeClickPattern::EqualSpacing)
        .value("COINCIDENT_PAIR", ThreeClickPattern::CoincidentPair);
    m.def(
        "three_photon_fidelity_curve",
        [](ThreeClickPattern pattern, const std::vector<double>& seps, double gamma) {
            const auto pts = three_photon_fidelity_curve(pattern, seps, gamma);
            std::vector<double> x, f;
            for (const auto& p : pts) {
                x.push_back(p.separation);
                f.push_back(p.fidelity);
            }
            return py::make_tuple(to_array(x), to_array(f));
        },
        "pattern"_a, "separations"_a, "gamma"_a = 1.0);

    // Wick-expansion oracle
    py::enum_<BeamKind>(m, "BeamKind")
        .value("TRIGGER_PLUS", BeamKind::TriggerPlus)
        .value("SIGNAL_MINUS", BeamKind::SignalMinus)
        .value("VACUUM", BeamKind::Vacuum);
    py::class_<FieldOp>(m, "FieldOp")
        .def(py::init([](BeamKind kind, bool dagger, double time, std::complex<double> weight,
                         int vac_channel) {
                 return FieldOp{kind, dagger, time, weight, vac_channel};
             }),
             "kind"_a, "dagger"_a, "time"_a, "weight"_a = std::complex<double>(1.0, 0.0),
             "vac_channel"_a = 0);
    m.def("gaussian_moment", &gaussian_moment, "ops"_a, "params"_a);
    m.def(
        "gaussian_moment_detailed",
        [](const OperatorString& ops, const OpoParams& params) {
            const MomentResult r = gaussian_moment_detailed(ops, params);
            return py::make_tuple(r.value, r.pairings);
        },
        "ops"_a, "params"_a, "Returns (value, pairings_visited).");
    m.def("conditional_moment_at_epsilon", &conditional_moment_at_epsilon, "clicks"_a, "primed"_a,
          "double_primed"_a, "params"_a);
    m.def(
        "conditional_moment_lhs",
        [](const ClickTimes& clicks, const std::vector<double>& primed,
           const std::vector<double>& dprimed, const OpoParams& params) {
            const ConditionalMoment r = conditional_moment_lhs(clicks, primed, dprimed, params);
            return py::make_tuple(r.value, r.truncation_warning);
        },
        "clicks"_a, "primed"_a, "double_primed"_a, "params"_a,
        "Returns (value, truncation_warning).");
    m.def("conditional_moment_rhs", &conditional_moment_rhs, "clicks"_a, "primed"_a,
          "double_primed"_a, "gamma"_a = 1.0);
    m.def(
        "detector_splitting_check",
        [](const ClickTimes& clicks, const std::vector<std::vector<std::complex<double>>>& split,
           const OpoParams& params) {
            const SplitReport r = detector_splitting_check(clicks, split, params);
            return py::make_tuple(r.max_rel_deviation, r.configurations);
        },
        "clicks"_a, "split"_a, "params"_a, "Returns (max_rel_deviation, configurations).");
}
