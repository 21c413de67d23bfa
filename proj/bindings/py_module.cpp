#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ddkit/classical_noise.hpp"
#include "ddkit/experiment.hpp"
#include "ddkit/finite_bath.hpp"
#include "ddkit/io.hpp"
#include "ddkit/modulation.hpp"
#include "ddkit/order_fit.hpp"
#include "ddkit/sequence.hpp"
#include "ddkit/spin_boson.hpp"
#include "ddkit/state_protect.hpp"
#include "ddkit/version.hpp"

namespace py = pybind11;
using namespace ddkit;

namespace {

std::string axis_string(Pauli p) { return std::string(1, pauli_char(p)); }

Pauli axis_from_string(const std::string& s) {
    if (s.size() != 1) throw std::invalid_argument("axis must be one of I, X, Y, Z");
    return pauli_from_char(s[0]);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "dynamical decoupling toolkit (C++ core)";
    m.attr("__version__") = kVersion;
    m.attr("OVERLAP_EXPONENT_FACTOR") = kOverlapExponentFactor;

    py::class_<PulseSequence>(m, "PulseSequence")
        .def(py::init([](double total_time, const std::vector<std::pair<double, std::string>>&
                                                pulses, const std::string& label) {
                 std::vector<Pulse> raw;
                 for (const auto& [t, a] : pulses) raw.push_back({t, axis_from_string(a)});
                 return PulseSequence(total_time, std::move(raw), label);
             }),
             py::arg("total_time"), py::arg("pulses"), py::arg("label") = "custom")
        .def_property_readonly("total_time", &PulseSequence::total_time)
        .def_property_readonly("label", &PulseSequence::label)
        .def_property_readonly("parity",
                               [](const PulseSequence& s) { return axis_string(s.parity()); })
        .def_property_readonly("times",
                               [](const PulseSequence& s) {
                                   std::vector<double> t;
                                   for (const Pulse& p : s.pulses()) t.push_back(p.time);
                                   return t;
                               })
        .def_property_readonly("axes",
                               [](const PulseSequence& s) {
                                   std::vector<std::string> a;
                                   for (const Pulse& p : s.pulses())
                                       a.push_back(axis_string(p.axis));
                                   return a;
                               })
        .def("__len__", &PulseSequence::size)
        .def("to_csv",
             [](const PulseSequence& s) {
                 std::ostringstream os;
                 write_sequence_csv(os, s);
                 return os.str();
             })
        .def("__repr__", [](const PulseSequence& s) {
            return "<PulseSequence " + s.label() + ", " + std::to_string(s.size()) +
                   " pulses, T=" + format_g17(s.total_time()) + ">";
        });

    m.def("free_evolution", &generate_free, py::arg("total_time"));
    m.def(
        "udd",
        [](int n, double total_time, const std::string& axis) {
            return generate_udd(n, total_time, axis_from_string(axis));
        },
        py::arg("n"), py::arg("total_time"), py::arg("axis") = "X");
    m.def("cpmg", &generate_cpmg, py::arg("n_blocks"), py::arg("total_time"));
    m.def("cdd_dephasing", &generate_cdd_dephasing, py::arg("level"), py::arg("tau"));
    m.def("cdd_general", &generate_cdd_general, py::arg("level"), py::arg("tau"));
    m.def("cudd", &generate_cudd, py::arg("n_inner"), py::arg("level"), py::arg("tau_inner"));
    m.def("qdd", &generate_qdd, py::arg("m_outer"), py::arg("n_inner"), py::arg("total_time"));
    m.def("udd_fractions", &udd_fractions, py::arg("n"));

    m.def("lambda_moment", &lambda_moment, py::arg("sequence"), py::arg("p"));
    m.def("lambda_moments", &lambda_moments, py::arg("sequence"), py::arg("max_p"));
    m.def("filter_function", &filter_function, py::arg("sequence"), py::arg("omega"));
    m.def("filter_taylor_check", &filter_taylor_check, py::arg("sequence"), py::arg("max_n"));
    m.def(
        "modulation_values",
        [](const PulseSequence& seq, const std::vector<double>& times) {
            ModulationFunction f = modulation(seq);
            std::vector<double> out;
            out.reserve(times.size());
            for (double t : times) out.push_back(f(t));
            return out;
        },
        py::arg("sequence"), py::arg("times"));

    py::class_<GeneralizedModulation>(m, "GeneralizedModulation")
        .def(py::init<int, std::vector<double>, int>(), py::arg("order"),
             py::arg("free_segment"), py::arg("grid_size") = 4096)
        .def_property_readonly("order", &GeneralizedModulation::order)
        .def_property_readonly("theta", &GeneralizedModulation::theta_grid)
        .def_property_readonly("f_plus", &GeneralizedModulation::f_plus_samples)
        .def_property_readonly("f_minus", &GeneralizedModulation::f_minus_samples);

    py::class_<HarmonicsReport>(m, "HarmonicsReport")
        .def_readonly("passed", &HarmonicsReport::pass)
        .def_readonly("base", &HarmonicsReport::base)
        .def_readonly("coefficients", &HarmonicsReport::coefficients)
        .def_readonly("max_allowed_abs", &HarmonicsReport::max_allowed_abs)
        .def_readonly("max_forbidden_abs", &HarmonicsReport::max_forbidden_abs);
    m.def("odd_harmonics_check",
          py::overload_cast<const GeneralizedModulation&, int, double>(&odd_harmonics_check),
          py::arg("modulation"), py::arg("max_harmonic_multiple") = 6,
          py::arg("tolerance") = 1e-6);
    m.def("odd_harmonics_check",
          py::overload_cast<const PulseSequence&, int, double>(&odd_harmonics_check),
          py::arg("sequence"), py::arg("max_harmonic_multiple") = 6,
          py::arg("tolerance") = 1e-6);

    py::class_<BosonMode>(m, "BosonMode")
        .def(py::init<double, double>(), py::arg("omega"), py::arg("kappa"))
        .def_readonly("omega", &BosonMode::omega)
        .def_readonly("kappa", &BosonMode::kappa);
    m.def("delta_final", &delta_final, py::arg("mode"), py::arg("sequence"));
    m.def(
        "coherence_trace",
        [](const std::vector<BosonMode>& modes, const PulseSequence& seq, int steps) {
            CoherenceTrace trace = coherence(modes, seq, coherence_grid(seq, steps));
            return std::make_pair(trace.times, trace.coherence);
        },
        py::arg("modes"), py::arg("sequence"), py::arg("steps") = 128);

    py::class_<QubitBathHamiltonian>(m, "QubitBathHamiltonian")
        .def_readonly("dim", &QubitBathHamiltonian::dim)
        .def_readonly("C", &QubitBathHamiltonian::C)
        .def_readonly("X", &QubitBathHamiltonian::X)
        .def_readonly("Y", &QubitBathHamiltonian::Y)
        .def_readonly("Z", &QubitBathHamiltonian::Z)
        .def_property_readonly("norms", &hamiltonian_norms);
    m.def("random_hamiltonian", &random_hamiltonian, py::arg("dim"), py::arg("alpha"),
          py::arg("beta"), py::arg("seed"), py::arg("pure_dephasing") = false);
    m.def("dephasing_error", &dephasing_error, py::arg("hamiltonian"), py::arg("sequence"));
    m.def(
        "error_metrics",
        [](const QubitBathHamiltonian& h, const PulseSequence& seq) {
            ErrorMetrics e = sequence_error_metrics(h, seq);
            py::dict out;
            out["dephasing_error"] = e.dephasing_error;
            out["relaxation_error"] = e.relaxation_error;
            out["generator_dephasing"] = e.generator_dephasing;
            out["generator_relaxation"] = e.generator_relaxation;
            return out;
        },
        py::arg("hamiltonian"), py::arg("sequence"));

    py::class_<ProtectedSystem>(m, "ProtectedSystem")
        .def_readonly("hamiltonian", &ProtectedSystem::hamiltonian)
        .def_readonly("psi", &ProtectedSystem::psi);
    m.def("random_protected_system", &random_protected_system, py::arg("dim"), py::arg("seed"),
          py::arg("norm") = 1.0);
    m.def("projector_pulse", &projector_pulse, py::arg("psi"));
    m.def("protected_propagator", &protected_propagator, py::arg("system"), py::arg("n_pulses"),
          py::arg("total_time"), py::arg("final_pulse") = true);
    m.def(
        "protection_error",
        [](const ProtectedSystem& sys, const Eigen::MatrixXcd& u) {
            ProtectionMetrics p = protection_error(sys, u);
            return std::make_pair(p.commutator_error, p.leakage);
        },
        py::arg("system"), py::arg("unitary"));

    py::class_<NoiseSpectrum>(m, "NoiseSpectrum")
        .def_static("ohmic_sharp", &NoiseSpectrum::ohmic_sharp, py::arg("amplitude"),
                    py::arg("cutoff"))
        .def_static("inverse_quartic_soft", &NoiseSpectrum::inverse_quartic_soft,
                    py::arg("amplitude"), py::arg("omega_min"))
        .def_static("tabulated", &NoiseSpectrum::tabulated, py::arg("omega"), py::arg("values"))
        .def("__call__", &NoiseSpectrum::operator(), py::arg("omega"));
    m.def("analytic_coherence", &analytic_coherence, py::arg("spectrum"), py::arg("sequence"));
    m.def("coherence_exponent", &coherence_exponent, py::arg("spectrum"), py::arg("sequence"));
    m.def(
        "mc_coherence",
        [](const NoiseSpectrum& spec, const PulseSequence& seq, int realizations,
           std::uint64_t seed, int n_modes) {
            McCoherence mc = mc_coherence(spec, seq, realizations, seed, n_modes);
            return std::make_pair(mc.coherence, mc.std_error);
        },
        py::arg("spectrum"), py::arg("sequence"), py::arg("realizations") = 2000,
        py::arg("seed") = 1, py::arg("n_modes") = 512);

    py::class_<OrderFitResult>(m, "OrderFitResult")
        .def_readonly("valid", &OrderFitResult::valid)
        .def_readonly("slope", &OrderFitResult::slope)
        .def_readonly("intercept", &OrderFitResult::intercept)
        .def_readonly("r_squared", &OrderFitResult::r_squared)
        .def_readonly("points_used", &OrderFitResult::points_used)
        .def_readonly("window_lo", &OrderFitResult::window_lo)
        .def_readonly("window_hi", &OrderFitResult::window_hi)
        .def("__repr__", [](const OrderFitResult& r) {
            return "<OrderFitResult slope=" + format_g17(r.slope) +
                   " r2=" + format_g17(r.r_squared) + (r.valid ? "" : " (invalid)") + ">";
        });
    m.def("fit_order", &fit_order, py::arg("pairs"), py::arg("floor") = 1e-12,
          py::arg("ceiling") = 1e-1);
    m.def("make_time_grid", &make_time_grid, py::arg("t_max"), py::arg("points"),
          py::arg("ratio"));

    m.def(
        "run_experiment",
        [](const std::string& config_path) {
            std::ostringstream diag;
            RunStatus status = run_experiment(config_path, diag);
            return std::make_pair(static_cast<int>(status), diag.str());
        },
        py::arg("config_path"));
}
