#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "risopt/ao_driver.hpp"
#include "risopt/numerics.hpp"
#include "risopt/rng.hpp"

namespace py = pybind11;
using namespace risopt;

PYBIND11_MODULE(_risopt, m) {
  m.doc() = "RIS-assisted learning-centric link optimizer";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<BracketError>(m, "BracketError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<DegenerateChannelError>(m, "DegenerateChannelError",
                                                 PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

  // numerics
  py::class_<EigResult>(m, "EigResult")
      .def_readonly("eigenvalues", &EigResult::eigenvalues)
      .def_readonly("eigenvectors", &EigResult::eigenvectors);
  m.def("hermitian_eig", &hermitian_eig, py::arg("a"),
        py::arg("hermitian_tol") = 1e-12);
  m.def("solve_hpd", &solve_hpd, py::arg("a"), py::arg("b"));
  py::class_<Bracket>(m, "Bracket")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Bracket::lo)
      .def_readwrite("hi", &Bracket::hi);
  m.def(
      "find_root_monotone",
      [](const std::function<double(double)>& f, Bracket bracket, double tol) {
        return find_root_monotone(f, bracket, tol);
      },
      py::arg("f"), py::arg("bracket"), py::arg("tol") = 1e-10);

  // channel
  py::class_<Geometry>(m, "Geometry")
      .def(py::init<>())
      .def_readwrite("bs_pos", &Geometry::bs_pos)
      .def_readwrite("ris_pos", &Geometry::ris_pos)
      .def_readwrite("user_pos", &Geometry::user_pos)
      .def_readwrite("alpha_direct", &Geometry::alpha_direct)
      .def_readwrite("alpha_bs_ris", &Geometry::alpha_bs_ris)
      .def_readwrite("alpha_ris_user", &Geometry::alpha_ris_user)
      .def_readwrite("ref_distance_m", &Geometry::ref_distance_m)
      .def_readwrite("ref_loss_db", &Geometry::ref_loss_db);
  m.def("default_geometry", &default_geometry, py::arg("num_users"), py::arg("seed"));
  py::class_<Dims>(m, "Dims")
      .def(py::init([](int n, int m_elems, int k) {
             return Dims{n, m_elems, k};
           }),
           py::arg("n_antennas"), py::arg("n_elements"), py::arg("n_users"))
      .def_readwrite("n_antennas", &Dims::n_antennas)
      .def_readwrite("n_elements", &Dims::n_elements)
      .def_readwrite("n_users", &Dims::n_users);
  py::class_<PhaseVector>(m, "PhaseVector")
      .def(py::init<CVec>(), py::arg("coeffs"))
      .def_static("ones", &PhaseVector::ones, py::arg("m"))
      .def_static("from_phases", &PhaseVector::from_phases, py::arg("radians"))
      .def_static("random", &PhaseVector::random, py::arg("m"), py::arg("seed"))
      .def_property_readonly("vec", &PhaseVector::vec)
      .def("__len__", &PhaseVector::size);
  py::class_<ChannelSet>(m, "ChannelSet")
      .def(py::init<>())
      .def_readwrite("direct", &ChannelSet::direct)
      .def_readwrite("user_ris", &ChannelSet::user_ris)
      .def_readwrite("ris_bs", &ChannelSet::ris_bs)
      .def_readwrite("beta", &ChannelSet::beta)
      .def_property_readonly("num_antennas", &ChannelSet::num_antennas)
      .def_property_readonly("num_elements", &ChannelSet::num_elements)
      .def_property_readonly("num_users", &ChannelSet::num_users);
  m.def("generate_channels", &generate_channels, py::arg("geometry"),
        py::arg("dims"), py::arg("seed"));
  m.def("effective_channel", &effective_channel, py::arg("ch"), py::arg("theta"),
        py::arg("k"));
  m.def("all_effective_channels", &all_effective_channels, py::arg("ch"),
        py::arg("theta"));
  py::class_<ReflectedCoeffs>(m, "ReflectedCoeffs")
      .def_readonly("a", &ReflectedCoeffs::a)
      .def_readonly("b", &ReflectedCoeffs::b);
  m.def("reflected_coefficients", &reflected_coefficients, py::arg("ch"),
        py::arg("w"), py::arg("k"), py::arg("i"));
  m.def("derive_seed", &derive_seed, py::arg("root"), py::arg("index"));

  // learning
  py::class_<TaskProfile>(m, "TaskProfile")
      .def(py::init<>())
      .def(py::init([](std::string name, double c, double d, double bits,
                       double power) {
             return TaskProfile{std::move(name), c, d, bits, power};
           }),
           py::arg("name"), py::arg("c"), py::arg("d"), py::arg("bits_per_sample"),
           py::arg("power_watts") = 0.1)
      .def_readwrite("name", &TaskProfile::name)
      .def_readwrite("c", &TaskProfile::c)
      .def_readwrite("d", &TaskProfile::d)
      .def_readwrite("bits_per_sample", &TaskProfile::bits_per_sample)
      .def_readwrite("power_watts", &TaskProfile::power_watts);
  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("bandwidth_hz", &SystemConfig::bandwidth_hz)
      .def_readwrite("time_s", &SystemConfig::time_s)
      .def_readwrite("noise_watts", &SystemConfig::noise_watts)
      .def_readwrite("n_antennas", &SystemConfig::n_antennas)
      .def_readwrite("n_elements", &SystemConfig::n_elements)
      .def_readwrite("n_users", &SystemConfig::n_users);
  m.def("sinr", &sinr, py::arg("channels"), py::arg("w"), py::arg("k"),
        py::arg("powers"), py::arg("noise_watts"));
  m.def("rate", &rate, py::arg("sinr"));
  m.def("sample_count", &sample_count, py::arg("rate_bps_hz"), py::arg("cfg"),
        py::arg("bits_per_sample"), py::arg("strict_floor") = false);
  m.def("error", &error, py::arg("samples"), py::arg("task"));
  m.def("sinr_target", &sinr_target, py::arg("delta"), py::arg("task"),
        py::arg("cfg"));
  py::class_<FitResult>(m, "FitResult")
      .def_readonly("c", &FitResult::c)
      .def_readonly("d", &FitResult::d);
  m.def("fit_error_model", &fit_error_model, py::arg("points"));
  m.def("preset_task_profiles", &preset_task_profiles, py::arg("power_watts") = 0.1);

  // beamforming
  py::class_<BeamformerSet>(m, "BeamformerSet")
      .def(py::init<>())
      .def_readwrite("w", &BeamformerSet::w)
      .def_property_readonly("num_users", &BeamformerSet::num_users);
  m.def("mmse_beamformer", &mmse_beamformer, py::arg("channels"), py::arg("powers"),
        py::arg("noise_watts"), py::arg("k"));
  m.def("all_beamformers", &all_beamformers, py::arg("channels"), py::arg("powers"),
        py::arg("noise_watts"));

  // phase optimization
  py::class_<QuadConstraint>(m, "QuadConstraint")
      .def_readonly("quad", &QuadConstraint::quad)
      .def_readonly("lin", &QuadConstraint::lin)
      .def_readonly("tau", &QuadConstraint::tau)
      .def_readonly("scale", &QuadConstraint::scale)
      .def_readonly("eigenvalues", &QuadConstraint::lambda);
  m.def("make_constraint", &make_constraint, py::arg("quad"), py::arg("lin"),
        py::arg("tau"));
  m.def("constraint_residual", &constraint_residual, py::arg("constraint"),
        py::arg("q"));
  py::class_<QcqpData>(m, "QcqpData")
      .def_readonly("user", &QcqpData::user)
      .def_readonly("gamma", &QcqpData::gamma)
      .def_readonly("a", &QcqpData::a)
      .def_readonly("b", &QcqpData::b)
      .def_readonly("powers", &QcqpData::powers)
      .def_readonly("noise", &QcqpData::noise)
      .def_readonly("constraint", &QcqpData::constraint);
  m.def("build_qcqp", &build_qcqp, py::arg("ch"), py::arg("bf"), py::arg("powers"),
        py::arg("noise_watts"), py::arg("gamma"));
  m.def("qcqp_sinr", &qcqp_sinr, py::arg("data"), py::arg("q"));
  m.def("chi", &chi, py::arg("mu"), py::arg("lam"), py::arg("zeta_t"),
        py::arg("b_t"), py::arg("tau"));
  m.def("chi_derivative", &chi_derivative, py::arg("mu"), py::arg("lam"),
        py::arg("zeta_t"), py::arg("b_t"));
  m.def("q_update", &q_update, py::arg("zeta"), py::arg("constraint"),
        py::arg("tol") = 1e-9);
  m.def("theta_update", &theta_update, py::arg("q"), py::arg("u"));
  m.def("dual_update", &dual_update, py::arg("u"), py::arg("q"), py::arg("theta"));
  py::class_<AdmmOptions>(m, "AdmmOptions")
      .def(py::init<>())
      .def_readwrite("rho", &AdmmOptions::rho)
      .def_readwrite("tol", &AdmmOptions::tol)
      .def_readwrite("max_iter", &AdmmOptions::max_iter)
      .def_readwrite("sinr_slack", &AdmmOptions::sinr_slack)
      .def_readwrite("q_tol", &AdmmOptions::q_tol)
      .def_readwrite("record_trace", &AdmmOptions::record_trace);
  py::class_<AdmmIterRecord>(m, "AdmmIterRecord")
      .def_readonly("iter", &AdmmIterRecord::iter)
      .def_readonly("primal_residual", &AdmmIterRecord::primal_residual)
      .def_readonly("sinr", &AdmmIterRecord::sinr)
      .def_readonly("feasible", &AdmmIterRecord::feasible);
  py::class_<AdmmResult>(m, "AdmmResult")
      .def_readonly("feasible", &AdmmResult::feasible)
      .def_readonly("theta", &AdmmResult::theta)
      .def_readonly("iterations", &AdmmResult::iterations)
      .def_readonly("trace", &AdmmResult::trace);
  m.def("admm_feasibility", &admm_feasibility, py::arg("data"),
        py::arg("theta_init"), py::arg("opts") = AdmmOptions{});
  py::class_<ElsOptions>(m, "ElsOptions")
      .def(py::init<>())
      .def_readwrite("els_tol", &ElsOptions::els_tol)
      .def_readwrite("lo_init_factor", &ElsOptions::lo_init_factor)
      .def_readwrite("warm_start_previous", &ElsOptions::warm_start_previous)
      .def_readwrite("admm", &ElsOptions::admm);
  py::class_<ElsStepRecord>(m, "ElsStepRecord")
      .def_readonly("delta", &ElsStepRecord::delta)
      .def_readonly("feasible", &ElsStepRecord::feasible)
      .def_readonly("admm_iters", &ElsStepRecord::admm_iters);
  py::class_<ElsResult>(m, "ElsResult")
      .def_readonly("delta_star", &ElsResult::delta_star)
      .def_readonly("theta_star", &ElsResult::theta_star)
      .def_readonly("sinr", &ElsResult::sinr)
      .def_readonly("trace", &ElsResult::trace)
      .def_readonly("admm_trace", &ElsResult::admm_trace);
  m.def("els_search", &els_search, py::arg("ch"), py::arg("bf"), py::arg("tasks"),
        py::arg("cfg"), py::arg("theta_warm"), py::arg("opts") = ElsOptions{});

  // alternating optimization driver
  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("cfg", &Scenario::cfg)
      .def_readwrite("geometry", &Scenario::geometry)
      .def_readwrite("tasks", &Scenario::tasks)
      .def_readwrite("seed", &Scenario::seed);
  py::class_<TaskReport>(m, "TaskReport")
      .def_readonly("sinr", &TaskReport::sinr)
      .def_readonly("rate_bps_hz", &TaskReport::rate_bps_hz)
      .def_readonly("samples", &TaskReport::samples)
      .def_readonly("error", &TaskReport::error);
  py::class_<Solution>(m, "Solution")
      .def_readonly("beamformers", &Solution::beamformers)
      .def_readonly("theta", &Solution::theta)
      .def_readonly("tasks", &Solution::tasks)
      .def_readonly("objective", &Solution::objective)
      .def_readonly("trace", &Solution::trace)
      .def_readonly("els_steps", &Solution::els_steps)
      .def_readonly("admm_trace", &Solution::admm_trace)
      .def_readonly("wall_time_s", &Solution::wall_time_s);
  py::class_<AoOptions>(m, "AoOptions")
      .def(py::init<>())
      .def_readwrite("ao_tol", &AoOptions::ao_tol)
      .def_readwrite("max_iter", &AoOptions::max_iter)
      .def_readwrite("els", &AoOptions::els);
  m.def("objective", &objective, py::arg("ch"), py::arg("theta"), py::arg("bf"),
        py::arg("tasks"), py::arg("cfg"));
  m.def("scenario_channels", &scenario_channels, py::arg("scenario"));
  m.def("alternating_optimize",
        py::overload_cast<const Scenario&, const AoOptions&>(&alternating_optimize),
        py::arg("scenario"), py::arg("opts") = AoOptions{});
  m.def("alternating_optimize",
        py::overload_cast<const Scenario&, const ChannelSet&, const AoOptions&>(
            &alternating_optimize),
        py::arg("scenario"), py::arg("ch"), py::arg("opts") = AoOptions{});
  py::enum_<BaselineKind>(m, "BaselineKind")
      .value("no_ris", BaselineKind::no_ris)
      .value("random_phase", BaselineKind::random_phase)
      .value("sum_rate", BaselineKind::sum_rate);
  m.def("run_baseline",
        py::overload_cast<const Scenario&, BaselineKind, const AoOptions&>(
            &run_baseline),
        py::arg("scenario"), py::arg("kind"), py::arg("opts") = AoOptions{});
  m.def("run_baseline",
        py::overload_cast<const Scenario&, const ChannelSet&, BaselineKind,
                          const AoOptions&>(&run_baseline),
        py::arg("scenario"), py::arg("ch"), py::arg("kind"),
        py::arg("opts") = AoOptions{});
  py::class_<ScalingPoint>(m, "ScalingPoint")
      .def_readonly("m", &ScalingPoint::m)
      .def_readonly("mean_snr", &ScalingPoint::mean_snr);
  m.def("scaling_law_experiment", &scaling_law_experiment, py::arg("m_values"),
        py::arg("trials"), py::arg("p"), py::arg("noise_watts"), py::arg("var_h"),
        py::arg("var_g"), py::arg("seed"));
  py::class_<ScalingFit>(m, "ScalingFit")
      .def_readonly("r_squared", &ScalingFit::r_squared)
      .def_readonly("slope", &ScalingFit::slope)
      .def_readonly("intercept", &ScalingFit::intercept)
      .def_readonly("mean_error", &ScalingFit::mean_error);
  m.def("scaling_error_fit", &scaling_error_fit, py::arg("m_values"),
        py::arg("trials"), py::arg("task"), py::arg("cfg"), py::arg("p"),
        py::arg("noise_watts"), py::arg("var_h"), py::arg("var_g"), py::arg("seed"));

  m.attr("__version__") = "0.1.0";
}
