#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pirs/config.hpp"
#include "pirs/errors.hpp"
#include "pirs/experiments.hpp"
#include "pirs/protocol.hpp"

namespace py = pybind11;
using namespace pirs;

namespace {

py::dict block_dict(const BlockResult& r) {
  py::dict d;
  d["block"] = r.block;
  d["design_sinr"] = r.design_sinr;
  d["realized_snr"] = r.realized_snr;
  d["rate"] = r.rate;
  d["realized_rate"] = r.realized_rate;
  d["mse"] = r.mse;
  d["nmse_empirical"] = r.nmse_empirical;
  d["nmse_closed"] = r.nmse_closed;
  d["init"] = r.init;
  d["sweeps"] = r.sweeps;
  return d;
}

BeamformingProblem make_problem(const CVec& g, const CMat& R, double P, double sigma2, int bits) {
  return {g, R, P, sigma2, PhaseAlphabet(bits)};
}

}  // namespace

PYBIND11_MODULE(_pirs, m) {
  m.doc() = "Progressive IRS channel estimation and discrete-phase beamforming";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SingularMatrix>(m, "SingularMatrix", PyExc_ArithmeticError);
  py::register_exception<SizeLimit>(m, "SizeLimit", PyExc_ValueError);
  py::register_exception<CannotRefine>(m, "CannotRefine", PyExc_RuntimeError);
  py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);
  py::register_exception<UnsupportedOrder>(m, "UnsupportedOrder", PyExc_ValueError);

  // phase alphabet
  py::class_<PhaseAlphabet>(m, "PhaseAlphabet")
      .def(py::init<int>(), py::arg("bits"))
      .def_property_readonly("bits", &PhaseAlphabet::bits)
      .def_property_readonly("levels", &PhaseAlphabet::levels)
      .def_property_readonly("step", &PhaseAlphabet::step)
      .def("phase", &PhaseAlphabet::phase)
      .def("value", &PhaseAlphabet::value)
      .def("phases", &PhaseAlphabet::phases);
  m.def(
      "quantize_phase", [](double theta, int bits) { return quantize_phase(theta, PhaseAlphabet(bits)).index(); },
      py::arg("theta"), py::arg("bits"), "index of the nearest alphabet phase (ties go to the smaller phase)");

  // training design
  m.def("dft_matrix", &dft_matrix, py::arg("M"));
  m.def(
      "quantized_dft", [](int M, int bits) { return quantized_dft(M, PhaseAlphabet(bits)).values(); }, py::arg("M"),
      py::arg("bits"));
  m.def("naive_matrix", [](int M) { return naive_matrix(M).values(); }, py::arg("M"));
  m.def("hadamard_matrix", &hadamard_matrix, py::arg("order"));
  m.def("smallest_hadamard_order", &smallest_hadamard_order, py::arg("m"));
  m.def(
      "design_basis_matrix",
      [](int M, int bits) {
        const auto r = design_basis_matrix(M, PhaseAlphabet(bits));
        py::dict d;
        d["matrix"] = r.matrix.values();
        d["full_rank"] = r.full_rank;
        d["normalized_mse"] = r.normalized_mse;
        d["method"] = r.method;
        return d;
      },
      py::arg("M"), py::arg("bits"));
  m.def("normalized_training_mse", py::overload_cast<const CMat&>(&normalized_training_mse), py::arg("theta"));

  // subgroup partition and estimation
  m.def(
      "matrix_sequence", [](int L, const std::string& scheme) { return matrix_sequence(L, parse_partition_scheme(scheme)); },
      py::arg("L"), py::arg("scheme") = "symmetric");
  m.def(
      "partition_sequence",
      [](int L, const std::string& scheme) {
        std::vector<std::vector<std::vector<int>>> out;
        for (const auto& s : partition_sequence(L, parse_partition_scheme(scheme))) out.push_back(s.subgroups);
        return out;
      },
      py::arg("L"), py::arg("scheme") = "symmetric", "0-based subgroup index sets for blocks 1..L");
  m.def("subgroup_trace_factor", &subgroup_trace_factor, py::arg("psi"));
  m.def("closed_form_intra_mse", &closed_form_intra_mse, py::arg("theta"), py::arg("psi"), py::arg("sigma2"),
        py::arg("P"));
  m.def("error_covariance", &error_covariance, py::arg("theta"), py::arg("psi"), py::arg("sigma2"), py::arg("P"));

  // beamforming
  m.def(
      "sinr",
      [](const CVec& phi, const CVec& g, const CMat& R, double P, double sigma2) {
        return sinr(phi, make_problem(g, R, P, sigma2, 1));
      },
      py::arg("phi"), py::arg("g_hat"), py::arg("R"), py::arg("P"), py::arg("sigma2"));
  m.def(
      "exhaustive_optimum",
      [](const CVec& g, const CMat& R, double P, double sigma2, int bits) {
        const auto s = exhaustive_optimum(make_problem(g, R, P, sigma2, bits));
        return py::make_tuple(s.phases, s.sinr);
      },
      py::arg("g_hat"), py::arg("R"), py::arg("P"), py::arg("sigma2"), py::arg("bits"),
      "(phase indices, SINR) of the global optimum; small problems only");
  m.def(
      "successive_refinement",
      [](const IVec& start, const CVec& g, const CMat& R, double P, double sigma2, int bits, double eps) {
        const auto s = successive_refinement(start, make_problem(g, R, P, sigma2, bits), eps);
        return py::make_tuple(s.phases, s.sinr, s.sweeps);
      },
      py::arg("start"), py::arg("g_hat"), py::arg("R"), py::arg("P"), py::arg("sigma2"), py::arg("bits"),
      py::arg("epsilon") = 1e-4);
  m.def(
      "solve_relaxation",
      [](const CMat& G, const CMat& R) {
        const auto s = solve_relaxation({G, R});
        py::dict d;
        d["A"] = s.A;
        d["xi"] = s.xi;
        d["objective"] = s.objective;
        d["dual_bound"] = s.dual_bound;
        d["iterations"] = s.iterations;
        d["converged"] = s.converged;
        return d;
      },
      py::arg("G"), py::arg("R"));

  // frame protocol
  py::class_<FrameConfig>(m, "FrameConfig")
      .def(py::init<>())
      .def_readwrite("N", &FrameConfig::N)
      .def_readwrite("M", &FrameConfig::M)
      .def_readwrite("I0", &FrameConfig::I0)
      .def_readwrite("M0", &FrameConfig::M0)
      .def_readwrite("P", &FrameConfig::P)
      .def_readwrite("sigma2", &FrameConfig::sigma2)
      .def_readwrite("gamma", &FrameConfig::gamma)
      .def_readwrite("bits", &FrameConfig::bits)
      .def_readwrite("epsilon", &FrameConfig::epsilon)
      .def_readwrite("draws", &FrameConfig::draws)
      .def_readwrite("seed", &FrameConfig::seed)
      .def_property(
          "scheme", [](const FrameConfig& c) { return to_string(c.scheme); },
          [](FrameConfig& c, const std::string& s) { c.scheme = parse_partition_scheme(s); })
      .def_property(
          "basis", [](const FrameConfig& c) { return to_string(c.basis); },
          [](FrameConfig& c, const std::string& s) { c.basis = parse_basis_kind(s); })
      .def_property(
          "init", [](const FrameConfig& c) { return to_string(c.init); },
          [](FrameConfig& c, const std::string& s) { c.init = parse_init_policy(s); })
      .def_property(
          "irs_shape", [](const FrameConfig& c) { return py::make_tuple(c.geometry.rows, c.geometry.cols); },
          [](FrameConfig& c, std::pair<int, int> rc) {
            c.geometry.rows = rc.first;
            c.geometry.cols = rc.second;
          })
      .def_property_readonly("L", &FrameConfig::L)
      .def_property_readonly("blocks", &FrameConfig::blocks)
      .def("violations", &FrameConfig::violations);

  m.def(
      "run_frame",
      [](const FrameConfig& c, std::uint64_t trial) {
        TrialRngs rngs(trial_seed(c.seed, trial));
        py::list out;
        for (const auto& r : run_frame(c, rngs)) out.append(block_dict(r));
        return out;
      },
      py::arg("config"), py::arg("trial") = 0, "one frame on a fresh channel; list of per-block dicts");
  m.def("validate_config", &validate_config, py::arg("path"));
  m.def("parse_config", [](const std::string& text) { return parse_config(text).frame; }, py::arg("text"));

  // experiments
  m.def("experiment_names", &experiment_names);
  m.def(
      "run_experiment",
      [](const std::string& name, int trials, std::uint64_t seed, int threads, const std::string& config_text) {
        ExperimentSpec s;
        s.name = name;
        s.config = parse_config(config_text);
        s.trials = trials;
        s.seed = seed;
        s.threads = threads;
        std::vector<CsvRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_experiment(s);
        }
        std::ostringstream os;
        write_csv(os, rows);
        return os.str();
      },
      py::arg("name"), py::arg("trials") = 10, py::arg("seed") = 1, py::arg("threads") = 1,
      py::arg("config_text") = "", "CSV text for a named experiment");
}
