#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "dirmh/adaptive.hpp"
#include "dirmh/diagnostics.hpp"
#include "dirmh/errors.hpp"
#include "dirmh/kernels.hpp"
#include "dirmh/proposal.hpp"
#include "dirmh/targets.hpp"

namespace py = pybind11;

namespace {

// Lets Python classes implement TargetDensity and hand it to run_chain.
class PyTargetDensity : public dirmh::TargetDensity {
 public:
  int dim() const override { PYBIND11_OVERRIDE_PURE(int, dirmh::TargetDensity, dim); }
  double log_density(const Eigen::VectorXd& x) const override {
    PYBIND11_OVERRIDE_PURE(double, dirmh::TargetDensity, log_density, x);
  }
  Eigen::VectorXd grad_log_density(const Eigen::VectorXd& x) const override {
    PYBIND11_OVERRIDE_PURE(Eigen::VectorXd, dirmh::TargetDensity, grad_log_density, x);
  }
};

// GlmPosterior owns an atomic counter, so it is neither movable nor
// copyable; hand ownership to Python through unique_ptr.
std::unique_ptr<dirmh::GlmPosterior> glm_from_csv(const std::string& path,
                                                  const std::string& family,
                                                  double dispersion, double v_beta,
                                                  double v_u) {
  return std::make_unique<dirmh::GlmPosterior>(dirmh::load_glm_csv(
      path, dirmh::family_from_name(family), dispersion, v_beta, v_u));
}

std::unique_ptr<dirmh::GlmPosterior> glm_simulated(std::uint64_t seed, int n, int p,
                                                   const std::string& family,
                                                   double dispersion, double v_beta,
                                                   double v_u) {
  return std::make_unique<dirmh::GlmPosterior>(dirmh::simulate_glm_data(
      seed, n, p, dirmh::family_from_name(family), dispersion, v_beta, v_u));
}

}  // namespace

PYBIND11_MODULE(_dirmh, m) {
  m.doc() = "Directional Metropolis-Hastings sampler core";
  m.attr("__version__") = "0.1.0";

  py::register_exception<dirmh::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<dirmh::TargetDensity, PyTargetDensity>(m, "TargetDensity")
      .def(py::init<>())
      .def("dim", &dirmh::TargetDensity::dim)
      .def("log_density", &dirmh::TargetDensity::log_density, py::arg("x"))
      .def("grad_log_density", &dirmh::TargetDensity::grad_log_density, py::arg("x"));

  py::class_<dirmh::GaussianTarget, dirmh::TargetDensity>(m, "GaussianTarget")
      .def(py::init([](const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
             return dirmh::gaussian_target(mean, cov);
           }),
           py::arg("mean"), py::arg("cov"));

  py::class_<dirmh::BananaTarget, dirmh::TargetDensity>(m, "BananaTarget")
      .def(py::init<double, int>(), py::arg("b"), py::arg("dim"))
      .def_property_readonly("b", &dirmh::BananaTarget::bananicity);

  py::class_<dirmh::GlmPosterior, dirmh::TargetDensity>(m, "GlmPosterior")
      .def_property_readonly("overflow_count", &dirmh::GlmPosterior::overflow_count);
  m.def("glm_posterior_from_csv", &glm_from_csv, py::arg("path"), py::arg("family"),
        py::arg("dispersion") = 1.0, py::arg("v_beta") = 100.0, py::arg("v_u") = 100.0);
  m.def("simulated_glm_posterior", &glm_simulated, py::arg("seed"), py::arg("n"),
        py::arg("p"), py::arg("family"), py::arg("dispersion") = 1.0,
        py::arg("v_beta") = 100.0, py::arg("v_u") = 100.0);

  py::class_<dirmh::ProposalShape>(m, "ProposalShape")
      .def(py::init([](double h, double s, double t) {
             return dirmh::ProposalShape{h, s, t};
           }),
           py::arg("h"), py::arg("s"), py::arg("t"))
      .def_readwrite("h", &dirmh::ProposalShape::h)
      .def_readwrite("s", &dirmh::ProposalShape::s)
      .def_readwrite("t", &dirmh::ProposalShape::t);
  m.def(
      "covariance_matrix",
      [](const Eigen::VectorXd& grad, const dirmh::ProposalShape& shape) {
        return dirmh::covariance_matrix(dirmh::unit_gradient(grad), shape);
      },
      py::arg("grad"), py::arg("shape"));
  m.def("proposal_log_density", &dirmh::proposal_log_density, py::arg("from_point"),
        py::arg("grad_at_from"), py::arg("to_point"), py::arg("shape"));

  py::enum_<dirmh::KernelFlavor>(m, "KernelFlavor")
      .value("DMH", dirmh::KernelFlavor::kDmh)
      .value("MALA", dirmh::KernelFlavor::kMala)
      .value("RWMH", dirmh::KernelFlavor::kRwmh);

  py::class_<dirmh::KernelConfig>(m, "KernelConfig")
      .def_static("rwmh", &dirmh::KernelConfig::rwmh, py::arg("t"))
      .def_static("mala", &dirmh::KernelConfig::mala, py::arg("h"), py::arg("t"))
      .def_static("dmh", &dirmh::KernelConfig::dmh, py::arg("h"), py::arg("s"),
                  py::arg("t"))
      .def_readwrite("flavor", &dirmh::KernelConfig::flavor)
      .def_readwrite("shape", &dirmh::KernelConfig::shape)
      .def_readwrite("numeric_grad_step", &dirmh::KernelConfig::numeric_grad_step);

  py::class_<dirmh::Chain>(m, "Chain")
      .def_readonly("states", &dirmh::Chain::states)
      .def_readonly("accepted", &dirmh::Chain::accepted)
      .def_readonly("seed", &dirmh::Chain::seed)
      .def("acceptance_rate", &dirmh::Chain::acceptance_rate);

  m.def("run_chain", &dirmh::run_chain, py::arg("seed"), py::arg("target"),
        py::arg("config"), py::arg("x0"), py::arg("n_steps"), py::arg("burn_in") = 0,
        py::arg("thin") = 1);
  m.def("log_hastings_ratio", &dirmh::log_hastings_ratio, py::arg("target"),
        py::arg("x"), py::arg("y"), py::arg("config"));

  py::class_<dirmh::AdaptState>(m, "AdaptState")
      .def(py::init<>())
      .def_readwrite("batch_index", &dirmh::AdaptState::batch_index)
      .def_readwrite("log_sigma", &dirmh::AdaptState::log_sigma)
      .def_readwrite("clamp", &dirmh::AdaptState::clamp)
      .def_readwrite("target_rate", &dirmh::AdaptState::target_rate)
      .def_readwrite("batch_size", &dirmh::AdaptState::batch_size);

  py::class_<dirmh::AdaptTraceRow>(m, "AdaptTraceRow")
      .def_readonly("batch_index", &dirmh::AdaptTraceRow::batch_index)
      .def_readonly("log_sigma", &dirmh::AdaptTraceRow::log_sigma)
      .def_readonly("batch_acceptance", &dirmh::AdaptTraceRow::batch_acceptance);

  py::class_<dirmh::AdaptiveRun>(m, "AdaptiveRun")
      .def_readonly("chain", &dirmh::AdaptiveRun::chain)
      .def_readonly("trace", &dirmh::AdaptiveRun::trace);

  m.def("run_adaptive_chain", &dirmh::run_adaptive_chain, py::arg("seed"),
        py::arg("target"), py::arg("config"), py::arg("initial"), py::arg("x0"),
        py::arg("n_steps"));
  m.def("adapt_delta", &dirmh::adapt_delta, py::arg("batch_index"));

  m.def("autocorrelation", &dirmh::autocorrelation, py::arg("series"), py::arg("lag"));
  m.def(
      "iact",
      [](const Eigen::VectorXd& series) {
        const dirmh::IactEstimate est = dirmh::iact(series);
        return py::make_tuple(est.value, est.truncated);
      },
      py::arg("series"), "Returns (value, truncated).");
  m.def(
      "ess_univariate",
      [](const Eigen::VectorXd& series, long batch_size) {
        if (batch_size <= 0) batch_size = dirmh::default_batch_size(series.size());
        return dirmh::ess_univariate(series, batch_size);
      },
      py::arg("series"), py::arg("batch_size") = 0);
  m.def(
      "mess",
      [](const Eigen::MatrixXd& states, long batch_size) {
        if (batch_size <= 0) batch_size = dirmh::default_batch_size(states.rows());
        return dirmh::mess(states, batch_size);
      },
      py::arg("states"), py::arg("batch_size") = 0);
  m.def("msjd", &dirmh::msjd, py::arg("states"));
  m.def("default_batch_size", &dirmh::default_batch_size, py::arg("n"));

  py::class_<dirmh::DriftEstimate>(m, "DriftEstimate")
      .def_readonly("mean", &dirmh::DriftEstimate::mean)
      .def_readonly("std_error", &dirmh::DriftEstimate::std_error);
  m.def("drift_ratio_estimate", &dirmh::drift_ratio_estimate, py::arg("target"),
        py::arg("config"), py::arg("x"), py::arg("tau"), py::arg("n_mc"),
        py::arg("seed") = 0);

  py::class_<dirmh::DiagnosticsReport>(m, "DiagnosticsReport")
      .def_readonly("acceptance_rate", &dirmh::DiagnosticsReport::acceptance_rate)
      .def_readonly("iact", &dirmh::DiagnosticsReport::iact)
      .def_readonly("ess", &dirmh::DiagnosticsReport::ess)
      .def_readonly("mess", &dirmh::DiagnosticsReport::mess)
      .def_readonly("msjd", &dirmh::DiagnosticsReport::msjd)
      .def_readonly("n", &dirmh::DiagnosticsReport::n)
      .def("to_json", [](const dirmh::DiagnosticsReport& r) {
        return dirmh::report_to_json(r);
      });
  m.def(
      "compute_report",
      [](const Eigen::MatrixXd& states, const std::vector<std::uint8_t>& accepted,
         long batch_size) { return dirmh::compute_report(states, accepted, batch_size); },
      py::arg("states"), py::arg("accepted") = std::vector<std::uint8_t>{},
      py::arg("batch_size") = 0);
}
