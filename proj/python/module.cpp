// Python bindings for the core operations: pair/chain Hamiltonians, Gibbs
// states and reductions, concurrence / entanglement of formation,
// threshold solvers, the alpha fit and disorder ensembles.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinthermal/effective_fit.hpp"
#include "spinthermal/ensemble.hpp"
#include "spinthermal/entanglement.hpp"
#include "spinthermal/hamiltonians.hpp"
#include "spinthermal/prng.hpp"
#include "spinthermal/thermal.hpp"
#include "spinthermal/version.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace spinthermal;

namespace {

DensityMatrix4 induced_pair_state(const ChainSpec& chain, double beta,
                                  int site_i, int site_j, int threads) {
  const SpectralDecomposition decomp =
      diagonalize(chain_hamiltonian(chain), threads);
  return partial_trace_pair(decomp, beta, site_i, site_j);
}

std::string threshold_kind(const ThresholdResult& r) {
  return r.kind == ThresholdResult::Kind::Finite ? "finite" : "none";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Thermal pair entanglement in disordered XXZ chains";
  m.attr("__version__") = kVersion;
  m.attr("PRNG_VERSION") = kPrngVersion;

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<ResourceLimitError>(m, "ResourceLimitError",
                                             PyExc_RuntimeError);
  py::register_exception<IndeterminateThresholdError>(
      m, "IndeterminateThresholdError", PyExc_RuntimeError);

  py::class_<PairSpec>(m, "PairSpec")
      .def(py::init<double, double, double, double>(), "J"_a = 1.0,
           "gamma"_a = 1.0, "h1"_a = 0.0, "h2"_a = 0.0)
      .def_readwrite("J", &PairSpec::J)
      .def_readwrite("gamma", &PairSpec::gamma)
      .def_readwrite("h1", &PairSpec::h1)
      .def_readwrite("h2", &PairSpec::h2)
      .def_property_readonly("delta_h", &PairSpec::delta_h)
      .def_property_readonly("xi", &PairSpec::xi);

  py::class_<ChainSpec>(m, "ChainSpec")
      .def(py::init([](int L, double J, double gamma, double lambda,
                       std::vector<double> fields) {
             ChainSpec spec;
             spec.sites = L;
             spec.J = J;
             spec.gamma = gamma;
             spec.lambda = lambda;
             spec.fields = std::move(fields);
             return spec;
           }),
           "L"_a, "J"_a = 1.0, "gamma"_a = 1.0, "lambda_"_a = 0.0,
           "fields"_a)
      .def_readwrite("L", &ChainSpec::sites)
      .def_readwrite("J", &ChainSpec::J)
      .def_readwrite("gamma", &ChainSpec::gamma)
      .def_readwrite("lambda_", &ChainSpec::lambda)
      .def_readwrite("fields", &ChainSpec::fields);

  py::class_<EffectiveSpec>(m, "EffectiveSpec")
      .def(py::init<PairSpec, double, double>(), "base"_a, "alpha1"_a = 0.0,
           "alpha2"_a = 0.0)
      .def_readwrite("base", &EffectiveSpec::base)
      .def_readwrite("alpha1", &EffectiveSpec::alpha1)
      .def_readwrite("alpha2", &EffectiveSpec::alpha2)
      .def_property_readonly("alpha0", &EffectiveSpec::alpha0)
      .def("scaled", &EffectiveSpec::scaled);

  m.def("two_spin_hamiltonian", &two_spin_hamiltonian, "spec"_a);
  m.def("effective_hamiltonian", &effective_hamiltonian, "spec"_a);
  m.def("chain_hamiltonian_dense", &chain_hamiltonian_dense, "spec"_a,
        "Full 2^L x 2^L assembly (cross-check path, L <= 12).");
  m.def("sz_sector_index", &sz_sector_index, "L"_a,
        "Basis states per up-spin count; site 1 is the least significant "
        "bit, a set bit is spin up.");

  m.def("two_spin_gibbs_state", &two_spin_gibbs_state, "spec"_a, "beta"_a);
  py::class_<PairGibbsElements>(m, "PairGibbsElements")
      .def_readonly("u", &PairGibbsElements::u)
      .def_readonly("v", &PairGibbsElements::v)
      .def_readonly("w", &PairGibbsElements::w)
      .def_readonly("wp", &PairGibbsElements::wp)
      .def_readonly("z", &PairGibbsElements::z);
  m.def("two_spin_gibbs_elements", &two_spin_gibbs_elements, "spec"_a,
        "beta"_a);
  m.def("induced_pair_state", &induced_pair_state, "chain"_a, "beta"_a,
        "site_i"_a, "site_j"_a, "threads"_a = 1,
        "Reduced state of two chain sites in the Gibbs state.");

  py::class_<ConcurrenceResult>(m, "ConcurrenceResult")
      .def_readonly("concurrence", &ConcurrenceResult::concurrence)
      .def_readonly("lambdas", &ConcurrenceResult::lambdas);
  m.def("spin_flip", &spin_flip, "rho"_a);
  m.def("concurrence", &concurrence, "rho"_a);
  m.def("concurrence_x_state", &concurrence_x_state, "rho"_a);
  m.def("eof", &eof, "concurrence"_a);
  m.def("analytic_concurrence", &analytic_concurrence, "spec"_a, "beta"_a);

  py::class_<ThresholdResult>(m, "ThresholdResult")
      .def_property_readonly("kind", &threshold_kind)
      .def_readonly("beta_c", &ThresholdResult::beta_c)
      .def_readonly("residual", &ThresholdResult::residual);
  py::class_<DeltaEThresholdResult>(m, "DeltaEThresholdResult")
      .def_readonly("root", &DeltaEThresholdResult::root)
      .def_readonly("beta_c_times_delta_e",
                    &DeltaEThresholdResult::beta_c_times_delta_e)
      .def_readonly("consistent", &DeltaEThresholdResult::consistent);
  m.def("threshold_beta", &threshold_beta, "spec"_a);
  m.def("threshold_beta_delta_e", &threshold_beta_delta_e, "gamma"_a,
        "delta_h"_a);

  py::class_<FitConfig>(m, "FitConfig")
      .def(py::init<>())
      .def_readwrite("grid_lo", &FitConfig::grid_lo)
      .def_readwrite("grid_hi", &FitConfig::grid_hi)
      .def_readwrite("grid_step", &FitConfig::grid_step)
      .def_readwrite("descent_step", &FitConfig::descent_step)
      .def_readwrite("shrink", &FitConfig::shrink)
      .def_readwrite("fd_step", &FitConfig::fd_step)
      .def_readwrite("tol_d", &FitConfig::tol_d)
      .def_readwrite("grad_tol", &FitConfig::grad_tol)
      .def_readwrite("max_iterations", &FitConfig::max_iterations);
  py::class_<FitResult>(m, "FitResult")
      .def_readonly("alpha1", &FitResult::alpha1)
      .def_readonly("alpha2", &FitResult::alpha2)
      .def_readonly("d_unfitted", &FitResult::d_unfitted)
      .def_readonly("d_fitted", &FitResult::d_fitted)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("converged", &FitResult::converged);
  m.def("state_difference", &state_difference, "rho1"_a, "rho2"_a);
  m.def("fit_alphas", &fit_alphas, "induced"_a, "base"_a, "beta"_a,
        "config"_a = FitConfig{});

  m.def("sample_disorder", &sample_disorder, "seed"_a, "L"_a);
  m.def("derive_seed", &derive_seed, "master"_a, "index"_a);
  m.def("centered_pair", &centered_pair, "L"_a, "separation"_a);

  py::class_<EnsembleConfig>(m, "EnsembleConfig")
      .def(py::init<>())
      .def_readwrite("L", &EnsembleConfig::sites)
      .def_readwrite("gamma", &EnsembleConfig::gamma)
      .def_readwrite("J", &EnsembleConfig::J)
      .def_readwrite("lambdas", &EnsembleConfig::lambdas)
      .def_readwrite("betas", &EnsembleConfig::betas)
      .def_readwrite("realizations", &EnsembleConfig::realizations)
      .def_readwrite("master_seed", &EnsembleConfig::master_seed)
      .def_readwrite("separations", &EnsembleConfig::separations)
      .def_readwrite("fit_enabled", &EnsembleConfig::fit_enabled)
      .def_readwrite("fit", &EnsembleConfig::fit)
      .def_readwrite("threads", &EnsembleConfig::threads);
  py::class_<CellStats>(m, "CellStats")
      .def_readonly("lambda_", &CellStats::lambda)
      .def_readonly("beta", &CellStats::beta)
      .def_readonly("separation", &CellStats::separation)
      .def_readonly("count", &CellStats::count)
      .def_readonly("mean_concurrence", &CellStats::mean_concurrence)
      .def_readonly("mean_eof", &CellStats::mean_eof)
      .def_readonly("var_eof", &CellStats::var_eof)
      .def_readonly("stderr_eof", &CellStats::stderr_eof)
      .def_readonly("mean_energy_norm", &CellStats::mean_energy_norm)
      .def_readonly("mean_purity", &CellStats::mean_purity);
  m.def(
      "ensemble_stats",
      [](const EnsembleConfig& config) {
        py::gil_scoped_release release;
        return run_ensemble(config).stats;
      },
      "config"_a,
      "Disorder-averaged statistics per (lambda, beta[, separation]).");
}
