#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <vector>

#include "qtdt/power.hpp"

namespace py = pybind11;
using namespace qtdt;

namespace {

DesignMatrix to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("empty design matrix");
  DesignMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols)
      throw std::invalid_argument("ragged design matrix");
    for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

Centering parse_centering(const std::string& name) {
  if (name == "mean") return Centering::Mean;
  if (name == "median") return Centering::Median;
  throw std::invalid_argument("centering must be 'mean' or 'median'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "sib-pair transmission test toolkit: two-locus simulation, GLM engine, "
            "phenotype imputation and Monte Carlo power studies";

  py::enum_<TraitKind>(m, "TraitKind")
      .value("normal", TraitKind::Normal)
      .value("chi_square", TraitKind::ChiSquareShift)
      .value("poisson", TraitKind::PoissonShift)
      .value("binary", TraitKind::BinaryThreshold);

  py::enum_<MissingType>(m, "MissingType")
      .value("t1", MissingType::T1)
      .value("t2_1", MissingType::T2_1)
      .value("t2_3", MissingType::T2_3)
      .value("t2_4", MissingType::T2_4);

  py::enum_<Strategy>(m, "Strategy")
      .value("use_same", Strategy::UseSame)
      .value("use_other", Strategy::UseOther)
      .value("use_both", Strategy::UseBoth);

  py::enum_<DeletionScope>(m, "DeletionScope")
      .value("family", DeletionScope::Family)
      .value("offspring", DeletionScope::Offspring);

  py::enum_<Variant>(m, "Variant")
      .value("no_missing", Variant::NoMissing)
      .value("imputed", Variant::Imputed)
      .value("deleted", Variant::Deleted);

  py::class_<HaplotypeDist>(m, "HaplotypeDist")
      .def_readonly("p_m2d2", &HaplotypeDist::p_m2d2)
      .def_readonly("p_m1d2", &HaplotypeDist::p_m1d2)
      .def_readonly("p_m2d1", &HaplotypeDist::p_m2d1)
      .def_readonly("p_m1d1", &HaplotypeDist::p_m1d1)
      .def("__repr__", [](const HaplotypeDist& d) {
        return "HaplotypeDist(m2d2=" + std::to_string(d.p_m2d2) +
               ", m1d2=" + std::to_string(d.p_m1d2) +
               ", m2d1=" + std::to_string(d.p_m2d1) +
               ", m1d1=" + std::to_string(d.p_m1d1) + ")";
      });

  m.def(
      "compute_delta",
      [](double d, double mm, double delta_star, double theta) {
        return compute_delta({d, mm, delta_star, theta});
      },
      py::arg("d"), py::arg("m"), py::arg("delta_star"), py::arg("theta") = 0.01,
      "raw LD coefficient delta_star * min(d(1-m), m(1-d))");

  m.def(
      "haplotype_distribution",
      [](double d, double mm, double delta) { return haplotype_distribution(d, mm, delta); },
      py::arg("d"), py::arg("m"), py::arg("delta"),
      "four two-locus haplotype probabilities for a raw delta");

  m.def("genetic_variance", &genetic_variance, py::arg("d"), py::arg("beta"));
  m.def(
      "solve_residual_param",
      [](TraitKind kind, double d, double beta, double p_star) {
        return solve_residual_param(kind, d, beta, {p_star});
      },
      py::arg("kind"), py::arg("d"), py::arg("beta"), py::arg("p_star"),
      "residual parameter hitting the target heritability proportion");
  m.def(
      "binary_penetrance",
      [](double alpha, double beta, double sigma, double c, int x) {
        return binary_penetrance({TraitKind::BinaryThreshold, alpha, beta, sigma, c}, x);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("sigma"), py::arg("c"), py::arg("x"));
  m.def(
      "p_star_oracle",
      [](TraitKind kind, double alpha, double beta, double residual, double c, double d) {
        return p_star_oracle({kind, alpha, beta, residual, c}, d);
      },
      py::arg("kind"), py::arg("alpha"), py::arg("beta"), py::arg("residual"),
      py::arg("c"), py::arg("d"),
      "exact variance-explained proportion by enumeration over genotypes");

  m.def("chi_square_sf", &chi_square_sf, py::arg("x"), py::arg("df"),
        "upper-tail probability of a chi-square variable");

  m.def(
      "select_strategy",
      [](TraitKind first, TraitKind second, double rho1, double rho2) {
        return select_strategy(first, second, {rho1, rho2});
      },
      py::arg("first"), py::arg("second"), py::arg("rho1"), py::arg("rho2"),
      "best type-2.1 predictor choice for a trait-kind pair");

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("coefficients", &FitResult::coefficients)
      .def_readonly("log_likelihood", &FitResult::log_likelihood)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("separation", &FitResult::separation);

  m.def(
      "fit_ols",
      [](const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
        return fit_ols(to_matrix(x), y);
      },
      py::arg("x"), py::arg("y"));
  m.def(
      "fit_logistic",
      [](const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
        return fit_logistic(to_matrix(x), y);
      },
      py::arg("x"), py::arg("y"));
  m.def(
      "fit_poisson",
      [](const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
        return fit_poisson(to_matrix(x), y);
      },
      py::arg("x"), py::arg("y"));

  py::class_<TestResult>(m, "TestResult")
      .def_readonly("lrt", &TestResult::lrt)
      .def_readonly("df", &TestResult::df)
      .def_readonly("p_value", &TestResult::p_value)
      .def_readonly("coefficients", &TestResult::coefficients)
      .def_readonly("converged", &TestResult::converged)
      .def_readonly("centers", &TestResult::centers);

  m.def(
      "multivariate_tdt",
      [](const std::vector<int>& z, const std::vector<std::vector<double>>& y,
         const std::string& centering) {
        TestInput input;
        input.z = z;
        input.phenotypes = to_matrix(y);
        input.centering = parse_centering(centering);
        return multivariate_tdt(input);
      },
      py::arg("z"), py::arg("y"), py::arg("centering") = "mean",
      "transmission test of z on centered phenotype rows");

  m.def(
      "simulate_transmissions",
      [](std::size_t n_families, double d, double mm, double delta_star, double theta,
         std::uint64_t seed) {
        const FamilyPanel panel =
            simulate_families(n_families, {d, mm, delta_star, theta}, Rng(seed));
        std::vector<int> z, x;
        z.reserve(2 * n_families);
        x.reserve(2 * n_families);
        for (const Family& family : panel.families)
          for (const Offspring& sib : family.sibs) {
            z.push_back(sib.z);
            x.push_back(sib.qtl_allele_count);
          }
        return py::make_tuple(z, x);
      },
      py::arg("n_families"), py::arg("d"), py::arg("m"), py::arg("delta_star"),
      py::arg("theta") = 0.01, py::arg("seed") = 0,
      "simulate sib-pair families; returns (z, qtl allele count) per offspring");

  py::class_<TraitConfig>(m, "TraitConfig")
      .def(py::init<>())
      .def_readwrite("kind", &TraitConfig::kind)
      .def_readwrite("alpha", &TraitConfig::alpha)
      .def_readwrite("beta", &TraitConfig::beta)
      .def_readwrite("p_star", &TraitConfig::p_star)
      .def_readwrite("sigma", &TraitConfig::sigma)
      .def_readwrite("threshold", &TraitConfig::threshold);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("d", &Scenario::d)
      .def_readwrite("m", &Scenario::m)
      .def_readwrite("theta", &Scenario::theta)
      .def_readwrite("delta_star_grid", &Scenario::delta_star_grid)
      .def_readwrite("n_families", &Scenario::n_families)
      .def_readwrite("replications", &Scenario::replications)
      .def_readwrite("alpha", &Scenario::alpha)
      .def_readwrite("traits", &Scenario::traits)
      .def_readwrite("mtype", &Scenario::mtype)
      .def_readwrite("miss_p", &Scenario::miss_p)
      .def_readwrite("fixed_strategy", &Scenario::fixed_strategy)
      .def_readwrite("deletion", &Scenario::deletion)
      .def_readwrite("centering", &Scenario::centering)
      .def_readwrite("master_seed", &Scenario::master_seed)
      .def_readwrite("threads", &Scenario::threads)
      .def_property(
          "rho1", [](const Scenario& s) { return s.rho.cross_trait; },
          [](Scenario& s, double v) { s.rho.cross_trait = v; })
      .def_property(
          "rho2", [](const Scenario& s) { return s.rho.cross_sib; },
          [](Scenario& s, double v) { s.rho.cross_sib = v; })
      .def("validate", &Scenario::validate);

  py::class_<PowerRow>(m, "PowerRow")
      .def_readonly("delta_star", &PowerRow::delta_star)
      .def_readonly("variant", &PowerRow::variant)
      .def_readonly("power", &PowerRow::power)
      .def_readonly("mc_se", &PowerRow::mc_se)
      .def_readonly("replications", &PowerRow::replications)
      .def("__repr__", [](const PowerRow& row) {
        return "PowerRow(delta_star=" + std::to_string(row.delta_star) + ", variant=" +
               to_string(row.variant) + ", power=" + std::to_string(row.power) + ")";
      });

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def(
      "run_scenario",
      [](const Scenario& scenario) {
        const ScenarioResult result = run_scenario(scenario);
        return result.rows();
      },
      py::arg("scenario"), py::call_guard<py::gil_scoped_release>(),
      "run the Monte Carlo power study; returns one PowerRow per (delta*, variant)");
  m.def(
      "write_results_csv",
      [](const std::vector<PowerRow>& rows, const std::string& path) {
        write_results_csv(rows, path);
      },
      py::arg("rows"), py::arg("path"));
}
