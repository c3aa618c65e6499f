#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lstreg/csv.hpp"
#include "lstreg/dataset.hpp"
#include "lstreg/lst.hpp"
#include "lstreg/lts.hpp"
#include "lstreg/ols.hpp"
#include "lstreg/robust_stats.hpp"
#include "lstreg/simulate.hpp"

namespace py = pybind11;
using namespace lstreg;

namespace {

SimulationScenario make_scenario(int n, int p, const std::string& design, double rho,
                                 std::optional<Eigen::VectorXd> beta0, double contamination_rate,
                                 std::optional<Eigen::VectorXd> contamination_point,
                                 int replications, std::uint64_t seed) {
  SimulationScenario s;
  s.n = n;
  s.p = p;
  if (design == "equicorrelated")
    s.design = DesignKind::Equicorrelated;
  else if (design == "iid_standard")
    s.design = DesignKind::IidStandard;
  else
    throw ConfigError("design must be 'equicorrelated' or 'iid_standard'");
  s.rho = rho;
  s.beta0 = std::move(beta0);
  s.contamination.rate = contamination_rate;
  if (contamination_point.has_value()) s.contamination.point = *contamination_point;
  s.replications = replications;
  s.seed = seed;
  return s;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> methods;
  for (const std::string& name : names) methods.push_back(parse_method(name));
  return methods;
}

}  // namespace

PYBIND11_MODULE(_lstreg, m) {
  m.doc() = "Robust linear regression: depth-trimmed least squares with LS/LTS comparators";

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DegenerateScaleError>(m, "DegenerateScaleError", PyExc_ArithmeticError);
  py::register_exception<UnsampleableDesignError>(m, "UnsampleableDesignError",
                                                  PyExc_ArithmeticError);
  py::register_exception<AllCandidatesSkippedError>(m, "AllCandidatesSkippedError",
                                                    PyExc_ArithmeticError);
  py::register_exception<DegenerateDesignError>(m, "DegenerateDesignError",
                                                PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<StudyError>(m, "StudyError", PyExc_RuntimeError);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<Eigen::MatrixXd, Eigen::VectorXd>(), py::arg("x"), py::arg("y"),
           "Regression sample from an (n, p-1) predictor matrix and a response vector")
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("p", &Dataset::p)
      .def_property_readonly("x", [](const Dataset& d) { return Eigen::MatrixXd(d.predictors()); })
      .def_property_readonly("y", [](const Dataset& d) { return d.response(); })
      .def_property_readonly("design", [](const Dataset& d) { return d.design(); })
      .def("__repr__", [](const Dataset& d) {
        return "Dataset(n=" + std::to_string(d.n()) + ", p=" + std::to_string(d.p()) + ")";
      });

  m.def("residuals", &residuals, py::arg("data"), py::arg("beta"));
  m.def("median", &median, py::arg("values"));
  m.def("mad", &mad, py::arg("values"));
  m.def("outlyingness", &outlyingness, py::arg("values"));

  py::class_<LsSolution>(m, "LsSolution")
      .def_readonly("beta", &LsSolution::beta)
      .def_readonly("ss", &LsSolution::ss)
      .def_readonly("rank_deficient", &LsSolution::rank_deficient);

  m.def("ls_fit", [](const Dataset& d) { return ls_fit(d); }, py::arg("data"));
  m.def(
      "ls_fit",
      [](const Dataset& d, const std::vector<int>& subset) { return ls_fit(d, subset); },
      py::arg("data"), py::arg("subset"));

  py::class_<TrimmedFit>(m, "TrimmedFit")
      .def_readonly("beta", &TrimmedFit::beta)
      .def_readonly("retained", &TrimmedFit::retained)
      .def_readonly("objective", &TrimmedFit::objective)
      .def_property_readonly("method",
                             [](const TrimmedFit& f) { return to_string(f.method); })
      .def("__repr__", [](const TrimmedFit& f) {
        return "TrimmedFit(method=" + to_string(f.method) +
               ", objective=" + std::to_string(f.objective) +
               ", retained=" + std::to_string(f.retained.size()) + ")";
      });

  py::class_<LstConfig>(m, "LstConfig")
      .def(py::init([](double alpha, double delta, int restarts, std::uint64_t seed,
                       bool iterate_refit) {
             LstConfig c;
             c.alpha = alpha;
             c.delta = delta;
             c.restarts = restarts;
             c.seed = seed;
             c.iterate_refit = iterate_refit;
             return c;
           }),
           py::arg("alpha") = 2.5, py::arg("delta") = 0.5, py::arg("restarts") = 1,
           py::arg("seed") = 0, py::arg("iterate_refit") = false)
      .def_readwrite("alpha", &LstConfig::alpha)
      .def_readwrite("delta", &LstConfig::delta)
      .def_readwrite("restarts", &LstConfig::restarts)
      .def_readwrite("seed", &LstConfig::seed)
      .def_readwrite("iterate_refit", &LstConfig::iterate_refit);

  m.def("index_set", &index_set, py::arg("data"), py::arg("beta"), py::arg("alpha"));
  m.def("objective_q", &objective_q, py::arg("data"), py::arg("beta"), py::arg("alpha"));
  m.def("lst_fit", &lst_fit, py::arg("data"), py::arg("config") = LstConfig{});

  py::class_<LtsConfig>(m, "LtsConfig")
      .def(py::init([](int h, int starts, int csteps, std::uint64_t seed) {
             LtsConfig c;
             c.h = h;
             c.starts = starts;
             c.csteps = csteps;
             c.seed = seed;
             return c;
           }),
           py::arg("h") = 0, py::arg("starts") = 500, py::arg("csteps") = 10, py::arg("seed") = 0)
      .def_readwrite("h", &LtsConfig::h)
      .def_readwrite("starts", &LtsConfig::starts)
      .def_readwrite("csteps", &LtsConfig::csteps)
      .def_readwrite("seed", &LtsConfig::seed);

  m.def("lts_objective", &lts_objective, py::arg("data"), py::arg("beta"), py::arg("h"));
  m.def("lts_fit", &lts_fit, py::arg("data"), py::arg("config") = LtsConfig{});
  m.def("default_coverage", &default_coverage, py::arg("n"), py::arg("p"));

  m.def(
      "load_csv",
      [](const std::string& path, const std::string& response,
         const std::vector<std::string>& predictors, bool skip_header,
         const std::string& delimiter, bool drop_incomplete) {
        ColumnSpec spec;
        spec.response = response;
        spec.predictors = predictors;
        spec.skip_header = skip_header;
        if (delimiter == "comma")
          spec.delimiter = ',';
        else if (delimiter == "tab")
          spec.delimiter = '\t';
        else if (delimiter == "whitespace")
          spec.delimiter = ' ';
        else if (delimiter != "auto")
          throw ConfigError("delimiter must be auto, comma, tab, or whitespace");
        spec.drop_incomplete = drop_incomplete;
        const LoadedCsv loaded = load_csv(path, spec);
        return py::make_tuple(loaded.data, loaded.dropped_rows, loaded.column_names);
      },
      py::arg("path"), py::arg("response"), py::arg("predictors"),
      py::arg("skip_header") = false, py::arg("delimiter") = "auto",
      py::arg("drop_incomplete") = false,
      "Returns (dataset, dropped_rows, column_names)");
  m.def("write_csv", &write_csv, py::arg("data"), py::arg("path"));

  m.def("generate_sample", [](int n, int p, const std::string& design, double rho,
                              std::optional<Eigen::VectorXd> beta0, std::uint64_t seed,
                              int rep_index) {
          const SimulationScenario s = make_scenario(n, p, design, rho, std::move(beta0), 0.0,
                                                     std::nullopt, 1, seed);
          return generate_sample(s, rep_index);
        },
        py::arg("n"), py::arg("p"), py::arg("design") = "equicorrelated", py::arg("rho") = 0.9,
        py::arg("beta0") = std::nullopt, py::arg("seed") = 0, py::arg("rep_index") = 0);

  m.def("contaminate",
        [](const Dataset& data, double rate, const Eigen::VectorXd& point, std::uint64_t seed) {
          Rng rng(seed);
          return contaminate(data, rate, point, rng);
        },
        py::arg("data"), py::arg("rate"), py::arg("point"), py::arg("seed") = 0);

  py::class_<MetricsRow>(m, "MetricsRow")
      .def_property_readonly("method", [](const MetricsRow& r) { return to_string(r.method); })
      .def_readonly("emse", &MetricsRow::emse)
      .def_readonly("svar", &MetricsRow::svar)
      .def_readonly("total_time_seconds", &MetricsRow::total_time_seconds)
      .def_readonly("re", &MetricsRow::re)
      .def_readonly("failures", &MetricsRow::failures);

  m.def(
      "run_study",
      [](int n, int p, const std::string& design, double rho,
         std::optional<Eigen::VectorXd> beta0, double contamination_rate,
         std::optional<Eigen::VectorXd> contamination_point, int replications,
         std::uint64_t seed, const std::vector<std::string>& methods, const LstConfig& lst,
         const LtsConfig& lts, int threads) {
        const SimulationScenario s =
            make_scenario(n, p, design, rho, std::move(beta0), contamination_rate,
                          std::move(contamination_point), replications, seed);
        MethodSettings settings;
        settings.lst = lst;
        settings.lts = lts;
        return run_study(s, parse_methods(methods), settings, threads).rows;
      },
      py::arg("n"), py::arg("p"), py::arg("design") = "equicorrelated", py::arg("rho") = 0.9,
      py::arg("beta0") = std::nullopt, py::arg("contamination_rate") = 0.0,
      py::arg("contamination_point") = std::nullopt, py::arg("replications") = 100,
      py::arg("seed") = 0, py::arg("methods") = std::vector<std::string>{"LS", "LST", "LTS"},
      py::arg("lst") = LstConfig{}, py::arg("lts") = LtsConfig{}, py::arg("threads") = 0,
      "Monte Carlo comparison; returns a list of per-method metric rows");
}
