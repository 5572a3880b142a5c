#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minpen/convergence.hpp"
#include "minpen/experiments.hpp"
#include "minpen/finite_duality.hpp"
#include "minpen/finite_penalty.hpp"
#include "minpen/penalty.hpp"

namespace py = pybind11;
using namespace minpen;

namespace {

PenaltySpec spec_by_name(const std::string& name) {
    if (name == "entropic") return PenaltySpec::entropic();
    if (name == "quadratic") return PenaltySpec::quadratic();
    throw std::invalid_argument("unknown penalty spec '" + name + "'");
}

FinitePenalty finite_penalty_by_name(const std::string& name,
                                     const FiniteSpace& space, double parameter) {
    if (name == "zero") return zero_penalty();
    if (name == "worst_case") return worst_case_penalty();
    if (name == "entropic") return entropic_penalty(space, parameter);
    if (name == "linear")
        return linear_penalty(space,
                              std::vector<double>(space.size(), parameter));
    throw std::invalid_argument("unknown finite penalty '" + name + "'");
}

py::dict estimate_dict(const MonteCarloEstimate& est) {
    py::dict d;
    d["mean"] = est.mean;
    d["se"] = est.se;
    d["n"] = est.n;
    return d;
}

}  // namespace

PYBIND11_MODULE(minpen, m) {
    m.doc() = "minimal penalties for convex risk measures: finite duality, "
              "Levy density processes, and the induced risk measures";

    py::class_<FiniteSpace>(m, "FiniteSpace")
        .def(py::init<std::vector<std::string>, std::vector<double>>(),
             py::arg("labels"), py::arg("weights"))
        .def_static("uniform", &FiniteSpace::uniform, py::arg("n"))
        .def_property_readonly("labels", &FiniteSpace::labels)
        .def_property_readonly("weights", &FiniteSpace::weights)
        .def("__len__", &FiniteSpace::size);

    py::class_<DensityVector>(m, "DensityVector")
        .def_static("from_probabilities", &DensityVector::from_probabilities,
                    py::arg("space"), py::arg("probabilities"))
        .def_static("uniform", &DensityVector::uniform, py::arg("space"))
        .def_property_readonly("values", &DensityVector::values);

    py::class_<FinitePenalty>(m, "FinitePenalty")
        .def_readonly("name", &FinitePenalty::name)
        .def("__call__",
             [](const FinitePenalty& p, const DensityVector& q) { return p(q); });

    m.def("finite_penalty", &finite_penalty_by_name, py::arg("name"),
          py::arg("space"), py::arg("parameter") = 0.0,
          "zero, worst_case, entropic (parameter = gamma), or linear "
          "(parameter = constant cost)");
    m.def("relative_entropy", &relative_entropy, py::arg("space"), py::arg("q"));

    m.def(
        "risk_from_penalty",
        [](const FiniteSpace& space, const FinitePenalty& penalty,
           const std::vector<double>& payoffs, int resolution, bool refine) {
            SimplexSearchOptions opts;
            opts.resolution = resolution;
            opts.refine = refine;
            return risk_from_penalty(space, penalty, Position(space, payoffs),
                                     opts);
        },
        py::arg("space"), py::arg("penalty"), py::arg("payoffs"),
        py::arg("resolution") = 24, py::arg("refine") = true,
        "sup_Q E_Q[-X] - psi(Q) over the simplex of P-absolutely continuous "
        "measures");

    m.def(
        "minimal_penalty",
        [](const FiniteSpace& space, const FinitePenalty& penalty,
           const DensityVector& q, int resolution, double bound) {
            SimplexSearchOptions opts;
            opts.resolution = resolution;
            const RiskEvaluator rho = penalty_risk_evaluator(space, penalty, opts);
            PositionSamplingPlan plan;
            plan.bound = bound;
            const MinimalPenaltyResult r = minimal_penalty(space, rho, q, plan);
            py::dict d;
            d["value"] = r.value;
            d["argmax"] = r.argmax;
            d["converged"] = r.converged;
            return d;
        },
        py::arg("space"), py::arg("penalty"), py::arg("q"),
        py::arg("resolution") = 24, py::arg("bound") = 4.0,
        "sup_X E_Q[-X] - rho(X) for the risk measure induced by the penalty");

    py::class_<JumpAtom>(m, "JumpAtom")
        .def(py::init<double, double>(), py::arg("size"), py::arg("rate"))
        .def_readonly("size", &JumpAtom::size)
        .def_readonly("rate", &JumpAtom::rate);

    py::class_<LevyTriplet>(m, "LevyTriplet")
        .def(py::init<double, bool, std::vector<JumpAtom>>(), py::arg("drift"),
             py::arg("brownian"), py::arg("atoms"))
        .def_property_readonly("drift", &LevyTriplet::drift)
        .def_property_readonly("has_brownian", &LevyTriplet::has_brownian)
        .def_property_readonly("total_rate", &LevyTriplet::total_rate);

    m.def(
        "martingale_check",
        [](const LevyTriplet& model, double theta0, double theta1, double t,
           std::size_t steps, std::size_t paths, std::uint64_t seed) {
            const auto theta =
                GirsanovCoefficients::constant(theta0, theta1, model, t);
            return estimate_dict(
                martingale_check(model, theta, t, steps, paths, RngStream{seed, 0}));
        },
        py::arg("model"), py::arg("theta0"), py::arg("theta1"), py::arg("t"),
        py::arg("steps") = 64, py::arg("paths") = 20000, py::arg("seed") = 1,
        "mean and standard error of the density terminal E_P[D_t]");

    m.def(
        "penalty_quadrature",
        [](const std::string& spec, const LevyTriplet& model, double theta0,
           double theta1, double horizon) {
            const auto theta =
                GirsanovCoefficients::constant(theta0, theta1, model, horizon);
            return penalty_quadrature(spec_by_name(spec), theta, model, horizon);
        },
        py::arg("spec"), py::arg("model"), py::arg("theta0"), py::arg("theta1"),
        py::arg("horizon") = 1.0);

    m.def(
        "penalty_value",
        [](const std::string& spec, const LevyTriplet& model, double theta0,
           double theta1, double horizon, std::size_t steps, std::size_t paths,
           std::uint64_t seed) {
            const auto theta =
                GirsanovCoefficients::constant(theta0, theta1, model, horizon);
            return estimate_dict(penalty_value(spec_by_name(spec), theta, model,
                                               horizon, steps, paths,
                                               RngStream{seed, 0}));
        },
        py::arg("spec"), py::arg("model"), py::arg("theta0"), py::arg("theta1"),
        py::arg("horizon") = 1.0, py::arg("steps") = 64, py::arg("paths") = 20000,
        py::arg("seed") = 1, "Monte Carlo route through the density process");

    m.def(
        "risk_measure",
        [](const LevyTriplet& model, const std::string& spec, double scale,
           double horizon, std::size_t steps, std::size_t paths,
           std::size_t budget, std::uint64_t seed) {
            RiskProblem problem{model,
                                horizon,
                                steps,
                                PathFunctional::scaled_brownian(scale),
                                spec_by_name(spec),
                                ThetaFamily{}};
            const RiskResult r =
                risk_measure(problem, budget, paths, RngStream{seed, 0});
            py::dict d;
            d["value"] = r.value;
            d["theta0"] = r.theta0;
            d["theta1"] = r.theta1;
            d["se"] = r.se;
            d["boundary"] = r.boundary;
            return d;
        },
        py::arg("model"), py::arg("spec"), py::arg("scale") = 0.5,
        py::arg("horizon") = 1.0, py::arg("steps") = 64, py::arg("paths") = 20000,
        py::arg("budget") = 4000, py::arg("seed") = 1,
        "sup over constant tilts of E_Q[-scale * W_T] - penalty(Q)");

    m.def(
        "run_config",
        [](const std::string& text) {
            const ExperimentOutput out = run_config_text(text);
            py::dict d;
            d["kind"] = out.kind;
            d["passed"] = out.all_passed();
            py::list checks;
            for (const CheckLine& c : out.checks)
                checks.append(
                    py::make_tuple(c.name, c.value, c.threshold, c.passed));
            d["checks"] = checks;
            py::dict tables;
            for (const CsvTable& t : out.tables)
                tables[py::str(t.filename)] = t.serialize();
            d["tables"] = tables;
            return d;
        },
        py::arg("config_json"),
        "run one experiment from a JSON config string; tables are returned as "
        "CSV text keyed by filename");

    py::register_exception<ConfigError>(m, "ConfigError");
}
