// Python bindings for the main operations: profiles, exact tables, samplers,
// and the limit-theorem fits. Inputs are plain lists of (offset, prob) pairs;
// results come back as dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "excursion/constants.hpp"
#include "excursion/estimators.hpp"
#include "excursion/exact.hpp"
#include "excursion/fit.hpp"
#include "excursion/io.hpp"
#include "excursion/profile.hpp"

namespace py = pybind11;
using namespace excursion;

namespace {

LatticePmf make_pmf(const std::vector<std::pair<std::int64_t, double>>& entries) {
    return LatticePmf(entries);
}

py::dict report_dict(const EstimatorReport& r) {
    py::dict d;
    d["method"] = r.method;
    d["estimate"] = r.estimate;
    d["std_error"] = r.std_error;
    d["replicas"] = r.replicas;
    d["seed"] = r.seed;
    d["ci"] = py::make_tuple(r.ci_lo(), r.ci_hi());
    d["truncation_bracket"] = r.truncation_bracket;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact and asymptotic distribution of the area under a random-walk excursion";

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<NoRootError>(m, "NoRootError");
    py::register_exception<CapsError>(m, "CapsError");

    m.def(
        "validate",
        [](const std::vector<std::pair<std::int64_t, double>>& entries) {
            const LatticePmf pmf = make_pmf(entries);
            const ValidationReport r = validate(pmf);
            py::dict d;
            d["valid"] = r.valid;
            d["mean"] = r.mean;
            d["aperiodic"] = r.aperiodic;
            d["has_positive_offset"] = r.has_positive_offset;
            d["cramer_root_available"] = r.cramer_root_available;
            d["issues"] = r.issues;
            return d;
        },
        py::arg("pmf"));

    m.def(
        "mgf", [](const std::vector<std::pair<std::int64_t, double>>& e,
                  double t) { return mgf(make_pmf(e), t); },
        py::arg("pmf"), py::arg("t"));

    m.def(
        "tilt",
        [](const std::vector<std::pair<std::int64_t, double>>& e, double u) {
            return tilt(make_pmf(e), u).entries();
        },
        py::arg("pmf"), py::arg("u"));

    m.def(
        "tilt_schedule",
        [](double lambda, int n) { return tilt_schedule(lambda, n).values; },
        py::arg("lambda_"), py::arg("n"));

    py::class_<CramerProfile>(m, "Profile")
        .def(py::init([](const std::vector<std::pair<std::int64_t, double>>& e) {
                 return build_profile(make_pmf(e));
             }),
             py::arg("pmf"))
        .def_readonly("lambda_", &CramerProfile::lambda)
        .def_readonly("I", &CramerProfile::I)
        .def_readonly("theta", &CramerProfile::theta)
        .def_readonly("V", &CramerProfile::V)
        .def_readonly("v_cond", &CramerProfile::v_cond)
        .def_readonly("delta2", &CramerProfile::delta2)
        .def("psi", &CramerProfile::psi, py::arg("u"))
        .def("sigma2", &CramerProfile::sigma2, py::arg("u"))
        .def("saddle",
             [](const CramerProfile& p, double x) {
                 const SaddleInfo s = saddle(p, x);
                 return py::make_tuple(s.t0, s.n_minus, s.n_plus);
             })
        .def("chebyshev_bound",
             [](const CramerProfile& p, double x) { return chebyshev_bound(p, x).bound; })
        .def("euler_gap", [](const CramerProfile& p, int n) { return euler_gap(p, n); })
        .def("assembled_constants", [](const CramerProfile& p) {
            const LatticePmf tilted = tilt(p.pmf, p.lambda);
            const double q0 = survival_dp(tilted, 0, 400).value;
            std::vector<double> qhat;
            for (std::int64_t y = 1; y <= -p.pmf.min_offset(); ++y) {
                qhat.push_back(survival_dp(p.pmf.negated(), y, 400).value);
            }
            const ConstantAssembly a = assemble_constants(p, q0, qhat);
            py::dict d;
            d["q0"] = a.q0;
            d["qhat"] = a.qhat_table;
            d["Q"] = a.Q;
            d["kappa"] = a.kappa;
            return d;
        });

    py::class_<ExcursionTable>(m, "ExcursionTable")
        .def(py::init([](const std::vector<std::pair<std::int64_t, double>>& e,
                         std::int64_t a_max, std::int64_t s_max) {
                 DpCaps caps;
                 caps.a_max = a_max;
                 caps.s_max = s_max;
                 return excursion_law(make_pmf(e), caps);
             }),
             py::arg("pmf"), py::arg("a_max"), py::arg("s_max") = 96)
        .def("marginal", [](const ExcursionTable& t) { return area_marginal(t); })
        .def("tail",
             [](const ExcursionTable& t, std::int64_t x) {
                 const TailBracket b = area_tail(t, x);
                 return py::make_tuple(b.lower, b.upper);
             })
        .def("stopped", &ExcursionTable::stopped, py::arg("n"), py::arg("a"))
        .def("conditional_tau",
             [](const ExcursionTable& t, std::int64_t x) {
                 const ConditionalTau c = conditional_tau(t, x);
                 py::dict d;
                 d["k_min"] = c.k_min;
                 d["prob"] = c.prob;
                 d["mean"] = c.mean();
                 d["variance"] = c.variance();
                 return d;
             })
        .def_property_readonly("conservation_residual", &ExcursionTable::conservation_residual)
        .def_property_readonly("overflow_area", &ExcursionTable::overflow_area)
        .def_property_readonly("rows", &ExcursionTable::rows);

    m.def(
        "change_of_measure_max_gap",
        [](const std::vector<std::pair<std::int64_t, double>>& e, int n, double mass_floor) {
            const CramerProfile prof = build_profile(make_pmf(e));
            return MeasureChangeCheck(prof, n).max_relative_gap(mass_floor);
        },
        py::arg("pmf"), py::arg("n"), py::arg("mass_floor") = 1e-14);

    m.def(
        "tau_law",
        [](const std::vector<std::pair<std::int64_t, double>>& e, int n_max,
           std::int64_t s_max) {
            const TauLaw law = tau_law(make_pmf(e), n_max, s_max);
            py::dict d;
            d["prob"] = law.prob;
            d["alive_mass"] = law.alive_mass;
            return d;
        },
        py::arg("pmf"), py::arg("n_max"), py::arg("s_max") = 512);

    m.def(
        "naive_excursion",
        [](const std::vector<std::pair<std::int64_t, double>>& e, std::int64_t x,
           std::int64_t paths, std::uint64_t seed, int replicas) {
            const std::vector<NaiveQuery> q = {{NaiveQuery::Kind::PointMass, x}};
            return report_dict(naive_excursion(make_pmf(e), q, paths, seed, replicas)[0]);
        },
        py::arg("pmf"), py::arg("x"), py::arg("paths") = 100'000, py::arg("seed") = 1,
        py::arg("replicas") = 32);

    m.def(
        "is_local",
        [](const CramerProfile& prof, std::int64_t x, std::int64_t paths_per_n,
           std::uint64_t seed, int replicas, double window_sigmas) {
            const auto window = default_window(prof, x, window_sigmas);
            return report_dict(is_local(prof, x, window, paths_per_n, seed, replicas));
        },
        py::arg("profile"), py::arg("x"), py::arg("paths_per_n") = 400, py::arg("seed") = 1,
        py::arg("replicas") = 16, py::arg("window_sigmas") = 8.0);

    m.def(
        "is_tail",
        [](const CramerProfile& prof, std::int64_t x, std::int64_t paths_per_n,
           std::uint64_t seed, int replicas, double window_sigmas) {
            const auto window = default_window(prof, x, window_sigmas);
            return report_dict(is_tail(prof, x, window, paths_per_n, seed, replicas));
        },
        py::arg("profile"), py::arg("x"), py::arg("paths_per_n") = 400, py::arg("seed") = 1,
        py::arg("replicas") = 16, py::arg("window_sigmas") = 8.0);

    m.def(
        "survival_q",
        [](const std::vector<std::pair<std::int64_t, double>>& step, std::int64_t a, int horizon,
           std::int64_t paths, std::uint64_t seed, int replicas) {
            return report_dict(survival_q(make_pmf(step), a, horizon, paths, seed, replicas));
        },
        py::arg("step"), py::arg("a"), py::arg("horizon") = 300, py::arg("paths") = 100'000,
        py::arg("seed") = 1, py::arg("replicas") = 32);

    m.def(
        "kappa_fit",
        [](const ExcursionTable& table,
           const std::vector<std::pair<std::int64_t, double>>& e) {
            const KappaFit k = kappa_fit(table, build_profile(make_pmf(e)));
            py::dict d;
            d["kappa_hat"] = k.kappa_hat;
            d["top_decade_variation"] = k.top_decade_variation;
            return d;
        },
        py::arg("table"), py::arg("pmf"));

    m.def(
        "zero_mean_check",
        [](const std::vector<std::pair<std::int64_t, double>>& e, std::int64_t a_max,
           std::int64_t paths, std::uint64_t seed) {
            ZeroMeanOptions opt;
            opt.a_max = a_max;
            opt.s_max = 160;
            opt.tau_n_max = 2048;
            opt.tau_s_max = 512;
            opt.cond_n = 150;
            opt.cond_paths = paths;
            opt.seed = seed;
            const ZeroMeanCheck z = zero_mean_check(make_pmf(e), opt);
            py::dict d;
            d["C0"] = z.c0;
            d["predicted"] = z.predicted;
            d["predicted_ci"] = z.predicted_ci;
            d["observed"] = z.observed;
            d["pass"] = z.pass();
            return d;
        },
        py::arg("pmf"), py::arg("a_max") = 1200, py::arg("paths") = 4'000'000,
        py::arg("seed") = 911);

    m.attr("__version__") = "1.0.0";
}
