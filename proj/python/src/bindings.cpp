#include "spiraldim/boxdim.hpp"
#include "spiraldim/cli.hpp"
#include "spiraldim/damping.hpp"
#include "spiraldim/errors.hpp"
#include "spiraldim/ode_sim.hpp"
#include "spiraldim/polar_curve.hpp"
#include "spiraldim/report_io.hpp"
#include "spiraldim/spiral_gen.hpp"
#include "spiraldim/theorems.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace spiraldim;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::dict profile_dict(const SausageProfile& p) {
    std::vector<double> eps, area;
    for (const auto& e : p.entries) {
        eps.push_back(e.epsilon);
        area.push_back(e.area);
    }
    py::dict d;
    d["epsilon"] = to_array(eps);
    d["area"] = to_array(area);
    d["method"] = p.entries.empty() ? std::string() : method_name(p.entries.front().method);
    d["nucleus_radius"] = p.nucleus_radius;
    return d;
}

SausageProfile profile_from(const std::vector<double>& eps, const std::vector<double>& area, Method method) {
    if (eps.size() != area.size()) {
        throw DomainError("epsilon and area must have the same length");
    }
    SausageProfile p;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        p.entries.push_back({eps[i], area[i], method});
    }
    return p;
}

} // namespace

PYBIND11_MODULE(_spiraldim, m) {
    m.doc() = "Box-counting dimension of spiral trajectories of damped linear oscillators.";

    auto base = py::register_exception<Error>(m, "SpiralDimError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<NotSpiralError>(m, "NotSpiralError", base.ptr());
    py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
    py::register_exception<FitDegenerateError>(m, "FitDegenerateError", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());

    py::enum_<Method>(m, "Method")
        .value("SausageGrid", Method::SausageGrid)
        .value("BoxCount", Method::BoxCount);
    py::enum_<WindowPolicy>(m, "WindowPolicy")
        .value("FullRange", WindowPolicy::FullRange)
        .value("AutoPlateau", WindowPolicy::AutoPlateau);
    py::enum_<FitModel>(m, "FitModel")
        .value("LogLinear", FitModel::LogLinear)
        .value("HeadCorrected", FitModel::HeadCorrected);

    py::class_<DampingSpec>(m, "DampingSpec")
        .def_static("power_law", &DampingSpec::power_law, py::arg("lam"), py::arg("gamma"), py::arg("t0") = 1.0)
        .def_static("bessel", &DampingSpec::bessel, py::arg("mu"), py::arg("nu"), py::arg("t0") = 1.0)
        .def_static(
            "sampled",
            [](const std::vector<double>& t, const std::vector<double>& h) {
                if (t.size() != h.size()) {
                    throw DomainError("t and h must have the same length");
                }
                std::vector<Knot> knots;
                for (std::size_t i = 0; i < t.size(); ++i) {
                    knots.push_back({t[i], h[i]});
                }
                return DampingSpec::sampled(std::move(knots));
            },
            py::arg("t"), py::arg("h"))
        .def_property_readonly("t0", &DampingSpec::t0)
        .def("h", [](const DampingSpec& s, double t) { return eval_h(s, t); })
        .def("H", [](const DampingSpec& s, double t) { return eval_H(s, t); })
        .def("__repr__", &DampingSpec::describe);

    m.def(
        "fit_alpha",
        [](const DampingSpec& s, double t_lo, double t_hi) {
            const AsymptoticFit f = fit_alpha(s, t_lo, t_hi);
            return py::dict(py::arg("alpha") = f.alpha, py::arg("offset") = f.offset,
                            py::arg("residual_sup") = f.residual_sup);
        },
        py::arg("spec"), py::arg("t_lo"), py::arg("t_hi"));

    py::class_<PolarCurve>(m, "PolarCurve")
        .def(py::init([](const std::vector<double>& phi, const std::vector<double>& f) {
                 return PolarCurve(phi, f, "python");
             }),
             py::arg("phi"), py::arg("f"))
        .def_property_readonly("phi", [](const PolarCurve& c) { return to_array(c.phi()); })
        .def_property_readonly("f", [](const PolarCurve& c) { return to_array(c.f()); })
        .def_property_readonly("monotone_certified", &PolarCurve::monotone_certified)
        .def("points", [](const PolarCurve& c) {
            const auto pts = c.points();
            py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
            auto v = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < pts.size(); ++i) {
                v(i, 0) = pts[i].x;
                v(i, 1) = pts[i].y;
            }
            return out;
        })
        .def("arc_length", [](const PolarCurve& c, double a, double b) { return arc_length(c, a, b); })
        .def("__len__", &PolarCurve::size);

    m.def(
        "simulate",
        [](const DampingSpec& damping, double t_end, double x0, double y0, double rtol, double atol) {
            const Trajectory traj =
                integrate(SystemSpec::damped(damping), {damping.t0(), x0, y0}, t_end, {rtol, atol});
            std::vector<double> t, x, y;
            for (const auto& s : traj.samples) {
                t.push_back(s.t);
                x.push_back(s.x);
                y.push_back(s.y);
            }
            return py::make_tuple(to_array(t), to_array(x), to_array(y));
        },
        py::arg("damping"), py::arg("t_end"), py::arg("x0") = 1.0, py::arg("y0") = 0.0, py::arg("rtol") = 1e-9,
        py::arg("atol") = 1e-12, "Integrate x' = y, y' = -x - h(t) y from t0; returns (t, x, y) arrays.");

    m.def(
        "trajectory_curve",
        [](const DampingSpec& damping, double t_end, double x0, double y0) {
            const Trajectory traj = integrate(SystemSpec::damped(damping), {damping.t0(), x0, y0}, t_end);
            return to_polar(traj);
        },
        py::arg("damping"), py::arg("t_end"), py::arg("x0") = 1.0, py::arg("y0") = 0.0,
        "Normal-form curve f(phi) of the certified tail of a damped-oscillator trajectory.");

    m.def(
        "power_spiral",
        [](double alpha, double phi1, double phi2, double step) {
            return generate(SpiralSpec(PowerSpiral{alpha}, phi1, phi2), step);
        },
        py::arg("alpha"), py::arg("phi1"), py::arg("phi2"), py::arg("step") = kDefaultPolarStep);
    m.def(
        "exp_spiral",
        [](double rate, double phi1, double phi2, double step) {
            return generate(SpiralSpec(ExpSpiral{rate}, phi1, phi2), step);
        },
        py::arg("rate"), py::arg("phi1"), py::arg("phi2"), py::arg("step") = kDefaultPolarStep);

    m.def(
        "sausage_area",
        [](const PolarCurve& c, double eps, double grid_factor, std::optional<double> nucleus) {
            return sausage_area(c, eps, grid_factor, nucleus);
        },
        py::arg("curve"), py::arg("eps"), py::arg("grid_factor") = kDefaultGridFactor,
        py::arg("nucleus_radius") = py::none());
    m.def(
        "box_count",
        [](const PolarCurve& c, double eps, std::optional<double> nucleus) { return box_count(c, eps, nucleus); },
        py::arg("curve"), py::arg("eps"), py::arg("nucleus_radius") = py::none());
    m.def("epsilon_ladder", &epsilon_ladder, py::arg("eps_max"), py::arg("eps_min"));
    m.def(
        "build_profile",
        [](const PolarCurve& c, double eps_max, double eps_min, Method method) {
            return profile_dict(build_profile(c, eps_max, eps_min, method));
        },
        py::arg("curve"), py::arg("eps_max"), py::arg("eps_min"), py::arg("method") = Method::SausageGrid);

    m.def(
        "fit_dimension",
        [](const std::vector<double>& eps, const std::vector<double>& area, Method method, WindowPolicy policy,
           FitModel model) {
            const DimensionReport r = fit_dimension(profile_from(eps, area, method), policy, model);
            return py::dict(py::arg("dim_estimate") = r.dim_estimate, py::arg("raw_dimension") = r.raw_dimension,
                            py::arg("stderr") = r.std_error, py::arg("eps_min") = r.eps_min,
                            py::arg("eps_max") = r.eps_max, py::arg("r_squared") = r.r_squared,
                            py::arg("log_linear_dim") = r.log_linear_dimension);
        },
        py::arg("epsilon"), py::arg("area"), py::arg("method") = Method::SausageGrid,
        py::arg("policy") = WindowPolicy::AutoPlateau, py::arg("model") = FitModel::HeadCorrected);

    m.def(
        "estimate_dimension",
        [](const PolarCurve& c, double eps_max, std::optional<double> eps_min, Method method, FitModel model) {
            const DimensionReport r =
                estimate_curve_dimension(c, eps_max, eps_min, method, WindowPolicy::AutoPlateau, model);
            return dimension_report_json(r);
        },
        py::arg("curve"), py::arg("eps_max") = 0.1, py::arg("eps_min") = py::none(),
        py::arg("method") = Method::SausageGrid, py::arg("model") = FitModel::HeadCorrected,
        "Profile and fit a curve; returns the report as a JSON string.");

    m.def(
        "predict_dimension",
        [](const DampingSpec& s, double t_max) {
            const auto [lo, hi] = default_fit_window(s, t_max);
            return criterion_report_json(predict_dimension(s, fit_alpha(s, lo, hi)));
        },
        py::arg("spec"), py::arg("t_max") = 1e5, "Dimension predicted from h(t); JSON criterion report.");
    m.def(
        "classify_rectifiability",
        [](const DampingSpec& s, double t_max) { return criterion_report_json(classify_rectifiability(s, t_max)); },
        py::arg("spec"), py::arg("t_max") = 1e5, "Rectifiability verdict; JSON criterion report.");
    m.def(
        "check_spiral_criterion",
        [](const PolarCurve& c, double alpha) { return criterion_report_json(check_spiral_criterion(c, alpha)); },
        py::arg("curve"), py::arg("alpha"));
    m.def(
        "check_derivative_criterion",
        [](const PolarCurve& c, double alpha) { return criterion_report_json(check_derivative_criterion(c, alpha)); },
        py::arg("curve"), py::arg("alpha"));

    m.def(
        "reproduce_table",
        [](double t_end) {
            TableOptions opts;
            opts.t_end = t_end;
            return table_csv(reproduce_table(opts));
        },
        py::arg("t_end") = 1e5, "The six-row dimension table as CSV text.");
}
