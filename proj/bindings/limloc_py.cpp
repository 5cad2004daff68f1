#include "limloc/analytics.hpp"
#include "limloc/constraints.hpp"
#include "limloc/excursions.hpp"
#include "limloc/local_time.hpp"
#include "limloc/path_engine.hpp"
#include "limloc/samplers.hpp"
#include "limloc/stats.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace limloc;

PYBIND11_MODULE(_limloc, m) {
    m.doc() = "Brownian paths with limited local time: generators, local-time "
              "estimators, conditioned samplers, and closed-form oracles.";

    py::class_<Seed>(m, "Seed")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("root") = 0,
             py::arg("stream") = 0)
        .def_readwrite("root", &Seed::root)
        .def_readwrite("stream", &Seed::stream);

    py::class_<Path>(m, "Path")
        .def_readonly("dt", &Path::dt)
        .def_readonly("origin", &Path::origin)
        .def_readonly("values", &Path::values)
        .def_property_readonly("horizon", &Path::horizon)
        .def("to_csv", &path_to_csv);

    py::class_<LocalTimeProfile>(m, "LocalTimeProfile")
        .def_readonly("dt", &LocalTimeProfile::dt)
        .def_readonly("values", &LocalTimeProfile::values)
        .def_readonly("bandwidth", &LocalTimeProfile::bandwidth)
        .def("final_value", &LocalTimeProfile::final_value)
        .def("at_time", &LocalTimeProfile::at_time)
        .def("to_csv", &profile_to_csv);

    py::enum_<Bessel3Method>(m, "Bessel3Method")
        .value("norm3d", Bessel3Method::norm3d)
        .value("euler", Bessel3Method::euler);

    m.def("gen_brownian", &gen_brownian, py::arg("seed"), py::arg("horizon"),
          py::arg("dt"));
    m.def("gen_bridge", &gen_bridge, py::arg("seed"), py::arg("duration"),
          py::arg("dt"));
    m.def("gen_bessel3", &gen_bessel3, py::arg("seed"), py::arg("horizon"),
          py::arg("dt"), py::arg("start") = 0.0,
          py::arg("method") = Bessel3Method::norm3d);
    m.def("gen_bessel3_bridge", &gen_bessel3_bridge, py::arg("seed"),
          py::arg("duration"), py::arg("dt"));

    m.def("occupation_estimate", &occupation_estimate, py::arg("path"),
          py::arg("epsilon"));
    m.def("excursion_count_estimate", &excursion_count_estimate, py::arg("path"),
          py::arg("delta"));
    m.def("inverse_local_time", &inverse_local_time, py::arg("profile"),
          py::arg("u"));
    m.def("negative_occupation", &negative_occupation, py::arg("path"));
    m.def("last_zero", &last_zero, py::arg("path"));
    m.def("default_bandwidth", &default_bandwidth, py::arg("dt"));

    py::class_<Excursion>(m, "Excursion")
        .def_readonly("level", &Excursion::level)
        .def_readonly("start", &Excursion::start)
        .def_readonly("duration", &Excursion::duration)
        .def_readonly("sign", &Excursion::sign)
        .def_readonly("samples", &Excursion::samples)
        .def("complete", &Excursion::complete);

    py::class_<ExcursionSet>(m, "ExcursionSet")
        .def_readonly("dt", &ExcursionSet::dt)
        .def_readonly("closure", &ExcursionSet::closure)
        .def_readonly("excursions", &ExcursionSet::excursions)
        .def("to_json", &excursion_set_to_json);

    m.def("extract", &extract, py::arg("path"), py::arg("profile"),
          py::arg("delta") = 0.0);
    m.def("nu_tail", &nu_tail, py::arg("t"));
    m.def("reconstruct", &reconstruct, py::arg("set"));
    m.def("sample_conditioned_excursion", &sample_conditioned_excursion,
          py::arg("seed"), py::arg("min_duration"), py::arg("horizon"),
          py::arg("dt"));

    py::class_<ConstraintSpec>(m, "ConstraintSpec")
        .def_static("constant", &ConstraintSpec::constant, py::arg("c"))
        .def_static("power_log", &ConstraintSpec::power_log, py::arg("gamma"))
        .def_static("table", &ConstraintSpec::table, py::arg("ts"), py::arg("fs"))
        .def_static("from_json", &ConstraintSpec::from_json)
        .def("__call__", &ConstraintSpec::operator())
        .def("to_json", &ConstraintSpec::to_json);

    py::enum_<IntegralClass>(m, "IntegralClass")
        .value("convergent", IntegralClass::convergent)
        .value("divergent", IntegralClass::divergent);

    py::class_<ClassifyResult>(m, "ClassifyResult")
        .def_readonly("verdict", &ClassifyResult::verdict)
        .def_readonly("symbolic", &ClassifyResult::symbolic)
        .def_readonly("integral", &ClassifyResult::integral)
        .def_readonly("partials", &ClassifyResult::partials);

    m.def("classify", &classify, py::arg("f"), py::arg("tol") = 1e-6);

    py::enum_<ConditionEvent>(m, "ConditionEvent")
        .value("E", ConditionEvent::E)
        .value("K", ConditionEvent::K)
        .value("Kprime", ConditionEvent::Kprime);

    py::class_<EventVerdict>(m, "EventVerdict")
        .def_readonly("holds", &EventVerdict::holds)
        .def_readonly("first_violation", &EventVerdict::first_violation);

    m.def("check_E", &check_E, py::arg("profile"), py::arg("f"), py::arg("t"));
    m.def("check_K", &check_K, py::arg("profile"), py::arg("f"), py::arg("t"));
    m.def("check_Kprime", &check_Kprime, py::arg("profile"), py::arg("f"),
          py::arg("n"));
    m.def("check_H", &check_H, py::arg("path"), py::arg("j"));

    py::class_<PathDiagnostics>(m, "PathDiagnostics")
        .def_readonly("local_time", &PathDiagnostics::local_time)
        .def_readonly("negative_time", &PathDiagnostics::negative_time)
        .def_readonly("final_value", &PathDiagnostics::final_value)
        .def_readonly("last_zero", &PathDiagnostics::last_zero);

    py::class_<ConditionedDraw>(m, "ConditionedDraw")
        .def_readonly("path", &ConditionedDraw::path)
        .def_readonly("profile", &ConditionedDraw::profile)
        .def_readonly("attempts", &ConditionedDraw::attempts)
        .def_readonly("event", &ConditionedDraw::event)
        .def_readonly("diagnostics", &ConditionedDraw::diagnostics)
        .def_readonly("bandwidth", &ConditionedDraw::bandwidth);

    py::class_<LimitDraw>(m, "LimitDraw")
        .def_readonly("path", &LimitDraw::path)
        .def_readonly("u", &LimitDraw::u)
        .def_readonly("switch_time", &LimitDraw::switch_time)
        .def_readonly("terminal_quantity", &LimitDraw::terminal_quantity)
        .def_readonly("terminal_sign", &LimitDraw::terminal_sign)
        .def_readonly("truncated", &LimitDraw::truncated);

    py::register_exception<RejectionBudgetError>(m, "RejectionBudgetError");

    m.def("reject_condition", &reject_condition, py::arg("seed"), py::arg("f"),
          py::arg("event"), py::arg("t"), py::arg("dt"), py::arg("max_attempts"),
          py::arg("epsilon") = 0.0,
          py::call_guard<py::gil_scoped_release>());
    m.def("limit_bounded_allowance", &limit_bounded_allowance, py::arg("seed"),
          py::arg("horizon"), py::arg("dt"), py::arg("epsilon") = 0.0,
          py::arg("search_horizon") = 0.0,
          py::call_guard<py::gil_scoped_release>());
    m.def("limit_negative_part", &limit_negative_part, py::arg("seed"),
          py::arg("horizon"), py::arg("dt"), py::arg("bridge_budget") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("sample_g", &sample_g, py::arg("seed"));
    m.def("g_from_uniform", &g_from_uniform, py::arg("v"));

    py::class_<ReflectionCouple>(m, "ReflectionCouple")
        .def_readonly("x", &ReflectionCouple::x)
        .def_readonly("z", &ReflectionCouple::z)
        .def_readonly("tau_couple", &ReflectionCouple::tau_couple);

    m.def("couple_reflect", &couple_reflect, py::arg("seed"), py::arg("x0"),
          py::arg("y0"), py::arg("horizon"), py::arg("dt"));

    m.def("prob_E_exact", &prob_E_exact, py::arg("t"), py::arg("c"));
    m.def("prob_Eprime", &prob_Eprime, py::arg("t"), py::arg("allowance"));
    m.def("hitting_density", &hitting_density, py::arg("x"), py::arg("t"));
    m.def("arcsine_cdf", &arcsine_cdf, py::arg("x"));
    m.def("g_tail", &g_tail, py::arg("A"));
    m.def("g_head", &g_head, py::arg("A"));
    m.def("normal_cdf", &normal_cdf, py::arg("x"));

    py::class_<KSResult>(m, "KSResult")
        .def_readonly("d", &KSResult::d)
        .def_readonly("n", &KSResult::n)
        .def_readonly("p_value", &KSResult::p_value)
        .def_readonly("reference", &KSResult::reference);

    m.def("ks_test",
          [](std::vector<double> sample, const std::function<double(double)>& cdf,
             const std::string& name) { return ks_test(std::move(sample), cdf, name); },
          py::arg("sample"), py::arg("cdf"), py::arg("reference_name") = "reference");
    m.def("ks_test_two_sample", &ks_test_two_sample, py::arg("a"), py::arg("b"));

    m.attr("__version__") = "0.1.0";
}
