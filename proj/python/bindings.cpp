#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sifa/checker.hpp"
#include "sifa/dependency.hpp"
#include "sifa/fault.hpp"
#include "sifa/formula.hpp"
#include "sifa/netlist.hpp"
#include "sifa/oracle.hpp"
#include "sifa/report.hpp"
#include "sifa/sat.hpp"

namespace py = pybind11;
using namespace sifa;

namespace {

FaultSite site_or_throw(const std::string& id)
{
    auto site = FaultSite::parse(id);
    if (!site)
        throw std::invalid_argument("malformed site id '" + id + "' (expected input:<id> or gate:<id>)");
    return *site;
}

SolverBudget budget_from(std::uint64_t decisions)
{
    return decisions == 0 ? SolverBudget::unlimited() : SolverBudget::decisions(decisions);
}

py::dict leak_dict(const oracle::SecretLeak& l)
{
    py::dict d;
    d["secret"] = l.secret;
    d["dependent"] = l.dependent;
    d["with_f"] = l.products.with_f;
    d["without_f"] = l.products.without_f;
    return d;
}

py::dict verdict_dict(const Verdict& v)
{
    py::dict d;
    d["verdict"] = std::string(to_string(v.kind));
    d["witness"] = v.describe();
    d["subset"] = v.subset;
    if (v.secure())
        d["secure_by"] = std::string(to_string(v.witness));
    if (!v.hiding_var.empty())
        d["hiding_var"] = v.hiding_var;
    return d;
}

py::dict sets_dict(const AnalysisSets& s)
{
    py::dict d;
    d["ess"] = s.ess;
    d["fact"] = s.fact;
    d["fnl_ess"] = s.fnl_ess;
    d["fnl"] = s.fnl;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "SIFA resistance checks for masked circuits with redundant fault detection";
    m.attr("__version__") = kToolVersion;

    py::register_exception<ParseError>(m, "NetlistError", PyExc_ValueError);
    py::register_exception<SolverUndecided>(m, "SolverUndecided", PyExc_RuntimeError);
    py::register_exception<oracle::OracleRefusal>(m, "OracleRefusal", PyExc_RuntimeError);

    py::class_<Formula>(m, "Formula")
        .def_static("var", &Formula::var, py::arg("name"))
        .def_static("constant", &Formula::constant, py::arg("value"))
        .def("__and__", [](const Formula& a, const Formula& b) { return a & b; })
        .def("__or__", [](const Formula& a, const Formula& b) { return a | b; })
        .def("__xor__", [](const Formula& a, const Formula& b) { return a ^ b; })
        .def("__invert__", [](const Formula& a) { return !a; })
        .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; }, "Structural equality")
        .def("__hash__", &Formula::hash)
        .def("__str__", [](const Formula& f) { return to_string(f); })
        .def("__repr__", [](const Formula& f) { return "Formula(" + to_string(f) + ")"; })
        .def("free_vars", [](const Formula& f) { return free_vars(f); })
        .def("evaluate", [](const Formula& f, const Assignment& a) { return evaluate(f, a); }, py::arg("assignment"))
        .def("substitute", [](const Formula& f, const Assignment& a) { return substitute(f, a); },
             py::arg("assignment"))
        .def("dag_size", [](const Formula& f) { return dag_size(f); });

    m.def("var", &Formula::var, py::arg("name"));
    m.def("xor_all", &xor_all, py::arg("formulas"));

    m.def(
        "is_satisfiable",
        [](const Formula& f, std::uint64_t budget) -> py::object {
            auto v = is_satisfiable(f, budget_from(budget));
            if (v.status == SatStatus::Undecided)
                return py::none();
            if (v.unsat())
                return py::bool_(false);
            return py::cast(v.model);
        },
        py::arg("f"), py::arg("budget") = 0,
        "False if unsatisfiable, a model dict if satisfiable, None if the budget ran out");
    m.def("is_tautology", [](const Formula& f, std::uint64_t budget) { return is_tautology(f, budget_from(budget)); },
          py::arg("f"), py::arg("budget") = 0);

    m.def("essential_vars", [](const Formula& f) { return DependencyAnalyzer().essential_vars(f); }, py::arg("f"));
    m.def("factor_vars", [](const Formula& f) { return DependencyAnalyzer().factor_vars(f); }, py::arg("f"));
    m.def("analyze", [](const Formula& f) { return sets_dict(DependencyAnalyzer().analyze(f)); }, py::arg("f"));

    m.def("weight", [](const Formula& f, const std::vector<VarId>& u) { return oracle::weight(f, u).weight; },
          py::arg("f"), py::arg("universe"));
    m.def("is_balanced", &oracle::is_balanced, py::arg("f"), py::arg("universe"));
    m.def(
        "dependence_products",
        [](const Formula& f, const Formula& g, const std::vector<VarId>& u) {
            auto p = oracle::dependence_products(f, g, u);
            return py::make_tuple(p.with_f, p.without_f);
        },
        py::arg("f"), py::arg("g"), py::arg("universe"));
    m.def("statistically_dependent", &oracle::statistically_dependent, py::arg("f"), py::arg("g"),
          py::arg("universe"));

    py::class_<CircuitNetlist>(m, "Circuit")
        .def_readonly("name", &CircuitNetlist::name)
        .def_readonly("outputs", &CircuitNetlist::outputs)
        .def_property_readonly("inputs", &CircuitNetlist::input_ids)
        .def_property_readonly("masks", &CircuitNetlist::mask_ids)
        .def_property_readonly("gate_count", [](const CircuitNetlist& c) { return c.gates.size(); })
        .def_property_readonly("secrets",
                               [](const CircuitNetlist& c) {
                                   py::dict d;
                                   for (const auto& s : secrets_of(c))
                                       d[py::str(s.name)] = s.shares;
                                   return d;
                               })
        .def("serialize", [](const CircuitNetlist& c) { return serialize_netlist(c); })
        .def("outputs_formulas", [](const CircuitNetlist& c) { return symbolic_outputs(c); })
        .def("__repr__", [](const CircuitNetlist& c) {
            return "Circuit(" + c.name + ", " + std::to_string(c.inputs.size()) + " inputs, " +
                   std::to_string(c.gates.size()) + " gates)";
        });

    m.def("parse_netlist", [](const std::string& text) { return parse_netlist(text); }, py::arg("text"));
    m.def("builtin_circuit", [](const std::string& name) { return builtin_circuit(name); }, py::arg("name"));
    m.def("builtin_circuit_names", &builtin_circuit_names);

    m.def(
        "fault_sites",
        [](const CircuitNetlist& c, bool include_inputs) {
            std::vector<std::string> ids;
            for (const auto& s : enumerate_fault_sites(c, include_inputs))
                ids.push_back(s.id());
            return ids;
        },
        py::arg("circuit"), py::arg("include_inputs") = true);

    m.def(
        "detection",
        [](const CircuitNetlist& c, const std::string& site) {
            auto d = build_detection(c, site_or_throw(site));
            py::dict out;
            out["site"] = d.site.id();
            out["outputs"] = d.output_names;
            out["deltas"] = d.deltas;
            out["delta"] = d.delta;
            return out;
        },
        py::arg("circuit"), py::arg("site"));

    m.def(
        "check",
        [](const CircuitNetlist& c, const std::string& site, std::uint64_t budget) {
            CheckOptions o;
            o.budget = budget_from(budget);
            auto d = build_detection(c, site_or_throw(site));
            CheckResult r;
            {
                py::gil_scoped_release release;
                r = check_fault(d, o);
            }
            return verdict_dict(r.verdict);
        },
        py::arg("circuit"), py::arg("site"), py::arg("budget") = 0);

    m.def(
        "confirm_leak",
        [](const CircuitNetlist& c, const std::string& site) {
            py::list out;
            for (const auto& l : oracle::confirm_leak(build_detection(c, site_or_throw(site))))
                out.append(leak_dict(l));
            return out;
        },
        py::arg("circuit"), py::arg("site"));

    m.def(
        "verify",
        [](const CircuitNetlist& c, unsigned jobs, bool oracle, bool fault_inputs, std::uint64_t budget) {
            VerifyOptions o;
            o.jobs = std::max(1U, jobs);
            o.oracle = oracle;
            o.fault_inputs = fault_inputs;
            o.budget = budget_from(budget);
            VerdictReport r;
            {
                py::gil_scoped_release release;
                r = run_verify(c, o);
            }
            py::list sites;
            for (const auto& s : r.sites) {
                py::dict d = verdict_dict(s.verdict);
                d["site"] = s.site.id();
                d["verdict"] = s.verdict_label();
                py::list leaks;
                for (const auto& l : s.leaks)
                    leaks.append(leak_dict(l));
                d["leaks"] = leaks;
                sites.append(d);
            }
            py::dict out;
            out["circuit"] = r.circuit;
            out["sites"] = sites;
            out["secure"] = r.secure;
            out["unknown"] = r.unknown;
            out["incomplete"] = r.incomplete;
            out["exit_code"] = r.exit_code();
            return out;
        },
        py::arg("circuit"), py::arg("jobs") = 1, py::arg("oracle") = false, py::arg("fault_inputs") = true,
        py::arg("budget") = 0);

    m.def(
        "report_json",
        [](const CircuitNetlist& c, unsigned jobs, bool oracle) {
            VerifyOptions o;
            o.jobs = std::max(1U, jobs);
            o.oracle = oracle;
            py::gil_scoped_release release;
            return report_json(run_verify(c, o));
        },
        py::arg("circuit"), py::arg("jobs") = 1, py::arg("oracle") = false);

    m.def(
        "explain",
        [](const CircuitNetlist& c, const std::string& site, bool oracle) {
            VerifyOptions o;
            o.oracle = oracle;
            return explain_site(c, site_or_throw(site), o).text;
        },
        py::arg("circuit"), py::arg("site"), py::arg("oracle") = false);
}
