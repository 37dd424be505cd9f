// Prints one [PASS]/[FAIL] line per acceptance criterion; exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "cli_runner.hpp"
#include "random_formula.hpp"
#include "sifa/checker.hpp"
#include "sifa/oracle.hpp"
#include "sifa/report.hpp"
#include "sifa/sat.hpp"

using namespace sifa;
using sifa::testing::FormulaGen;
using sifa::testing::run_cli;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail)
{
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "AC" << n << " " << what << ": " << detail << std::endl;
    if (!ok)
        ++failures;
}

Formula v(const char* name) { return Formula::var(name); }

bool secret_dependent(const std::vector<oracle::SecretLeak>& leaks, const std::string& name)
{
    return std::any_of(leaks.begin(), leaks.end(),
                       [&](const oracle::SecretLeak& l) { return l.secret == name && l.dependent; });
}

void chi3_secure()
{
    auto start = std::chrono::steady_clock::now();
    VerifyOptions o;
    o.jobs = 1;
    auto r = run_verify(builtin_circuit("chi3"), o);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto cli = run_cli("verify --builtin chi3 --jobs 1");
    bool ok = r.sites.size() == 39 && r.secure == 39 && secs < 10.0 && cli.exit_code == 0;
    std::ostringstream d;
    d << r.secure << "/" << r.sites.size() << " secure in " << secs << " s single-threaded, cli exit "
      << cli.exit_code;
    report(1, ok, "chi3 secure at every site", d.str());
}

void chi3_reuse_variants()
{
    const std::pair<const char*, const char*> cases[] = {
        {"chi3_reuse_b0", "c"}, {"chi3_reuse_c0", "a"}, {"chi3_reuse_a0", "b"}};
    bool ok = true;
    std::ostringstream d;
    for (const auto& [name, secret] : cases) {
        VerifyOptions o;
        o.jobs = 2;
        o.oracle = true;
        auto r = run_verify(builtin_circuit(name), o);
        std::vector<std::string> unknown;
        bool dependent = false;
        for (const auto& s : r.sites) {
            if (s.verdict.kind != VerdictKind::Secure)
                unknown.push_back(s.site.id());
            if (s.site.id() == "gate:v0")
                dependent = s.confirmed_leak && secret_dependent(s.leaks, secret);
        }
        int code = run_cli(std::string("verify --builtin ") + name + " --oracle").exit_code;
        bool this_ok = unknown == std::vector<std::string>{"gate:v0"} && dependent && code == 1;
        ok = ok && this_ok;
        d << name << ": non-secure {";
        for (std::size_t i = 0; i < unknown.size(); ++i)
            d << (i ? "," : "") << unknown[i];
        d << "}, " << secret << (dependent ? " dependent" : " NOT dependent") << ", exit " << code << "; ";
    }
    report(2, ok, "reuse variants flag only the shared inverter", d.str());
}

void fig2()
{
    auto c = builtin_circuit("fig2_toy");
    auto d = build_detection(c, *FaultSite::parse("input:a0"));
    bool equivalent = is_tautology(!(d.delta ^ (v("b0") | v("b1") | v("c1"))));
    auto leaks = oracle::confirm_leak(d);
    bool b = secret_dependent(leaks, "b");
    report(3, equivalent && b, "fig2_toy fault at a0",
           std::string("delta == b0 | b1 | c1 ") + (equivalent ? "proven" : "NOT proven") + ", secret b " +
               (b ? "dependent" : "independent"));
}

void preliminaries_example()
{
    const std::vector<VarId> abc{"a", "b", "c"};
    auto f = v("a") & v("b");
    auto p = oracle::dependence_products(f, (!v("a")) | v("c"), abc);
    auto q = oracle::dependence_products(f, v("b") ^ v("c"), abc);
    bool ok = p.with_f == 6 && p.without_f == 10 && p.dependent() && q.with_f == 6 && q.without_f == 6 &&
              !q.dependent();
    std::ostringstream d;
    d << "(a&b, !a|c) " << p.with_f << " vs " << p.without_f << "; (a&b, b^c) " << q.with_f << " vs "
      << q.without_f;
    report(4, ok, "dependence products", d.str());
}

void two_output_example()
{
    DetectionInstance d;
    d.site = {FaultSite::Location::Gate, "example"};
    d.output_names = {"o0", "o1"};
    d.deltas = {v("x") ^ v("s0"), v("y") ^ v("s1")};
    d.delta = or_all(d.deltas);
    d.masks = {"x", "y"};
    d.secrets = {{"s", {"s0", "s1"}}};
    d.inputs = {"x", "y", "s0", "s1"};
    auto r = check_fault(d);
    bool complete = r.trace.complete.size() == 1;
    bool no_fact = r.trace.delta_sets.fact.empty();
    bool sweep = r.verdict.secure() && r.verdict.witness == SecureWitness::SubsetSweepPassed;
    auto p = oracle::dependence_products(d.delta, v("s0") ^ v("s1"), d.inputs);
    bool ok = complete && no_fact && sweep && p.with_f == 24 && p.without_f == 24;
    std::ostringstream s;
    s << "incompleteness " << (complete ? "fails" : "holds") << ", fact(delta) "
      << (no_fact ? "empty" : "nonempty") << ", verdict " << to_string(r.verdict.kind) << " via "
      << r.verdict.describe() << ", oracle " << p.with_f << " = " << p.without_f;
    report(5, ok, "masked two-output example", s.str());
}

void property_suite()
{
    FormulaGen gen(20240601, 6);
    int formulas = 0;
    int ess_fact_mismatch = 0;
    int balance = 0;
    int difference = 0;
    int factorization = 0;
    int approximation = 0;
    std::vector<VarId> with_x = gen.names();
    with_x.push_back("x");
    for (int round = 0; round < 1200; ++round) {
        gen.reset_pool();
        Formula f = gen.make(2 + round % 5);
        ++formulas;
        DependencyAnalyzer an;
        if (an.essential_vars(f) != oracle::essential_vars(f) || an.factor_vars(f) != oracle::factor_vars(f))
            ++ess_fact_mismatch;

        // x ^ g is balanced for x outside g
        if (!oracle::is_balanced(Formula::var("x") ^ f, with_x))
            ++balance;

        // for balanced f, independence iff the difference is balanced
        gen.reset_pool();
        Formula g = gen.make(4);
        Formula bal = Formula::var("x") ^ f;
        if (oracle::statistically_dependent(bal, g, with_x) == oracle::is_balanced(bal ^ g, with_x))
            ++difference;

        // factorization test matches the x ^ h decomposition, both directions
        for (const auto& y : gen.names()) {
            bool test = an.is_factor(f, y);
            Formula h = substitute(f, y, false);
            bool decomposes = oracle::equivalent(f, Formula::var(y) ^ h) && !free_vars(h).contains(y);
            if (test != decomposes)
                ++factorization;
        }

        // approximations of xor-combinations of 2-4 terms
        std::size_t n = 2 + static_cast<std::size_t>(round % 3);
        std::vector<Formula> terms;
        std::vector<AnalysisSets> members;
        for (std::size_t i = 0; i < n; ++i) {
            gen.reset_pool();
            Formula t = gen.pick(2) ? (gen.var() ^ gen.make(3)) : gen.make(4);
            terms.push_back(t);
            members.push_back(an.analyze(t));
        }
        Formula phi = xor_all(terms);
        VarSet fact = oracle::factor_vars(phi);
        VarSet ess = oracle::essential_vars(phi);
        VarSet lo = xfact(members);
        VarSet hi = xess(members);
        if (!std::includes(fact.begin(), fact.end(), lo.begin(), lo.end()) ||
            !std::includes(hi.begin(), hi.end(), ess.begin(), ess.end()))
            ++approximation;
    }
    bool ok = formulas >= 1000 && ess_fact_mismatch == 0 && balance == 0 && difference == 0 &&
              factorization == 0 && approximation == 0;
    std::ostringstream d;
    d << formulas << " formulas; ess/fact mismatches " << ess_fact_mismatch << ", balance " << balance
      << ", balanced difference " << difference << ", factorization " << factorization << ", approximation "
      << approximation;
    report(6, ok, "solver analysis agrees with brute force", d.str());
}

void soundness_sweep()
{
    std::size_t secure = 0;
    std::size_t checks = 0;
    std::size_t counterexamples = 0;
    for (const auto& name : builtin_circuit_names()) {
        auto c = builtin_circuit(name);
        DependencyAnalyzer an;
        for (const auto& site : enumerate_fault_sites(c)) {
            auto d = build_detection(c, site);
            if (!check_fault(d, an).verdict.secure())
                continue;
            ++secure;
            for (const auto& leak : oracle::confirm_leak(d)) {
                ++checks;
                if (leak.dependent)
                    ++counterexamples;
            }
        }
    }
    std::ostringstream d;
    d << secure << " secure sites, " << checks << " secret checks, " << counterexamples << " counterexamples";
    report(7, counterexamples == 0 && secure > 0, "secure verdicts hold exactly", d.str());
}

nlohmann::ordered_json without_timing(const std::string& text)
{
    auto j = nlohmann::ordered_json::parse(text);
    for (auto& s : j["sites"])
        s.erase("millis");
    j["summary"].erase("total_millis");
    return j;
}

void determinism()
{
    const unsigned n = std::max(4U, std::thread::hardware_concurrency());
    auto dir = std::filesystem::temp_directory_path() / "sifacheck-acceptance";
    std::filesystem::create_directories(dir);
    bool ok = true;
    std::size_t compared = 0;
    for (const auto& name : builtin_circuit_names()) {
        std::string texts[2];
        unsigned jobs[2] = {1, n};
        for (int k = 0; k < 2; ++k) {
            auto path = dir / (name + "-" + std::to_string(jobs[k]) + ".json");
            std::filesystem::remove(path);
            run_cli("verify --builtin " + name + " --oracle --jobs " + std::to_string(jobs[k]) + " --json " +
                    path.string());
            std::ifstream in(path, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            texts[k] = buf.str();
        }
        if (texts[0].empty() || without_timing(texts[0]).dump(2) != without_timing(texts[1]).dump(2))
            ok = false;
        ++compared;
    }
    std::ostringstream d;
    d << compared << " circuits, --jobs 1 vs --jobs " << n << ": " << (ok ? "identical" : "DIFFERENT")
      << " modulo timing";
    report(8, ok, "reports independent of thread count", d.str());
}

}  // namespace

int main()
{
    chi3_secure();
    chi3_reuse_variants();
    fig2();
    preliminaries_example();
    two_output_example();
    property_suite();
    soundness_sweep();
    determinism();
    std::cout << (failures == 0 ? "all acceptance criteria pass" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
