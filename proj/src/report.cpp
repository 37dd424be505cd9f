#include "sifa/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace sifa {

std::string SiteRecord::verdict_label() const
{
    if (confirmed_leak)
        return "confirmed-leak";
    return std::string(to_string(verdict.kind));
}

int VerdictReport::exit_code() const
{
    if (unknown > 0)
        return 1;
    if (incomplete > 0)
        return 3;
    return 0;
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t millis_since(Clock::time_point start)
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

CheckOptions check_options(const VerifyOptions& options)
{
    return {options.budget, options.max_subsets};
}

void run_oracle(const DetectionInstance& d, std::vector<oracle::SecretLeak>& leaks, std::string& note)
{
    try {
        leaks = oracle::confirm_leak(d);
    } catch (const oracle::OracleRefusal& e) {
        note = e.what();
    }
}

SiteRecord check_site(const CircuitNetlist& c, const FaultSite& site, const VerifyOptions& options,
                      DependencyAnalyzer& analyzer)
{
    auto start = Clock::now();
    SiteRecord record;
    record.site = site;
    auto d = build_detection(c, site);
    record.verdict = check_fault(d, analyzer, check_options(options)).verdict;
    if (options.oracle && record.verdict.unknown()) {
        run_oracle(d, record.leaks, record.oracle_note);
        record.confirmed_leak = std::any_of(record.leaks.begin(), record.leaks.end(),
                                            [](const oracle::SecretLeak& l) { return l.dependent; });
    }
    record.millis = millis_since(start);
    return record;
}

std::string join(const VarSet& vars)
{
    std::string s = "{";
    bool first = true;
    for (const auto& v : vars) {
        s += (first ? "" : ", ") + v;
        first = false;
    }
    return s + "}";
}

}  // namespace

VerdictReport run_verify(const CircuitNetlist& c, const VerifyOptions& options)
{
    auto start = Clock::now();
    auto sites = enumerate_fault_sites(c, options.fault_inputs);
    VerdictReport report;
    report.circuit = c.name;
    report.sites.resize(sites.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        // One analyzer per worker: its memo table is not shared across threads.
        DependencyAnalyzer analyzer(options.budget);
        for (std::size_t i = next++; i < sites.size(); i = next++)
            report.sites[i] = check_site(c, sites[i], options, analyzer);
    };
    unsigned jobs = std::max(1U, std::min<unsigned>(options.jobs, static_cast<unsigned>(sites.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
    }

    for (const auto& r : report.sites) {
        switch (r.verdict.kind) {
        case VerdictKind::Secure:
            ++report.secure;
            break;
        case VerdictKind::Unknown:
            ++report.unknown;
            break;
        case VerdictKind::AnalysisIncomplete:
            ++report.incomplete;
            break;
        }
    }
    report.total_millis = millis_since(start);
    return report;
}

std::string report_json(const VerdictReport& report)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["circuit"] = report.circuit;
    j["tool_version"] = report.tool_version;
    j["sites"] = ordered_json::array();
    for (const auto& r : report.sites) {
        ordered_json s;
        s["site"] = r.site.id();
        s["verdict"] = r.verdict_label();
        if (r.verdict.secure())
            s["witness"] = r.verdict.describe();
        else if (r.verdict.kind == VerdictKind::AnalysisIncomplete)
            s["witness"] = r.verdict.reason;
        else
            s["witness"] = nullptr;
        if (r.verdict.unknown())
            s["subset"] = r.verdict.subset;
        else
            s["subset"] = nullptr;
        s["millis"] = r.millis;
        j["sites"].push_back(std::move(s));
    }
    j["summary"] = {{"secure", report.secure},
                    {"unknown", report.unknown},
                    {"incomplete", report.incomplete},
                    {"total_millis", report.total_millis}};
    return j.dump(2) + "\n";
}

std::string report_text(const VerdictReport& report)
{
    std::ostringstream os;
    os << "circuit " << report.circuit << ": " << report.sites.size() << " fault sites\n";
    auto line = [&](const SiteRecord& r) {
        os << "  " << r.site.id() << ": " << r.verdict_label();
        if (r.verdict.secure())
            os << " (" << r.verdict.describe() << ")";
        else if (r.verdict.unknown())
            os << " (offending " << r.verdict.describe() << ")";
        else
            os << " (" << r.verdict.reason << ")";
        os << "\n";
        for (const auto& l : r.leaks)
            os << "    secret " << l.secret << ": " << (l.dependent ? "DEPENDENT" : "independent") << "\n";
        if (!r.oracle_note.empty())
            os << "    oracle: " << r.oracle_note << "\n";
    };
    for (const auto& r : report.sites)
        if (!r.verdict.secure())
            line(r);
    for (const auto& r : report.sites)
        if (r.verdict.secure())
            line(r);
    os << "summary: " << report.secure << " secure, " << report.unknown << " unknown, " << report.incomplete
       << " incomplete, " << report.total_millis << " ms\n";
    return os.str();
}

namespace {

// A difference whose essential set has at most one variable is printed as the
// constant or literal it reduces to.
std::optional<std::string> reduced_form(const Formula& f, const AnalysisSets& sets)
{
    if (sets.ess.size() > 1)
        return std::nullopt;
    Assignment others;
    for (const auto& v : free_vars(f))
        if (!sets.ess.contains(v))
            others[v] = false;
    if (sets.ess.empty())
        return evaluate(f, others) ? "1" : "0";
    const auto& x = *sets.ess.begin();
    others[x] = true;
    bool at_one = evaluate(f, others);
    return at_one ? x : "!" + x;
}

}  // namespace

Explanation explain_site(const CircuitNetlist& c, const FaultSite& site, const VerifyOptions& options)
{
    Explanation ex;
    ex.detection = build_detection(c, site);
    const auto& d = ex.detection;
    DependencyAnalyzer analyzer(options.budget);
    ex.result = check_fault(d, analyzer, check_options(options));
    const auto& trace = ex.result.trace;
    const auto& verdict = ex.result.verdict;

    std::ostringstream os;
    os << "circuit " << c.name << ", fault site " << site.id() << "\n";

    std::vector<std::string> reduced;
    bool all_reduced = verdict.kind != VerdictKind::AnalysisIncomplete;
    for (std::size_t i = 0; i < d.deltas.size(); ++i) {
        os << "d" << i << " (output " << d.output_names[i] << ") = " << to_string(d.deltas[i]) << "\n";
        if (verdict.kind == VerdictKind::AnalysisIncomplete)
            continue;
        try {
            const auto& sets = analyzer.analyze(d.deltas[i]);
            os << "  ess = " << join(sets.ess) << ", fact = " << join(sets.fact) << "\n";
            if (auto r = reduced_form(d.deltas[i], sets)) {
                os << "  reduces to " << *r << "\n";
                if (*r != "0")
                    reduced.push_back(*r);
            } else {
                all_reduced = false;
            }
        } catch (const SolverUndecided&) {
            all_reduced = false;
        }
    }
    if (all_reduced) {
        std::string disj;
        if (std::find(reduced.begin(), reduced.end(), "1") != reduced.end()) {
            disj = "1";
        } else if (reduced.empty()) {
            disj = "0";
        } else {
            for (std::size_t i = 0; i < reduced.size(); ++i)
                disj += (i ? " | " : "") + reduced[i];
        }
        os << "delta == " << disj << "\n";
    }
    os << "ess(delta) = " << join(trace.delta_sets.ess) << "\n";
    os << "fact(delta) = " << join(trace.delta_sets.fact) << "\n";
    VarSet complete;
    for (const auto& s : trace.complete)
        complete.insert(s.name);
    os << "complete secrets K = " << join(complete) << "\n";
    os << "hiding variables R = " << join(trace.hiders) << "\n";
    if (trace.reached_basis) {
        os << "basis (" << trace.basis.size() << " of " << d.deltas.size() << "):";
        for (auto i : trace.basis)
            os << " d" << i;
        os << "\n";
        os << "combinations checked: " << trace.subsets_checked << "\n";
    }
    os << "verdict: " << to_string(verdict.kind) << " (" << verdict.describe() << ")\n";
    if (verdict.unknown()) {
        os << "offending combination:";
        if (verdict.subset.empty())
            os << " 0";
        for (std::size_t k = 0; k < verdict.subset.size(); ++k)
            os << (k ? " ^ d" : " d") << trace.basis[verdict.subset[k]];
        os << "\n  xess = " << join(trace.offending_xess) << "\n  xfact = " << join(trace.offending_xfact) << "\n";
    }
    if (options.oracle) {
        std::vector<oracle::SecretLeak> leaks;
        run_oracle(d, leaks, ex.oracle_note);
        if (ex.oracle_note.empty()) {
            os << "exact oracle over " << d.inputs.size() << " inputs:\n";
            for (const auto& l : leaks)
                os << "  secret " << l.secret << ": " << (l.dependent ? "DEPENDENT" : "independent") << " ("
                   << l.products.with_f << " vs " << l.products.without_f << ")\n";
            ex.leaks = std::move(leaks);
        } else {
            os << "exact oracle refused: " << ex.oracle_note << "\n";
        }
    }
    ex.text = os.str();
    return ex;
}

}  // namespace sifa
