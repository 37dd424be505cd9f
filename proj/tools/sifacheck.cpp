// sifacheck: per-fault SIFA resistance verification of masked redundant circuits.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sifa/fault.hpp"
#include "sifa/netlist.hpp"
#include "sifa/report.hpp"

namespace {

constexpr int kExitUsage = 2;

struct Source {
    std::string path;
    std::string builtin;

    void attach(CLI::App& cmd)
    {
        auto* p = cmd.add_option("netlist", path, "Netlist file in .net format");
        auto* b = cmd.add_option("--builtin", builtin, "Bundled circuit name");
        p->excludes(b);
        b->excludes(p);
    }

    sifa::CircuitNetlist load() const
    {
        if (!builtin.empty())
            return sifa::builtin_circuit(builtin);
        if (path.empty())
            throw std::invalid_argument("no netlist given; pass a file or --builtin <name>");
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::invalid_argument("cannot read '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return sifa::parse_netlist(buf.str());
    }
};

struct CommonFlags {
    unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
    bool oracle = false;
    std::uint64_t budget = 0;
    std::string fault_inputs = "on";

    void attach(CLI::App& cmd, bool with_jobs)
    {
        if (with_jobs)
            cmd.add_option("--jobs", jobs, "Worker threads (default: available parallelism)")
                ->check(CLI::PositiveNumber);
        cmd.add_flag("--oracle", oracle, "Confirm unknown verdicts by exhaustive enumeration when feasible");
        cmd.add_option("--budget", budget, "Solver decision cap per query (0 = unlimited)");
    }

    sifa::VerifyOptions options() const
    {
        sifa::VerifyOptions o;
        o.jobs = jobs;
        o.oracle = oracle;
        o.fault_inputs = fault_inputs == "on";
        if (budget > 0)
            o.budget = sifa::SolverBudget::decisions(budget);
        return o;
    }
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Verify SIFA resistance of masked redundant circuits, one fault site at a time"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sifa::kToolVersion));

    Source verify_src;
    CommonFlags verify_flags;
    std::string json_path;
    auto* verify = app.add_subcommand("verify", "Check every fault site and report verdicts");
    verify_src.attach(*verify);
    verify_flags.attach(*verify, true);
    verify->add_option("--json", json_path, "Also write a machine-readable report to this path");
    verify->add_option("--fault-inputs", verify_flags.fault_inputs, "Include primary-input fault sites")
        ->check(CLI::IsMember({"on", "off"}));

    Source explain_src;
    CommonFlags explain_flags;
    std::string site_id;
    auto* explain = app.add_subcommand("explain", "Show the full analysis of one fault site");
    explain_src.attach(*explain);
    explain_flags.attach(*explain, false);
    explain->add_option("--site", site_id, "Fault site, e.g. input:a0 or gate:v0")->required();

    Source list_src;
    auto* list = app.add_subcommand("list", "List fault sites");
    list_src.attach(*list);

    auto* builtins = app.add_subcommand("builtins", "List bundled circuits");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (builtins->parsed()) {
            for (const auto& name : sifa::builtin_circuit_names())
                std::cout << name << "\n";
            return 0;
        }
        if (list->parsed()) {
            auto c = list_src.load();
            auto sites = sifa::enumerate_fault_sites(c);
            for (std::size_t i = 0; i < sites.size(); ++i)
                std::cout << i << " " << sites[i].id() << "\n";
            return 0;
        }
        if (explain->parsed()) {
            auto c = explain_src.load();
            auto site = sifa::FaultSite::parse(site_id);
            if (!site) {
                std::cerr << "error: malformed site id '" << site_id << "' (expected input:<id> or gate:<id>)\n";
                return kExitUsage;
            }
            auto ex = sifa::explain_site(c, *site, explain_flags.options());
            std::cout << ex.text;
            return 0;
        }
        auto c = verify_src.load();
        auto report = sifa::run_verify(c, verify_flags.options());
        std::cout << sifa::report_text(report);
        if (!json_path.empty()) {
            std::ofstream out(json_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write '" << json_path << "'\n";
                return kExitUsage;
            }
            out << sifa::report_json(report);
        }
        return report.exit_code();
    } catch (const sifa::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
