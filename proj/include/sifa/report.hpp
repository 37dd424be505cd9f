#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sifa/checker.hpp"
#include "sifa/netlist.hpp"
#include "sifa/oracle.hpp"

namespace sifa {

inline constexpr const char* kToolVersion = "0.1.0";

struct VerifyOptions {
    unsigned jobs = 1;
    bool oracle = false;  // try to confirm Unknown verdicts exactly
    bool fault_inputs = true;
    SolverBudget budget;
    std::uint64_t max_subsets = std::uint64_t{1} << 20;
};

struct SiteRecord {
    FaultSite site;
    Verdict verdict;
    bool confirmed_leak = false;
    std::vector<oracle::SecretLeak> leaks;  // filled when the oracle ran
    std::string oracle_note;                // e.g. why the oracle refused
    std::int64_t millis = 0;

    /// "secure", "unknown", "confirmed-leak" or "incomplete".
    std::string verdict_label() const;
};

struct VerdictReport {
    std::string circuit;
    std::string tool_version = kToolVersion;
    std::vector<SiteRecord> sites;
    std::size_t secure = 0;
    std::size_t unknown = 0;  // includes confirmed leaks
    std::size_t incomplete = 0;
    std::int64_t total_millis = 0;

    /// 0 all secure, 1 any unknown or confirmed leak, 3 any incomplete.
    int exit_code() const;
};

/// Checks every fault site of `c`, spreading sites over `options.jobs`
/// threads. Records come back in site order regardless of the thread count.
VerdictReport run_verify(const CircuitNetlist& c, const VerifyOptions& options = {});

std::string report_json(const VerdictReport& report);
/// Unknown and incomplete sites first, then the rest, then a summary line.
std::string report_text(const VerdictReport& report);

/// Multi-line walkthrough of one site: differences, variable sets, K, R, basis
/// and (for Unknown) the offending combination.
struct Explanation {
    CheckResult result;
    DetectionInstance detection;
    std::optional<std::vector<oracle::SecretLeak>> leaks;
    std::string oracle_note;
    std::string text;
};

Explanation explain_site(const CircuitNetlist& c, const FaultSite& site, const VerifyOptions& options = {});

}  // namespace sifa
