#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sifa/dependency.hpp"
#include "sifa/fault.hpp"

namespace sifa {

enum class VerdictKind { Secure, Unknown, AnalysisIncomplete };

/// Which argument established independence for a Secure verdict.
enum class SecureWitness {
    NoCompleteSecret,   // every secret is incomplete in delta
    HiddenBy,           // a random variable factors out of delta
    SubsetSweepPassed,  // every xor-combination of the basis is independent
};

std::string_view to_string(VerdictKind kind);
std::string_view to_string(SecureWitness witness);

struct Verdict {
    VerdictKind kind = VerdictKind::Secure;
    SecureWitness witness = SecureWitness::NoCompleteSecret;
    VarId hiding_var;                 // for HiddenBy
    std::vector<std::size_t> subset;  // for Unknown: positions in the basis
    std::string reason;               // for AnalysisIncomplete

    bool secure() const { return kind == VerdictKind::Secure; }
    bool unknown() const { return kind == VerdictKind::Unknown; }
    /// Short description of the witness or offending subset.
    std::string describe() const;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct CheckOptions {
    SolverBudget budget;
    /// Sweeps over more basis subsets than this abort with AnalysisIncomplete.
    std::uint64_t max_subsets = std::uint64_t{1} << 20;
};

/// Everything the checker derived on the way to its verdict.
struct CheckTrace {
    AnalysisSets delta_sets;
    std::vector<SecretSpec> complete;  // K
    VarSet hiders;                     // R
    std::vector<std::size_t> basis;    // indices into deltas, in basis order
    std::vector<AnalysisSets> basis_sets;
    std::uint64_t subsets_checked = 0;
    VarSet offending_xess;
    VarSet offending_xfact;
    bool reached_basis = false;
};

struct CheckResult {
    Verdict verdict;
    CheckTrace trace;
};

/// Symmetric difference of the members' fact sets minus every ess(fnl).
VarSet xfact(std::span<const AnalysisSets* const> subset);
/// Symmetric difference of the members' fact sets plus every ess(fnl).
VarSet xess(std::span<const AnalysisSets* const> subset);
VarSet xfact(std::span<const AnalysisSets> subset);
VarSet xess(std::span<const AnalysisSets> subset);

/// Greedy linearly independent subset of `deltas`, as indices in input order.
/// A formula joins unless it equals the xor of some subset of those already
/// chosen (the zero function never joins).
std::vector<std::size_t> build_basis(std::span<const Formula> deltas, const SolverBudget& budget = {});

/// Incompleteness, hiding, then the inferred-independence sweep over the
/// basis of the per-output differences.
CheckResult check_fault(const DetectionInstance& d, DependencyAnalyzer& analyzer, const CheckOptions& options = {});
CheckResult check_fault(const DetectionInstance& d, const CheckOptions& options = {});

}  // namespace sifa
