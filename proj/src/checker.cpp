#include "sifa/checker.hpp"

#include <algorithm>
#include <numeric>

namespace sifa {

std::string_view to_string(VerdictKind kind)
{
    switch (kind) {
    case VerdictKind::Secure:
        return "secure";
    case VerdictKind::Unknown:
        return "unknown";
    case VerdictKind::AnalysisIncomplete:
        return "incomplete";
    }
    return "?";
}

std::string_view to_string(SecureWitness witness)
{
    switch (witness) {
    case SecureWitness::NoCompleteSecret:
        return "no-complete-secret";
    case SecureWitness::HiddenBy:
        return "hidden-by";
    case SecureWitness::SubsetSweepPassed:
        return "subset-sweep";
    }
    return "?";
}

std::string Verdict::describe() const
{
    switch (kind) {
    case VerdictKind::Secure:
        if (witness == SecureWitness::HiddenBy)
            return "hidden-by:" + hiding_var;
        return std::string(to_string(witness));
    case VerdictKind::Unknown: {
        std::string s = "basis subset {";
        for (std::size_t i = 0; i < subset.size(); ++i)
            s += (i ? "," : "") + std::to_string(subset[i]);
        return s + "}";
    }
    case VerdictKind::AnalysisIncomplete:
        return reason;
    }
    return {};
}

namespace {

VarSet symmetric_difference_of_facts(std::span<const AnalysisSets* const> subset)
{
    VarSet acc;
    for (const auto* sets : subset) {
        VarSet next;
        std::set_symmetric_difference(acc.begin(), acc.end(), sets->fact.begin(), sets->fact.end(),
                                      std::inserter(next, next.end()));
        acc = std::move(next);
    }
    return acc;
}

VarSet union_of_fnl_ess(std::span<const AnalysisSets* const> subset)
{
    VarSet acc;
    for (const auto* sets : subset)
        acc.insert(sets->fnl_ess.begin(), sets->fnl_ess.end());
    return acc;
}

std::vector<const AnalysisSets*> pointers(std::span<const AnalysisSets> subset)
{
    std::vector<const AnalysisSets*> ptrs;
    for (const auto& s : subset)
        ptrs.push_back(&s);
    return ptrs;
}

bool contains_all(const VarSet& haystack, const std::vector<VarId>& needles)
{
    return std::all_of(needles.begin(), needles.end(), [&](const VarId& v) { return haystack.contains(v); });
}

bool intersects(const VarSet& a, const VarSet& b)
{
    return std::any_of(a.begin(), a.end(), [&](const VarId& v) { return b.contains(v); });
}

// Calls visit(indices) for every subset of {0..n-1}, smallest first and in
// lexicographic order within one size; stops when visit returns false.
template <typename Visit>
void for_each_subset_by_size(std::size_t n, Visit&& visit)
{
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k <= n; ++k) {
        idx.resize(k);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (;;) {
            if (!visit(std::span<const std::size_t>(idx)))
                return;
            // advance to the next k-combination
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == n - k + i - 1)
                --i;
            if (i == 0)
                break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }
}

}  // namespace

VarSet xfact(std::span<const AnalysisSets* const> subset)
{
    VarSet result = symmetric_difference_of_facts(subset);
    for (const auto& v : union_of_fnl_ess(subset))
        result.erase(v);
    return result;
}

VarSet xess(std::span<const AnalysisSets* const> subset)
{
    VarSet result = symmetric_difference_of_facts(subset);
    auto nonlinear = union_of_fnl_ess(subset);
    result.insert(nonlinear.begin(), nonlinear.end());
    return result;
}

VarSet xfact(std::span<const AnalysisSets> subset)
{
    auto ptrs = pointers(subset);
    return xfact(std::span<const AnalysisSets* const>(ptrs));
}

VarSet xess(std::span<const AnalysisSets> subset)
{
    auto ptrs = pointers(subset);
    return xess(std::span<const AnalysisSets* const>(ptrs));
}

std::vector<std::size_t> build_basis(std::span<const Formula> deltas, const SolverBudget& budget)
{
    std::vector<std::size_t> basis;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        bool spanned = false;
        std::vector<Formula> terms;
        for_each_subset_by_size(basis.size(), [&](std::span<const std::size_t> subset) {
            terms.assign(1, deltas[i]);
            for (auto j : subset)
                terms.push_back(deltas[basis[j]]);
            spanned = is_contradiction(xor_all(terms), budget);
            return !spanned;
        });
        if (!spanned)
            basis.push_back(i);
    }
    return basis;
}

CheckResult check_fault(const DetectionInstance& d, const CheckOptions& options)
{
    DependencyAnalyzer analyzer(options.budget);
    return check_fault(d, analyzer, options);
}

CheckResult check_fault(const DetectionInstance& d, DependencyAnalyzer& analyzer, const CheckOptions& options)
{
    CheckResult result;
    auto& trace = result.trace;
    auto& verdict = result.verdict;
    try {
        trace.delta_sets = analyzer.analyze(d.delta);
        const VarSet& ess = trace.delta_sets.ess;

        trace.hiders.insert(d.masks.begin(), d.masks.end());
        for (const auto& s : d.secrets) {
            if (contains_all(ess, s.shares)) {
                trace.complete.push_back(s);
            } else {
                for (const auto& share : s.shares)
                    if (ess.contains(share))
                        trace.hiders.insert(share);
            }
        }

        if (trace.complete.empty()) {
            verdict.kind = VerdictKind::Secure;
            verdict.witness = SecureWitness::NoCompleteSecret;
            return result;
        }
        for (const auto& v : trace.delta_sets.fact) {
            if (trace.hiders.contains(v)) {
                verdict.kind = VerdictKind::Secure;
                verdict.witness = SecureWitness::HiddenBy;
                verdict.hiding_var = v;
                return result;
            }
        }

        trace.reached_basis = true;
        trace.basis = build_basis(d.deltas, analyzer.budget());
        for (auto i : trace.basis)
            trace.basis_sets.push_back(analyzer.analyze(d.deltas[i]));

        const auto m = trace.basis.size();
        if (m >= 64 || (std::uint64_t{1} << m) > options.max_subsets) {
            verdict.kind = VerdictKind::AnalysisIncomplete;
            verdict.reason = "basis of size " + std::to_string(m) + " exceeds the subset sweep cap";
            return result;
        }

        bool leaked = false;
        std::vector<const AnalysisSets*> members;
        for_each_subset_by_size(m, [&](std::span<const std::size_t> subset) {
            ++trace.subsets_checked;
            members.clear();
            for (auto j : subset)
                members.push_back(&trace.basis_sets[j]);
            VarSet approx_ess = xess(std::span<const AnalysisSets* const>(members));
            bool any_complete = std::any_of(trace.complete.begin(), trace.complete.end(),
                                            [&](const SecretSpec& s) { return contains_all(approx_ess, s.shares); });
            if (!any_complete)
                return true;
            VarSet approx_fact = xfact(std::span<const AnalysisSets* const>(members));
            if (intersects(trace.hiders, approx_fact))
                return true;
            leaked = true;
            verdict.subset.assign(subset.begin(), subset.end());
            trace.offending_xess = std::move(approx_ess);
            trace.offending_xfact = std::move(approx_fact);
            return false;
        });

        if (leaked) {
            verdict.kind = VerdictKind::Unknown;
        } else {
            verdict.kind = VerdictKind::Secure;
            verdict.witness = SecureWitness::SubsetSweepPassed;
        }
    } catch (const SolverUndecided& e) {
        verdict = Verdict{};
        verdict.kind = VerdictKind::AnalysisIncomplete;
        verdict.reason = e.what();
    }
    return result;
}

}  // namespace sifa
