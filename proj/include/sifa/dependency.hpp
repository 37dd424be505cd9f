#pragma once

#include <cstddef>
#include <unordered_map>

#include "sifa/formula.hpp"
#include "sifa/sat.hpp"

namespace sifa {

/// Variable sets of one formula f, with f == (xor of fact) ^ fnl.
struct AnalysisSets {
    VarSet ess;      // variables f functionally depends on
    VarSet fact;     // variables x with f == x ^ f[0/x]
    VarSet fnl_ess;  // essential variables of the non-linear residue
    Formula fnl;     // f with every fact variable set to 0
};

/// SAT-backed functional-dependency and factorization queries. Results of
/// analyze() are memoized by formula structure for the analyzer's lifetime;
/// an analyzer is meant to be owned by one thread.
class DependencyAnalyzer {
public:
    explicit DependencyAnalyzer(SolverBudget budget = {}) : budget_(budget) {}

    /// Some assignment to the other variables lets x flip f.
    bool is_essential(const Formula& f, const VarId& x);
    VarSet essential_vars(const Formula& f);
    /// f[0/x] ^ f[1/x] is a tautology.
    bool is_factor(const Formula& f, const VarId& x);
    VarSet factor_vars(const Formula& f);
    const AnalysisSets& analyze(const Formula& f);

    const SolverBudget& budget() const { return budget_; }
    std::size_t queries() const { return queries_; }

private:
    SolverBudget budget_;
    std::size_t queries_ = 0;
    std::unordered_map<Formula, AnalysisSets, FormulaHash> cache_;
};

}  // namespace sifa
