#include "sifa/dependency.hpp"

namespace sifa {

namespace {

Formula difference(const Formula& f, const VarId& x)
{
    return substitute(f, x, false) ^ substitute(f, x, true);
}

}  // namespace

bool DependencyAnalyzer::is_essential(const Formula& f, const VarId& x)
{
    if (!free_vars(f).contains(x))
        return false;
    ++queries_;
    return !is_contradiction(difference(f, x), budget_);
}

VarSet DependencyAnalyzer::essential_vars(const Formula& f)
{
    VarSet ess;
    for (const auto& x : free_vars(f))
        if (is_essential(f, x))
            ess.insert(x);
    return ess;
}

bool DependencyAnalyzer::is_factor(const Formula& f, const VarId& x)
{
    if (!free_vars(f).contains(x))
        return false;
    ++queries_;
    return is_tautology(difference(f, x), budget_);
}

VarSet DependencyAnalyzer::factor_vars(const Formula& f)
{
    VarSet fact;
    for (const auto& x : free_vars(f))
        if (is_factor(f, x))
            fact.insert(x);
    return fact;
}

const AnalysisSets& DependencyAnalyzer::analyze(const Formula& f)
{
    if (auto it = cache_.find(f); it != cache_.end())
        return it->second;
    AnalysisSets sets;
    sets.fact = factor_vars(f);
    Assignment zero;
    for (const auto& x : sets.fact)
        zero[x] = false;
    sets.fnl = substitute(f, zero);
    sets.fnl_ess = essential_vars(sets.fnl);
    sets.ess = sets.fact;
    sets.ess.insert(sets.fnl_ess.begin(), sets.fnl_ess.end());
    return cache_.emplace(f, std::move(sets)).first->second;
}

}  // namespace sifa
