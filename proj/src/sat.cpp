#include "sifa/sat.hpp"

#include <algorithm>
#include <unordered_map>

namespace sifa {

bool Cnf::has_empty_clause() const
{
    return std::any_of(clauses.begin(), clauses.end(), [](const auto& c) { return c.empty(); });
}

namespace {

class TseitinEncoder {
public:
    explicit TseitinEncoder(Cnf& cnf) : cnf_(cnf) {}

    int encode(const Formula& f)
    {
        if (auto it = node_var_.find(f.identity()); it != node_var_.end())
            return it->second;
        int v = 0;
        switch (f.op()) {
        case Op::Const:
            v = fresh();
            cnf_.clauses.push_back({f.const_value() ? v : -v});
            break;
        case Op::Var: {
            auto [it, inserted] = cnf_.var_index.try_emplace(f.var_name(), 0);
            if (inserted)
                it->second = fresh();
            v = it->second;
            break;
        }
        case Op::Not:
            // No auxiliary needed: the negated literal stands in for the node.
            v = -encode(f.lhs());
            break;
        case Op::And: {
            int a = encode(f.lhs());
            int b = encode(f.rhs());
            v = fresh();
            cnf_.clauses.push_back({-v, a});
            cnf_.clauses.push_back({-v, b});
            cnf_.clauses.push_back({v, -a, -b});
            break;
        }
        case Op::Or: {
            int a = encode(f.lhs());
            int b = encode(f.rhs());
            v = fresh();
            cnf_.clauses.push_back({v, -a});
            cnf_.clauses.push_back({v, -b});
            cnf_.clauses.push_back({-v, a, b});
            break;
        }
        case Op::Xor: {
            int a = encode(f.lhs());
            int b = encode(f.rhs());
            v = fresh();
            cnf_.clauses.push_back({-v, a, b});
            cnf_.clauses.push_back({-v, -a, -b});
            cnf_.clauses.push_back({v, -a, b});
            cnf_.clauses.push_back({v, a, -b});
            break;
        }
        }
        node_var_.emplace(f.identity(), v);
        return v;
    }

private:
    int fresh() { return ++cnf_.num_vars; }

    Cnf& cnf_;
    std::unordered_map<const void*, int> node_var_;
};

}  // namespace

Cnf to_cnf(const Formula& f)
{
    Cnf cnf;
    if (f.is_const()) {
        if (!f.const_value())
            cnf.clauses.emplace_back();
        return cnf;
    }
    TseitinEncoder enc(cnf);
    int root = enc.encode(f);
    cnf.clauses.push_back({root});
    return cnf;
}

CdclSolver::CdclSolver(const Cnf& cnf) : num_vars_(cnf.num_vars)
{
    const auto n = static_cast<std::size_t>(num_vars_);
    watches_.resize(2 * n);
    assigns_.assign(n, -1);
    level_.assign(n, 0);
    reason_.assign(n, -1);
    polarity_.assign(n, 1);  // branch on false first
    activity_.assign(n, 0.0);
    seen_.assign(n, 0);
    for (const auto& c : cnf.clauses) {
        std::vector<Lit> lits;
        lits.reserve(c.size());
        for (int d : c)
            lits.push_back(lit_of(d));
        add_clause(std::move(lits));
        if (inconsistent_)
            break;
    }
}

int CdclSolver::lit_value(Lit l) const
{
    auto a = assigns_[var_of(l)];
    if (a < 0)
        return -1;
    return a ^ static_cast<int>(l & 1U);
}

void CdclSolver::add_clause(std::vector<Lit> lits)
{
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i)
        if (lits[i] == neg(lits[i - 1]))
            return;  // tautological clause
    // Drop literals already false at level 0; satisfied clauses are skipped.
    std::vector<Lit> kept;
    for (Lit l : lits) {
        int val = lit_value(l);
        if (val == 1)
            return;
        if (val == -1)
            kept.push_back(l);
    }
    if (kept.empty()) {
        inconsistent_ = true;
        return;
    }
    if (kept.size() == 1) {
        enqueue(kept[0], -1);
        if (propagate() >= 0)
            inconsistent_ = true;
        return;
    }
    int idx = static_cast<int>(clauses_.size());
    watches_[kept[0]].push_back(idx);
    watches_[kept[1]].push_back(idx);
    clauses_.push_back(std::move(kept));
}

void CdclSolver::enqueue(Lit l, int reason)
{
    auto v = var_of(l);
    assigns_[v] = static_cast<std::int8_t>((l & 1U) ? 0 : 1);
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
}

// Returns the index of a conflicting clause, or -1.
int CdclSolver::propagate()
{
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        Lit false_lit = neg(p);
        auto& ws = watches_[false_lit];
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < ws.size()) {
            int ci = ws[i++];
            auto& c = clauses_[static_cast<std::size_t>(ci)];
            if (c[0] == false_lit)
                std::swap(c[0], c[1]);
            if (lit_value(c[0]) == 1) {
                ws[j++] = ci;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (lit_value(c[k]) != 0) {
                    std::swap(c[1], c[k]);
                    watches_[c[1]].push_back(ci);
                    moved = true;
                    break;
                }
            }
            if (moved)
                continue;
            ws[j++] = ci;
            if (lit_value(c[0]) == 0) {
                while (i < ws.size())
                    ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return ci;
            }
            enqueue(c[0], ci);
        }
        ws.resize(j);
    }
    return -1;
}

void CdclSolver::bump(std::uint32_t v)
{
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (auto& a : activity_)
            a *= 1e-100;
        var_inc_ *= 1e-100;
    }
}

// First-UIP conflict analysis. learnt[0] is the asserting literal.
void CdclSolver::analyze(int conflict, std::vector<Lit>& learnt, int& backjump)
{
    learnt.assign(1, 0);
    int path = 0;
    bool have_p = false;
    Lit p = 0;
    std::size_t index = trail_.size();
    int confl = conflict;
    do {
        const auto& c = clauses_[static_cast<std::size_t>(confl)];
        for (std::size_t k = have_p ? 1 : 0; k < c.size(); ++k) {
            Lit q = c[k];
            auto v = var_of(q);
            if (seen_[v] || level_[v] == 0)
                continue;
            seen_[v] = 1;
            bump(v);
            if (level_[v] >= decision_level())
                ++path;
            else
                learnt.push_back(q);
        }
        while (!seen_[var_of(trail_[--index])]) {
        }
        p = trail_[index];
        have_p = true;
        confl = reason_[var_of(p)];
        seen_[var_of(p)] = 0;
        --path;
    } while (path > 0);
    learnt[0] = neg(p);

    backjump = 0;
    if (learnt.size() > 1) {
        std::size_t max_i = 1;
        for (std::size_t k = 2; k < learnt.size(); ++k)
            if (level_[var_of(learnt[k])] > level_[var_of(learnt[max_i])])
                max_i = k;
        std::swap(learnt[1], learnt[max_i]);
        backjump = level_[var_of(learnt[1])];
    }
    for (Lit l : learnt)
        seen_[var_of(l)] = 0;
    var_inc_ /= 0.95;
}

void CdclSolver::backtrack(int level)
{
    if (decision_level() <= level)
        return;
    const auto stop = trail_lim_[static_cast<std::size_t>(level)];
    for (std::size_t k = trail_.size(); k-- > stop;) {
        auto v = var_of(trail_[k]);
        polarity_[v] = static_cast<std::uint8_t>(trail_[k] & 1U);
        assigns_[v] = -1;
        reason_[v] = -1;
    }
    trail_.resize(stop);
    trail_lim_.resize(static_cast<std::size_t>(level));
    qhead_ = trail_.size();
}

int CdclSolver::pick_branch() const
{
    int best = -1;
    for (int v = 0; v < num_vars_; ++v) {
        if (assigns_[static_cast<std::size_t>(v)] >= 0)
            continue;
        if (best < 0 || activity_[static_cast<std::size_t>(v)] > activity_[static_cast<std::size_t>(best)])
            best = v;
    }
    return best;
}

namespace {

// Luby sequence 1 1 2 1 1 2 4 ...
std::uint64_t luby(std::uint64_t i)
{
    std::uint64_t size = 1;
    std::uint64_t seq = 0;
    while (size < i + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != i) {
        size = (size - 1) >> 1;
        --seq;
        i %= size;
    }
    return std::uint64_t{1} << seq;
}

}  // namespace

SatStatus CdclSolver::solve(const SolverBudget& budget)
{
    if (inconsistent_)
        return SatStatus::Unsat;
    if (propagate() >= 0)
        return SatStatus::Unsat;

    std::vector<Lit> learnt;
    std::uint64_t restarts = 0;
    std::uint64_t conflicts_until_restart = 64 * luby(restarts);
    for (;;) {
        int confl = propagate();
        if (confl >= 0) {
            ++conflicts_;
            if (decision_level() == 0)
                return SatStatus::Unsat;
            int backjump = 0;
            analyze(confl, learnt, backjump);
            backtrack(backjump);
            if (learnt.size() == 1) {
                enqueue(learnt[0], -1);
            } else {
                int idx = static_cast<int>(clauses_.size());
                watches_[learnt[0]].push_back(idx);
                watches_[learnt[1]].push_back(idx);
                clauses_.push_back(learnt);
                enqueue(learnt[0], idx);
            }
            if (conflicts_until_restart > 0)
                --conflicts_until_restart;
            continue;
        }
        if (conflicts_until_restart == 0) {
            backtrack(0);
            conflicts_until_restart = 64 * luby(++restarts);
        }
        int v = pick_branch();
        if (v < 0)
            return SatStatus::Sat;
        if (budget.max_decisions && decisions_ >= *budget.max_decisions)
            return SatStatus::Undecided;
        ++decisions_;
        trail_lim_.push_back(trail_.size());
        Lit l = Lit(2 * static_cast<std::uint32_t>(v)) | polarity_[static_cast<std::size_t>(v)];
        enqueue(l, -1);
    }
}

bool CdclSolver::value(int v) const
{
    return assigns_[static_cast<std::size_t>(v - 1)] == 1;
}

SatVerdict is_satisfiable(const Formula& f, const SolverBudget& budget)
{
    SatVerdict verdict;
    if (f.is_const()) {
        verdict.status = f.const_value() ? SatStatus::Sat : SatStatus::Unsat;
        if (verdict.sat())
            for (const auto& x : free_vars(f))
                verdict.model[x] = false;
        return verdict;
    }
    Cnf cnf = to_cnf(f);
    CdclSolver solver(cnf);
    verdict.status = solver.solve(budget);
    verdict.decisions = solver.decisions();
    if (verdict.sat())
        for (const auto& [name, v] : cnf.var_index)
            verdict.model[name] = solver.value(v);
    return verdict;
}

bool is_contradiction(const Formula& f, const SolverBudget& budget)
{
    auto verdict = is_satisfiable(f, budget);
    if (verdict.status == SatStatus::Undecided)
        throw SolverUndecided(verdict.decisions);
    return verdict.unsat();
}

bool is_tautology(const Formula& f, const SolverBudget& budget)
{
    return is_contradiction(!f, budget);
}

}  // namespace sifa
