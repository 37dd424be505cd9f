#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sifa/formula.hpp"

namespace sifa {

/// Caps the number of branching decisions of one satisfiability query.
struct SolverBudget {
    std::optional<std::uint64_t> max_decisions;

    static SolverBudget unlimited() { return {}; }
    static SolverBudget decisions(std::uint64_t n) { return {n}; }
};

/// Raised when a query runs out of budget before reaching a decision.
class SolverUndecided : public std::runtime_error {
public:
    explicit SolverUndecided(std::uint64_t decisions)
        : std::runtime_error("solver budget exhausted after " + std::to_string(decisions) + " decisions")
    {
    }
};

enum class SatStatus { Sat, Unsat, Undecided };

struct SatVerdict {
    SatStatus status = SatStatus::Undecided;
    Assignment model;  // covers free_vars of the query when Sat
    std::uint64_t decisions = 0;

    bool sat() const { return status == SatStatus::Sat; }
    bool unsat() const { return status == SatStatus::Unsat; }
};

/// Clause set in DIMACS convention: variable v is literal +v, its negation -v,
/// variables are numbered from 1. An empty clause makes the set unsatisfiable.
struct Cnf {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
    std::map<VarId, int> var_index;  // formula variables; everything else is auxiliary

    bool has_empty_clause() const;
};

/// Equisatisfiable Tseitin encoding with one auxiliary variable per DAG node.
Cnf to_cnf(const Formula& f);

/// Conflict-driven clause learning over a fixed clause set.
class CdclSolver {
public:
    explicit CdclSolver(const Cnf& cnf);

    SatStatus solve(const SolverBudget& budget);
    /// Value of DIMACS variable v after a Sat answer.
    bool value(int v) const;
    std::uint64_t decisions() const { return decisions_; }
    std::uint64_t conflicts() const { return conflicts_; }

private:
    using Lit = std::uint32_t;

    static Lit lit_of(int dimacs) { return dimacs > 0 ? Lit(2 * (dimacs - 1)) : Lit(2 * (-dimacs - 1) + 1); }
    static std::uint32_t var_of(Lit l) { return l >> 1; }
    static Lit neg(Lit l) { return l ^ 1U; }

    // 1 true, 0 false, -1 unassigned
    int lit_value(Lit l) const;
    void add_clause(std::vector<Lit> lits);
    void enqueue(Lit l, int reason);
    int propagate();
    void analyze(int conflict, std::vector<Lit>& learnt, int& backjump);
    void backtrack(int level);
    int pick_branch() const;
    void bump(std::uint32_t v);
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    int num_vars_ = 0;
    bool inconsistent_ = false;
    std::vector<std::vector<Lit>> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<std::int8_t> assigns_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<std::uint8_t> polarity_;
    std::vector<double> activity_;
    std::vector<std::uint8_t> seen_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    double var_inc_ = 1.0;
    std::uint64_t decisions_ = 0;
    std::uint64_t conflicts_ = 0;
};

SatVerdict is_satisfiable(const Formula& f, const SolverBudget& budget = {});

/// True iff !f is unsatisfiable. Throws SolverUndecided on budget exhaustion.
bool is_tautology(const Formula& f, const SolverBudget& budget = {});

/// True iff f is unsatisfiable. Throws SolverUndecided on budget exhaustion.
bool is_contradiction(const Formula& f, const SolverBudget& budget = {});

}  // namespace sifa
