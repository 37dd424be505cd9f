#include "sifa/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_map>

namespace sifa::oracle {

namespace {

// A formula flattened into straight-line code over 64-bit lanes: lane j of
// block b is the assignment whose index is b * 64 + j.
class Program {
public:
    Program(const Formula& f, const std::vector<VarId>& universe)
    {
        for (std::size_t i = 0; i < universe.size(); ++i)
            var_slot_.emplace(universe[i], i);
        if (var_slot_.size() != universe.size())
            throw std::invalid_argument("universe lists a variable twice");
        root_ = compile(f);
    }

    /// Evaluates one block. `pin` forces variable slot `pin_slot` to a constant.
    std::uint64_t run(std::uint64_t block, std::size_t pin_slot = SIZE_MAX, bool pin = false) const
    {
        regs_.resize(code_.size());
        for (std::size_t k = 0; k < code_.size(); ++k) {
            const auto& ins = code_[k];
            std::uint64_t r = 0;
            switch (ins.op) {
            case Op::Const:
                r = ins.arg ? ~std::uint64_t{0} : 0;
                break;
            case Op::Var:
                r = ins.arg == pin_slot ? (pin ? ~std::uint64_t{0} : 0) : lane_pattern(ins.arg, block);
                break;
            case Op::Not:
                r = ~regs_[ins.a];
                break;
            case Op::And:
                r = regs_[ins.a] & regs_[ins.b];
                break;
            case Op::Or:
                r = regs_[ins.a] | regs_[ins.b];
                break;
            case Op::Xor:
                r = regs_[ins.a] ^ regs_[ins.b];
                break;
            }
            regs_[k] = r;
        }
        return regs_[root_];
    }

    std::size_t slot(const VarId& v) const { return var_slot_.at(v); }

private:
    struct Instr {
        Op op;
        std::size_t arg = 0;  // constant value or variable slot
        std::size_t a = 0;
        std::size_t b = 0;
    };

    static std::uint64_t lane_pattern(std::size_t slot, std::uint64_t block)
    {
        static constexpr std::uint64_t kLow[6] = {
            0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
            0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
        };
        if (slot < 6)
            return kLow[slot];
        return ((block >> (slot - 6)) & 1U) ? ~std::uint64_t{0} : 0;
    }

    std::size_t compile(const Formula& f)
    {
        if (auto it = slot_of_node_.find(f.identity()); it != slot_of_node_.end())
            return it->second;
        Instr ins{f.op()};
        switch (f.op()) {
        case Op::Const:
            ins.arg = f.const_value() ? 1 : 0;
            break;
        case Op::Var: {
            auto it = var_slot_.find(f.var_name());
            if (it == var_slot_.end())
                throw std::invalid_argument("variable '" + f.var_name() + "' is outside the universe");
            ins.arg = it->second;
            break;
        }
        case Op::Not:
            ins.a = compile(f.lhs());
            break;
        default:
            ins.a = compile(f.lhs());
            ins.b = compile(f.rhs());
            break;
        }
        code_.push_back(ins);
        std::size_t k = code_.size() - 1;
        slot_of_node_.emplace(f.identity(), k);
        return k;
    }

    std::unordered_map<VarId, std::size_t> var_slot_;
    std::unordered_map<const void*, std::size_t> slot_of_node_;
    std::vector<Instr> code_;
    std::size_t root_ = 0;
    mutable std::vector<std::uint64_t> regs_;
};

void check_universe(const std::vector<VarId>& universe)
{
    if (universe.size() > kMaxUniverse)
        throw OracleRefusal("enumeration over " + std::to_string(universe.size()) +
                            " variables refused; the limit is " + std::to_string(kMaxUniverse));
}

std::uint64_t block_count(std::size_t n)
{
    return n <= 6 ? 1 : std::uint64_t{1} << (n - 6);
}

std::uint64_t valid_lanes(std::size_t n)
{
    return n >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
}

std::vector<VarId> vars_of(const Formula& f)
{
    auto vs = free_vars(f);
    return {vs.begin(), vs.end()};
}

}  // namespace

WeightReport weight(const Formula& f, const std::vector<VarId>& universe)
{
    check_universe(universe);
    Program p(f, universe);
    const auto mask = valid_lanes(universe.size());
    WeightReport report{universe, 0};
    for (std::uint64_t b = 0, n = block_count(universe.size()); b < n; ++b)
        report.weight += static_cast<std::uint64_t>(std::popcount(p.run(b) & mask));
    return report;
}

bool is_balanced(const Formula& f, const std::vector<VarId>& universe)
{
    auto w = weight(f, universe).weight;
    return 2 * w == (std::uint64_t{1} << universe.size());
}

DependenceProducts dependence_products(const Formula& f, const Formula& g, const std::vector<VarId>& universe)
{
    check_universe(universe);
    Program pf(f, universe);
    Program pg(g, universe);
    const auto mask = valid_lanes(universe.size());
    std::uint64_t n_f = 0;
    std::uint64_t n_not_f = 0;
    std::uint64_t n_f_g = 0;
    std::uint64_t n_not_f_g = 0;
    for (std::uint64_t b = 0, n = block_count(universe.size()); b < n; ++b) {
        auto wf = pf.run(b);
        auto wg = pg.run(b);
        n_f += static_cast<std::uint64_t>(std::popcount(wf & mask));
        n_not_f += static_cast<std::uint64_t>(std::popcount(~wf & mask));
        n_f_g += static_cast<std::uint64_t>(std::popcount(wf & wg & mask));
        n_not_f_g += static_cast<std::uint64_t>(std::popcount(~wf & wg & mask));
    }
    return {n_f_g * n_not_f, n_not_f_g * n_f};
}

bool statistically_dependent(const Formula& f, const Formula& g, const std::vector<VarId>& universe)
{
    return dependence_products(f, g, universe).dependent();
}

std::vector<SecretLeak> confirm_leak(const DetectionInstance& d)
{
    check_universe(d.inputs);
    std::vector<SecretLeak> leaks;
    for (const auto& s : d.secrets) {
        std::vector<Formula> shares;
        for (const auto& id : s.shares)
            shares.push_back(Formula::var(id));
        // built locally rather than through the fault engine helper
        Formula secret = shares.front();
        for (std::size_t i = 1; i < shares.size(); ++i)
            secret = secret ^ shares[i];
        auto products = dependence_products(d.delta, secret, d.inputs);
        leaks.push_back({s.name, products.dependent(), products});
    }
    return leaks;
}

VarSet essential_vars(const Formula& f)
{
    auto universe = vars_of(f);
    check_universe(universe);
    Program p(f, universe);
    const auto mask = valid_lanes(universe.size());
    VarSet ess;
    for (const auto& x : universe) {
        auto slot = p.slot(x);
        for (std::uint64_t b = 0, n = block_count(universe.size()); b < n; ++b) {
            if (((p.run(b, slot, false) ^ p.run(b, slot, true)) & mask) != 0) {
                ess.insert(x);
                break;
            }
        }
    }
    return ess;
}

VarSet factor_vars(const Formula& f)
{
    auto universe = vars_of(f);
    check_universe(universe);
    Program p(f, universe);
    const auto mask = valid_lanes(universe.size());
    VarSet fact;
    for (const auto& x : universe) {
        auto slot = p.slot(x);
        bool always_flips = true;
        for (std::uint64_t b = 0, n = block_count(universe.size()); b < n && always_flips; ++b)
            always_flips = (~(p.run(b, slot, false) ^ p.run(b, slot, true)) & mask) == 0;
        if (always_flips)
            fact.insert(x);
    }
    return fact;
}

bool equivalent(const Formula& f, const Formula& g)
{
    auto vs = free_vars(f);
    auto gs = free_vars(g);
    vs.insert(gs.begin(), gs.end());
    std::vector<VarId> universe(vs.begin(), vs.end());
    return weight(f ^ g, universe).weight == 0;
}

}  // namespace sifa::oracle
