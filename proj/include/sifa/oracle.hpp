#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sifa/fault.hpp"
#include "sifa/formula.hpp"

// Ground truth by exhaustive enumeration. Nothing in here touches the SAT
// solver or the dependency analysis, so the two can check each other.
namespace sifa::oracle {

inline constexpr std::size_t kMaxUniverse = 24;

class OracleRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct WeightReport {
    std::vector<VarId> universe;
    std::uint64_t weight = 0;
};

/// Number of assignments over `universe` that satisfy f.
WeightReport weight(const Formula& f, const std::vector<VarId>& universe);
bool is_balanced(const Formula& f, const std::vector<VarId>& universe);

/// The two sides of the cross-product test N(f&g)N(!f) vs N(!f&g)N(f).
struct DependenceProducts {
    std::uint64_t with_f = 0;     // N(f & g) * N(!f)
    std::uint64_t without_f = 0;  // N(!f & g) * N(f)
    bool dependent() const { return with_f != without_f; }
};

DependenceProducts dependence_products(const Formula& f, const Formula& g, const std::vector<VarId>& universe);
bool statistically_dependent(const Formula& f, const Formula& g, const std::vector<VarId>& universe);

struct SecretLeak {
    std::string secret;
    bool dependent = false;
    DependenceProducts products;
};

/// Tests delta against every unmasked secret over all circuit inputs.
std::vector<SecretLeak> confirm_leak(const DetectionInstance& d);

/// Brute-force definitions, for cross-checking the solver-based analysis.
VarSet essential_vars(const Formula& f);
VarSet factor_vars(const Formula& f);
/// f and g agree on every assignment to the union of their variables.
bool equivalent(const Formula& f, const Formula& g);

}  // namespace sifa::oracle
