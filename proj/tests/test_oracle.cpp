#include <doctest.h>

#include "random_formula.hpp"
#include "sifa/oracle.hpp"

using namespace sifa;
using namespace sifa::oracle;
using sifa::testing::all_assignments;
using sifa::testing::FormulaGen;

namespace {

Formula v(const char* name) { return Formula::var(name); }

const std::vector<VarId> kAbc{"a", "b", "c"};

// Truth-table count without the bit-parallel engine.
std::uint64_t slow_weight(const Formula& f, const std::vector<VarId>& universe)
{
    std::uint64_t n = 0;
    for (const auto& alpha : all_assignments(universe))
        n += evaluate(f, alpha) ? 1 : 0;
    return n;
}

SecretLeak leak_for(const std::vector<SecretLeak>& leaks, const std::string& name)
{
    for (const auto& l : leaks)
        if (l.secret == name)
            return l;
    FAIL("secret not reported: " << name);
    return {};
}

}  // namespace

TEST_CASE("weight examples")
{
    CHECK(weight(v("a") & v("b"), kAbc).weight == 2);
    CHECK(weight(Formula::constant(true), kAbc).weight == 8);
    CHECK(weight(v("b") ^ v("c"), kAbc).weight == 4);
    CHECK(weight(Formula::constant(false), {}).weight == 0);
    CHECK(weight(Formula::constant(true), {}).weight == 1);
}

TEST_CASE("weight needs the universe to cover the formula")
{
    CHECK_THROWS(weight(v("a") & v("z"), kAbc));
}

TEST_CASE("is_balanced examples")
{
    CHECK(is_balanced(v("x") ^ (v("a") & v("b")), {"x", "a", "b"}));
    CHECK_FALSE(is_balanced(v("a") & v("b"), {"a", "b"}));
    CHECK_FALSE(is_balanced(Formula::constant(false), {"a"}));
}

TEST_CASE("dependence products from the worked example")
{
    auto f = v("a") & v("b");
    auto g = (!v("a")) | v("c");
    auto p = dependence_products(f, g, kAbc);
    CHECK(p.with_f == 6);
    CHECK(p.without_f == 10);
    CHECK(statistically_dependent(f, g, kAbc));

    auto h = v("b") ^ v("c");
    auto q = dependence_products(f, h, kAbc);
    CHECK(q.with_f == 6);
    CHECK(q.without_f == 6);
    CHECK_FALSE(statistically_dependent(f, h, kAbc));
}

TEST_CASE("two masked outputs: 24 = 24")
{
    auto delta = (v("x") ^ v("s0")) | (v("y") ^ v("s1"));
    auto p = dependence_products(delta, v("s0") ^ v("s1"), {"x", "y", "s0", "s1"});
    CHECK(p.with_f == 24);
    CHECK(p.without_f == 24);
    CHECK_FALSE(p.dependent());
}

TEST_CASE("confirm_leak examples")
{
    auto fig2 = builtin_circuit("fig2_toy");
    auto leaks = confirm_leak(build_detection(fig2, *FaultSite::parse("input:a0")));
    CHECK(leak_for(leaks, "b").dependent);
    CHECK_FALSE(leak_for(leaks, "a").dependent);
    CHECK_FALSE(leak_for(leaks, "c").dependent);

    auto reuse = builtin_circuit("chi3_reuse_b0");
    auto rl = confirm_leak(build_detection(reuse, *FaultSite::parse("gate:v0")));
    CHECK(leak_for(rl, "c").dependent);

    auto chi3 = builtin_circuit("chi3");
    for (const auto& site : enumerate_fault_sites(chi3)) {
        CAPTURE(site.id());
        for (const auto& l : confirm_leak(build_detection(chi3, site)))
            CHECK_FALSE(l.dependent);
    }
}

TEST_CASE("refuses universes above the cap")
{
    std::vector<VarId> big;
    Formula f = Formula::constant(false);
    for (std::size_t i = 0; i <= kMaxUniverse; ++i) {
        big.push_back("w" + std::to_string(i));
        f = f ^ Formula::var(big.back());
    }
    CHECK_THROWS_AS(weight(f, big), OracleRefusal);
    CHECK_THROWS_AS(statistically_dependent(f, f, big), OracleRefusal);
    big.pop_back();
    CHECK_NOTHROW(weight(v("w0"), big));
}

TEST_CASE("brute-force sets and equivalence")
{
    auto a = v("a");
    auto b = v("b");
    CHECK(essential_vars((a & b) | (a & !b)) == VarSet{"a"});
    CHECK(factor_vars(v("x") ^ (a & b)) == VarSet{"x"});
    CHECK(equivalent((a & b) | (a & !b), a));
    CHECK_FALSE(equivalent(a, b));
    CHECK(equivalent(a ^ a, Formula::constant(false)));
}

TEST_CASE("property: bit-parallel weight equals row-by-row count")
{
    FormulaGen gen(1, 8);
    for (int round = 0; round < 200; ++round) {
        gen.reset_pool();
        Formula f = gen.make(5);
        REQUIRE(weight(f, gen.names()).weight == slow_weight(f, gen.names()));
    }
}

TEST_CASE("property: weights of f and !f add up")
{
    FormulaGen gen(2, 7);
    for (int round = 0; round < 200; ++round) {
        gen.reset_pool();
        Formula f = gen.make(5);
        auto total = std::uint64_t{1} << gen.names().size();
        REQUIRE(weight(f, gen.names()).weight + weight(!f, gen.names()).weight == total);
    }
}

TEST_CASE("property: x ^ g is balanced whenever x is not in g")
{
    FormulaGen gen(3, 5);
    std::vector<VarId> universe = gen.names();
    universe.push_back("x");
    for (int round = 0; round < 300; ++round) {
        gen.reset_pool();
        REQUIRE(is_balanced(Formula::var("x") ^ gen.make(5), universe));
    }
}

TEST_CASE("property: for balanced f, independence iff the difference is balanced")
{
    FormulaGen gen(4, 6);
    int checked = 0;
    for (int round = 0; round < 3000 && checked < 300; ++round) {
        gen.reset_pool();
        Formula f = gen.make(4);
        if (!is_balanced(f, gen.names()))
            continue;
        ++checked;
        gen.reset_pool();
        Formula g = gen.make(4);
        REQUIRE(statistically_dependent(f, g, gen.names()) == !is_balanced(f ^ g, gen.names()));
    }
    CHECK(checked >= 100);
}

TEST_CASE("property: or of two terms inherits independence from their xor-combinations")
{
    // the secret side is x ^ h, balanced by construction
    FormulaGen gen(12, 5);
    std::vector<VarId> universe = gen.names();
    universe.push_back("x");
    int applicable = 0;
    for (int round = 0; round < 1500; ++round) {
        gen.reset_pool();
        Formula g = Formula::var("x") ^ gen.make(3);
        gen.reset_pool();
        Formula a = gen.pick(3) == 0 ? gen.make(3) & Formula::var("x") : gen.make(3);
        gen.reset_pool();
        Formula b = gen.make(3);
        if (statistically_dependent(a, g, universe) || statistically_dependent(b, g, universe) ||
            statistically_dependent(a ^ b, g, universe))
            continue;
        ++applicable;
        REQUIRE_FALSE(statistically_dependent(a | b, g, universe));
    }
    CHECK(applicable > 100);
}

TEST_CASE("property: or of up to four terms inherits independence from every xor-combination")
{
    FormulaGen gen(13, 5);
    std::vector<VarId> universe = gen.names();
    universe.push_back("x");
    int applicable = 0;
    for (int round = 0; round < 600; ++round) {
        gen.reset_pool();
        Formula g = Formula::var("x") ^ gen.make(3);
        std::size_t n = 2 + static_cast<std::size_t>(round % 3);
        std::vector<Formula> phis;
        for (std::size_t i = 0; i < n; ++i) {
            gen.reset_pool();
            phis.push_back(gen.pick(4) == 0 ? (gen.make(2) ^ Formula::var("x")) : gen.make(3));
        }
        bool all_independent = true;
        for (std::uint32_t mask = 1; mask < (1U << n) && all_independent; ++mask) {
            Formula combo = Formula::constant(false);
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1U)
                    combo = combo ^ phis[i];
            all_independent = !statistically_dependent(combo, g, universe);
        }
        if (!all_independent)
            continue;
        ++applicable;
        REQUIRE_FALSE(statistically_dependent(or_all(phis), g, universe));
    }
    CHECK(applicable > 50);
}

TEST_CASE("property: a variable absent from both sides never creates dependence")
{
    FormulaGen gen(6, 4);
    std::vector<VarId> universe = gen.names();
    universe.push_back("unused");
    for (int round = 0; round < 200; ++round) {
        gen.reset_pool();
        Formula f = gen.make(4);
        gen.reset_pool();
        Formula g = gen.make(4);
        REQUIRE(statistically_dependent(f, g, gen.names()) == statistically_dependent(f, g, universe));
    }
}

TEST_CASE("property: hiding a secret with a fresh uniform variable gives independence")
{
    FormulaGen gen(9, 5);
    std::vector<VarId> universe = gen.names();
    universe.push_back("r");
    for (int round = 0; round < 200; ++round) {
        gen.reset_pool();
        Formula f = Formula::var("r") ^ gen.make(4);
        gen.reset_pool();
        Formula secret = gen.make(3);
        REQUIRE_FALSE(statistically_dependent(f, secret, universe));
    }
}
