#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sifa {

using VarId = std::string;
using VarSet = std::set<VarId>;
using Assignment = std::map<VarId, bool>;

enum class Op { Const, Var, Not, And, Or, Xor };

class Formula;

namespace detail {
struct Node;
}

/// Immutable Boolean expression DAG. Copies share the underlying node, so
/// subterms built once may appear many times without duplication.
class Formula {
public:
    Formula();  // const0

    static Formula constant(bool value);
    static Formula var(VarId name);
    static Formula make_not(Formula a);
    static Formula make_and(Formula a, Formula b);
    static Formula make_or(Formula a, Formula b);
    static Formula make_xor(Formula a, Formula b);

    Op op() const;
    bool const_value() const;       // only for Op::Const
    const VarId& var_name() const;  // only for Op::Var
    const Formula& lhs() const;     // Not/And/Or/Xor
    const Formula& rhs() const;     // And/Or/Xor

    bool is_const() const { return op() == Op::Const; }
    bool is_const(bool value) const { return is_const() && const_value() == value; }

    /// Structural hash, computed once at construction.
    std::size_t hash() const;
    /// Address of the shared node; equal for copies of the same formula.
    const void* identity() const { return node_.get(); }

    /// Structural equality (same operators, same variables, same shape).
    friend bool operator==(const Formula& a, const Formula& b);

    Formula operator!() const { return make_not(*this); }
    friend Formula operator&(Formula a, Formula b) { return make_and(std::move(a), std::move(b)); }
    friend Formula operator|(Formula a, Formula b) { return make_or(std::move(a), std::move(b)); }
    friend Formula operator^(Formula a, Formula b) { return make_xor(std::move(a), std::move(b)); }

private:
    friend struct detail::Node;
    // Empty handle, used only for the unused children of leaf nodes.
    explicit Formula(std::nullptr_t) {}
    static Formula make_binary(Op op, Formula a, Formula b);
    explicit Formula(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const detail::Node> node_;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return f.hash(); }
};

class IncompleteAssignment : public std::invalid_argument {
public:
    explicit IncompleteAssignment(const VarId& var)
        : std::invalid_argument("incomplete assignment: no value for variable '" + var + "'"), var_(var) {}
    const VarId& variable() const { return var_; }

private:
    VarId var_;
};

VarSet free_vars(const Formula& f);

/// f[v/x], folding every operator whose operands became constant.
Formula substitute(const Formula& f, const VarId& x, bool v);
/// Simultaneous partial evaluation; variables not in `alpha` stay free.
Formula substitute(const Formula& f, const Assignment& alpha);

/// Throws IncompleteAssignment when a reachable variable has no value.
bool evaluate(const Formula& f, const Assignment& alpha);

/// Left fold of xor; the empty list yields const0.
Formula xor_all(const std::vector<Formula>& fs);
/// Left fold of or; the empty list yields const0.
Formula or_all(const std::vector<Formula>& fs);

/// Number of distinct DAG nodes.
std::size_t dag_size(const Formula& f);

/// Infix rendering with `!`, `&`, `|`, `^`; shared subterms are expanded.
std::string to_string(const Formula& f);

}  // namespace sifa
