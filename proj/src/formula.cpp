#include "sifa/formula.hpp"

#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace sifa {

namespace detail {

struct Node {
    Op op = Op::Const;
    bool value = false;
    VarId name;
    Formula lhs{nullptr};
    Formula rhs{nullptr};
    std::size_t hash = 0;
};

}  // namespace detail

namespace {

std::size_t mix(std::size_t seed, std::size_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::shared_ptr<const detail::Node> make_const_node(bool value)
{
    auto n = std::make_shared<detail::Node>();
    n->value = value;
    n->hash = mix(static_cast<std::size_t>(Op::Const), value ? 1 : 0);
    return n;
}

const std::shared_ptr<const detail::Node>& const_node(bool value)
{
    static const auto zero = make_const_node(false);
    static const auto one = make_const_node(true);
    return value ? one : zero;
}

}  // namespace

Formula::Formula() : node_(const_node(false)) {}

Formula Formula::constant(bool value)
{
    return Formula(const_node(value));
}

Formula Formula::var(VarId name)
{
    if (name.empty())
        throw std::invalid_argument("variable name must be nonempty");
    if (name == "const0" || name == "const1")
        throw std::invalid_argument("'" + name + "' is reserved for constants");
    auto n = std::make_shared<detail::Node>();
    n->op = Op::Var;
    n->hash = mix(static_cast<std::size_t>(Op::Var), std::hash<std::string>{}(name));
    n->name = std::move(name);
    return Formula(std::move(n));
}

Formula Formula::make_not(Formula a)
{
    auto n = std::make_shared<detail::Node>();
    n->op = Op::Not;
    n->hash = mix(static_cast<std::size_t>(Op::Not), a.hash());
    n->lhs = std::move(a);
    return Formula(std::move(n));
}

Formula Formula::make_binary(Op op, Formula a, Formula b)
{
    auto n = std::make_shared<detail::Node>();
    n->op = op;
    n->hash = mix(mix(static_cast<std::size_t>(op), a.hash()), b.hash());
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return Formula(std::move(n));
}

Formula Formula::make_and(Formula a, Formula b) { return make_binary(Op::And, std::move(a), std::move(b)); }
Formula Formula::make_or(Formula a, Formula b) { return make_binary(Op::Or, std::move(a), std::move(b)); }
Formula Formula::make_xor(Formula a, Formula b) { return make_binary(Op::Xor, std::move(a), std::move(b)); }

Op Formula::op() const { return node_->op; }
bool Formula::const_value() const { return node_->value; }
const VarId& Formula::var_name() const { return node_->name; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }
std::size_t Formula::hash() const { return node_->hash; }

namespace {

struct PairHash {
    std::size_t operator()(const std::pair<const void*, const void*>& p) const
    {
        return mix(std::hash<const void*>{}(p.first), std::hash<const void*>{}(p.second));
    }
};

using PairSet = std::unordered_set<std::pair<const void*, const void*>, PairHash>;

bool equal_rec(const Formula& a, const Formula& b, PairSet& known_equal)
{
    if (a.identity() == b.identity())
        return true;
    if (a.hash() != b.hash() || a.op() != b.op())
        return false;
    if (known_equal.contains({a.identity(), b.identity()}))
        return true;
    bool eq = false;
    switch (a.op()) {
    case Op::Const:
        eq = a.const_value() == b.const_value();
        break;
    case Op::Var:
        eq = a.var_name() == b.var_name();
        break;
    case Op::Not:
        eq = equal_rec(a.lhs(), b.lhs(), known_equal);
        break;
    default:
        eq = equal_rec(a.lhs(), b.lhs(), known_equal) && equal_rec(a.rhs(), b.rhs(), known_equal);
        break;
    }
    if (eq)
        known_equal.insert({a.identity(), b.identity()});
    return eq;
}

template <typename Visit>
void for_each_node(const Formula& root, Visit&& visit)
{
    std::unordered_set<const void*> seen;
    std::vector<const Formula*> stack{&root};
    while (!stack.empty()) {
        const Formula* f = stack.back();
        stack.pop_back();
        if (!seen.insert(f->identity()).second)
            continue;
        visit(*f);
        if (f->op() == Op::Not) {
            stack.push_back(&f->lhs());
        } else if (f->op() != Op::Const && f->op() != Op::Var) {
            stack.push_back(&f->lhs());
            stack.push_back(&f->rhs());
        }
    }
}

// Folds an operator over freshly substituted children. Only constants are
// folded; x ^ x and similar stay as they are.
Formula fold(const Formula& original, Formula a, Formula b)
{
    switch (original.op()) {
    case Op::Not:
        if (a.is_const())
            return Formula::constant(!a.const_value());
        if (a.identity() == original.lhs().identity())
            return original;
        return Formula::make_not(std::move(a));
    case Op::And:
        if (a.is_const(false) || b.is_const(false))
            return Formula::constant(false);
        if (a.is_const(true))
            return b;
        if (b.is_const(true))
            return a;
        break;
    case Op::Or:
        if (a.is_const(true) || b.is_const(true))
            return Formula::constant(true);
        if (a.is_const(false))
            return b;
        if (b.is_const(false))
            return a;
        break;
    case Op::Xor:
        if (a.is_const() && b.is_const())
            return Formula::constant(a.const_value() != b.const_value());
        if (a.is_const())
            return a.const_value() ? Formula::make_not(std::move(b)) : b;
        if (b.is_const())
            return b.const_value() ? Formula::make_not(std::move(a)) : a;
        break;
    default:
        return original;
    }
    if (a.identity() == original.lhs().identity() && b.identity() == original.rhs().identity())
        return original;
    switch (original.op()) {
    case Op::And:
        return Formula::make_and(std::move(a), std::move(b));
    case Op::Or:
        return Formula::make_or(std::move(a), std::move(b));
    default:
        return Formula::make_xor(std::move(a), std::move(b));
    }
}

class Substituter {
public:
    explicit Substituter(const Assignment& alpha) : alpha_(alpha) {}

    Formula run(const Formula& f)
    {
        if (auto it = memo_.find(f.identity()); it != memo_.end())
            return it->second;
        Formula out;
        switch (f.op()) {
        case Op::Const:
            out = f;
            break;
        case Op::Var:
            if (auto it = alpha_.find(f.var_name()); it != alpha_.end())
                out = Formula::constant(it->second);
            else
                out = f;
            break;
        case Op::Not:
            out = fold(f, run(f.lhs()), Formula());
            break;
        default: {
            Formula a = run(f.lhs());
            Formula b = run(f.rhs());
            out = fold(f, std::move(a), std::move(b));
            break;
        }
        }
        memo_.emplace(f.identity(), out);
        return out;
    }

private:
    const Assignment& alpha_;
    std::unordered_map<const void*, Formula> memo_;
};

}  // namespace

bool operator==(const Formula& a, const Formula& b)
{
    PairSet known_equal;
    return equal_rec(a, b, known_equal);
}

VarSet free_vars(const Formula& f)
{
    VarSet vars;
    for_each_node(f, [&](const Formula& n) {
        if (n.op() == Op::Var)
            vars.insert(n.var_name());
    });
    return vars;
}

Formula substitute(const Formula& f, const VarId& x, bool v)
{
    return substitute(f, Assignment{{x, v}});
}

Formula substitute(const Formula& f, const Assignment& alpha)
{
    if (alpha.empty())
        return f;
    return Substituter(alpha).run(f);
}

bool evaluate(const Formula& f, const Assignment& alpha)
{
    std::unordered_map<const void*, bool> memo;
    std::function<bool(const Formula&)> eval = [&](const Formula& n) -> bool {
        if (auto it = memo.find(n.identity()); it != memo.end())
            return it->second;
        bool r = false;
        switch (n.op()) {
        case Op::Const:
            r = n.const_value();
            break;
        case Op::Var: {
            auto it = alpha.find(n.var_name());
            if (it == alpha.end())
                throw IncompleteAssignment(n.var_name());
            r = it->second;
            break;
        }
        case Op::Not:
            r = !eval(n.lhs());
            break;
        case Op::And:
            r = eval(n.lhs()) & eval(n.rhs());
            break;
        case Op::Or:
            r = eval(n.lhs()) | eval(n.rhs());
            break;
        case Op::Xor:
            r = eval(n.lhs()) != eval(n.rhs());
            break;
        }
        memo.emplace(n.identity(), r);
        return r;
    };
    return eval(f);
}

Formula xor_all(const std::vector<Formula>& fs)
{
    if (fs.empty())
        return Formula::constant(false);
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i)
        acc = acc ^ fs[i];
    return acc;
}

Formula or_all(const std::vector<Formula>& fs)
{
    if (fs.empty())
        return Formula::constant(false);
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i)
        acc = acc | fs[i];
    return acc;
}

std::size_t dag_size(const Formula& f)
{
    std::size_t n = 0;
    for_each_node(f, [&](const Formula&) { ++n; });
    return n;
}

namespace {

void render(const Formula& f, std::string& out)
{
    switch (f.op()) {
    case Op::Const:
        out += f.const_value() ? "1" : "0";
        return;
    case Op::Var:
        out += f.var_name();
        return;
    case Op::Not:
        out += '!';
        if (f.lhs().op() == Op::Const || f.lhs().op() == Op::Var || f.lhs().op() == Op::Not) {
            render(f.lhs(), out);
        } else {
            out += '(';
            render(f.lhs(), out);
            out += ')';
        }
        return;
    default:
        break;
    }
    const char* sym = f.op() == Op::And ? " & " : f.op() == Op::Or ? " | " : " ^ ";
    auto operand = [&](const Formula& g) {
        bool atomic = g.op() == Op::Const || g.op() == Op::Var || g.op() == Op::Not || g.op() == f.op();
        if (!atomic)
            out += '(';
        render(g, out);
        if (!atomic)
            out += ')';
    };
    operand(f.lhs());
    out += sym;
    operand(f.rhs());
}

}  // namespace

std::string to_string(const Formula& f)
{
    std::string out;
    render(f, out);
    return out;
}

}  // namespace sifa
