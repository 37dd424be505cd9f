#include "sifa/fault.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace sifa {

std::string FaultSite::id() const
{
    return (location == Location::Input ? "input:" : "gate:") + wire;
}

std::optional<FaultSite> FaultSite::parse(std::string_view id)
{
    auto colon = id.find(':');
    if (colon == std::string_view::npos || colon + 1 == id.size())
        return std::nullopt;
    FaultSite site;
    auto prefix = id.substr(0, colon);
    if (prefix == "input")
        site.location = Location::Input;
    else if (prefix == "gate")
        site.location = Location::Gate;
    else
        return std::nullopt;
    site.wire = std::string(id.substr(colon + 1));
    return site;
}

std::vector<FaultSite> enumerate_fault_sites(const CircuitNetlist& c, bool include_inputs)
{
    std::vector<FaultSite> sites;
    if (include_inputs)
        for (const auto& in : c.inputs)
            sites.push_back({FaultSite::Location::Input, in.id});
    for (const auto& g : c.gates)
        sites.push_back({FaultSite::Location::Gate, g.id});
    return sites;
}

namespace {

using WireMap = std::unordered_map<std::string, Formula>;

Formula read_operand(const WireMap& wires, const Operand& op)
{
    Formula w;
    if (op.wire == "const0")
        w = Formula::constant(false);
    else if (op.wire == "const1")
        w = Formula::constant(true);
    else
        w = wires.at(op.wire);
    return op.negated ? !w : w;
}

Formula gate_formula(const Gate& g, const WireMap& wires)
{
    switch (g.op) {
    case GateOp::Not:
        return !read_operand(wires, g.operands[0]);
    case GateOp::And:
        return read_operand(wires, g.operands[0]) & read_operand(wires, g.operands[1]);
    case GateOp::Or:
        return read_operand(wires, g.operands[0]) | read_operand(wires, g.operands[1]);
    case GateOp::Xor:
        return read_operand(wires, g.operands[0]) ^ read_operand(wires, g.operands[1]);
    }
    throw std::logic_error("unhandled gate operator");
}

// Copy 1 starts from copy 0 and only rebuilds gates downstream of a flip, so
// the two copies share every untouched subterm.
std::vector<Formula> evaluate_copy(const CircuitNetlist& c, const WireMap& clean, std::span<const std::string> flips)
{
    WireMap wires;
    std::unordered_map<std::string, bool> dirty;
    auto apply_flips = [&](const std::string& wire, Formula f, bool& touched) {
        for (auto n = std::count(flips.begin(), flips.end(), wire); n > 0; --n) {
            f = !f;
            touched = true;
        }
        return f;
    };
    for (const auto& in : c.inputs) {
        bool touched = false;
        wires.emplace(in.id, apply_flips(in.id, clean.at(in.id), touched));
        dirty[in.id] = touched;
    }
    for (const auto& g : c.gates) {
        bool touched = std::any_of(g.operands.begin(), g.operands.end(), [&](const Operand& op) {
            auto it = dirty.find(op.wire);
            return it != dirty.end() && it->second;
        });
        Formula f = touched ? gate_formula(g, wires) : clean.at(g.id);
        wires.emplace(g.id, apply_flips(g.id, std::move(f), touched));
        dirty[g.id] = touched;
    }
    std::vector<Formula> outs;
    for (const auto& o : c.outputs)
        outs.push_back(read_operand(wires, {o, false}));
    return outs;
}

WireMap clean_wires(const CircuitNetlist& c)
{
    WireMap wires;
    for (const auto& in : c.inputs)
        wires.emplace(in.id, Formula::var(in.id));
    for (const auto& g : c.gates)
        wires.emplace(g.id, gate_formula(g, wires));
    return wires;
}

}  // namespace

std::vector<Formula> symbolic_outputs(const CircuitNetlist& c, std::span<const std::string> flips)
{
    WireMap clean = clean_wires(c);
    if (flips.empty()) {
        std::vector<Formula> outs;
        for (const auto& o : c.outputs)
            outs.push_back(read_operand(clean, {o, false}));
        return outs;
    }
    return evaluate_copy(c, clean, flips);
}

DetectionInstance build_detection(const CircuitNetlist& c, const FaultSite& site)
{
    bool exists = site.location == FaultSite::Location::Input ? c.find_input(site.wire) != nullptr
                                                              : c.find_gate(site.wire) != nullptr;
    if (!exists)
        throw std::invalid_argument("no fault site '" + site.id() + "' in circuit '" + c.name + "'");

    WireMap clean = clean_wires(c);
    std::vector<Formula> outs0;
    for (const auto& o : c.outputs)
        outs0.push_back(read_operand(clean, {o, false}));
    const std::string flip[] = {site.wire};
    std::vector<Formula> outs1 = evaluate_copy(c, clean, flip);

    DetectionInstance d;
    d.site = site;
    d.output_names = c.outputs;
    for (std::size_t i = 0; i < outs0.size(); ++i)
        d.deltas.push_back(outs1[i] ^ outs0[i]);
    d.delta = or_all(d.deltas);
    d.masks = c.mask_ids();
    d.secrets = secrets_of(c);
    d.inputs = c.input_ids();
    return d;
}

Formula unmasked_secret_formula(const SecretSpec& s)
{
    std::vector<Formula> shares;
    for (const auto& id : s.shares)
        shares.push_back(Formula::var(id));
    return xor_all(shares);
}

}  // namespace sifa
