#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sifa/formula.hpp"
#include "sifa/netlist.hpp"

namespace sifa {

enum class FaultKind { BitFlip };

/// A single injectable fault in the second redundant copy of a circuit.
struct FaultSite {
    enum class Location { Input, Gate };

    Location location = Location::Gate;
    std::string wire;
    FaultKind kind = FaultKind::BitFlip;

    /// "input:<id>" or "gate:<id>".
    std::string id() const;
    static std::optional<FaultSite> parse(std::string_view id);

    friend bool operator==(const FaultSite&, const FaultSite&) = default;
};

/// Inputs in declaration order, then gates in declaration order.
std::vector<FaultSite> enumerate_fault_sites(const CircuitNetlist& c, bool include_inputs = true);

/// Redundant-pair model of one fault: both copies read the same inputs,
/// only the second copy sees the flipped wire.
struct DetectionInstance {
    FaultSite site;
    std::vector<std::string> output_names;
    std::vector<Formula> deltas;  // faulted output i ^ clean output i
    Formula delta;                // or over deltas
    std::vector<VarId> masks;
    std::vector<SecretSpec> secrets;
    std::vector<VarId> inputs;  // every circuit input, declaration order
};

/// Symbolic outputs with each wire in `flips` inverted at its source; a wire
/// listed twice is inverted twice.
std::vector<Formula> symbolic_outputs(const CircuitNetlist& c, std::span<const std::string> flips = {});

/// Throws std::invalid_argument if the site does not name an input or gate of c.
DetectionInstance build_detection(const CircuitNetlist& c, const FaultSite& site);

Formula unmasked_secret_formula(const SecretSpec& s);

}  // namespace sifa
