#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sifa/formula.hpp"

namespace sifa {

/// Role of a primary input: a fresh random mask, or one share of a secret.
struct InputRole {
    std::optional<std::string> secret;  // empty for masks
    unsigned share_index = 0;

    static InputRole mask() { return {}; }
    static InputRole share(std::string secret, unsigned index) { return {std::move(secret), index}; }
    bool is_mask() const { return !secret.has_value(); }
    friend bool operator==(const InputRole&, const InputRole&) = default;
};

struct Input {
    VarId id;
    InputRole role;
    friend bool operator==(const Input&, const Input&) = default;
};

enum class GateOp { Not, And, Or, Xor };

std::string_view to_string(GateOp op);

/// A wire reference, optionally read through a fused inverter.
struct Operand {
    std::string wire;
    bool negated = false;
    friend bool operator==(const Operand&, const Operand&) = default;
};

struct Gate {
    std::string id;
    GateOp op = GateOp::And;
    std::vector<Operand> operands;
    friend bool operator==(const Gate&, const Gate&) = default;
};

struct CircuitNetlist {
    std::string name;
    std::vector<Input> inputs;
    std::vector<Gate> gates;
    std::vector<std::string> outputs;

    const Input* find_input(std::string_view id) const;
    const Gate* find_gate(std::string_view id) const;
    std::vector<VarId> input_ids() const;
    std::vector<VarId> mask_ids() const;

    friend bool operator==(const CircuitNetlist&, const CircuitNetlist&) = default;
};

struct SecretSpec {
    std::string name;
    std::vector<VarId> shares;  // ordered by share index
    friend bool operator==(const SecretSpec&, const SecretSpec&) = default;
};

enum class ParseErrorKind {
    Syntax,
    Arity,
    UndefinedWire,
    ForwardReference,
    DuplicateId,
    ReservedName,
    SingleShare,
    ShareIndices,
    NoOutputs,
};

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, std::size_t line, const std::string& message);
    ParseErrorKind kind() const { return kind_; }
    /// 1-based; 0 for whole-file problems.
    std::size_t line() const { return line_; }

private:
    ParseErrorKind kind_;
    std::size_t line_;
};

CircuitNetlist parse_netlist(std::string_view text);
std::string serialize_netlist(const CircuitNetlist& c);

/// One entry per distinct secret name, in order of first appearance.
std::vector<SecretSpec> secrets_of(const CircuitNetlist& c);

std::vector<std::string> builtin_circuit_names();
/// Throws std::invalid_argument for unknown names.
CircuitNetlist builtin_circuit(std::string_view name);
std::string_view builtin_circuit_text(std::string_view name);

}  // namespace sifa
