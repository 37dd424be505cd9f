#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sifa/netlist.hpp"

namespace sifa {

namespace {

struct Asset {
    std::string_view name;
    std::string_view text;
};

// Generated from circuits/*.net at configure time.
#include "builtin_circuits.inc"

}  // namespace

std::vector<std::string> builtin_circuit_names()
{
    std::vector<std::string> names;
    for (const auto& a : kAssets)
        names.emplace_back(a.name);
    return names;
}

std::string_view builtin_circuit_text(std::string_view name)
{
    for (const auto& a : kAssets)
        if (a.name == name)
            return a.text;
    throw std::invalid_argument("unknown builtin circuit '" + std::string(name) + "'");
}

CircuitNetlist builtin_circuit(std::string_view name)
{
    return parse_netlist(builtin_circuit_text(name));
}

}  // namespace sifa
