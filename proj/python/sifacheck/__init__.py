"""Per-fault SIFA resistance checks for masked circuits with redundant fault detection."""

from ._core import (
    Circuit,
    Formula,
    NetlistError,
    OracleRefusal,
    SolverUndecided,
    __version__,
    analyze,
    builtin_circuit,
    builtin_circuit_names,
    check,
    confirm_leak,
    dependence_products,
    detection,
    essential_vars,
    explain,
    factor_vars,
    fault_sites,
    is_balanced,
    is_satisfiable,
    is_tautology,
    parse_netlist,
    report_json,
    statistically_dependent,
    var,
    verify,
    weight,
    xor_all,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
