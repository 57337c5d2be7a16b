"""
Module: cli
Purpose: Command-line interface for Dissiwire.
"""

import argparse
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np
import yaml
from scipy.linalg import subspace_angles

from . import braid, core, liouville, momentum, oracle, reporting, wires
from .cli_formatter import CLIFormatter, detect_terminal_capabilities
from .exceptions import (
    ConfigError,
    DimensionError,
    DissiwireError,
    InconsistentModelError,
    NotChiralError,
    NumericalGuardError,
    OracleError,
    PhysicalityError,
)
from .models.config import OUTPUT_FORMATS, RunConfig
from .models.majorana import CovarianceMatrix
from .models.wire import RAMP_PROFILES, WIRE_KINDS, RampSchedule, WireSpec
from .utils import configure_output_dir, configure_tolerances, format_number, log_info, parse_angle

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_GUARD = 3

INITIAL_STATES = ("vacuum", "mixed", "random")
AGREEMENT_TOL = 1e-6  # Gaussian vs Fock covariance

# Command-specific defaults; anything not listed falls back to RunConfig.
COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {
    "winding": {"kind": "canonical"},
    "move": {"n_sites": 4, "dt": 0.05, "duration": 100.0},
    "oracle-compare": {"n_sites": 3, "duration": 5.0},
}
EXTRA_DEFAULTS: dict[str, dict[str, Any]] = {
    "steady": {"initial": "mixed"},
    "evolve": {"initial": "vacuum", "hopping": 0.0, "mu": 0.0, "samples": 10},
    "move": {"profile": "linear"},
    "braid-demo": {"braided": True, "oracle": False},
    "oracle-compare": {"initial": "vacuum", "hopping": 0.0, "mu": 0.0, "samples": 5},
}
# YAML key -> RunConfig field
CONFIG_KEYS = {
    "kind": "kind",
    "n": "n_sites",
    "theta": "theta",
    "phi": "phi",
    "epsilon": "epsilon",
    "seed": "seed",
    "kappa": "kappa",
    "dt": "dt",
    "duration": "duration",
    "grid": "grid",
    "tol": "tol",
    "zero_tol": "zero_tol",
    "out": "output_dir",
    "format": "output_format",
}

CSV_COLUMNS = {
    "spectrum": ["index", "matrix_rate", "quasiparticle_rate", "zero_mode", "purity"],
    "zero-modes": ["majorana", "site", "left_abs", "right_abs"],
    "steady": ["a", "b", "value"],
    "evolve": ["time", "min_purity", "max_purity", "mean_occupation", "edge_correlation", "steady_distance"],
    "winding": ["k", "n_x", "n_y", "n_z", "purity", "occupation"],
    "move": [
        "n_sites",
        "duration",
        "profile",
        "dt",
        "steps",
        "predicted_attenuation",
        "measured_attenuation",
        "relative_error",
        "max_rate",
        "too_fast",
    ],
    "braid-demo": ["braided", "n1", "n2", "var1", "var2", "source"],
    "oracle-compare": ["time", "max_abs_difference"],
}


@dataclass
class CommandResult:
    """Body for JSON output, table for CSV output and the terminal summary."""

    body: dict
    rows: list[dict]
    summary: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


# --------------------------------------------------------------------- parsing
def _bool_arg(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in {"true", "yes", "1", "on"}:
        return True
    if lowered in {"false", "no", "0", "off"}:
        return False
    raise argparse.ArgumentTypeError(f"Expected true or false, got '{value}'.")


def _common_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", default=None, help="YAML file with flag values; explicit flags win.")
    parent.add_argument("--out", default=None, help="Output directory (also $DISSIWIRE_OUTPUT_DIR).")
    parent.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="Output format (default json).")
    parent.add_argument("--tol", type=float, default=None, help="Physicality tolerance (also $DISSIWIRE_TOL).")
    parent.add_argument(
        "--zero-tol",
        dest="zero_tol",
        type=float,
        default=None,
        help="Zero-mode threshold on damping eigenvalues (also $DISSIWIRE_ZERO_TOL).",
    )
    return parent


def _model_parent(kinds) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--kind", choices=kinds, default=None, help="Model family.")
    parent.add_argument("--n", type=int, default=None, help="Number of lattice sites N.")
    parent.add_argument("--theta", default=None, help="Deformation angle θ (radians or pi literal).")
    parent.add_argument("--phi", default=None, help="Gauge phase φ (radians or pi literal).")
    parent.add_argument(
        "--epsilon",
        "--disorder",
        dest="epsilon",
        type=float,
        default=None,
        help="Disorder range ε of the per-operator angles (imperfection strength for winding).",
    )
    parent.add_argument("--seed", type=int, default=None, help="Random seed; required when ε > 0.")
    parent.add_argument("--kappa", type=float, default=None, help="Dissipation rate κ.")
    return parent


def _time_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--dt", type=float, default=None, help="Integration step.")
    parent.add_argument("--duration", "--T", dest="duration", type=float, default=None, help="Evolution time T.")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """
    Argument parser with presentation flags and one subparser per scenario.
    """
    parser = argparse.ArgumentParser(
        prog="dissiwire",
        description="Dissiwire CLI. Dissipative Majorana wires: spectra, zero modes, winding and braiding.",
    )
    parser.add_argument("--no-color", action="store_true", help="Disable ANSI colors regardless of terminal support.")
    parser.add_argument("--plain", action="store_true", help="Plain mode: ASCII-only separators, no ANSI colors.")
    parser.add_argument("--color", choices=["auto", "always", "never"], default=None, help="Force color usage.")
    parser.add_argument("--theme", choices=["light", "dark"], default=None, help="Theme palette.")
    parser.add_argument("--verbose", action="store_true", help="Print resolved configuration details.")
    parser.add_argument(
        "--mode",
        choices=["auto", "tty", "plain", "pipe"],
        default="auto",
        help="Force output mode: auto (default), tty, plain, or pipe (single-line).",
    )
    parser.add_argument(
        "--pipe-format",
        choices=["json", "kv"],
        default="json",
        help="In pipe mode, output single-line JSON (default) or key/value pairs.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = _common_parent()
    wire_model = _model_parent(WIRE_KINDS)
    momentum_model = _model_parent(momentum.XI_KINDS)
    timing = _time_parent()

    subparsers.add_parser(
        "spectrum",
        parents=[common, wire_model],
        help="Damping and purity spectra of a wire",
        description="Eigenvalues of X (matrix and quasiparticle rates) and the steady-state purity spectrum.",
    )
    subparsers.add_parser(
        "zero-modes",
        parents=[common, wire_model],
        help="Left/right zero-mode profiles |v_i|",
    )
    steady_parser = subparsers.add_parser(
        "steady",
        parents=[common, wire_model],
        help="Steady-state covariance dump",
    )
    steady_parser.add_argument(
        "--initial", choices=INITIAL_STATES, default=None, help="State whose zero-mode block is kept."
    )

    evolve_parser = subparsers.add_parser(
        "evolve",
        parents=[common, wire_model, timing],
        help="Trajectory observables of the covariance equation",
    )
    evolve_parser.add_argument("--initial", choices=INITIAL_STATES, default=None, help="Initial Gaussian state.")
    evolve_parser.add_argument("--hopping", type=float, default=None, help="Hopping amplitude t of a quadratic Hamiltonian.")
    evolve_parser.add_argument("--mu", type=float, default=None, help="Chemical potential μ.")
    evolve_parser.add_argument("--samples", type=int, default=None, help="Number of sampled times.")

    winding_parser = subparsers.add_parser(
        "winding",
        parents=[common, momentum_model],
        help="Bloch field, chiral axis, winding number and filling",
    )
    winding_parser.add_argument("--grid", type=int, default=None, help="Brillouin grid size L (even, ≥ 8).")

    move_parser = subparsers.add_parser(
        "move",
        parents=[common, timing],
        help="Adiabatic move of the right edge Majorana",
    )
    move_parser.add_argument("--n", type=int, default=None, help="Number of lattice sites N.")
    move_parser.add_argument("--kappa", type=float, default=None, help="Dissipation rate κ.")
    move_parser.add_argument("--profile", choices=RAMP_PROFILES, default=None, help="Ramp profile θ(t).")

    braid_parser = subparsers.add_parser(
        "braid-demo",
        parents=[common],
        help="Two-wire braiding interferometry",
    )
    braid_parser.add_argument("--braided", type=_bool_arg, default=None, help="Apply the first braid (true/false).")
    braid_parser.add_argument(
        "--oracle", action="store_true", default=None, help="Run the protocol on the Fock-space state."
    )

    compare_parser = subparsers.add_parser(
        "oracle-compare",
        parents=[common, wire_model, timing],
        help="Covariance equation against brute-force Lindblad evolution",
    )
    compare_parser.add_argument("--initial", choices=INITIAL_STATES, default=None, help="Initial Gaussian state.")
    compare_parser.add_argument("--hopping", type=float, default=None, help="Hopping amplitude t.")
    compare_parser.add_argument("--mu", type=float, default=None, help="Chemical potential μ.")
    compare_parser.add_argument("--samples", type=int, default=None, help="Number of compared times.")
    return parser


# --------------------------------------------------------------- configuration
def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            loaded = yaml.safe_load(handle)
    except OSError as exc:
        raise ConfigError(f"Cannot read config file '{path}': {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"Config file '{path}' is not valid YAML: {exc}") from exc
    if loaded is None:
        return {}
    if not isinstance(loaded, dict):
        raise ConfigError(f"Config file '{path}' must hold a flat key/value mapping.")
    return {str(key).replace("-", "_"): value for key, value in loaded.items()}


def _coerce(name: str, value: Any, cast: Callable[[Any], Any]) -> Any:
    if value is None:
        return None
    try:
        return cast(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"Invalid value for '{name}': {value!r}.") from exc


def _as_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    try:
        return _bool_arg(str(value))
    except argparse.ArgumentTypeError as exc:
        raise ValueError(str(exc)) from exc


CASTS: dict[str, Callable[[Any], Any]] = {
    "kind": str,
    "n": int,
    "theta": parse_angle,
    "phi": parse_angle,
    "epsilon": float,
    "seed": int,
    "kappa": float,
    "dt": float,
    "duration": float,
    "grid": int,
    "tol": float,
    "zero_tol": float,
    "out": str,
    "format": str,
    "initial": str,
    "hopping": float,
    "mu": float,
    "samples": int,
    "profile": str,
    "braided": _as_bool,
    "oracle": _as_bool,
}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge flags, the optional YAML file and defaults into a validated RunConfig.

    Raises:
        ConfigError: For unreadable files, unknown keys or invalid values.
    """
    command = args.command
    file_values = _load_config_file(getattr(args, "config", None))
    unknown = sorted(set(file_values) - set(CASTS))
    if unknown:
        raise ConfigError(f"Unknown config keys: {', '.join(unknown)}.")

    def pick(name: str) -> Any:
        value = getattr(args, name, None)
        if value is None:
            value = file_values.get(name)
        return _coerce(name, value, CASTS[name])

    values: dict[str, Any] = dict(COMMAND_DEFAULTS.get(command, {}))
    for key, field_name in CONFIG_KEYS.items():
        value = pick(key)
        if value is not None:
            values[field_name] = value
    extras = dict(EXTRA_DEFAULTS.get(command, {}))
    for key in extras:
        value = pick(key)
        if value is not None:
            extras[key] = value
    if "initial" in extras and extras["initial"] not in INITIAL_STATES:
        raise ConfigError(f"Unknown initial state '{extras['initial']}'. Expected {', '.join(INITIAL_STATES)}.")
    if "samples" in extras and extras["samples"] < 1:
        raise ConfigError(f"samples must be positive, got {extras['samples']}.")
    return RunConfig(command=command, extras=extras, **values).validate()


# -------------------------------------------------------------------- helpers
def _wire_spec(config: RunConfig) -> WireSpec:
    return WireSpec(
        n_sites=config.n_sites,
        kind=config.kind,
        theta=config.theta,
        phi=config.phi,
        disorder=config.epsilon,
        seed=config.seed,
        kappa=config.kappa,
    )


def _initial_state(config: RunConfig) -> CovarianceMatrix:
    initial = config.extras["initial"]
    if initial == "vacuum":
        return core.vacuum_covariance(config.n_sites)
    if initial == "mixed":
        return CovarianceMatrix(config.n_sites, np.zeros((2 * config.n_sites, 2 * config.n_sites)))
    if config.seed is None:
        raise ConfigError("A seed is required for a random initial state.")
    return core.random_covariance(config.n_sites, np.random.default_rng(config.seed))


def _hamiltonian(config: RunConfig):
    hopping = config.extras.get("hopping", 0.0)
    mu = config.extras.get("mu", 0.0)
    if not hopping and not mu:
        return None
    return core.hopping_hamiltonian(config.n_sites, hopping, mu)


def _finite_or_none(value: float) -> float | None:
    return float(value) if np.isfinite(value) else None


def _mean_occupation(gamma: np.ndarray) -> float:
    return float(np.mean(0.5 * (1.0 - np.diag(gamma, 1)[0::2])))


def _localized_pair(basis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rotate a two-dimensional null space into its left- and right-localized vectors."""
    position = np.repeat(np.arange(1, basis.shape[0] // 2 + 1), 2).astype(float)
    _values, rotation = np.linalg.eigh(basis.T @ (position[:, None] * basis))
    modes = basis @ rotation
    left, right = modes[:, 0], modes[:, -1]
    left = left * np.sign(left[np.argmax(np.abs(left))])
    right = right * np.sign(right[np.argmax(np.abs(right))])
    return left, right


# ------------------------------------------------------------------ commands
def _spectrum_command(config: RunConfig) -> CommandResult:
    pair = wires.wire_damping(_wire_spec(config))
    spectrum = liouville.damping_spectrum(pair)
    steady = liouville.steady_state(pair)
    purity = core.purity_spectrum(steady)
    bulk_purity = liouville.bulk_purity_spectrum(pair, steady)
    zero_set = set(spectrum.zero_indices)
    rates = [float(value) for value in spectrum.eigenvalues]
    rows = [
        {
            "index": index + 1,
            "matrix_rate": rate,
            "quasiparticle_rate": 2.0 * rate,
            "zero_mode": index in zero_set,
            "purity": purity[index],
        }
        for index, rate in enumerate(rates)
    ]
    bulk_rates = [rate for index, rate in enumerate(rates) if index not in zero_set]
    body = {
        "n_zero_modes": len(zero_set),
        "matrix_rates": rates,
        "quasiparticle_rates": [2.0 * rate for rate in rates],
        "bulk_rate_spread": (max(bulk_rates) - min(bulk_rates)) if bulk_rates else 0.0,
        "purity_spectrum": purity,
        "bulk_purity_spectrum": bulk_purity,
    }
    summary = [
        ("Zero modes", str(len(zero_set))),
        ("Smallest bulk rate", format_number(min(bulk_rates)) if bulk_rates else "-"),
        ("Largest rate", format_number(rates[-1])),
        ("Bulk rate spread", format_number(body["bulk_rate_spread"])),
    ]
    return CommandResult(body, rows, summary)


def _zero_modes_command(config: RunConfig) -> CommandResult:
    spec = _wire_spec(config)
    pair = wires.wire_damping(spec)
    basis = liouville.zero_modes(pair)
    if basis.shape[1] != 2:
        message = f"Expected exactly 2 zero modes, found {basis.shape[1]}; adjust --zero-tol."
        raise InconsistentModelError(message)
    left, right = _localized_pair(basis)
    if spec.kind == "ideal":
        analytic_left = np.zeros(2 * spec.n_sites)
        analytic_right = np.zeros(2 * spec.n_sites)
        analytic_left[0] = 1.0
        analytic_right[-1] = 1.0
    else:
        analytic_left, analytic_right = wires.analytic_zero_modes(spec)
    angle = float(np.max(subspace_angles(basis, np.column_stack([analytic_left, analytic_right]))))
    body: dict[str, Any] = {
        "left": left,
        "right": right,
        "subspace_angle": angle,
        "localization_length": _finite_or_none(wires.localization_length(spec.theta) if spec.kind != "ideal" else 0.0),
    }
    if spec.phi == 0.0:
        body["fitted_left_length"] = _finite_or_none(wires.fit_localization_length(left, "odd"))
        body["fitted_right_length"] = _finite_or_none(wires.fit_localization_length(right[::-1], "odd"))
    rows = [
        {"majorana": index + 1, "site": index // 2 + 1, "left_abs": abs(float(left[index])), "right_abs": abs(float(right[index]))}
        for index in range(left.size)
    ]
    summary = [
        ("Zero modes", "2"),
        ("Analytic subspace angle", format_number(angle)),
        ("Localization length", str(body["localization_length"])),
    ]
    return CommandResult(body, rows, summary)


def _steady_command(config: RunConfig) -> CommandResult:
    pair = wires.wire_damping(_wire_spec(config))
    gamma = liouville.steady_state(pair, _initial_state(config)).gamma
    size = gamma.shape[0]
    occupations = [core.occupation(gamma, site) for site in range(1, config.n_sites + 1)]
    rows = [
        {"a": a + 1, "b": b + 1, "value": float(gamma[a, b])}
        for a in range(size)
        for b in range(size)
    ]
    body = {
        "covariance": gamma,
        "occupations": occupations,
        "purity_spectrum": core.purity_spectrum(gamma),
        "edge_block": liouville.edge_block(pair, gamma),
    }
    summary = [
        ("Mean occupation", format_number(float(np.mean(occupations)))),
        ("Pure", str(core.is_pure(gamma))),
    ]
    return CommandResult(body, rows, summary)


def _evolve_command(config: RunConfig) -> CommandResult:
    pair = wires.wire_damping(_wire_spec(config))
    hamiltonian = _hamiltonian(config)
    start = _initial_state(config)
    reference = liouville.steady_state(pair, start).gamma
    rows = []
    current, elapsed = start, 0.0
    for t in [0.0, *liouville.sample_times(config.duration, config.extras["samples"])]:
        if t > elapsed:
            current = liouville.evolve(current, pair, hamiltonian, total_time=t - elapsed, dt=config.dt).final
            elapsed = t
        gamma = current.gamma
        purity = core.purity_spectrum(gamma)
        rows.append(
            {
                "time": t,
                "min_purity": purity[0],
                "max_purity": purity[-1],
                "mean_occupation": _mean_occupation(gamma),
                "edge_correlation": float(gamma[0, -1]),
                "steady_distance": float(np.max(np.abs(gamma - reference))),
            }
        )
    body = {"hamiltonian": hamiltonian is not None, "trajectory": rows, "final_covariance": current.gamma}
    summary = [
        ("Samples", str(len(rows))),
        ("Final mean occupation", format_number(rows[-1]["mean_occupation"])),
        ("Final distance to steady", format_number(rows[-1]["steady_distance"])),
    ]
    return CommandResult(body, rows, summary)


def _winding_command(config: RunConfig) -> CommandResult:
    xi = momentum.xi_deformed(config.kind, config.theta, config.phi, config.grid, config.epsilon)
    field_ = momentum.steady_bloch(xi)
    axis = momentum.chiral_axis(field_)
    result = momentum.winding_number(field_, axis)
    mean_filling, per_k = momentum.filling(field_)
    purity = field_.purity
    rows = [
        {
            "k": float(k),
            "n_x": float(n[0]),
            "n_y": float(n[1]),
            "n_z": float(n[2]),
            "purity": float(p),
            "occupation": float(occ),
        }
        for k, n, p, occ in zip(field_.grid, field_.n, purity, per_k)
    ]
    body = {
        "nu": result.nu,
        "winding_raw": result.raw,
        "methods": result.methods,
        "axis": axis.a,
        "axis_violation": axis.max_violation,
        "filling": mean_filling,
        "min_purity": result.min_purity,
        "quasi_canonical": momentum.is_quasi_canonical(xi),
        "field": rows,
    }
    summary = [
        ("Winding number", str(result.nu)),
        ("Filling", format_number(mean_filling)),
        ("Chiral axis", ", ".join(format_number(value) for value in axis.a)),
        ("Min |n_k|", format_number(result.min_purity)),
    ]
    return CommandResult(body, rows, summary)


def _move_command(config: RunConfig) -> CommandResult:
    schedule = RampSchedule(config.duration, config.extras["profile"])
    report = braid.adiabatic_move(n_sites=config.n_sites, schedule=schedule, kappa=config.kappa, dt=config.dt)
    body = asdict(report)
    rows = [{name: body[name] for name in CSV_COLUMNS["move"]}]
    summary = [
        ("Predicted attenuation", format_number(report.predicted_attenuation)),
        ("Measured attenuation", format_number(report.measured_attenuation)),
        ("Relative error", format_number(report.relative_error)),
    ]
    warnings = [f"Ramp too fast: max θ̇ = {format_number(report.max_rate)} exceeds κ/10."] if report.too_fast else []
    return CommandResult(body, rows, summary, warnings)


def _braid_demo_command(config: RunConfig) -> CommandResult:
    report = braid.interferometry_demo(config.extras["braided"], use_oracle=config.extras["oracle"])
    body = asdict(report)
    summary = [
        ("Braided", str(report.braided)),
        ("n1 / n2", f"{format_number(report.n1)} / {format_number(report.n2)}"),
        ("var1 / var2", f"{format_number(report.var1)} / {format_number(report.var2)}"),
    ]
    return CommandResult(body, [body], summary)


def _oracle_compare_command(config: RunConfig) -> CommandResult:
    if config.n_sites > oracle.MAX_SITES:
        raise ConfigError(f"oracle-compare supports at most {oracle.MAX_SITES} sites, got {config.n_sites}.")
    spec = _wire_spec(config)
    pair = wires.wire_damping(spec)
    hamiltonian = _hamiltonian(config)
    start = _initial_state(config)
    times = [0.0, *liouville.sample_times(config.duration, config.extras["samples"])]

    jumps = [oracle.jump_from_vector(vector) for vector in wires.wire_operators(spec)]
    fock_h = oracle.hamiltonian_from_quadratic(hamiltonian) if hamiltonian is not None else None
    fock_times, fock_states = oracle.fock_lindblad_trajectory(
        jumps,
        fock_h,
        oracle.gaussian_density_matrix(start),
        config.duration,
        config.dt,
        kappa=config.kappa,
        sample_times=times,
    )

    rows = []
    current, elapsed = start, 0.0
    for t in times:
        if t > elapsed:
            current = liouville.evolve(current, pair, hamiltonian, total_time=t - elapsed, dt=config.dt).final
            elapsed = t
        index = int(np.argmin(np.abs(np.asarray(fock_times) - t)))
        if abs(fock_times[index] - t) > 0.5 * config.dt:
            raise OracleError(f"No Fock sample near t={t!r}; choose dt dividing T/samples.")
        reference = oracle.covariance_from_rho(fock_states[index]).gamma
        rows.append({"time": t, "max_abs_difference": float(np.max(np.abs(current.gamma - reference)))})
    worst = max(row["max_abs_difference"] for row in rows)
    agrees = worst <= AGREEMENT_TOL
    log_info(f"oracle_compare: N={config.n_sites} kind={config.kind} max difference={worst:.3e}")
    body = {"max_abs_difference": worst, "agreement_tol": AGREEMENT_TOL, "agrees": agrees, "comparison": rows}
    summary = [("Max |ΔΓ|", format_number(worst)), ("Agrees", str(agrees))]
    warnings = [] if agrees else [f"Gaussian and Fock covariances differ by {worst:.3e}."]
    return CommandResult(body, rows, summary, warnings)


HANDLERS: dict[str, Callable[[RunConfig], CommandResult]] = {
    "spectrum": _spectrum_command,
    "zero-modes": _zero_modes_command,
    "steady": _steady_command,
    "evolve": _evolve_command,
    "winding": _winding_command,
    "move": _move_command,
    "braid-demo": _braid_demo_command,
    "oracle-compare": _oracle_compare_command,
}


# -------------------------------------------------------------------- output
def write_outputs(config: RunConfig, result: CommandResult) -> str:
    """Write `<command>.<format>` into the output directory and return its path."""
    echoed = config.to_dict()
    path = reporting.output_path(f"{config.command}.{config.output_format}")
    if config.output_format == "csv":
        reporting.write_csv_report(result.rows, CSV_COLUMNS[config.command], echoed, path)
    else:
        reporting.write_json_report(reporting.build_payload(config.command, echoed, result.body), path)
    log_info(f"{config.command}: wrote {path}")
    return path


def _render_success(formatter: CLIFormatter, config: RunConfig, result: CommandResult, path: str) -> None:
    formatter.run_report(config.command, result.summary, result.warnings, path, config.output_format)


def _render_failure_summary(
    formatter: CLIFormatter, *, status: str, command: str, reason: str, exit_code: int
) -> None:
    formatter.run_failure(
        status=status,
        command=command,
        reason=reason,
        log_hint=reporting.ensure_log_initialized(),
        exit_code=exit_code,
    )


def _exit_code_for(exc: DissiwireError) -> int:
    if isinstance(exc, (ConfigError, DimensionError)):
        return EXIT_CONFIG
    if isinstance(exc, (NumericalGuardError, NotChiralError, PhysicalityError, OracleError)):
        return EXIT_GUARD
    return EXIT_FAILURE


def main(argv: list[str] | None = None):
    """
    Argument parser entry point.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:].

    Returns:
        None

    Raises:
        SystemExit: Always; 0 on success, 2 for invalid configuration, 3 when a
            numerical guard trips, 1 otherwise.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    formatter_config = detect_terminal_capabilities(
        color_preference=args.color or os.environ.get("DISSIWIRE_COLOR", "auto"),
        plain_mode=args.plain,
        no_color_flag=args.no_color,
        mode_preference=args.mode,
        theme_preference=args.theme,
        pipe_format=args.pipe_format,
    )
    formatter_config.verbose = args.verbose
    formatter = CLIFormatter(formatter_config)
    command = args.command

    try:
        config = resolve_config(args)
        tol, ztol, tol_source = configure_tolerances(config.tol, config.zero_tol)
        out_dir, out_source = configure_output_dir(config.output_dir)
        config.tol, config.zero_tol, config.output_dir = tol, ztol, out_dir
        formatter.verbose(f"tolerances physicality={tol!r} zero={ztol!r} ({tol_source})")
        formatter.verbose(f"output directory {out_dir} ({out_source})")
        log_info(f"{command}: effective config {config.to_dict()}")
        result = HANDLERS[command](config)
        path = write_outputs(config, result)
        _render_success(formatter, config, result, path)
    except KeyboardInterrupt:
        reporting.write_log(["[WARN] Operation aborted via Ctrl+C"])
        _render_failure_summary(
            formatter, status="ABORTED", command=command, reason="Interrupted by user (Ctrl+C).", exit_code=EXIT_FAILURE
        )
        sys.exit(EXIT_FAILURE)
    except DissiwireError as exc:
        exit_code = _exit_code_for(exc)
        reporting.write_log([f"[ERROR] {type(exc).__name__}: {exc}"])
        _render_failure_summary(formatter, status="FAILED", command=command, reason=str(exc), exit_code=exit_code)
        sys.exit(exit_code)
    except Exception as exc:  # pragma: no cover
        reporting.write_log([f"[ERROR] Unexpected failure: {exc}"])
        _render_failure_summary(
            formatter, status="FAILED", command=command, reason=f"Unexpected failure: {exc}", exit_code=EXIT_FAILURE
        )
        sys.exit(EXIT_FAILURE)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
