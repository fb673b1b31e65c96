"""End-to-end experiments, each producing a list of :class:`RunRecord`.

Scenario parameters are flat key/value maps validated against
:data:`SCHEMAS`. Every random draw comes from a stream derived from
``parameters["seed"]`` by a fixed index, so records depend only on the
parameters and never on ``workers``.

Gas model for the entangling expansion: each particle is reduced to a two-level
"which flask" register (0 = left, 1 = right) whose two levels are degenerate,
so the gas Hamiltonian is the zero operator and any coupling conserves the gas
energy exactly. The environment starts in the all-zero product state.
"""

from __future__ import annotations

import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .dynamics import (
    BoxSpec,
    apply_channel,
    bounce_channel,
    bounce_layout,
    box_hamiltonian,
    dilate_bounce,
    dilation_output,
    evolve,
    gibbs_state,
    momentum_grid,
    propagate_states,
    propagator,
    right_half_projector,
)
from .errors import CapViolationError, ConfigError, UnknownKeyError
from .qcore import (
    DensityMatrix,
    HermitianOperator,
    PureState,
    SpaceLayout,
    dm_from_pure,
    expectation,
    reduced_state,
    shannon_entropy,
    vn_entropy,
)
from .randsrc import SeedSpec, apply_block_haar, derive_stream, gue_hermitian, haar_unit_vector
from .typicality import energy_window_subspace, full_space_subspace, typicality_sweep

DEFAULT_SEED = 2718281828
STATE_DIM_CAP = 2**14
EIGEN_DIM_CAP = 4096
MOMENTUM_DIM_CAP = 64
MAX_GAS_REGISTERS = 6
MIN_RELAXATION_TIMES = 8

OBSERVABLE_NAMES = ("sample_index", "time", "entropy_nats", "trace_distance", "mean_energy")


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    parameters: dict[str, Any]
    output_path: str = "results"


@dataclass
class RunRecord:
    scenario: str
    parameters: dict[str, Any]
    observables: dict[str, Any]
    extra: dict[str, Any] = field(default_factory=dict)
    wall_clock_seconds: float = 0.0

    def __post_init__(self):
        unknown = set(self.observables) - set(OBSERVABLE_NAMES)
        if unknown:
            raise ValueError(f"observable names outside the schema: {sorted(unknown)}")

    @property
    def sample_index(self) -> int:
        return self.observables["sample_index"]


@dataclass(frozen=True)
class Param:
    name: str
    kind: str  # int | float | u64 | str | int_list | float_list | window
    default: Any
    help: str


SEED_PARAM = Param("seed", "u64", DEFAULT_SEED, "master seed (unsigned 64-bit)")

SCHEMAS: dict[str, tuple[Param, ...]] = {
    "typicality": (
        Param("sys_dim", "int", 2, "system dimension"),
        Param("env_dims", "int_list", [8, 32, 128], "environment dimensions to sweep"),
        Param("n_samples", "int", 500, "Haar samples per environment dimension"),
        Param("energy_window", "window", None,
              'null for the full space, or {"center": E, "width": W, "coupling": g}'),
        SEED_PARAM,
    ),
    "bounce": (
        Param("momentum_dim", "int", 8, f"momentum grid size (<= {MOMENTUM_DIM_CAP})"),
        Param("input_state", "str", "equal_superposition(2)",
              "eigenstate[(j)] | equal_superposition(k) | gaussian(width[, center]) | haar"),
        SEED_PARAM,
    ),
    "expansion_unitary": (
        Param("n_sites", "int", 12, "sites in the box (even)"),
        Param("hopping", "float", 1.0, "nearest-neighbour hopping"),
        Param("barrier", "float", 1000.0, "on-site potential confining the gas to the left half"),
        Param("beta", "float", 1.0, "initial inverse temperature"),
        Param("times", "float_list", [float(t) for t in range(21)], "times after the tap opens"),
        SEED_PARAM,
    ),
    "expansion_entangling": (
        Param("n_gas", "int", 3, f"gas side registers (<= {MAX_GAS_REGISTERS})"),
        Param("n_env", "int", 10, "environment qubits (>= n_gas + 4)"),
        Param("coupling", "str", "block_haar", "block_haar | gue_evolution(strength, time)"),
        Param("n_realizations", "int", 50, "independent coupling samples"),
        SEED_PARAM,
    ),
    "relaxation_scan": (
        Param("n_gas", "int", 2, f"gas side registers (<= {MAX_GAS_REGISTERS})"),
        Param("n_env", "int", 8, "environment qubits (>= n_gas + 4)"),
        Param("coupling", "str", "gue_evolution(1.0)", "gue_evolution(strength)"),
        Param("times", "float_list", [0.25 * k for k in range(33)],
              f"evolution times (>= {MIN_RELAXATION_TIMES} entries)"),
        Param("n_realizations", "int", 4, "independent coupling samples"),
        SEED_PARAM,
    ),
}


_CALL = re.compile(r"^\s*([a-z_]+)\s*(?:\(\s*([^()]*)\s*\))?\s*$")


def parse_call(text: str) -> tuple[str, list[float]]:
    """``"gaussian(2.5)"`` -> ``("gaussian", [2.5])``; bare names have no arguments."""
    m = _CALL.match(str(text))
    if not m:
        raise ConfigError(f"cannot parse {text!r}; expected name or name(args)")
    name, args = m.group(1), m.group(2)
    try:
        values = [float(a) for a in args.split(",")] if args else []
    except ValueError:
        raise ConfigError(f"non-numeric argument in {text!r}") from None
    return name, values


def _coerce(p: Param, value):
    kind = p.kind
    try:
        if kind in ("int", "u64"):
            if isinstance(value, bool) or not float(value).is_integer():
                raise ValueError
            value = int(value)
            if kind == "u64" and not 0 <= value < 2**64:
                raise ValueError
            return value
        if kind == "float":
            if isinstance(value, bool):
                raise ValueError
            value = float(value)
            if not math.isfinite(value):
                raise ValueError
            return value
        if kind == "str":
            if not isinstance(value, str):
                raise ValueError
            return value
        if kind in ("int_list", "float_list"):
            if not isinstance(value, list) or not value:
                raise ValueError
            item = Param(p.name, kind.split("_")[0], None, "")
            return [_coerce(item, v) for v in value]
        if kind == "window":
            if value is None:
                return None
            if not isinstance(value, dict) or not {"center", "width"} <= set(value):
                raise ValueError
            extra = set(value) - {"center", "width", "coupling"}
            if extra:
                raise UnknownKeyError(f"unknown key(s) {sorted(extra)} in parameter 'energy_window'")
            return {
                "center": float(value["center"]),
                "width": float(value["width"]),
                "coupling": float(value.get("coupling", 0.1)),
            }
    except ConfigError:
        raise
    except (TypeError, ValueError):
        pass
    raise ConfigError(f"parameter {p.name!r}: {value!r} is not a valid {kind}")


def validate_parameters(scenario: str, values: dict[str, Any]) -> dict[str, Any]:
    """Fill defaults, coerce types, reject unknown keys and enforce caps."""
    if scenario not in SCHEMAS:
        raise ConfigError(f"unknown scenario {scenario!r}; choose from {sorted(SCHEMAS)}")
    schema = {p.name: p for p in SCHEMAS[scenario]}
    unknown = set(values) - set(schema)
    if unknown:
        raise UnknownKeyError(f"unknown key(s) {sorted(unknown)} for scenario {scenario!r}")
    params = {}
    for name, p in schema.items():
        raw = values.get(name, p.default)
        params[name] = _coerce(p, raw) if raw is not None or p.kind == "window" else None
    _check_semantics(scenario, params)
    return params


def _positive(params, *names):
    for n in names:
        if params[n] < 1:
            raise ConfigError(f"parameter {n!r} must be >= 1, got {params[n]}")


def _cap(value: int, cap: int, what: str, cap_name: str):
    if value > cap:
        raise CapViolationError(f"{what} = {value} exceeds {cap_name} = {cap}")


def _check_semantics(scenario: str, p: dict[str, Any]):
    if scenario == "typicality":
        _positive(p, "sys_dim", "n_samples")
        for e in p["env_dims"]:
            if e < 1:
                raise ConfigError(f"env_dims entries must be >= 1, got {e}")
            cap, cap_name = (
                (EIGEN_DIM_CAP, "EIGEN_DIM_CAP (dense eigendecomposition)")
                if p["energy_window"] is not None
                else (STATE_DIM_CAP, "STATE_DIM_CAP (state vectors)")
            )
            _cap(p["sys_dim"] * e, cap, "composite dimension sys_dim*env_dim", cap_name)
        if p["energy_window"] is not None and not p["energy_window"]["width"] > 0:
            raise ConfigError("energy_window width must be positive")
    elif scenario == "bounce":
        _positive(p, "momentum_dim")
        _cap(p["momentum_dim"], MOMENTUM_DIM_CAP, "momentum_dim", "MOMENTUM_DIM_CAP")
        name, args = parse_call(p["input_state"])
        arity = {"eigenstate": (0, 1), "equal_superposition": (1,), "gaussian": (1, 2), "haar": (0,)}
        if name not in arity or len(args) not in arity[name]:
            raise ConfigError(f"invalid input_state {p['input_state']!r}")
    elif scenario == "expansion_unitary":
        _cap(p["n_sites"], EIGEN_DIM_CAP, "n_sites", "EIGEN_DIM_CAP (dense eigendecomposition)")
        if p["n_sites"] < 2 or p["n_sites"] % 2:
            raise ConfigError(f"n_sites must be a positive even integer, got {p['n_sites']}")
        if not p["hopping"] > 0 or p["barrier"] < 0 or p["beta"] < 0:
            raise ConfigError("need hopping > 0, barrier >= 0, beta >= 0")
    elif scenario in ("expansion_entangling", "relaxation_scan"):
        _positive(p, "n_gas", "n_realizations")
        dim = 2 ** (p["n_gas"] + p["n_env"])
        _cap(dim, STATE_DIM_CAP, "composite dimension 2**(n_gas+n_env)", "STATE_DIM_CAP (state vectors)")
        _cap(p["n_gas"], MAX_GAS_REGISTERS, "n_gas", "MAX_GAS_REGISTERS")
        if p["n_env"] < p["n_gas"] + 4:
            raise ConfigError(f"n_env must be >= n_gas + 4, got n_env={p['n_env']}, n_gas={p['n_gas']}")
        name, args = parse_call(p["coupling"])
        if scenario == "relaxation_scan":
            if name != "gue_evolution" or len(args) != 1:
                raise ConfigError("relaxation_scan needs coupling 'gue_evolution(strength)'")
            if len(p["times"]) < MIN_RELAXATION_TIMES:
                raise ConfigError(
                    f"times needs >= {MIN_RELAXATION_TIMES} entries to define a plateau, got {len(p['times'])}"
                )
        elif not (name == "block_haar" and not args) and not (name == "gue_evolution" and len(args) == 2):
            raise ConfigError(f"invalid coupling {p['coupling']!r}")
        if name == "gue_evolution":
            _cap(dim, EIGEN_DIM_CAP, "composite dimension for gue_evolution", "EIGEN_DIM_CAP (dense eigendecomposition)")
            if not args[0] > 0:
                raise ConfigError("coupling strength must be positive")


def _map(fn: Callable, items, workers: int) -> list:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def _record(config: ScenarioConfig, index: int, t0: float, extra=None, **observables) -> RunRecord:
    obs = {"sample_index": index}
    obs.update(observables)
    return RunRecord(config.scenario, dict(config.parameters), obs, dict(extra or {}), time.perf_counter() - t0)


def _seed(params) -> SeedSpec:
    return SeedSpec(params["seed"])


# -- typicality -------------------------------------------------------------


def typicality_hamiltonian(sys_dim: int, env_dim: int, coupling: float, stream: SeedSpec) -> HermitianOperator:
    """H_S (x) 1 + 1 (x) H_E + coupling * V.

    H_S has unit level spacing; H_E and V are GUE matrices with semicircle
    radius 2, drawn from ``stream`` children 0 and 1.
    """
    layout = SpaceLayout.of(("sys", sys_dim), ("env", env_dim))
    d = sys_dim * env_dim
    h_s = np.diag(np.arange(sys_dim, dtype=float))
    h_e = gue_hermitian(env_dim, 1 / math.sqrt(2 * env_dim), derive_stream(stream, 0)).matrix
    h = np.kron(h_s, np.eye(env_dim)) + np.kron(np.eye(sys_dim), h_e)
    if coupling:
        h = h + coupling * gue_hermitian(d, 1 / math.sqrt(2 * d), derive_stream(stream, 1)).matrix
    return HermitianOperator(h, layout)


def run_typicality(config: ScenarioConfig, workers: int = 1) -> list[RunRecord]:
    p = config.parameters
    seed = _seed(p)
    records = []
    for i, env_dim in enumerate(p["env_dims"]):
        t0 = time.perf_counter()
        stream = derive_stream(seed, i)
        layout = SpaceLayout.of(("sys", p["sys_dim"]), ("env", env_dim))
        window = p["energy_window"]
        if window is None:
            subspace = full_space_subspace(layout)
        else:
            h = typicality_hamiltonian(p["sys_dim"], env_dim, window["coupling"], stream)
            subspace = energy_window_subspace(h, window["center"], window["width"])
        stats = typicality_sweep(subspace, ["sys"], p["n_samples"], derive_stream(stream, 2), workers)
        records.append(_record(
            config, i, t0,
            extra={
                "env_dim": stats.env_dim,
                "sys_dim": stats.sys_dim,
                "subspace_dim": stats.subspace_dim,
                "sample_count": stats.sample_count,
                "max_distance": stats.max_distance,
                "std_distance": stats.std_distance,
            },
            trace_distance=stats.mean_distance,
            entropy_nats=stats.mean_entropy,
        ))
    return records


# -- bounce -----------------------------------------------------------------


def bounce_input_state(spec: str, momentum_dim: int, stream: SeedSpec) -> PureState:
    layout = SpaceLayout.single(momentum_dim, "particle")
    name, args = parse_call(spec)
    if name == "eigenstate":
        j = int(args[0]) if args else momentum_dim - 1
        if not 0 <= j < momentum_dim:
            raise ConfigError(f"eigenstate index {j} outside the momentum grid")
        return PureState.basis(j, layout)
    if name == "equal_superposition":
        k = int(args[0])
        if not 1 <= k <= momentum_dim:
            raise ConfigError(f"equal_superposition({k}) needs 1 <= k <= momentum_dim")
        amps = np.zeros(momentum_dim, dtype=complex)
        amps[:k] = 1 / math.sqrt(k)
        return PureState(amps, layout)
    if name == "gaussian":
        width = args[0]
        center = args[1] if len(args) > 1 else 0.0
        if not width > 0:
            raise ConfigError("gaussian width must be positive")
        p = momentum_grid(momentum_dim)
        amps = np.exp(-((p - center) ** 2) / (4 * width**2)).astype(complex)
        return PureState(amps / np.linalg.norm(amps), layout)
    if name == "haar":
        return haar_unit_vector(momentum_dim, stream, layout)
    raise ConfigError(f"unknown input_state {spec!r}")


def run_bounce(config: ScenarioConfig, workers: int = 1) -> list[RunRecord]:
    p = config.parameters
    t0 = time.perf_counter()
    m = p["momentum_dim"]
    phi = bounce_input_state(p["input_state"], m, derive_stream(_seed(p), 0))
    rho_in = dm_from_pure(phi)
    kraus_out = apply_channel(bounce_channel(m), rho_in)

    u = dilate_bounce(m)
    dilated_out = dilation_output(u, rho_in, m + 1)
    global_state = PureState(u[:, :: m + 1] @ phi.amplitudes, bounce_layout(m))

    s_in, s_out = vn_entropy(rho_in), vn_entropy(kraus_out)
    off = kraus_out.matrix - np.diag(np.diagonal(kraus_out.matrix))
    return [_record(
        config, 0, t0,
        extra={
            "input_entropy": s_in,
            "delta_entropy": s_out - s_in,
            "shannon_entropy": shannon_entropy(np.abs(phi.amplitudes) ** 2),
            "path_discrepancy": float(np.max(np.abs(kraus_out.matrix - dilated_out.matrix))),
            "offdiag_max": float(np.max(np.abs(off))),
            "wall_entropy": vn_entropy(reduced_state(global_state, ["wall"])),
            "global_norm": float(np.linalg.norm(global_state.amplitudes)),
        },
        entropy_nats=s_out,
    )]


# -- unitary expansion ------------------------------------------------------


def run_expansion_unitary(config: ScenarioConfig, workers: int = 1) -> list[RunRecord]:
    p = config.parameters
    t0 = time.perf_counter()
    spec = BoxSpec(p["n_sites"], p["hopping"], p["barrier"])
    rho0 = gibbs_state(box_hamiltonian(spec, blocked_half=True), p["beta"])
    h_open = box_hamiltonian(spec, blocked_half=False)
    right = right_half_projector(spec.n_sites)
    s0 = vn_entropy(rho0)

    def at(k):
        rho = evolve(rho0, propagator(h_open, p["times"][k]))
        s = vn_entropy(rho)
        return s, expectation(h_open, rho), expectation(right, rho)

    rows = _map(at, range(len(p["times"])), workers)
    return [
        _record(
            config, k, t0,
            extra={"right_occupation": occ, "entropy_change": s - s0},
            time=p["times"][k], entropy_nats=s, mean_energy=e,
        )
        for k, (s, e, occ) in enumerate(rows)
    ]


# -- entangling expansion and relaxation ------------------------------------


def gas_layout(n_gas: int, n_env: int) -> SpaceLayout:
    return SpaceLayout.registers("gas", n_gas).concat(SpaceLayout.registers("env", n_env))


def gas_labels(n_gas: int) -> list[str]:
    return [f"gas{i}" for i in range(n_gas)]


def initial_gas_state(n_gas: int, n_env: int) -> PureState:
    """All gas registers in the left flask, environment in |0...0>."""
    return PureState.basis(0, gas_layout(n_gas, n_env))


def gas_hamiltonian(n_gas: int) -> HermitianOperator:
    """Degenerate flask levels: the zero operator on the gas registers."""
    return HermitianOperator(np.zeros((2**n_gas, 2**n_gas)), SpaceLayout.registers("gas", n_gas))


def right_occupation(rho_gas: DensityMatrix) -> float:
    """Mean probability, over registers, of a register being in the right flask."""
    n = len(rho_gas.layout.factors)
    diag = np.real(np.diagonal(rho_gas.matrix)).reshape((2,) * n)
    return float(np.mean([diag.take(1, axis=i).sum() for i in range(n)]))


def _gas_observables(psi: PureState, n_gas: int) -> dict[str, float]:
    rho_gas = reduced_state(psi, gas_labels(n_gas))
    return {
        "entropy_nats": vn_entropy(rho_gas),
        "mean_energy": expectation(gas_hamiltonian(n_gas), rho_gas),
        "global_purity": float(np.vdot(psi.amplitudes, psi.amplitudes).real ** 2),
        "right_occupation": right_occupation(rho_gas),
    }


def gue_coupling(layout: SpaceLayout, strength: float, stream: SeedSpec) -> HermitianOperator:
    """GUE Hamiltonian on gas (x) environment with semicircle radius 2 * strength."""
    d = layout.total_dim
    h = gue_hermitian(d, strength / math.sqrt(2 * d), stream)
    return HermitianOperator(h.matrix, layout)


def run_expansion_entangling(config: ScenarioConfig, workers: int = 1) -> list[RunRecord]:
    p = config.parameters
    n_gas, n_env = p["n_gas"], p["n_env"]
    seed = _seed(p)
    psi0 = initial_gas_state(n_gas, n_env)
    conserved = np.zeros(psi0.dim)  # gas Hamiltonian (x) identity
    name, args = parse_call(p["coupling"])
    t_start = time.perf_counter()

    def realization(r):
        t0 = time.perf_counter()
        stream = derive_stream(seed, r)
        if name == "block_haar":
            psi = apply_block_haar(conserved, psi0, stream)
        else:
            h = gue_coupling(psi0.layout, args[0], stream)
            (psi,) = propagate_states(h, psi0, [args[1]])
        return _gas_observables(psi, n_gas), time.perf_counter() - t0

    records = []
    obs0 = _gas_observables(psi0, n_gas)
    records.append(_record(
        config, 0, t_start,
        extra={"kind": "initial", "global_purity": obs0["global_purity"], "right_occupation": obs0["right_occupation"]},
        time=0.0, entropy_nats=obs0["entropy_nats"], mean_energy=obs0["mean_energy"],
    ))
    results = _map(realization, range(p["n_realizations"]), workers)
    for r, (obs, elapsed) in enumerate(results):
        rec = _record(
            config, r + 1, 0.0,
            extra={"kind": "realization", "realization": r,
                   "global_purity": obs["global_purity"], "right_occupation": obs["right_occupation"]},
            entropy_nats=obs["entropy_nats"], mean_energy=obs["mean_energy"],
        )
        rec.wall_clock_seconds = elapsed
        records.append(rec)
    entropies = np.array([obs["entropy_nats"] for obs, _ in results])
    target = n_gas * math.log(2)
    records.append(_record(
        config, len(results) + 1, t_start,
        extra={
            "kind": "mean",
            "std_entropy": float(np.std(entropies)),
            "target_entropy": target,
            "relative_error": float(abs(entropies.mean() - target) / target),
            "max_purity_error": float(max(abs(obs["global_purity"] - 1) for obs, _ in results)),
        },
        entropy_nats=float(entropies.mean()),
        mean_energy=float(np.mean([obs["mean_energy"] for obs, _ in results])),
    ))
    return records


def relaxation_time(times, entropies, fraction: float = 0.9) -> tuple[float, float]:
    """(tau, plateau): plateau is the mean over the last quarter of the times;
    tau is the first time the entropy reaches ``fraction`` of the plateau."""
    times = np.asarray(times, dtype=float)
    entropies = np.asarray(entropies, dtype=float)
    if times.size < MIN_RELAXATION_TIMES:
        raise ConfigError(f"need >= {MIN_RELAXATION_TIMES} times to define a plateau")
    tail = max(1, times.size // 4)
    plateau = float(np.mean(entropies[-tail:]))
    above = np.flatnonzero(entropies >= fraction * plateau)
    return float(times[above[0]]), plateau


def run_relaxation_scan(config: ScenarioConfig, workers: int = 1) -> list[RunRecord]:
    p = config.parameters
    n_gas, n_env, times = p["n_gas"], p["n_env"], p["times"]
    seed = _seed(p)
    psi0 = initial_gas_state(n_gas, n_env)
    _, (strength,) = parse_call(p["coupling"])
    t_start = time.perf_counter()
    n_t = len(times)

    def realization(r):
        t0 = time.perf_counter()
        h = gue_coupling(psi0.layout, strength, derive_stream(seed, r))
        rows = [_gas_observables(psi, n_gas) for psi in propagate_states(h, psi0, times)]
        return rows, time.perf_counter() - t0

    results = _map(realization, range(p["n_realizations"]), workers)
    records = []
    for r, (rows, elapsed) in enumerate(results):
        for k, obs in enumerate(rows):
            rec = _record(
                config, r * n_t + k, 0.0,
                extra={"kind": "realization", "realization": r,
                       "global_purity": obs["global_purity"], "right_occupation": obs["right_occupation"]},
                time=times[k], entropy_nats=obs["entropy_nats"], mean_energy=obs["mean_energy"],
            )
            rec.wall_clock_seconds = elapsed / n_t
            records.append(rec)
    curve = np.mean([[obs["entropy_nats"] for obs in rows] for rows, _ in results], axis=0)
    base = len(results) * n_t
    for k in range(n_t):
        records.append(_record(config, base + k, t_start, extra={"kind": "mean"}, time=times[k], entropy_nats=float(curve[k])))
    tau, plateau = relaxation_time(times, curve)
    target = n_gas * math.log(2)
    records.append(_record(
        config, base + n_t, t_start,
        extra={
            "kind": "summary",
            "tau": tau,
            "plateau": plateau,
            "target_entropy": target,
            "plateau_relative_error": abs(plateau - target) / target,
            "max_early_decrease": max_early_decrease(curve),
        },
        entropy_nats=plateau,
    ))
    return records


def max_early_decrease(curve) -> float:
    """Largest drop between consecutive points in the first half of the curve (0 if none)."""
    curve = np.asarray(curve, dtype=float)
    early = curve[: max(2, curve.size // 2)]
    drops = early[:-1] - early[1:]
    return float(max(0.0, drops.max())) if drops.size else 0.0


RUNNERS: dict[str, Callable[[ScenarioConfig, int], list[RunRecord]]] = {
    "typicality": run_typicality,
    "bounce": run_bounce,
    "expansion_unitary": run_expansion_unitary,
    "expansion_entangling": run_expansion_entangling,
    "relaxation_scan": run_relaxation_scan,
}


def run(config: ScenarioConfig, workers: int = 1) -> list[RunRecord]:
    if config.scenario not in RUNNERS:
        raise ConfigError(f"unknown scenario {config.scenario!r}")
    records = RUNNERS[config.scenario](config, max(1, int(workers)))
    return sorted(records, key=lambda rec: rec.sample_index)
