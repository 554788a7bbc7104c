"""Declarative scenarios, the sweep/scan harness and window searches.

The canonical scenario starts from the GHZ state with two measurement
settings per pair.  Signs are absorbed into the stored directions so that
every sharp correlator evaluates to +1 (outcome relabeling only): Charlie's
x setting pairs with -(sigma_y x sigma_y) on A,B and his -y setting with
+(sigma_y x sigma_x).
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .linalg import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, kron
from .measurement import UnsharpSetting, local_pair_update, luders_update
from .states import CompressionBasis, DensityMatrix, bloch_form, compress, ghz
from .steering import (
    SteeringEllipsoid,
    StrengthHistory,
    classical_bound,
    closed_form_local,
    closed_form_nonlocal,
    ellipsoid,
    steering_parameter,
)

SQRT_HALF = float(1 / np.sqrt(2))

# Per axis: (Charlie operator, joint A,B operator, local (A, B) factors).
# Signs are fixed so the sharp GHZ correlator <D x L> is +1.
_AXIS_TABLE = {
    "x": (SIGMA_X, -kron(SIGMA_Y, SIGMA_Y), (SIGMA_Y, SIGMA_Y)),
    "y": (SIGMA_Y, -kron(SIGMA_Y, SIGMA_X), (SIGMA_Y, SIGMA_X)),
    "z": (SIGMA_Z, kron(SIGMA_Z, I2), None),
}


def charlie_operator(label: str) -> np.ndarray:
    op, _, _ = _resolve_axis(label)
    return op


def _resolve_axis(label: str) -> tuple[np.ndarray, np.ndarray, tuple | None]:
    sign = 1.0
    axis = label.strip().lower()
    if axis.startswith("-"):
        sign, axis = -1.0, axis[1:]
    if axis not in _AXIS_TABLE:
        raise ConfigError(f"unknown axis label {label!r}")
    c_op, ab_op, local = _AXIS_TABLE[axis]
    return sign * c_op, sign * ab_op, local


@dataclass(frozen=True)
class ScenarioConfig:
    """Declarative description of a sequential-measurement experiment."""

    strengths: StrengthHistory
    mode: str = "nonlocal"
    pairs: int = 2
    settings_per_pair: int = 2
    equal_strength: tuple[bool, ...] = ()
    charlie_directions: tuple[str, ...] = ("x", "-y")
    compression: str = "00,11"

    def __post_init__(self):
        if self.mode not in ("nonlocal", "local"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if not 1 <= self.pairs <= 4:
            raise ConfigError(f"pairs={self.pairs} outside supported range 1..4")
        if self.settings_per_pair != 2:
            raise ConfigError("only two settings per pair are supported")
        if len(self.charlie_directions) != self.settings_per_pair:
            raise ConfigError("need one Charlie direction per setting")
        if self.strengths.pairs != self.pairs:
            raise ConfigError(
                f"history covers {self.strengths.pairs} pairs, config has {self.pairs}"
            )
        if self.mode == "local" and self.strengths.gammas is None:
            raise ConfigError("local mode needs eta/gamma strengths")

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "pairs": self.pairs,
            "strengths": [list(p) for p in self.strengths.lambdas],
            "equal_strength": list(self.equal_strength),
            "charlie_directions": list(self.charlie_directions),
            "compression": self.compression,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ScenarioConfig":
        pairs = int(obj.get("pairs", 2))
        raw = obj.get("strengths", [])
        lambdas = []
        equal = []
        for entry in raw:
            if isinstance(entry, (int, float)):
                lambdas.append((float(entry), float(entry)))
                equal.append(True)
            else:
                lam = tuple(float(x) for x in entry)
                if len(lam) == 1:
                    lam = (lam[0], lam[0])
                lambdas.append(lam)
                equal.append(lam[0] == lam[1])
        while len(lambdas) < pairs:  # final pair defaults to sharp
            lambdas.append((1.0, 1.0))
            equal.append(True)
        mode = obj.get("mode", "nonlocal")
        if mode == "local":
            history = StrengthHistory.local_sqrt(lambdas)
        else:
            history = StrengthHistory.nonlocal_history(lambdas)
        if "equal_strength" in obj:
            equal = [bool(x) for x in obj["equal_strength"]]
        return cls(
            strengths=history,
            mode=mode,
            pairs=pairs,
            equal_strength=tuple(equal),
            charlie_directions=tuple(obj.get("charlie_directions", ("x", "-y"))),
            compression=obj.get("compression", "00,11"),
        )


def make_config(mode: str, lambdas: list, pairs: int | None = None,
                charlie_directions: tuple[str, ...] = ("x", "-y")) -> ScenarioConfig:
    """Convenience constructor; scalar entries mean equal strengths per pair."""
    return ScenarioConfig.from_json({
        "mode": mode,
        "pairs": pairs if pairs is not None else len(lambdas),
        "strengths": lambdas,
        "charlie_directions": list(charlie_directions),
    })


@dataclass(frozen=True)
class PairResult:
    """Outcome of one observer pair within a sequential run."""

    pair: int
    steering_value: float
    state: DensityMatrix = field(repr=False)
    # Ellipsoids need the compressed two-qubit form; local Kraus operators
    # leak out of the compression span, leaving them undefined (None).
    charlie_ellipsoid: SteeringEllipsoid | None = field(repr=False, default=None)
    ab_ellipsoid: SteeringEllipsoid | None = field(repr=False, default=None)


def run_scenario(cfg: ScenarioConfig) -> list[PairResult]:
    """Full sequential simulation of the configured scenario.

    Pair i's steering value is evaluated on the state evolved through
    pairs 1..i-1, with pair i's own strengths as prefactors; the reported
    state and ellipsoids are post-update.
    """
    resolved = [_resolve_axis(lbl) for lbl in cfg.charlie_directions]
    charlie_ops = [r[0] for r in resolved]
    pair_ops = [r[1] for r in resolved]
    if cfg.mode == "local" and any(r[2] is None for r in resolved):
        raise ConfigError("local mode is only defined for x/y settings")
    basis = CompressionBasis.parse(cfg.compression)
    rho = ghz()
    results = []
    for i in range(1, cfg.pairs + 1):
        lam = cfg.strengths.lambdas[i - 1]
        value = steering_parameter(rho, pair_ops, list(lam), charlie_ops)
        if cfg.mode == "nonlocal":
            settings = [
                UnsharpSetting(op, s, (0, 1)) for op, s in zip(pair_ops, lam)
            ]
            rho = luders_update(rho, settings)
        else:
            a_settings = [
                UnsharpSetting(r[2][0], e, (0,))
                for r, e in zip(resolved, cfg.strengths.etas[i - 1])
            ]
            b_settings = [
                UnsharpSetting(r[2][1], g, (1,))
                for r, g in zip(resolved, cfg.strengths.gammas[i - 1])
            ]
            rho = local_pair_update(rho, a_settings, b_settings)
        ell_c = ell_ab = None
        if cfg.mode == "nonlocal":
            compressed, _ = compress(rho, basis)
            form = bloch_form(compressed)
            ell_c = ellipsoid(form, "charlie")
            ell_ab = ellipsoid(form, "ab")
        results.append(PairResult(
            pair=i,
            steering_value=value,
            state=rho,
            charlie_ellipsoid=ell_c,
            ab_ellipsoid=ell_ab,
        ))
    return results


@dataclass(frozen=True)
class ScanRecord:
    """One row of sweep/scan output."""

    params: dict[str, float]
    s: tuple[float, ...]
    st: tuple[float, ...]
    region: str
    bound: float


def _region_label(s: tuple[float, ...], st: tuple[float, ...], bound: float) -> str:
    """Activation labels: I (II) marks pair 2 (pair 3) steering nonlocally only."""
    flags = []
    names = {1: "I", 2: "II"}
    for i in range(1, min(len(s), len(st))):
        if s[i] > bound and st[i] <= bound and i in names:
            flags.append(names[i])
    return "+".join(flags)


def _grid(resolution: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, resolution)


def scan_region(pairs: int = 3, resolution: int = 400, mode: str = "compare",
                last_pair_strength: float = 1.0) -> list[ScanRecord]:
    """Equal-strength region scan over (lambda^(1), lambda^(2)).

    Pair 3 (when present) uses `last_pair_strength` (sharp by default).
    Rows are emitted row-major over the grid.
    """
    if resolution < 2:
        raise ConfigError("grid resolution must be at least 2")
    bound = SQRT_HALF
    records = []
    for l1 in _grid(resolution):
        for l2 in _grid(resolution):
            lams = [(l1, l1), (l2, l2), (last_pair_strength,) * 2][:pairs]
            s = st = ()
            if mode in ("nonlocal", "compare"):
                h = StrengthHistory.nonlocal_history(lams)
                s = tuple(closed_form_nonlocal(h, i) for i in range(1, pairs + 1))
            if mode in ("local", "compare"):
                h = StrengthHistory.local_sqrt(lams)
                st = tuple(closed_form_local(h, i) for i in range(1, pairs + 1))
            records.append(ScanRecord(
                params={"lambda1": float(l1), "lambda2": float(l2)},
                s=s, st=st, region=_region_label(s, st, bound), bound=bound,
            ))
    return records


_PARAM_RE = re.compile(r"^lambda([12]?)_([1-4])$")


def _history_from_params(params: dict[str, float], pairs: int, mode: str
                         ) -> StrengthHistory:
    lams = []
    for i in range(1, pairs + 1):
        both = params.get(f"lambda_{i}")
        l1 = params.get(f"lambda1_{i}", both if both is not None else 1.0)
        l2 = params.get(f"lambda2_{i}", both if both is not None else 1.0)
        lams.append((float(l1), float(l2)))
    if mode == "local":
        return StrengthHistory.local_sqrt(lams)
    return StrengthHistory.nonlocal_history(lams)


def sweep_curve(fixed: dict[str, float], vary: str, start: float, stop: float,
                samples: int, pairs: int = 2, mode: str = "compare"
                ) -> list[ScanRecord]:
    """Sweep one strength parameter, reporting S (and S~ when comparing).

    Parameter ids: lambda1_i / lambda2_i address setting 1/2 of pair i,
    lambda_i sets both settings of pair i.  Unset pairs default to sharp.
    """
    for name in list(fixed) + [vary]:
        if not _PARAM_RE.match(name):
            raise ConfigError(f"unknown parameter id {name!r}")
    if samples < 2:
        raise ConfigError("need at least two samples")
    bound = SQRT_HALF
    records = []
    for v in np.linspace(start, stop, samples):
        params = dict(fixed)
        params[vary] = float(v)
        s = st = ()
        if mode in ("nonlocal", "compare"):
            h = _history_from_params(params, pairs, "nonlocal")
            s = tuple(closed_form_nonlocal(h, i) for i in range(1, pairs + 1))
        if mode in ("local", "compare"):
            h = _history_from_params(params, pairs, "local")
            st = tuple(closed_form_local(h, i) for i in range(1, pairs + 1))
        records.append(ScanRecord(
            params={"param": float(v)},
            s=s, st=st, region=_region_label(s, st, bound), bound=bound,
        ))
    return records


@dataclass(frozen=True)
class EllipsoidRecord:
    lambda1: float
    lambda2: float
    charlie: SteeringEllipsoid
    ab: SteeringEllipsoid

    def to_json(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "charlie": self.charlie.to_json(),
            "ab": self.ab.to_json(),
        }


def ellipsoid_series(strength_pairs: list[tuple[float, float]]) -> list[EllipsoidRecord]:
    """Charlie/AB steering ellipsoids of the post-pair-1 state per sample."""
    out = []
    for l1, l2 in strength_pairs:
        cfg = make_config("nonlocal", [[l1, l2]], pairs=1)
        result = run_scenario(cfg)[0]
        out.append(EllipsoidRecord(l1, l2, result.charlie_ellipsoid,
                                   result.ab_ellipsoid))
    return out


def max_simultaneous_pairs(resolution: int = 200, mode: str = "nonlocal",
                           last_pair_strength: float = 1.0) -> int:
    """Largest number of pairs that beat the bound anywhere on the strength grid."""
    bound = SQRT_HALF
    closed_form = closed_form_nonlocal if mode == "nonlocal" else closed_form_local
    best = 0
    for l1 in _grid(resolution):
        for l2 in _grid(resolution):
            lams = [(l1, l1), (l2, l2), (last_pair_strength,) * 2]
            if mode == "local":
                h = StrengthHistory.local_sqrt(lams)
            else:
                h = StrengthHistory.nonlocal_history(lams)
            count = sum(closed_form(h, i) > bound for i in (1, 2, 3))
            best = max(best, count)
    return best


def bisect_root(f, lo: float, hi: float, tol: float = 1e-9) -> float:
    """Plain bisection for a sign-changing continuous function."""
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise ValueError("no sign change on the bracket")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f_lo * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def simultaneous_window(case: str, tol: float = 1e-9) -> tuple[float, float]:
    """Range of lambda2^(1) where pairs 1 and 2 both steer Charlie.

    Cases: "unequal_local" and "unequal_nonlocal" fix lambda1^(1) at
    1/sqrt(2) and sweep lambda2^(1); "equal_nonlocal" sweeps both pair-1
    strengths together.  Pair 2 measures sharply.
    """
    bound = SQRT_HALF

    def values(l2: float) -> tuple[float, float]:
        if case == "equal_nonlocal":
            lams = [(l2, l2), (1.0, 1.0)]
        else:
            lams = [(SQRT_HALF, l2), (1.0, 1.0)]
        if case == "unequal_local":
            h = StrengthHistory.local_sqrt(lams)
            return closed_form_local(h, 1), closed_form_local(h, 2)
        if case in ("equal_nonlocal", "unequal_nonlocal"):
            h = StrengthHistory.nonlocal_history(lams)
            return closed_form_nonlocal(h, 1), closed_form_nonlocal(h, 2)
        raise ConfigError(f"unknown case {case!r}")

    # Pair 1's parameter rises with lambda2 while pair 2's falls, so the
    # window endpoints are single roots on [0, 1].
    lo = bisect_root(lambda l2: values(l2)[0] - bound, 0.0, 1.0, tol)
    hi = bisect_root(lambda l2: values(l2)[1] - bound, lo, 1.0, tol)
    return lo, hi


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def records_to_csv(records: list[ScanRecord], kind: str) -> str:
    """Deterministic CSV for scan ("lambda1,lambda2,...") or sweep rows."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if kind == "scan":
        writer.writerow(["lambda1", "lambda2", "S1", "S2", "S3",
                         "St1", "St2", "St3", "region"])
        for r in records:
            s = [_fmt(v) for v in r.s] + [""] * (3 - len(r.s))
            st = [_fmt(v) for v in r.st] + [""] * (3 - len(r.st))
            writer.writerow([_fmt(r.params["lambda1"]), _fmt(r.params["lambda2"])]
                            + s + st + [r.region])
    elif kind == "sweep":
        writer.writerow(["param", "S1", "S2", "St1", "St2"])
        for r in records:
            s = [_fmt(v) for v in r.s[:2]] + [""] * (2 - min(2, len(r.s)))
            st = [_fmt(v) for v in r.st[:2]] + [""] * (2 - min(2, len(r.st)))
            writer.writerow([_fmt(r.params["param"])] + s + st)
    else:
        raise ConfigError(f"unknown CSV kind {kind!r}")
    return buf.getvalue()


def save_records(records: list[ScanRecord], kind: str, path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(records_to_csv(records, kind))


def save_ellipsoids(records: list[EllipsoidRecord], path: str) -> None:
    with open(path, "w") as fh:
        json.dump([r.to_json() for r in records], fh, indent=2)
        fh.write("\n")
