"""Parameter-grid sweeps over mirror errors and key-rate inputs.

Every sweep returns a list of records (plain dicts keyed by column name),
sorted by the input columns so that output never depends on evaluation
order. Angles are in degrees here and converted to radians exactly once,
when a grid point is evaluated.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .attack import attack_metrics, build_povm
from .errors import ConfigError, DegenerateStateSpace, DomainError, NumericalInconsistency
from .jones import MAX_ABS_EPSILON, consistency_check
from .keyrate import KeyRateInput, key_rate
from .states import inner_product, make_bob_basis, make_ensemble, make_states

MAX_GRID_POINTS = 10**6
MODES = ("attack", "keyrate", "compensation", "states")

STATUS_OK = "ok"
STATUS_DEGENERATE = "degenerate"
STATUS_DOMAIN = "domain_error"
STATUS_NUMERICAL = "numerical_error"


@dataclass(frozen=True)
class Grid:
    """Inclusive arithmetic grid ``start, start+step, ..., <= stop``."""

    start: float
    stop: float
    step: float = 1.0

    def __post_init__(self):
        for v in (self.start, self.stop, self.step):
            if not math.isfinite(v):
                raise ConfigError(f"non-finite grid bound in {self}")
        if self.step <= 0:
            raise ConfigError(f"grid step must be > 0, got {self.step}")
        if self.start > self.stop:
            raise ConfigError(f"grid start {self.start} > stop {self.stop}")
        if len(self) > MAX_GRID_POINTS:
            raise ConfigError(f"grid has {len(self)} points (limit {MAX_GRID_POINTS})")

    def __len__(self) -> int:
        return int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1

    def values(self) -> list[float]:
        # rounding to 6 decimals keeps 0.1-step grids on exact decimal points
        return [_round6(self.start + i * self.step) for i in range(len(self))]

    @classmethod
    def parse(cls, text: str) -> "Grid":
        """Parse ``"start:stop:step"``, ``"start:stop"`` (step 1) or a single value."""
        parts = [p.strip() for p in str(text).split(":")]
        try:
            nums = [float(p) for p in parts]
        except ValueError:
            raise ConfigError(f"malformed grid {text!r}") from None
        if len(nums) == 1:
            return cls(nums[0], nums[0], 1.0)
        if len(nums) == 2:
            return cls(nums[0], nums[1], 1.0)
        if len(nums) == 3:
            return cls(*nums)
        raise ConfigError(f"malformed grid {text!r}")

    def __str__(self) -> str:
        return f"{self.start:g}:{self.stop:g}:{self.step:g}"


DEFAULT_GRIDS = {
    "attack": {"eps1": "-1:1:0.1", "eps2": "-1:1:0.1"},
    "keyrate": {"eps2": "-5:5:0.1", "eps3": "0", "delta": "0.055:0.065:0.005", "q": "0.5"},
    "compensation": {"eps1": "0", "eps2": "0", "eps3": "0", "eps4": "0"},
    "states": {"eps1": "0", "eps2": "0:1:0.25", "eps3": "0"},
}

COLUMNS = {
    "attack": ["eps1_deg", "eps2_deg", "qber", "p_succ", "status"],
    "keyrate": [
        "eps2_deg", "eps3_deg", "delta", "q", "fidelity", "delta_big", "delta_X",
        "delta_Y", "delta_ph", "rate_raw", "rate", "status",
    ],
    "compensation": [
        "eps1_deg", "eps2_deg", "eps3_deg", "eps4_deg", "k", "holds_k", "consistent_all_k",
    ],
    "states": (
        ["eps1_deg", "eps2_deg", "eps3_deg", "k"]
        + [f"phi_x{i}_{p}" for i in (1, 2, 3) for p in ("re", "im")]
        + [f"bob_x{i}_{p}" for i in (1, 2, 3) for p in ("re", "im")]
        + ["ip_next_re", "ip_next_im", "ip_opp_re", "ip_opp_im", "bob_overlap"]
    ),
}

INPUT_COLUMNS = {
    "attack": ["eps1_deg", "eps2_deg"],
    "keyrate": ["eps2_deg", "eps3_deg", "delta", "q"],
    "compensation": ["eps1_deg", "eps2_deg", "eps3_deg", "eps4_deg", "k"],
    "states": ["eps1_deg", "eps2_deg", "eps3_deg", "k"],
}


@dataclass
class SweepConfig:
    mode: str
    grids: dict[str, Grid] = field(default_factory=dict)
    fixed: dict[str, float] = field(default_factory=dict)
    output: Path | None = None
    format: str = "csv"
    seed: int = 0
    parallel: bool = False
    random_draws: int = 0
    random_max_deg: float = 1.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.format!r}")
        defaults = {k: Grid.parse(v) for k, v in DEFAULT_GRIDS[self.mode].items()}
        unknown = set(self.grids) - set(defaults) - {"eps1"}
        if unknown:
            raise ConfigError(f"unknown parameters for {self.mode}: {sorted(unknown)}")
        self.grids = {**defaults, **self.grids}
        limit = math.degrees(MAX_ABS_EPSILON)
        for name, g in self.grids.items():
            if name.startswith("eps") and max(abs(g.start), abs(g.stop)) > limit:
                raise ConfigError(f"{name} grid {g} exceeds |eps| <= {limit:.4f} deg")
        total = math.prod(len(g) for g in self.grids.values())
        if total > MAX_GRID_POINTS:
            raise ConfigError(f"sweep has {total} points (limit {MAX_GRID_POINTS})")
        if self.random_draws < 0:
            raise ConfigError("random_draws must be >= 0")
        if not 0 < self.random_max_deg <= limit:
            raise ConfigError(f"random_max_deg must be in (0, {limit:.4f}]")

    def points(self, names: list[str]) -> list[tuple[float, ...]]:
        return list(itertools.product(*(self.grids[n].values() for n in names)))


def _round6(x: float) -> float:
    v = round(float(x), 6)
    return 0.0 if v == 0 else v


def sig12(x: float) -> float:
    """Round to 12 significant digits (the precision written to output files)."""
    x = float(x)
    if not math.isfinite(x):
        return x
    v = float(f"{x:.12g}")
    return 0.0 if v == 0 else v


def _rad(deg: float) -> float:
    return math.radians(deg)


# -- per-point workers (module level so a process pool can pickle them) --


def _attack_point(p: tuple[float, float]) -> dict:
    e1, e2 = p
    rec = {"eps1_deg": e1, "eps2_deg": e2, "qber": None, "p_succ": None}
    try:
        ens = make_ensemble(_rad(e1), _rad(e2))
        m = attack_metrics(ens, build_povm(ens))
    except DegenerateStateSpace:
        rec["status"] = STATUS_DEGENERATE
    except DomainError:
        rec["status"] = STATUS_DOMAIN
    except NumericalInconsistency:
        rec["status"] = STATUS_NUMERICAL
    else:
        rec.update(qber=sig12(m.qber), p_succ=sig12(m.p_succ), status=STATUS_OK)
    return rec


_KEYRATE_OUT = ("fidelity", "delta_big", "delta_X", "delta_Y", "delta_ph", "rate_raw", "rate")


def _keyrate_point(p: tuple[float, float, float, float, float]) -> dict:
    e2, e3, delta, q, e1 = p
    rec = {"eps2_deg": e2, "eps3_deg": e3, "delta": delta, "q": q}
    rec.update(dict.fromkeys(_KEYRATE_OUT))
    try:
        res = key_rate(KeyRateInput(_rad(e2), _rad(e3), delta, q, eps1=_rad(e1)))
    except DomainError:
        rec["status"] = STATUS_DOMAIN
    except NumericalInconsistency:
        rec["status"] = STATUS_NUMERICAL
    else:
        rec.update({k: sig12(getattr(res, k)) for k in _KEYRATE_OUT})
        rec["status"] = "|".join(res.flags) or STATUS_OK
    return rec


def _compensation_point(p: tuple[float, float, float, float]) -> list[dict]:
    base = dict(zip(("eps1_deg", "eps2_deg", "eps3_deg", "eps4_deg"), p))
    try:
        res = consistency_check(*(_rad(e) for e in p))
    except DomainError:
        return [{**base, "k": k, "holds_k": None, "consistent_all_k": None} for k in range(4)]
    return [
        {**base, "k": k, "holds_k": holds, "consistent_all_k": res.consistent_all_k}
        for k, holds in enumerate(res.per_k)
    ]


def _cplx(prefix: str, z: complex) -> dict:
    return {f"{prefix}_re": sig12(z.real), f"{prefix}_im": sig12(z.imag)}


def _states_point(p: tuple[float, float, float]) -> list[dict]:
    e1, e2, e3 = p
    alice = make_states(_rad(e1), _rad(e2))
    bob = make_bob_basis(_rad(e3))
    rows = []
    for k in range(4):
        rec = {"eps1_deg": e1, "eps2_deg": e2, "eps3_deg": e3, "k": k}
        for i in range(3):
            rec.update(_cplx(f"phi_x{i + 1}", alice[k].amplitudes[i]))
        for i in range(3):
            rec.update(_cplx(f"bob_x{i + 1}", bob[k].amplitudes[i]))
        rec.update(_cplx("ip_next", inner_product(alice[k], alice[(k + 1) % 4])))
        rec.update(_cplx("ip_opp", inner_product(alice[k], alice[(k + 2) % 4])))
        rec["bob_overlap"] = sig12(abs(inner_product(bob[k], alice[k])) ** 2)
        rows.append(rec)
    return rows


def _evaluate(fn, points, parallel: bool) -> list:
    if parallel and len(points) > 1:
        with ProcessPoolExecutor() as pool:
            return list(pool.map(fn, points, chunksize=max(1, len(points) // 64)))
    return [fn(p) for p in points]


def _sorted(records: list[dict], mode: str) -> list[dict]:
    keys = INPUT_COLUMNS[mode]
    return sorted(records, key=lambda r: tuple(r[k] for k in keys))


def run_attack_sweep(cfg: SweepConfig) -> list[dict]:
    """QBER and P_succ over the (eps1, eps2) grid; eps2 = 0 rows are marked degenerate."""
    recs = _evaluate(_attack_point, cfg.points(["eps1", "eps2"]), cfg.parallel)
    return _sorted(recs, "attack")


def run_keyrate_sweep(cfg: SweepConfig) -> list[dict]:
    pts = cfg.points(["eps2", "eps3", "delta", "q"])
    e1 = _round6(cfg.fixed.get("eps1", 0.0))
    if "eps1" in cfg.grids and len(cfg.grids["eps1"]) > 1:
        raise ConfigError("keyrate mode accepts a single eps1 value")
    if "eps1" in cfg.grids:
        e1 = cfg.grids["eps1"].values()[0]
    recs = _evaluate(_keyrate_point, [(*p, e1) for p in pts], cfg.parallel)
    return _sorted(recs, "keyrate")


def random_mirror_configs(n: int, max_deg: float, seed: int) -> list[tuple[float, ...]]:
    """``n`` uniform 4-tuples of mirror errors in ``[-max_deg, max_deg]`` degrees."""
    rng = np.random.default_rng(seed)
    draws = rng.uniform(-max_deg, max_deg, size=(n, 4))
    return [tuple(_round6(v) for v in row) for row in draws]


def run_compensation_check(cfg: SweepConfig) -> list[dict]:
    pts = cfg.points(["eps1", "eps2", "eps3", "eps4"])
    if cfg.random_draws:
        pts += random_mirror_configs(cfg.random_draws, cfg.random_max_deg, cfg.seed)
    nested = _evaluate(_compensation_point, pts, cfg.parallel)
    return _sorted([r for rows in nested for r in rows], "compensation")


def dump_states(cfg: SweepConfig) -> list[dict]:
    nested = _evaluate(_states_point, cfg.points(["eps1", "eps2", "eps3"]), cfg.parallel)
    return _sorted([r for rows in nested for r in rows], "states")


RUNNERS = {
    "attack": run_attack_sweep,
    "keyrate": run_keyrate_sweep,
    "compensation": run_compensation_check,
    "states": dump_states,
}


def run(cfg: SweepConfig) -> list[dict]:
    return RUNNERS[cfg.mode](cfg)


# -- serialization --


def _fmt(col: str, v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if col.endswith("_deg"):
        s = f"{v:.6f}"
        return "0.000000" if float(s) == 0 else s
    return repr(sig12(v))


def to_csv(records: list[dict], mode: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = COLUMNS[mode]
    w.writerow(cols)
    for r in records:
        w.writerow([_fmt(c, r.get(c)) for c in cols])
    return buf.getvalue()


def to_json(records: list[dict], mode: str) -> str:
    doc = {"mode": mode, "columns": COLUMNS[mode], "records": records}
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def serialize(records: list[dict], mode: str, fmt: str) -> str:
    return to_csv(records, mode) if fmt == "csv" else to_json(records, mode)


def read_json(text: str) -> list[dict]:
    return json.loads(text)["records"]


PLOT_TEMPLATE = '''"""Plot {mode} sweep results from {csv_name}.

Generated convenience script; edit freely.
"""
import csv

import matplotlib.pyplot as plt

COLUMNS = {columns!r}
X, Y = {x!r}, {y!r}

with open({csv_name!r}, newline="") as fh:
    rows = [r for r in csv.DictReader(fh) if r.get(Y, "") not in ("", None)]

xs = [float(r[X]) for r in rows]
ys = [float(r[Y]) if r[Y] not in ("true", "false") else float(r[Y] == "true") for r in rows]
plt.plot(xs, ys, ".")
plt.xlabel(X)
plt.ylabel(Y)
plt.savefig({png_name!r}, dpi=150)
'''

_PLOT_AXES = {
    "attack": ("eps2_deg", "p_succ"),
    "keyrate": ("eps2_deg", "rate"),
    "compensation": ("eps2_deg", "consistent_all_k"),
    "states": ("eps2_deg", "ip_opp_re"),
}


def plot_script(mode: str, csv_path: Path) -> str:
    x, y = _PLOT_AXES[mode]
    return PLOT_TEMPLATE.format(
        mode=mode,
        csv_name=csv_path.name,
        png_name=csv_path.with_suffix(".png").name,
        columns=COLUMNS[mode],
        x=x,
        y=y,
    )
