"""Monte Carlo experiments comparing scaled estimator errors to limit laws.

An experiment simulates ``n_reps`` independent paths (substream-seeded, so
parallel and serial runs draw identical sample sets), computes the drift
MLE of each, scales the errors by ``1/r(a, T)``, draws ``n_limit`` values
from the matching limit sampler, and reports the two-sample
Kolmogorov-Smirnov distance plus quantile and moment summaries.

For drift below the critical point the horizon follows the period
structure: ``T_k = k * pi/kappa0(a) + d``, snapped to the simulation grid;
the limit sampler is evaluated at the snapped effective phase.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateDenominator, EmptySample, InvalidGrid, InvalidPhase
from .fundamental import fisher_limit, grid_steps
from .inference import mle
from .limits import (
    plamn_phase_period,
    sample_critical_limit,
    sample_df_limit,
    sample_lamn_limit,
    sample_lan_limit,
    sample_plamn_limit,
)
from .paths import DelayModel, InitialSegment, replicate_seed, simulate_path
from .roots import CRITICAL_A, Regime, classify_regime, scaling

#: Asymptotic two-sample KS critical multiplier at the 1% level.
KS_C01 = 1.628

_QUANTILES = (1, 5, 25, 50, 75, 95, 99)


def ks_threshold(n: int, m: int, c: float = KS_C01) -> float:
    """Asymptotic two-sample critical value ``c * sqrt((n+m)/(n*m))``."""
    return c * math.sqrt((n + m) / (n * m))


def ks_distance(s1, s2) -> float:
    """Sup distance between the empirical CDFs of two samples.

    Merge-scan via sorted searches, O((n+m) log(n+m)).
    """
    a = np.sort(np.asarray(s1, dtype=float))
    b = np.sort(np.asarray(s2, dtype=float))
    if len(a) == 0 or len(b) == 0:
        raise EmptySample("both samples must be nonempty")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / len(a)
    fb = np.searchsorted(b, grid, side="right") / len(b)
    return float(np.abs(fa - fb).max())


@dataclass
class ExperimentConfig:
    """Knobs of one Monte Carlo experiment.

    ``T`` is the horizon; below the critical drift it is treated as a
    target and replaced by ``k * period + d`` (``k`` taken from the config
    or rounded from ``T``).  ``x0_kind``/``x0_value`` describe the initial
    segment; ``out`` is an optional output path prefix.
    """

    a: float
    T: float
    dt: float
    n_reps: int
    n_limit: int
    seed: int
    x0_kind: str = "constant"
    x0_value: object = 0.0
    d: float = 0.0
    k: int | None = None
    m_grid: int = 10_000
    m_tail: int = 2000
    out: str | None = None

    def validate(self) -> None:
        if self.n_reps < 50 or self.n_limit < 50:
            raise ValueError("n_reps and n_limit must be at least 50")
        grid_steps(1.0, self.dt, "the unit delay")

    def segment(self) -> InitialSegment:
        if self.x0_kind == "constant":
            return InitialSegment.constant(float(self.x0_value))
        if self.x0_kind == "sampled":
            return InitialSegment.sampled(np.asarray(self.x0_value, dtype=float))
        raise ValueError(f"unknown x0.kind {self.x0_kind!r}")

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        """Parse the flat ``key = value`` config format.

        Keys: a (float or the literal ``critical``), T, dt, n_reps,
        n_limit, seed, x0.kind, x0.value (float, or comma-separated floats
        when x0.kind = sampled), d, k, m_grid, m_tail, out.  ``#`` starts a
        comment.
        """
        raw: dict[str, str] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"config line without '=': {line!r}")
                key, val = (part.strip() for part in line.split("=", 1))
                raw[key] = val
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        def need(key):
            if key not in raw:
                raise ValueError(f"config is missing required key {key!r}")
            return raw[key]

        a_raw = str(need("a")).strip().lower()
        a = CRITICAL_A if a_raw == "critical" else float(need("a"))
        kind = str(raw.get("x0.kind", "constant")).strip()
        value_raw = raw.get("x0.value", "0")
        if kind == "sampled":
            value = [float(v) for v in str(value_raw).split(",")]
        else:
            value = float(value_raw)
        cfg = cls(
            a=a,
            T=float(need("T")),
            dt=float(need("dt")),
            n_reps=int(need("n_reps")),
            n_limit=int(need("n_limit")),
            seed=int(need("seed")),
            x0_kind=kind,
            x0_value=value,
            d=float(raw.get("d", 0.0)),
            k=int(raw["k"]) if raw.get("k") not in (None, "") else None,
            m_grid=int(raw.get("m_grid", 10_000)),
            m_tail=int(raw.get("m_tail", 2000)),
            out=str(raw["out"]) if raw.get("out") not in (None, "") else None,
        )
        cfg.validate()
        return cfg


@dataclass
class MCReport:
    """Structured result of one experiment."""

    config: dict
    regime: str
    T_effective: float
    d_effective: float | None
    r: float
    ks: float
    n_failed: int
    a_hats: list
    scaled_errors: list
    limit_values: list
    quantiles: dict
    moments: dict
    wall_seconds: float

    def to_dict(self, with_wall: bool = True) -> dict:
        d = {
            "config": self.config,
            "regime": self.regime,
            "T_effective": self.T_effective,
            "d_effective": self.d_effective,
            "r": self.r,
            "ks": self.ks,
            "n_failed": self.n_failed,
            "a_hats": self.a_hats,
            "scaled_errors": self.scaled_errors,
            "limit_values": self.limit_values,
            "quantiles": self.quantiles,
            "moments": self.moments,
        }
        if with_wall:
            d["wall_seconds"] = self.wall_seconds
        return d

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def write(self, prefix: str) -> None:
        """Write ``<prefix>.json`` and ``<prefix>.csv``.

        CSV columns are frozen: ``replication,a_hat,scaled_error``;
        failed replications keep their index with empty fields.
        """
        with open(prefix + ".json", "w", encoding="utf-8") as fh:
            fh.write(self.to_json() + "\n")
        with open(prefix + ".csv", "w", encoding="utf-8") as fh:
            fh.write("replication,a_hat,scaled_error\n")
            for i, (ah, se) in enumerate(zip(self.a_hats, self.scaled_errors_with_gaps())):
                if ah is None:
                    fh.write(f"{i},,\n")
                else:
                    fh.write(f"{i},{ah!r},{se!r}\n")

    def scaled_errors_with_gaps(self):
        it = iter(self.scaled_errors)
        return [None if ah is None else next(it) for ah in self.a_hats]


def _quantile_summary(values: np.ndarray) -> dict:
    qs = np.percentile(values, _QUANTILES)
    return {str(p): float(v) for p, v in zip(_QUANTILES, qs)}


def _replicate(cfg: ExperimentConfig, t_eff: float, index: int):
    model = DelayModel(cfg.a, cfg.segment())
    path = simulate_path(model, t_eff, cfg.dt, seed=replicate_seed(cfg.seed, index))
    try:
        return index, mle(path).a_hat
    except DegenerateDenominator:
        return index, None


def effective_horizon(cfg: ExperimentConfig):
    """Grid-snapped horizon and effective phase for the experiment.

    Returns ``(T_eff, d_eff, k)``; ``d_eff`` and ``k`` are None outside
    the periodic regime.
    """
    regime = classify_regime(cfg.a)
    if regime is not Regime.PLAMN:
        grid_steps(cfg.T, cfg.dt, "T")
        return float(cfg.T), None, None
    period = plamn_phase_period(cfg.a)
    if not (0.0 <= cfg.d < period):
        raise InvalidPhase(f"phase d={cfg.d!r} outside [0, {period!r})")
    k = cfg.k if cfg.k is not None else max(1, round((cfg.T - cfg.d) / period))
    target = k * period + cfg.d
    n_steps = max(1, round(target / cfg.dt))
    t_eff = n_steps * cfg.dt
    if t_eff < 1.0:
        raise InvalidGrid("the periodic horizon must be at least 1")
    d_eff = math.fmod(t_eff - k * period, period)
    if d_eff < 0.0:
        d_eff += period
    return float(t_eff), float(d_eff), int(k)


def _limit_sample(cfg: ExperimentConfig, regime: Regime, d_eff: float | None):
    seed = np.random.SeedSequence(cfg.seed, spawn_key=(2**16,))
    if regime is Regime.LAN:
        j_a = fisher_limit(cfg.a, rel_tol=1e-6)
        return sample_lan_limit(j_a, cfg.n_limit, seed)
    if regime is Regime.LAQ_ZERO:
        return sample_df_limit(cfg.n_limit, cfg.m_grid, seed)
    if regime is Regime.LAQ_CRITICAL:
        return sample_critical_limit(cfg.n_limit, cfg.m_grid, seed)
    if regime is Regime.LAMN:
        return sample_lamn_limit(cfg.a, cfg.segment(), cfg.n_limit, cfg.m_tail, seed)
    return sample_plamn_limit(cfg.a, cfg.segment(), d_eff, cfg.n_limit, cfg.m_tail, seed)


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> MCReport:
    """Run the Monte Carlo experiment described by ``cfg``.

    Failed replications (degenerate information) are excluded and counted,
    never retried.  Output is identical for any ``jobs`` value.
    """
    cfg.validate()
    start = time.time()
    regime = classify_regime(cfg.a)
    t_eff, d_eff, k = effective_horizon(cfg)
    r = scaling(cfg.a, t_eff)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(
                    _replicate,
                    [cfg] * cfg.n_reps,
                    [t_eff] * cfg.n_reps,
                    range(cfg.n_reps),
                )
            )
    else:
        results = [_replicate(cfg, t_eff, i) for i in range(cfg.n_reps)]
    results.sort(key=lambda pair: pair[0])

    a_hats = [ah for _, ah in results]
    scaled = np.array([(ah - cfg.a) / r for _, ah in results if ah is not None])
    n_failed = sum(1 for _, ah in results if ah is None)
    if len(scaled) == 0:
        raise DegenerateDenominator("every replication failed")

    limit = _limit_sample(cfg, regime, d_eff)
    ks = ks_distance(scaled, limit.values)

    report = MCReport(
        config=asdict(cfg),
        regime=regime.value,
        T_effective=t_eff,
        d_effective=d_eff,
        r=r,
        ks=ks,
        n_failed=n_failed,
        a_hats=a_hats,
        scaled_errors=[float(v) for v in scaled],
        limit_values=[float(v) for v in limit.values],
        quantiles={
            "scaled_errors": _quantile_summary(scaled),
            "limit_values": _quantile_summary(limit.values),
        },
        moments={
            "scaled_errors": {
                "mean": float(scaled.mean()),
                "variance": float(scaled.var(ddof=1)),
            },
            "limit_values": {
                "mean": float(limit.values.mean()),
                "variance": float(limit.values.var(ddof=1)),
            },
        },
        wall_seconds=time.time() - start,
    )
    if cfg.out:
        report.write(cfg.out)
    return report
