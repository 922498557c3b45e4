"""Li-Yorke and distributional-chaos statistics for pairs of orbits.

Everything here works on any *orbit system*: an object with

* ``orbit_distances(x, y, n)`` -- array of rho(f^i x, f^i y) for 0 <= i < n,
* ``step(x)`` -- the image of a state,
* ``same(x, y)`` -- state equality,
* ``diameter`` -- diameter of the phase space.

Graph maps (:class:`GraphSystem`) and shift spaces share this module.
"""
from __future__ import annotations

import bisect
import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Protocol, Sequence

import numpy as np

from .graph_map import PLGraphMap
from .metric_graph import GraphPoint, InputError

NONE, LI_YORKE, DC3, DC2, DC1 = "None", "LiYorke", "DC3", "DC2", "DC1"
CLASS_ORDER = (NONE, LI_YORKE, DC3, DC2, DC1)


class OrbitSystem(Protocol):
    diameter: float

    def orbit_distances(self, x, y, n: int) -> np.ndarray: ...

    def step(self, x): ...

    def same(self, x, y) -> bool: ...


class GraphSystem:
    """Orbit system of f^power for a PL graph map.

    Rational points are iterated exactly (eventually periodic orbits are
    detected and unrolled); once a denominator passes ``exact_limit`` the
    orbit continues in floating point.
    """

    def __init__(self, m: PLGraphMap, power: int = 1, exact_limit: int = 2**62, tol: float = 1e-9):
        self.map = m
        self.graph = m.graph
        self.power = power
        self.exact_limit = exact_limit
        self.tol = tol
        self._cache: dict = {}
        self._lists = None

    @property
    def diameter(self) -> float:
        return self.graph.diameter

    def step(self, x: GraphPoint) -> GraphPoint:
        for _ in range(self.power):
            x = self.map.evaluate(x)
        return x

    def same(self, x: GraphPoint, y: GraphPoint) -> bool:
        if isinstance(x.offset, float) or isinstance(y.offset, float):
            return float(self.graph.distance(x, y)) <= self.tol
        return self.graph.same_point(x, y)

    def _float_tables(self):
        if self._lists is None:
            self._lists = [
                (list(starts), tgt.tolist(), slope.tolist(), icpt.tolist())
                for starts, tgt, slope, icpt in self.map._compiled
            ]
        return self._lists

    def orbit_arrays(self, x: GraphPoint, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Edge indices and float offsets of x, g(x), ..., g^{n-1}(x) for g = f^power."""
        key = (x, n)
        if key in self._cache:
            return self._cache[key]
        eidx = self.graph.edge_index
        edges = np.empty(n, dtype=np.int64)
        offs = np.empty(n, dtype=float)
        p = self.graph.canonical(x)
        i = 0
        if not isinstance(p.offset, float):
            seen: dict[GraphPoint, int] = {}
            while i < n:
                if p in seen:
                    j = seen[p]
                    period = i - j
                    src = j + (np.arange(i, n) - j) % period
                    edges[i:], offs[i:] = edges[src], offs[src]
                    i = n
                    break
                seen[p] = i
                edges[i], offs[i] = eidx[p.edge], float(p.offset)
                i += 1
                if i == n or Fraction(p.offset).denominator > self.exact_limit:
                    break
                p = self.step(p)
        else:
            edges[0], offs[0] = eidx[p.edge], p.offset
            i = 1
        if i < n:
            tables = self._float_tables()
            lengths = self.graph._edge_arrays[2].tolist()
            e, t = int(edges[i - 1]), float(offs[i - 1])
            while i < n:
                for _ in range(self.power):
                    starts, tgt, slope, icpt = tables[e]
                    k = min(max(bisect.bisect_right(starts, t) - 1, 0), len(starts) - 1)
                    e, t = tgt[k], slope[k] * t + icpt[k]
                    t = min(max(t, 0.0), lengths[e])
                edges[i], offs[i] = e, t
                i += 1
        if len(self._cache) > 256:
            self._cache.clear()
        self._cache[key] = (edges, offs)
        return edges, offs

    def orbit_distances(self, x: GraphPoint, y: GraphPoint, n: int) -> np.ndarray:
        ex, ox = self.orbit_arrays(x, n)
        ey, oy = self.orbit_arrays(y, n)
        return self.graph.distance_arrays(ex, ox, ey, oy)


# -- parameters and results ---------------------------------------------------------------
def default_t_grid(diameter: float, points: int = 16) -> np.ndarray:
    return np.logspace(-3, np.log10(diameter), points)


@dataclass
class ChaosParams:
    n_max: int = 100_000
    t_grid: Sequence[float] | None = None
    eta: float = 0.05
    delta_low: float = 1e-3
    delta_high: float = 1e-2
    # estimates use n in [n_max // window_ratio, n_max]
    window_ratio: int = 1000
    # a verdict must also hold on [n_max // confirm_ratio, n_max]; None disables
    confirm_ratio: int | None = 100

    def grid(self, system) -> np.ndarray:
        if self.t_grid is None:
            return default_t_grid(system.diameter)
        return np.asarray(sorted(self.t_grid), dtype=float)


def window_start(n_max: int, window_ratio: int) -> int:
    return max(1, n_max // window_ratio)


@dataclass
class PairStatistics:
    n_max: int
    n_lo: int
    t_grid: np.ndarray
    xi_counts: np.ndarray  # shape (len(t_grid), n_max); [k, n-1] = xi(x, y, n, t_k)
    f_upper_est: np.ndarray
    f_lower_est: np.ndarray
    distances: np.ndarray = field(repr=False)

    def xi(self, n: int, k: int) -> int:
        return int(self.xi_counts[k, n - 1])

    def restricted(self, n_from: int) -> "PairStatistics":
        """Same data with the max/min taken over n in [n_from, n_max] only."""
        n_from = max(n_from, self.n_lo)
        ratios = self.xi_counts[:, n_from - 1:] / np.arange(n_from, self.n_max + 1)
        return PairStatistics(self.n_max, n_from, self.t_grid, self.xi_counts,
                              ratios.max(axis=1), ratios.min(axis=1), self.distances)

    def to_csv(self, sample_ns: Sequence[int] | None = None) -> str:
        if sample_ns is None:
            sample_ns = sorted({self.n_lo, max(self.n_lo, self.n_max // 10), self.n_max // 2, self.n_max})
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + [f"xi_over_n@{n}" for n in sample_ns] + ["f_lower", "f_upper"])
        for k, t in enumerate(self.t_grid):
            w.writerow([f"{t:.6g}"] + [f"{self.xi(n, k) / n:.6f}" for n in sample_ns]
                       + [f"{self.f_lower_est[k]:.6f}", f"{self.f_upper_est[k]:.6f}"])
        return buf.getvalue()


@dataclass
class PairClass:
    kind: str
    n_max: int
    epsilon: float | None = None
    gap_interval: tuple[float, float] | None = None
    li_yorke: bool = False
    notes: tuple[str, ...] = ()

    def at_least(self, kind: str) -> bool:
        return CLASS_ORDER.index(self.kind) >= CLASS_ORDER.index(kind)

    def as_dict(self) -> dict:
        return {"class": self.kind, "n_max": self.n_max, "epsilon": self.epsilon,
                "gap_interval": list(self.gap_interval) if self.gap_interval else None,
                "li_yorke": self.li_yorke}


@dataclass
class ScrambledSetReport:
    points: list
    classes: dict[tuple[int, int], PairClass]
    invariant: bool
    scrambled: bool
    dc1_scrambled: bool
    uniform_epsilon: float | None
    n_max: int
    notes: list[str] = field(default_factory=list)

    @property
    def uniform(self) -> bool:
        return self.uniform_epsilon is not None

    def as_dict(self) -> dict:
        return {
            "n_points": len(self.points),
            "n_max": self.n_max,
            "pairs": {f"{i},{j}": c.as_dict() for (i, j), c in sorted(self.classes.items())},
            "invariant": self.invariant,
            "li_yorke_scrambled": self.scrambled,
            "dc1_scrambled": self.dc1_scrambled,
            "uniform_epsilon": self.uniform_epsilon,
            "notes": self.notes,
        }


# -- operations ------------------------------------------------------------------------------
def xi(system: OrbitSystem, x, y, n: int, t: float) -> int:
    """Number of i < n with rho(f^i x, f^i y) < t."""
    if n < 1 or not t > 0:
        raise InputError("need n >= 1 and t > 0")
    return int(np.count_nonzero(system.orbit_distances(x, y, n) < t))


def statistics_from_distances(d: np.ndarray, t_grid: Sequence[float], n_lo: int = 1) -> PairStatistics:
    n_max = len(d)
    t_grid = np.asarray(t_grid, dtype=float)
    counts = np.cumsum(d[None, :] < t_grid[:, None], axis=1)
    ns = np.arange(n_lo, n_max + 1)
    ratios = counts[:, n_lo - 1:] / ns
    return PairStatistics(n_max, n_lo, t_grid, counts, ratios.max(axis=1), ratios.min(axis=1), d)


def distributional_functions(system: OrbitSystem, x, y, n_max: int, t_grid=None,
                             window_ratio: int = 1000) -> PairStatistics:
    """Empirical upper/lower distributional functions over a t grid.

    limsup/liminf of xi/n are replaced by max/min over n in
    [n_max // window_ratio, n_max].
    """
    if n_max < 100:
        raise InputError("n_max must be at least 100")
    if t_grid is None:
        t_grid = default_t_grid(system.diameter)
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid <= 0) or np.any(np.diff(t_grid) <= 0):
        raise InputError("t_grid must be positive and increasing")
    d = system.orbit_distances(x, y, n_max)
    return statistics_from_distances(d, t_grid, window_start(n_max, window_ratio))


def _li_yorke_from_distances(d: np.ndarray, n_lo: int, delta_low: float, delta_high: float) -> bool:
    tail = d[n_lo - 1:]
    return bool(tail.min() < delta_low and tail.max() > delta_high)


def is_li_yorke_pair(system: OrbitSystem, x, y, n_max: int, delta_low: float = 1e-3,
                     delta_high: float = 1e-2, window_ratio: int = 1000) -> bool:
    if not 0 < delta_low < delta_high:
        raise InputError("need 0 < delta_low < delta_high")
    d = system.orbit_distances(x, y, n_max)
    return _li_yorke_from_distances(d, window_start(n_max, window_ratio), delta_low, delta_high)


def classify_statistics(stats: PairStatistics, eta: float = 0.05, li_yorke: bool = False) -> PairClass:
    up, lo, grid = stats.f_upper_est, stats.f_lower_est, stats.t_grid
    upper_full = bool(np.all(up >= 1 - eta))
    notes = (f"empirical verdict at n_max={stats.n_max}",)
    if upper_full:
        ok = np.nonzero(lo <= eta)[0]
        if ok.size:
            return PairClass(DC1, stats.n_max, epsilon=float(grid[ok[-1]]), li_yorke=li_yorke, notes=notes)
        if lo[0] <= 1 - 3 * eta:
            return PairClass(DC2, stats.n_max, epsilon=float(grid[0]), li_yorke=li_yorke,
                             notes=notes + ("F_xy(0+) approximated at the smallest grid t",))
    gap = (up - lo) > eta
    for k in range(len(grid) - 1):
        if gap[k] and gap[k + 1]:
            k2 = k + 1
            while k2 + 1 < len(grid) and gap[k2 + 1]:
                k2 += 1
            return PairClass(DC3, stats.n_max, gap_interval=(float(grid[k]), float(grid[k2])),
                             li_yorke=li_yorke, notes=notes)
    return PairClass(LI_YORKE if li_yorke else NONE, stats.n_max, li_yorke=li_yorke, notes=notes)


def classify_confirmed(stats: PairStatistics, params: ChaosParams, li_yorke: bool) -> PairClass:
    """DC2/DC3 verdicts must survive on the late window too.

    Transients (e.g. a pair that needs a few steps to come together) can open
    a spurious gap early in the window; genuine distributional gaps recur at
    every scale. DC1 is kept as is: it needs ratios near 0 and near 1 at
    different n, which a one-sided transient cannot produce.
    """
    full = classify_statistics(stats, params.eta, li_yorke)
    if not params.confirm_ratio or full.kind not in (DC2, DC3):
        return full
    late = classify_statistics(stats.restricted(window_start(stats.n_max, params.confirm_ratio)),
                               params.eta, li_yorke)
    if CLASS_ORDER.index(late.kind) < CLASS_ORDER.index(full.kind):
        late.notes = late.notes + (f"{full.kind} on the full window not confirmed on the late window",)
        return late
    return full


def classify_pair(system: OrbitSystem, x, y, params: ChaosParams | None = None) -> PairClass:
    params = params or ChaosParams()
    if system.same(x, y):
        raise InputError("classify_pair needs two different points")
    stats = distributional_functions(system, x, y, params.n_max, params.grid(system), params.window_ratio)
    ly = _li_yorke_from_distances(stats.distances, stats.n_lo, params.delta_low, params.delta_high)
    return classify_confirmed(stats, params, ly)


def verify_scrambled_set(system: OrbitSystem, S: Sequence, closure_hint: Callable | None = None,
                         params: ChaosParams | None = None) -> ScrambledSetReport:
    """Classify every pair of a finite sample and check f(S) within S.

    ``closure_hint(s, image)`` may declare an image a member of the described
    family even when it is not in the finite sample (e.g. a generator shifted
    one step further).
    """
    params = params or ChaosParams()
    S = list(S)
    if len(S) < 2:
        raise InputError("a scrambled-set sample needs at least two points")
    grid = params.grid(system)
    classes = {}
    lowers = []
    for i, j in itertools.combinations(range(len(S)), 2):
        stats = distributional_functions(system, S[i], S[j], params.n_max, grid, params.window_ratio)
        ly = _li_yorke_from_distances(stats.distances, stats.n_lo, params.delta_low, params.delta_high)
        classes[(i, j)] = classify_confirmed(stats, params, ly)
        lowers.append(stats.f_lower_est)
    invariant = True
    for s in S:
        img = system.step(s)
        if any(system.same(img, t) for t in S):
            continue
        if closure_hint is not None and closure_hint(s, img):
            continue
        invariant = False
        break
    scrambled = all(c.li_yorke for c in classes.values())
    dc1 = all(c.kind == DC1 for c in classes.values())
    uniform = None
    if dc1:
        ok = np.all(np.vstack(lowers) <= params.eta, axis=0)
        idx = np.nonzero(ok)[0]
        if idx.size:
            uniform = float(grid[idx[-1]])
    return ScrambledSetReport(S, classes, invariant, scrambled, dc1, uniform, params.n_max,
                              [f"empirical verdicts at n_max={params.n_max}"])
