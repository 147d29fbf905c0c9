"""Collars of simplex faces: cutoffs, the partition {g_S}, and the flowed collar maps.

Simplices here are the enlarged ones, ``sum(x) = 1`` with every ``x_i >= -1``.
Index sets are tuples of labels; coordinates are stored in sorted label
order.  Functions accept one point ``(m,)`` or a batch ``(N, m)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

SUM_TOL = 1e-12
CHART_FLOOR = 1e-9
LEAVE_TOL = 1e-9


class CollarError(ValueError):
    pass


def _labels(I) -> tuple:
    out = tuple(sorted(I))
    if len(set(out)) != len(out):
        raise ValueError("repeated labels")
    return out


@dataclass(frozen=True)
class CollarPoint:
    """A point of the enlarged simplex on the index set ``index``."""

    index: tuple
    coords: np.ndarray = field(compare=False)

    def __post_init__(self):
        idx = _labels(self.index)
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (len(idx),):
            raise ValueError(f"expected {len(idx)} coordinates, got shape {c.shape}")
        if abs(c.sum() - 1.0) > SUM_TOL:
            raise ValueError(f"coordinates sum to {c.sum()!r}, not 1")
        if (c < -1 - SUM_TOL).any():
            raise ValueError("coordinate below -1")
        object.__setattr__(self, "index", idx)
        object.__setattr__(self, "coords", c)

    def __getitem__(self, label):
        return self.coords[self.index.index(label)]


# -- cutoffs ------------------------------------------------------------------------

def _e(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def psi(u):
    """Smooth step: 0 for u <= 0, 1 for u >= 1."""
    a, b = _e(u), _e(1.0 - np.asarray(u, dtype=float))
    return a / (a + b)


def cutoff(x, a: float, b: float):
    """κ_a^b: 0 on (-inf, a], 1 on [b, inf), smooth and nondecreasing."""
    if not a < b:
        raise ValueError("cutoff needs a < b")
    return psi((np.asarray(x, dtype=float) - a) / (b - a))


def kappa_S(S: Sequence[int], x):
    """κ_S for a set of coordinate positions ``S`` (not labels)."""
    S = tuple(S)
    if not S:
        raise ValueError("κ_S needs a nonempty S")
    x = np.asarray(x, dtype=float)
    n = len(S)
    xs = x[..., list(S)]
    val = cutoff(xs.sum(axis=-1), 1 - 0.5 ** (n - 1), 1 - 0.5 ** n)
    for k in range(n):
        val = val * cutoff(xs[..., k], 0.5 ** (n + 1), 0.5 ** n)
    return val


def partition_g(x) -> dict[tuple[int, ...], np.ndarray]:
    """{g_S} keyed by position tuples, for every nonempty S of the coordinate set."""
    x = np.asarray(x, dtype=float)
    m = x.shape[-1]
    g: dict[tuple[int, ...], np.ndarray] = {}
    lower = np.zeros(x.shape[:-1])
    for n in range(1, m + 1):
        subsets = list(combinations(range(m), n))
        kap = {S: kappa_S(S, x) for S in subsets}
        new = {}
        for S in subsets:
            f = kap[S]
            for T in subsets:
                if T != S:
                    f = f * (1 - kap[T])
            new[S] = f * (1 - lower)
        g.update(new)
        lower = lower + sum(new.values())
    return g


def partition_sum(x):
    return sum(partition_g(x).values())


# -- piecewise collars -----------------------------------------------------------------

def _split(I, J):
    I, J = _labels(I), _labels(J)
    if not set(I) <= set(J):
        raise ValueError(f"{I} is not a subset of {J}")
    on = [J.index(i) for i in I]
    off = [k for k, j in enumerate(J) if j not in I]
    return I, J, on, off


def phi_piecewise(I, J, S, x, t):
    """φ_S(x, t): off-I coordinates set to t, S rescaled by b_S, the rest kept."""
    I, J, on, off = _split(I, J)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    spos = [I.index(s) for s in S]
    xS = x[..., spos].sum(axis=-1)
    if np.any(xS == 0):
        raise CollarError("degenerate rescaling set")
    rest = x.sum(axis=-1) - xS
    b = (1 - t.sum(axis=-1) - rest) / xS
    y = np.zeros(x.shape[:-1] + (len(J),))
    y[..., on] = x
    y[..., [on[k] for k in spos]] = x[..., spos] * np.asarray(b)[..., None]
    y[..., off] = t
    return y


# -- the flowed collar ------------------------------------------------------------------

def straight_path(t):
    t = np.asarray(t, dtype=float)
    return (lambda tau: tau * t), (lambda tau: t)


def staggered_path(t):
    """Each coordinate moves on its own sub-interval with a C^1 smoothstep."""
    t = np.asarray(t, dtype=float)
    k = t.shape[-1]
    starts = np.linspace(0.0, 0.5, k) if k > 1 else np.zeros(1)
    width = 0.5

    def s(tau):
        u = np.clip((tau - starts) / width, 0.0, 1.0)
        return u * u * (3 - 2 * u)

    def ds(tau):
        u = (tau - starts) / width
        inside = (u > 0) & (u < 1)
        return np.where(inside, 6 * u * (1 - u) / width, 0.0)

    return (lambda tau: t * s(tau)), (lambda tau: t * ds(tau))


def _velocity(y, on, off, dt, charts):
    """ξ at y: off-I coordinates follow dt; I-coordinates by the weighted chart velocities."""
    g = partition_g(y)
    v = np.zeros_like(y)
    v[..., off] = dt
    speed = -dt.sum(axis=-1)
    for S in charts:
        gS = g[S]
        yS = y[..., list(S)].sum(axis=-1)
        small = yS < CHART_FLOOR
        if np.any(small):
            if np.any(gS[small] >= CHART_FLOOR):
                raise CollarError(f"chart {S} has weight {gS[small].max():.3g} where its mass vanishes")
            gS = np.where(small, 0.0, gS)
            yS = np.where(small, 1.0, yS)
        w = gS * speed / yS
        v[..., list(S)] += w[..., None] * y[..., list(S)]
    return v


def collar_flow(I, J, x, t, steps: int = 256, path: str = "straight"):
    """Φ_{I⊂J}(x, t) as the time-1 flow of the blended chart velocities (RK4)."""
    if steps < 16:
        raise ValueError("collar_flow needs at least 16 steps")
    I, J, on, off = _split(I, J)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if t.shape[-1] != len(off):
        raise ValueError(f"expected {len(off)} collar coordinates, got {t.shape[-1]}")
    if np.any(t > 0) or np.any(t < -1):
        raise ValueError("collar coordinates must lie in [-1, 0]")
    batch = x.shape[:-1]
    t = np.broadcast_to(t, batch + (len(off),))
    pos, vel = {"straight": straight_path, "staggered": staggered_path}[path](t)
    y = np.zeros(batch + (len(J),))
    y[..., on] = x
    if not off:
        return y
    charts = [tuple(on[k] for k in S) for n in range(1, len(I) + 1) for S in combinations(range(len(I)), n)]
    h = 1.0 / steps

    def f(tau, y):
        return _velocity(y, on, off, vel(tau), charts)

    for k in range(steps):
        tau = k * h
        k1 = f(tau, y)
        k2 = f(tau + h / 2, y + h / 2 * k1)
        k3 = f(tau + h / 2, y + h / 2 * k2)
        k4 = f(tau + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        low = (-1 - y).max()
        drift = np.abs(y.sum(axis=-1) - 1).max()
        if low > LEAVE_TOL or drift > LEAVE_TOL:
            raise CollarError(f"flow left the simplex (max violation {max(low, drift):.3g})")
    y[..., off] = t          # the slice condition holds exactly
    return y


# -- verification ---------------------------------------------------------------

def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def sample_simplex(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    """Uniform samples of the enlarged simplex on ``m`` coordinates."""
    return -1.0 + (m + 1) * rng.dirichlet(np.ones(m), size=n)


def parse_chain(text: str) -> list[tuple[int, ...]]:
    """``"0;0,1;0,1,2"`` -> [(0,), (0, 1), (0, 1, 2)]."""
    chain = [tuple(sorted(int(v) for v in part.split(","))) for part in text.split(";")]
    if len(chain) < 2:
        raise ValueError("a chain needs at least two index sets")
    for a, b in zip(chain, chain[1:]):
        if not set(a) < set(b):
            raise ValueError(f"{a} is not a proper subset of {b}")
    if len(chain[-1]) > 4:
        raise ValueError("index sets of size at most 4 are supported")
    return chain


@dataclass
class CoherenceReport:
    chain: list
    samples: int
    steps: int
    tol: float
    residuals: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max()) if self.residuals.size else 0.0

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol

    def lines(self) -> list[str]:
        return [
            "chain " + ";".join(",".join(str(v) for v in s) for s in self.chain),
            f"samples {self.samples}",
            f"steps {self.steps}",
            f"coherence max_residual {self.max_residual:.6e}",
            f"tol {self.tol:.1e}",
            f"result {'PASS' if self.passed else 'FAIL'}",
        ]


def coherence_residuals(chain, x, collars, steps: int = 256):
    """|composite of successive collars - direct collar| per sample (max norm).

    ``collars[k]`` holds the collar coordinates for ``chain[k+1] - chain[k]``.
    """
    chain = [_labels(s) for s in chain]
    y = np.asarray(x, dtype=float)
    for (A, B), u in zip(zip(chain, chain[1:]), collars):
        y = collar_flow(A, B, y, u, steps)
    first, last = chain[0], chain[-1]
    # the direct collar sees every collar coordinate at once, in label order
    label_of = {}
    for (A, B), u in zip(zip(chain, chain[1:]), collars):
        u = np.asarray(u, dtype=float)
        for k, lab in enumerate(l for l in B if l not in A):
            label_of[lab] = u[..., k]
    direct_t = np.stack([label_of[l] for l in last if l not in first], axis=-1)
    z = collar_flow(first, last, x, direct_t, steps)
    return np.abs(y - z).max(axis=-1)


def verify_coherence(chain, samples: int = 256, steps: int = 256, tol: float = 1e-6, seed: int = 0) -> CoherenceReport:
    chain = [_labels(s) for s in (parse_chain(chain) if isinstance(chain, str) else chain)]
    rng = make_rng(seed)
    x = sample_simplex(rng, len(chain[0]), samples)
    collars = [rng.uniform(-1.0, 0.0, size=(samples, len(B) - len(A))) for A, B in zip(chain, chain[1:])]
    res = coherence_residuals(chain, x, collars, steps)
    return CoherenceReport(chain, samples, steps, tol, res)


@dataclass
class SupportReport:
    point: np.ndarray
    support_ok: bool           # g_S > 0 forces x_s > 0 on S
    negative_ok: bool          # g unchanged when mass moves between negative coordinates
    max_shift_change: float

    @property
    def passed(self) -> bool:
        return self.support_ok and self.negative_ok


def verify_partition_support(x, rng: np.random.Generator | None = None, trials: int = 4) -> SupportReport:
    x = np.asarray(x, dtype=float)
    g = partition_g(x)
    support_ok = all(float(v) <= 0 or all(x[s] > 0 for s in S) for S, v in g.items())
    neg = [k for k in range(len(x)) if x[k] < 0]
    change = 0.0
    if len(neg) >= 2:
        rng = rng or make_rng(0)
        for _ in range(trials):
            a, b = rng.choice(neg, size=2, replace=False)
            # move mass from a to b, keeping both in [-1, 0)
            room = min(x[a] + 1, -x[b])
            delta = rng.uniform(0, room) * 0.999
            y = x.copy()
            y[a] -= delta
            y[b] += delta
            gy = partition_g(y)
            change = max(change, max(abs(float(gy[S]) - float(g[S])) for S in g))
    return SupportReport(x, support_ok, change <= 1e-12, change)


def injectivity_ratio(I, J, t, samples: int = 200, steps: int = 64, seed: int = 0) -> float:
    """min |Φ(x) - Φ(x')| / |x - x'| over sampled pairs on one slice (recorded, not asserted)."""
    I = _labels(I)
    rng = make_rng(seed)
    x = sample_simplex(rng, len(I), 2 * samples)
    y = collar_flow(I, J, x, t, steps)
    a, b = x[:samples], x[samples:]
    ya, yb = y[:samples], y[samples:]
    return float((np.linalg.norm(ya - yb, axis=1) / np.linalg.norm(a - b, axis=1)).min())
