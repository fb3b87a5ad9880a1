"""Upper bounds on the register negativity from trace-power constraints.

The partial transpose of the output state has known trace powers

    tr(rho_pt**s) = [(1+alpha)**s + (1-alpha)**s] / (2**s N**(s-1)),  s = 1,2,3,

independent of the unitary and of the bipartite division.  Maximizing
sum|lambda| subject to the s = 1,2 constraints gives the closed form
sqrt(1 + alpha**2); adding s = 3 (at alpha = 1) forces at most three distinct
eigenvalues, and the bound becomes a finite search over their degeneracies
(u, v, w), solving the moment system for each triple.  The s = 1,2,3 bound
tightens the small-register picture and approaches sqrt(2) from below like
sqrt(2) - 2**(-7/6) N**(-1/3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

CONSTRAINT_TOL = 1e-10
ROOT_DEDUPE_TOL = 1e-8
EXHAUSTIVE_MAX_TWO_N = 78
GUIDED_RADIUS = 3
_GRID = 5          # starting points per axis (5 x 5 grid per triple)
_NEWTON_ITERS = 60


@dataclass(frozen=True)
class SpectrumSolution:
    """An eigenvalue multiset: distinct values with their degeneracies."""

    distinct_values: tuple[float, ...]
    degeneracies: tuple[int, ...]
    m_value: float

    @property
    def total(self) -> int:
        return sum(self.degeneracies)


@dataclass(frozen=True)
class BoundResult:
    two_n: int          # spectrum size 2N of the transposed state
    alpha: float
    bound: float
    kind: str           # s12_continuous | s12_integer | s123_numeric | s123_asymptotic
    witness: SpectrumSolution | None = None
    degenerate: bool = False    # alpha = 0: the state is maximally mixed


def trace_power(N: int, alpha: float, s: int) -> float:
    """tr(rho_pt**s) for polarization alpha and N = 2**n."""
    if s not in (1, 2, 3):
        raise ValueError(f"s must be 1, 2, or 3, got {s}")
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    if not abs(alpha) <= 1:
        raise ValueError(f"|alpha| must be <= 1, got {alpha}")
    return ((1 + alpha) ** s + (1 - alpha) ** s) / (2**s * N ** (s - 1))


def _s12_lambdas(N: int, alpha: float, t: int) -> tuple[float, float]:
    """The stationary eigenvalue pair for t negative, 2N - t nonnegative."""
    lam_minus = (1 - alpha * math.sqrt((2 * N - t) / t)) / (2 * N)
    lam_plus = (1 + alpha * math.sqrt(t / (2 * N - t))) / (2 * N)
    return lam_minus, lam_plus


def bound_s12(N: int, alpha: float) -> tuple[BoundResult, BoundResult]:
    """(continuous, integer) bounds from the s = 1, 2 constraints.

    The continuous optimum is sqrt(1 + alpha**2) at t = N(1 - 1/sqrt(1+alpha**2))
    negative eigenvalues; the integer bound re-maximizes over the two integers
    bracketing t (equal values resolve to the smaller t).
    """
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    two_n = 2 * N
    if alpha == 0:
        flat = SpectrumSolution((1.0 / two_n,), (two_n,), 1.0)
        cont = BoundResult(two_n, 0.0, 1.0, "s12_continuous", witness=None, degenerate=True)
        inte = BoundResult(two_n, 0.0, 1.0, "s12_integer", witness=flat, degenerate=True)
        return cont, inte
    bound_cont = math.sqrt(1 + alpha * alpha)
    t_star = N * (1 - 1 / bound_cont)
    cont = BoundResult(two_n, alpha, bound_cont, "s12_continuous")

    def m_of(t: int) -> float:
        # absolute sum of the witness pair; when the putatively negative
        # eigenvalue is still positive (small alpha) this is 1, never less
        lam_minus, lam_plus = _s12_lambdas(N, alpha, t)
        return t * abs(lam_minus) + (two_n - t) * abs(lam_plus)

    candidates = sorted({t for t in (math.floor(t_star), math.ceil(t_star))
                         if 1 <= t <= two_n - 1})
    best_t = candidates[0]
    for t in candidates[1:]:
        if m_of(t) > m_of(best_t) + 1e-12:
            best_t = t
    lam_minus, lam_plus = _s12_lambdas(N, alpha, best_t)
    witness = SpectrumSolution((lam_minus, lam_plus), (best_t, two_n - best_t), m_of(best_t))
    inte = BoundResult(two_n, alpha, m_of(best_t), "s12_integer", witness=witness)
    return cont, inte


# ---------------------------------------------------------------------------
# s = 1, 2, 3 bound (alpha = 1)

def _newton_batch(degs: np.ndarray, N: float) -> list[tuple[int, float, float, float]]:
    """Damped Newton from a 5x5 grid of starts for every degeneracy triple.

    ``degs`` is (T, 3) with entries >= 1.  The linear constraint eliminates C;
    iteration runs on (A, B) for all triples and starts at once.  Returns
    converged (triple_index, A, B, C) instances (unfiltered for duplicates).
    """
    x = 1.0 / N
    reps = _GRID * _GRID
    u = np.repeat(degs[:, 0], reps).astype(float)
    v = np.repeat(degs[:, 1], reps).astype(float)
    w = np.repeat(degs[:, 2], reps).astype(float)
    grid = np.linspace(-1.0, 1.0, _GRID)
    ga, gb = np.meshgrid(grid, grid, indexing="ij")
    a = np.sqrt(x / u) * np.tile(ga.ravel(), len(degs))
    b = np.sqrt(x / v) * np.tile(gb.ravel(), len(degs))

    def residuals(a, b):
        c = (1.0 - u * a - v * b) / w
        f1 = u * a * a + v * b * b + w * c * c - x
        f2 = u * a**3 + v * b**3 + w * c**3 - x * x
        return f1, f2, c

    # diverging starts overflow before the residual filter discards them
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(_NEWTON_ITERS):
            f1, f2, c = residuals(a, b)
            j11 = 2 * u * (a - c)
            j12 = 2 * v * (b - c)
            j21 = 3 * u * (a * a - c * c)
            j22 = 3 * v * (b * b - c * c)
            det = j11 * j22 - j12 * j21
            da = np.nan_to_num((j22 * f1 - j12 * f2) / det)
            db = np.nan_to_num((j11 * f2 - j21 * f1) / det)
            step = np.ones_like(a)
            r0 = f1 * f1 + f2 * f2
            for _ in range(8):
                g1, g2, _ = residuals(a - step * da, b - step * db)
                worse = (g1 * g1 + g2 * g2) > r0
                if not worse.any():
                    break
                step = np.where(worse, step / 2, step)
            a -= step * da
            b -= step * db
        f1, f2, c = residuals(a, b)
    ok = (np.abs(f1) <= CONSTRAINT_TOL) & (np.abs(f2) <= CONSTRAINT_TOL)
    tri_idx = np.repeat(np.arange(len(degs)), reps)
    return list(zip(tri_idx[ok].tolist(), a[ok].tolist(), b[ok].tolist(), c[ok].tolist()))


def _canonical(values: Sequence[float], degs: Sequence[int]) -> tuple[tuple[float, ...], tuple[int, ...]]:
    """Order a 3-value solution as (lowest, highest, middle): the negative
    eigenvalue first with degeneracy u, the top eigenvalue second with
    degeneracy v, the remaining one last with degeneracy w."""
    pairs = sorted(zip(values, degs))
    (va, da), (vc, dc), (vb, db) = pairs
    return (va, vb, vc), (da, db, dc)


def solve_degeneracy_triple(u: int, v: int, w: int, N: float) -> list[SpectrumSolution]:
    """All real solutions of the three-moment system for one degeneracy triple,
    deduplicated, in canonical order."""
    roots = _newton_batch(np.array([[u, v, w]], dtype=float), N)
    seen = set()
    out = []
    for _, a, b, c in roots:
        vals, degs = _canonical((a, b, c), (u, v, w))
        key = tuple(round(t / ROOT_DEDUPE_TOL) for t in vals)
        if key in seen:
            continue
        seen.add(key)
        m = sum(d * abs(t) for t, d in zip(vals, degs))
        out.append(SpectrumSolution(vals, degs, m))
    return sorted(out, key=lambda s: -s.m_value)


def _two_value_candidates(two_n: int, N: float) -> list[SpectrumSolution]:
    """Degenerate triples with a zero entry: the s = 1, 2 two-eigenvalue family,
    kept only when it happens to satisfy the s = 3 constraint too."""
    out = []
    x = 1.0 / N
    for t in range(1, two_n):
        for branch in (1.0, -1.0):
            lam_a = (1 - branch * math.sqrt((two_n - t) / t)) / two_n
            lam_b = (1 + branch * math.sqrt(t / (two_n - t))) / two_n
            p3 = t * lam_a**3 + (two_n - t) * lam_b**3
            if abs(p3 - x * x) <= CONSTRAINT_TOL:
                m = t * abs(lam_a) + (two_n - t) * abs(lam_b)
                vals = (lam_a, lam_b) if lam_a <= lam_b else (lam_b, lam_a)
                degs = (t, two_n - t) if lam_a <= lam_b else (two_n - t, t)
                out.append(SpectrumSolution(vals, degs, m))
    return out


def _pattern_center(N: float, two_n: int) -> tuple[int, int, int]:
    u = round(N * (1 - 1 / math.sqrt(2)))
    return u, 1, two_n - 1 - u


def bound_s123(N: int) -> BoundResult:
    """The s = 1, 2, 3 bound at alpha = 1 for spectrum size 2N.

    Up to 2N = 78 every degeneracy triple is enumerated and solved; beyond
    that only a +-3 neighborhood of the asymptotic maximizer pattern
    (u ~ N(1 - 1/sqrt 2) negatives, a nondegenerate top eigenvalue) is
    searched, so those values are best-effort rather than certified maxima.
    The witness is canonically ordered (negative, top, middle) = (A, B, C)
    with degeneracies (u, v, w).
    """
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    two_n = 2 * N
    if two_n <= EXHAUSTIVE_MAX_TWO_N:
        triples = [(u, v, two_n - u - v)
                   for u in range(1, two_n // 3 + 1)
                   for v in range(u, (two_n - u) // 2 + 1)
                   if two_n - u - v >= v]
    else:
        u0, v0, w0 = _pattern_center(N, two_n)
        triples = []
        for du in range(-GUIDED_RADIUS, GUIDED_RADIUS + 1):
            for dv in range(-GUIDED_RADIUS, GUIDED_RADIUS + 1):
                u, v = u0 + du, v0 + dv
                w = two_n - u - v
                if u >= 1 and v >= 1 and w >= 1:
                    triples.append((u, v, w))
    degs = np.array(triples, dtype=float)
    best: SpectrumSolution | None = None

    def better(cand: SpectrumSolution, cur: SpectrumSolution | None) -> bool:
        if cur is None or cand.m_value > cur.m_value:
            return True
        return cand.m_value == cur.m_value and cand.degeneracies < cur.degeneracies

    for tri_idx, a, b, c in _newton_batch(degs, float(N)):
        vals, dd = _canonical((a, b, c), triples[tri_idx])
        m = sum(d * abs(t) for t, d in zip(vals, dd))
        cand = SpectrumSolution(vals, dd, m)
        if better(cand, best):
            best = cand
    for cand in _two_value_candidates(two_n, float(N)):
        if better(cand, best):
            best = cand
    if best is None:
        raise RuntimeError(f"no real solution found for any degeneracy triple at 2N={two_n}")
    return BoundResult(two_n, 1.0, best.m_value, "s123_numeric", witness=best)


def bound_s123_asymptotic(N: int) -> float:
    """Leading large-N form of the s = 1, 2, 3 bound: sqrt(2) - 2**(-7/6) N**(-1/3)."""
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    return math.sqrt(2) - 2.0 ** (-7.0 / 6.0) * N ** (-1.0 / 3.0)


def bounds_csv(results: Sequence[BoundResult]) -> str:
    """CSV rows `two_N,kind,bound,u,v,w,A,B,C` (witness fields empty if absent)."""
    lines = ["two_N,kind,bound,u,v,w,A,B,C"]
    for r in results:
        degs: tuple = ("", "", "")
        vals: tuple = ("", "", "")
        if r.witness is not None:
            pad = 3 - len(r.witness.degeneracies)
            degs = tuple(str(d) for d in r.witness.degeneracies) + ("",) * pad
            vals = tuple(f"{t:.17g}" for t in r.witness.distinct_values) + ("",) * pad
        lines.append(",".join([str(r.two_n), r.kind, f"{r.bound:.17g}", *degs, *vals]))
    return "\n".join(lines) + "\n"
