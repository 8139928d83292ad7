"""Unitary equivalence: canonical-parameter comparison and a gauge-search oracle.

The oracle never looks at canonical forms.  It matches the window matrices of
two walks entry by entry: every nonzero entry ``(i, j)`` gives the congruence

    lambda + w_i - w_j = arg B_ij - arg A_ij   (mod 2 pi)

in the unknown global phase ``lambda`` and the diagonal gauge phases ``w``.
Propagating along a spanning tree of the entry graph expresses each ``w`` as
``alpha + beta * lambda`` with integer ``beta``; the remaining (cycle) entries
then pin ``lambda`` to the roots of ``m * lambda = c``.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ._config import TOL
from .canonical import (
    DEFAULT_WINDOW,
    GENERAL,
    CanonicalForm,
    CanonicalGeneral,
    GaugeTransform,
    canonicalize,
    classify,
)
from .core import (
    TWO_PI,
    SiteSource,
    WalkSpec,
    build_window_operator,
    phase_distance,
    wrap_phase,
)
from .errors import ClassMismatch, DegenerateParameters, WindowTooSmall

#: grid used for phases the entry graph leaves unconstrained
FREE_PHASE_GRID = 16
MAX_SOLUTIONS = 4096


@dataclass(frozen=True)
class EquivalenceWitness(GaugeTransform):
    """A gauge with ``e^{i lambda} W U_A W^* = U_B`` on the searched window."""

    degenerate: bool = field(default=False, compare=False)


def _radii_degenerate(radii) -> bool:
    return any(r <= TOL.radius or r >= 1.0 - TOL.radius for r in radii)


def equivalent_params(c1: CanonicalForm, c2: CanonicalForm) -> bool:
    """Decide equivalence of two canonical forms of the same class.

    Only meaningful when every radius is strictly inside ``(0, 1)``; outside
    that regime :class:`DegenerateParameters` tells the caller to use
    :func:`gauge_search` instead.
    """
    if c1.cls != c2.cls:
        raise ClassMismatch(f"cannot compare {c1.cls} with {c2.cls}")
    if _radii_degenerate(c1.radii()) or _radii_degenerate(c2.radii()):
        raise DegenerateParameters("a radial parameter is 0 or 1; use gauge_search")
    if isinstance(c1, CanonicalGeneral):
        W = max(c1.window, c2.window)
        sites = range(-W, W + 1)
        radii = [(c1.r_at(n), c2.r_at(n)) for n in sites]
        radii += [(c1.left_r, c2.left_r), (c1.right_r, c2.right_r)]
        phases = [(c1.theta_at(n), c2.theta_at(n)) for n in sites]
        phases += [(c1.left_slope, c2.left_slope), (c1.right_slope, c2.right_slope)]
    else:
        radii = list(zip(c1.radii(), c2.radii()))
        phases = list(zip(c1.phases(), c2.phases()))
    return (all(abs(x - y) <= TOL.radius for x, y in radii)
            and all(phase_distance(x, y) <= TOL.phase for x, y in phases))


def _solve(A: np.ndarray, B: np.ndarray, N: int, enumerate_all: bool
           ) -> tuple[list[EquivalenceWitness], bool]:
    """All diagonal gauges mapping window ``A`` onto window ``B``.

    Returns the witnesses and whether some phase was left free (and hence
    sampled on :data:`FREE_PHASE_GRID`).
    """
    magA, magB = np.abs(A), np.abs(B)
    if np.max(np.abs(magA - magB)) > TOL.gauge:
        return [], False
    dim = A.shape[0]
    rows, cols = np.nonzero(magA > TOL.norm)
    delta = np.angle(B[rows, cols]) - np.angle(A[rows, cols])
    adj: list[list[int]] = [[] for _ in range(dim)]
    for e, (i, j) in enumerate(zip(rows, cols)):
        adj[i].append(e)
        adj[j].append(e)

    alpha = np.zeros(dim)
    beta = np.zeros(dim, dtype=int)
    comp = np.full(dim, -1)
    tree = np.zeros(len(rows), dtype=bool)
    roots = []
    origin = 2 * N  # u_0 is fixed first
    for start in [origin, *range(dim)]:
        if comp[start] >= 0 or not adj[start]:
            continue
        comp[start] = len(roots)
        roots.append(start)
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for e in adj[x]:
                i, j = rows[e], cols[e]
                y = j if x == i else i
                if comp[y] >= 0:
                    continue
                if y == j:
                    alpha[j], beta[j] = alpha[i] - delta[e], beta[i] + 1
                else:
                    alpha[i], beta[i] = alpha[j] + delta[e], beta[j] - 1
                comp[y] = comp[x]
                tree[e] = True
                queue.append(y)

    # cycle constraints m * lambda = c
    m = 1 + beta[rows] - beta[cols]
    c = delta - alpha[rows] + alpha[cols]
    cyc = ~tree
    pinned = cyc & (m != 0)
    if np.any(cyc & (m == 0)):
        if max(phase_distance(x, 0.0) for x in c[cyc & (m == 0)]) > TOL.phase:
            return [], False

    free = False
    if np.any(pinned):
        k = int(np.argmin(np.where(pinned, np.abs(m), np.iinfo(int).max)))
        m0, c0 = int(m[k]), float(c[k])
        candidates = [wrap_phase((c0 + TWO_PI * j) / m0) for j in range(abs(m0))]
        lambdas = []
        for lam in candidates:
            ok = all(phase_distance(mi * lam, ci) <= TOL.phase
                     for mi, ci in zip(m[pinned], c[pinned]))
            if ok and all(phase_distance(lam, x) > TOL.phase for x in lambdas):
                lambdas.append(lam)
    else:
        free = True
        lambdas = [TWO_PI * j / FREE_PHASE_GRID for j in range(FREE_PHASE_GRID)]
        if not enumerate_all:
            lambdas = lambdas[:1]

    extra_roots = roots[1:] if roots and roots[0] == origin else roots
    free = free or bool(extra_roots)
    if enumerate_all and extra_roots:
        grid = [TWO_PI * j / FREE_PHASE_GRID for j in range(FREE_PHASE_GRID)]
        offsets = itertools.product(grid, repeat=len(extra_roots))
    else:
        offsets = iter([(0.0,) * len(extra_roots)])
    offsets = list(itertools.islice(offsets, max(1, MAX_SOLUTIONS // max(1, len(lambdas)))))

    witnesses = []
    root_pos = {r: p for p, r in enumerate(extra_roots)}
    comp_root = [roots[cid] if cid >= 0 else -1 for cid in comp]
    for lam in lambdas:
        for off in offsets:
            w = alpha + beta * lam
            for x in range(dim):
                if comp_root[x] in root_pos:
                    w[x] += off[root_pos[comp_root[x]]]
            w[comp < 0] = 0.0
            sites = range(-N, N + 1)
            wit = EquivalenceWitness(
                lam,
                {n: w[2 * (n + N)] for n in sites},
                {n: w[2 * (n + N) + 1] for n in sites},
                degenerate=free,
            )
            left = np.exp(1j * (w + lam))
            right = np.exp(-1j * w)
            if np.max(np.abs(left[:, None] * A * right[None, :] - B)) <= TOL.gauge:
                witnesses.append(wit)
    return witnesses, free


def _window_for(*specs: SiteSource, N: int) -> int:
    extent = max((s.extent() for s in specs if isinstance(s, WalkSpec)), default=0)
    return max(N, extent + 3)


def gauge_search(spec_a: SiteSource, spec_b: SiteSource, N: int = DEFAULT_WINDOW
                 ) -> EquivalenceWitness | None:
    """Find ``(lambda, W)`` with ``e^{i lambda} W U_A W^* = U_B``, or ``None``.

    The window is widened when needed so that it covers every exception plus
    three tail sites.  A witness with ``degenerate=True`` came out of a system
    with free phases; a ``None`` answer is then only conclusive for diagonal
    gauges.
    """
    if N < 3:
        raise WindowTooSmall(f"gauge search needs N >= 3, got {N}")
    N = _window_for(spec_a, spec_b, N=N)
    A = build_window_operator(spec_a, N).matrix
    B = build_window_operator(spec_b, N).matrix
    found, _ = _solve(A, B, N, enumerate_all=False)
    return found[0] if found else None


def commutant(spec: SiteSource, N: int = DEFAULT_WINDOW,
              allow_degenerate: bool = False) -> list[EquivalenceWitness]:
    """Every ``(lambda, W)`` with ``e^{i lambda} W U W^* = U`` on the window.

    For strict walks the answer is the identity and the alternating sign
    ``(lambda = pi, W_n = (-1)^n)``.  Walks with a radius at 0 or 1 raise
    :class:`DegenerateParameters` unless ``allow_degenerate`` is set, in which
    case free phases are sampled on a grid.
    """
    if N < 3:
        raise WindowTooSmall(f"gauge search needs N >= 3, got {N}")
    if isinstance(spec, WalkSpec) and not spec.is_strict() and not allow_degenerate:
        raise DegenerateParameters("commutant is only classified for radii strictly in (0, 1)")
    N = _window_for(spec, N=N)
    A = build_window_operator(spec, N).matrix
    found, _ = _solve(A, A, N, enumerate_all=True)
    return found


@dataclass
class Verdict:
    equivalent: bool
    method: str
    degenerate: bool
    cls: str | None = None
    witness: EquivalenceWitness | None = None

    def to_dict(self) -> dict:
        out = {"equivalent": self.equivalent, "method": self.method,
               "degenerate": self.degenerate, "class": self.cls}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out


def decide(spec_a: WalkSpec, spec_b: WalkSpec, oracle: bool = False,
           N: int = DEFAULT_WINDOW) -> Verdict:
    """Equivalence verdict for two walks.

    Canonical parameters decide whenever both walks are strict; walks of
    different structural classes are compared through their general forms.
    Degenerate walks and ``oracle=True`` go through :func:`gauge_search`.
    """
    degenerate = not (spec_a.is_strict() and spec_b.is_strict())
    if oracle or degenerate:
        wit = gauge_search(spec_a, spec_b, max(N, 3))
        return Verdict(wit is not None, "oracle", degenerate or bool(wit and wit.degenerate),
                       witness=wit)
    ca, cb = classify(spec_a), classify(spec_b)
    cls = ca if ca == cb else GENERAL
    N = _window_for(spec_a, spec_b, N=N)
    fa, _ = canonicalize(spec_a, cls, N)
    fb, _ = canonicalize(spec_b, cls, N)
    return Verdict(equivalent_params(fa, fb), "params", False, cls=cls)
