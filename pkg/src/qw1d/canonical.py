"""Reduction of walks to canonical representatives by diagonal gauges.

Every canonicalizer returns the canonical parameters together with the gauge
``(lambda, W)`` that realizes them, and checks on a window that
``e^{i lambda} W U W^*`` really is the canonical operator before returning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Union

import numpy as np

from ._config import TOL
from .core import (
    TWO_PI,
    CoeffSite,
    SiteSource,
    WalkSpec,
    WindowOperator,
    build_window_operator,
    phase_distance,
    wrap_phase,
)
from .errors import InternalInconsistency, NotInClass, NotUnitState, WindowTooSmall

PI = math.pi
DEFAULT_WINDOW = 8

TI = "TI"
ONE_DEFECT = "OneDefect"
COMPLETE_TWO_PHASE = "CompleteTwoPhase"
TWO_PHASE_DEFECT = "TwoPhaseDefect"
GENERAL = "General"
CLASSES = (TI, ONE_DEFECT, COMPLETE_TWO_PHASE, TWO_PHASE_DEFECT, GENERAL)


# ---------------------------------------------------------------------------
# gauges


@dataclass(frozen=True)
class GaugeTransform:
    """Global phase plus diagonal per-site unitaries ``W_n = diag(e^{iu_n}, e^{iv_n})``.

    Acts on operators as ``U -> e^{i global_phase} W U W^*`` and on states as
    ``phi -> W phi``.  Sites missing from ``u``/``v`` carry the identity.
    """

    global_phase: float = 0.0
    u: Mapping[int, float] = field(default_factory=dict)
    v: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "global_phase", wrap_phase(self.global_phase))
        for name in ("u", "v"):
            phases = {int(n): wrap_phase(p) for n, p in dict(getattr(self, name)).items()}
            object.__setattr__(self, name, dict(sorted(phases.items())))

    @classmethod
    def identity(cls) -> GaugeTransform:
        return cls()

    @classmethod
    def from_functions(cls, lam: float, u: Callable[[int], float],
                       v: Callable[[int], float], N: int) -> GaugeTransform:
        sites = range(-N, N + 1)
        return cls(lam, {n: u(n) for n in sites}, {n: v(n) for n in sites})

    def phases(self, n: int) -> tuple[float, float]:
        return self.u.get(n, 0.0), self.v.get(n, 0.0)

    def matrix(self, n: int) -> np.ndarray:
        un, vn = self.phases(n)
        return np.diag([np.exp(1j * un), np.exp(1j * vn)])

    def apply_window(self, op: WindowOperator) -> WindowOperator:
        phi = np.empty(op.matrix.shape[0])
        for k, n in enumerate(op.sites):
            phi[2 * k], phi[2 * k + 1] = self.phases(n)
        left = np.exp(1j * (phi + self.global_phase))
        right = np.exp(-1j * phi)
        return WindowOperator(op.N, left[:, None] * op.matrix * right[None, :], op.interior)

    def apply_state(self, phi: np.ndarray, site: int = 0) -> np.ndarray:
        return self.matrix(site) @ np.asarray(phi, dtype=complex)

    def compose(self, other: GaugeTransform) -> GaugeTransform:
        """Gauge equal to applying ``self`` first and then ``other``."""
        keys = sorted(set(self.u) | set(other.u) | set(self.v) | set(other.v))
        return GaugeTransform(
            self.global_phase + other.global_phase,
            {n: self.phases(n)[0] + other.phases(n)[0] for n in keys},
            {n: self.phases(n)[1] + other.phases(n)[1] for n in keys},
        )

    def inverse(self) -> GaugeTransform:
        return GaugeTransform(
            -self.global_phase,
            {n: -p for n, p in self.u.items()},
            {n: -p for n, p in self.v.items()},
        )

    def isclose(self, other: GaugeTransform, tol: float | None = None) -> bool:
        tol = TOL.phase if tol is None else tol
        if phase_distance(self.global_phase, other.global_phase) > tol:
            return False
        keys = set(self.u) | set(other.u) | set(self.v) | set(other.v)
        return all(
            phase_distance(x, y) <= tol
            for n in keys
            for x, y in zip(self.phases(n), other.phases(n))
        )

    def to_dict(self) -> dict:
        return {
            "lambda": self.global_phase,
            "u": {str(n): p for n, p in self.u.items()},
            "v": {str(n): p for n, p in self.v.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> GaugeTransform:
        return cls(
            float(data["lambda"]),
            {int(n): float(p) for n, p in data.get("u", {}).items()},
            {int(n): float(p) for n, p in data.get("v", {}).items()},
        )


def gauge_spec(spec: WalkSpec, lam: float, u: Callable[[int], float],
               v: Callable[[int], float], span: int) -> WalkSpec:
    """The walk ``e^{i lam} W U W^*`` as a new :class:`WalkSpec`.

    ``u`` and ``v`` must make the gauged coefficients constant for
    ``|n| > span``; this is checked on a few sites past the span.
    """

    def gauged(n: int) -> CoeffSite:
        c = spec.site(n)
        return c.shifted(
            -(lam + u(n - 1) - u(n)),
            -(lam + u(n - 1) - v(n)),
            -(lam + v(n + 1) - u(n)),
            -(lam + v(n + 1) - v(n)),
        )

    edge = max(span, spec.extent()) + 2
    left, right = gauged(-edge - 1), gauged(edge + 1)
    for k in range(1, 4):
        if not (gauged(-edge - 1 - k).isclose(left) and gauged(edge + 1 + k).isclose(right)):
            raise ValueError("gauge does not leave the tails constant")
    exceptions = {}
    for n in range(-edge, edge + 1):
        c = gauged(n)
        if not c.isclose(left if n <= -1 else right):
            exceptions[n] = c
    return WalkSpec(left, right, exceptions)


# ---------------------------------------------------------------------------
# canonical forms


def _canon_site(r: float, b: float, c: float, d: float) -> CoeffSite:
    return CoeffSite(r, 0.0, b, c, d)


@dataclass(frozen=True)
class CanonicalTI:
    r: float
    cls = TI

    def site(self, n: int) -> CoeffSite:
        return _canon_site(self.r, 0.0, PI, 0.0)

    def radii(self) -> tuple[float, ...]:
        return (self.r,)

    def phases(self) -> tuple[float, ...]:
        return ()

    def params(self) -> dict:
        return {"r": self.r}


@dataclass(frozen=True)
class CanonicalOneDefect:
    r_pm: float
    r_0: float
    nu1: float
    nu2: float
    cls = ONE_DEFECT

    def __post_init__(self):
        object.__setattr__(self, "nu1", wrap_phase(self.nu1))
        object.__setattr__(self, "nu2", wrap_phase(self.nu2))

    def site(self, n: int) -> CoeffSite:
        if n == 0:
            return _canon_site(self.r_0, self.nu1, self.nu2 + PI, self.nu1 + self.nu2)
        return _canon_site(self.r_pm, 0.0, PI, 0.0)

    def radii(self) -> tuple[float, ...]:
        return (self.r_pm, self.r_0)

    def phases(self) -> tuple[float, ...]:
        return (self.nu1, self.nu2)

    def params(self) -> dict:
        return {"r_pm": self.r_pm, "r_0": self.r_0, "nu1": self.nu1, "nu2": self.nu2}


@dataclass(frozen=True)
class CanonicalCompleteTwoPhase:
    r_plus: float
    r_minus: float
    sigma1: float
    sigma2: float
    cls = COMPLETE_TWO_PHASE

    def __post_init__(self):
        object.__setattr__(self, "sigma1", wrap_phase(self.sigma1))
        object.__setattr__(self, "sigma2", wrap_phase(self.sigma2))

    def site(self, n: int) -> CoeffSite:
        if n >= 0:
            return _canon_site(self.r_plus, 0.0, self.sigma1 + PI, self.sigma1)
        return _canon_site(self.r_minus, self.sigma2, PI, self.sigma2)

    def radii(self) -> tuple[float, ...]:
        return (self.r_plus, self.r_minus)

    def phases(self) -> tuple[float, ...]:
        return (self.sigma1, self.sigma2)

    def params(self) -> dict:
        return {"r_plus": self.r_plus, "r_minus": self.r_minus,
                "sigma1": self.sigma1, "sigma2": self.sigma2}


@dataclass(frozen=True)
class CanonicalTwoPhaseDefect:
    r_plus: float
    r_minus: float
    r_0: float
    mu1: float
    mu2: float
    mu3: float
    cls = TWO_PHASE_DEFECT

    def __post_init__(self):
        for name in ("mu1", "mu2", "mu3"):
            object.__setattr__(self, name, wrap_phase(getattr(self, name)))

    def site(self, n: int) -> CoeffSite:
        if n == 0:
            return _canon_site(self.r_0, self.mu1, self.mu2 + PI, self.mu1 + self.mu2)
        if n >= 1:
            return _canon_site(self.r_plus, 0.0, self.mu3 + PI, self.mu3)
        return _canon_site(self.r_minus, 0.0, PI, 0.0)

    def radii(self) -> tuple[float, ...]:
        return (self.r_plus, self.r_minus, self.r_0)

    def phases(self) -> tuple[float, ...]:
        return (self.mu1, self.mu2, self.mu3)

    def params(self) -> dict:
        return {"r_plus": self.r_plus, "r_minus": self.r_minus, "r_0": self.r_0,
                "mu1": self.mu1, "mu2": self.mu2, "mu3": self.mu3}


@dataclass(frozen=True)
class CanonicalGeneral:
    """``U_{r, theta}`` on the sites ``[-window, window]``.

    Past the window the radii equal the tail radii and ``theta`` grows
    linearly with the recorded slopes, so :meth:`site` is defined everywhere.
    """

    window: int
    r: Mapping[int, float]
    theta: Mapping[int, float]
    left_r: float
    right_r: float
    left_slope: float
    right_slope: float
    cls = GENERAL

    def __post_init__(self):
        object.__setattr__(self, "r", {int(n): float(x) for n, x in sorted(dict(self.r).items())})
        object.__setattr__(
            self, "theta", {int(n): wrap_phase(x) for n, x in sorted(dict(self.theta).items())})
        object.__setattr__(self, "left_slope", wrap_phase(self.left_slope))
        object.__setattr__(self, "right_slope", wrap_phase(self.right_slope))

    def theta_at(self, n: int) -> float:
        W = self.window
        if n > W:
            return wrap_phase(self.theta[W] + (n - W) * self.right_slope)
        if n < -W:
            return wrap_phase(self.theta[-W] - (-W - n) * self.left_slope)
        return self.theta[n]

    def r_at(self, n: int) -> float:
        if n > self.window:
            return self.right_r
        if n < -self.window:
            return self.left_r
        return self.r[n]

    def site(self, n: int) -> CoeffSite:
        t = self.theta_at(n)
        return _canon_site(self.r_at(n), t, PI - t, 0.0)

    def radii(self) -> tuple[float, ...]:
        return (*self.r.values(), self.left_r, self.right_r)

    def phases(self) -> tuple[float, ...]:
        return (*self.theta.values(), self.left_slope, self.right_slope)

    def params(self) -> dict:
        return {
            "window": self.window,
            "r": {str(n): x for n, x in self.r.items()},
            "theta": {str(n): x for n, x in self.theta.items()},
            "left_r": self.left_r,
            "right_r": self.right_r,
            "left_slope": self.left_slope,
            "right_slope": self.right_slope,
        }


CanonicalForm = Union[CanonicalTI, CanonicalOneDefect, CanonicalCompleteTwoPhase,
                      CanonicalTwoPhaseDefect, CanonicalGeneral]

_BY_CLASS = {
    TI: CanonicalTI,
    ONE_DEFECT: CanonicalOneDefect,
    COMPLETE_TWO_PHASE: CanonicalCompleteTwoPhase,
    TWO_PHASE_DEFECT: CanonicalTwoPhaseDefect,
    GENERAL: CanonicalGeneral,
}


def canonical_to_dict(form: CanonicalForm) -> dict:
    return {"class": form.cls, "params": form.params()}


def canonical_from_dict(data: Mapping) -> CanonicalForm:
    cls = data["class"]
    if cls not in _BY_CLASS:
        raise ValueError(f"unknown canonical class {cls!r}")
    params = dict(data["params"])
    if cls == GENERAL:
        params["window"] = int(params["window"])
        params["r"] = {int(n): float(x) for n, x in params["r"].items()}
        params["theta"] = {int(n): float(x) for n, x in params["theta"].items()}
    return _BY_CLASS[cls](**params)


@dataclass(frozen=True)
class CanonicalState:
    """Initial state ``alpha e_1 + e^{i theta} sqrt(1 - alpha^2) e_2`` at site 0."""

    alpha: float
    theta: float

    def __post_init__(self):
        alpha, theta = float(self.alpha), wrap_phase(self.theta)
        if alpha < TOL.norm:
            alpha = 0.0
        elif alpha > 1.0 - TOL.norm:
            alpha = 1.0
        if alpha in (0.0, 1.0):
            theta = 0.0
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "theta", theta)

    def vector(self) -> np.ndarray:
        beta = math.sqrt(max(0.0, 1.0 - self.alpha ** 2))
        return np.array([self.alpha, np.exp(1j * self.theta) * beta])

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "theta": self.theta}


# ---------------------------------------------------------------------------
# classification


def _same_tails(spec: WalkSpec) -> bool:
    return spec.left_tail.isclose(spec.right_tail)


def classify(spec: WalkSpec) -> str:
    """Most specific structural class of ``spec``."""
    extra = set(spec.effective_exceptions())
    tails_equal = _same_tails(spec)
    if not extra:
        return TI if tails_equal else COMPLETE_TWO_PHASE
    if extra == {0}:
        if tails_equal:
            return ONE_DEFECT
        return TWO_PHASE_DEFECT
    return GENERAL


_ADMITS = {
    TI: {TI},
    ONE_DEFECT: {TI, ONE_DEFECT},
    COMPLETE_TWO_PHASE: {TI, COMPLETE_TWO_PHASE},
    TWO_PHASE_DEFECT: {TI, ONE_DEFECT, COMPLETE_TWO_PHASE, TWO_PHASE_DEFECT},
    GENERAL: set(CLASSES),
}


def _require(spec: WalkSpec, cls: str) -> None:
    found = classify(spec)
    if found not in _ADMITS[cls]:
        raise NotInClass(f"walk of class {found} does not satisfy the {cls} structure")


# ---------------------------------------------------------------------------
# verification


def gauge_residual(source: SiteSource, gauge: GaugeTransform,
                   target: SiteSource, N: int) -> float:
    """``max |e^{i lambda} W U W^* - U_target|`` over the window ``[-N, N]``."""
    gauged = gauge.apply_window(build_window_operator(source, N))
    return float(np.max(np.abs(gauged.matrix - build_window_operator(target, N).matrix)))


def _verify(spec: WalkSpec, gauge: GaugeTransform, form: SiteSource, N: int) -> None:
    res = gauge_residual(spec, gauge, form, N)
    if res > TOL.gauge:
        raise InternalInconsistency(f"gauge identity fails by {res:.3e}")


# ---------------------------------------------------------------------------
# general walks


@dataclass(frozen=True)
class GaugeDerivation:
    """Phase sequences of the general reduction on ``[-N, N]``.

    ``g`` and ``h`` straighten the ``e_1 -> e_1`` and ``e_2 -> e_2`` hops,
    ``k`` is the leftover phase of the ``e_2 -> e_1`` hop and ``ell = k_1 / 2``.
    """

    g: Mapping[int, float]
    h: Mapping[int, float]
    k: Mapping[int, float]
    ell: float


def general_derivation(spec: WalkSpec, N: int) -> GaugeDerivation:
    site = spec.site
    g = {0: 0.0}
    for n in range(0, -N - 1, -1):
        g[n - 1] = g[n] + site(n).a
    for n in range(1, N + 1):
        g[n] = g[n - 1] - site(n).a
    h = {0: g[-1] - site(0).b}
    for n in range(0, N):
        h[n + 1] = h[n] + site(n).d
    for n in range(0, -N, -1):
        h[n - 1] = h[n] - site(n - 1).d
    k = {n: wrap_phase(site(n).b - g[n - 1] + h[n]) for n in range(-N, N + 1)}
    k[0] = 0.0
    g = {n: wrap_phase(x) for n, x in sorted(g.items()) if -N <= n <= N}
    h = {n: wrap_phase(x) for n, x in sorted(h.items())}
    return GaugeDerivation(g, h, k, k[1] / 2.0)


def canonicalize_general(spec: WalkSpec, N: int = DEFAULT_WINDOW
                         ) -> tuple[CanonicalGeneral, GaugeTransform]:
    """Reduce any walk to ``U_{r, theta}`` with ``theta_0 = theta_1 = 0``.

    The window is widened to cover every exception plus two tail sites, which
    is what makes the tail slopes exact.
    """
    if N < 2:
        raise WindowTooSmall(f"window half-width must be >= 2, got {N}")
    M = max(N, spec.extent() + 2)
    der = general_derivation(spec, M)
    k1 = der.k[1]
    theta = {n: wrap_phase(der.k[n] - n * k1) for n in range(-M, M + 1)}
    theta[0] = theta[1] = 0.0
    lt, rt = spec.left_tail, spec.right_tail
    form = CanonicalGeneral(
        window=M,
        r={n: spec.site(n).r for n in range(-M, M + 1)},
        theta=theta,
        left_r=lt.r,
        right_r=rt.r,
        left_slope=lt.a + lt.d - k1,
        right_slope=rt.a + rt.d - k1,
    )
    gauge = GaugeTransform(
        der.ell,
        {n: der.g[n] + n * der.ell for n in range(-M, M + 1)},
        {n: der.h[n] - n * der.ell for n in range(-M, M + 1)},
    )
    _verify(spec, gauge, form, M)
    return form, gauge


# ---------------------------------------------------------------------------
# two-phase walks


def _two_phase_gauge(ell: float, a_plus: float, a_minus: float, g_shift: float,
                     b_plus: float, c_minus: float, N: int) -> GaugeTransform:
    """Affine-by-halves gauge shared by the defect and complete reductions.

    ``g_shift`` is ``a_0 - a_-`` for the defect case and ``a_+ - a_-`` for the
    complete case.
    """

    def g(n: int) -> float:
        if n >= 0:
            return n * (ell - a_plus)
        return n * (ell - a_minus) + g_shift

    def h(n: int) -> float:
        if n >= 1:
            return (n - 1) * (ell - a_plus) - b_plus + ell
        return (n - 1) * (ell - a_minus) + c_minus + g_shift - ell + PI

    return GaugeTransform.from_functions(ell, g, h, N)


def canonicalize_two_phase_defect(spec: WalkSpec, N: int = DEFAULT_WINDOW
                                  ) -> tuple[CanonicalTwoPhaseDefect, GaugeTransform]:
    _require(spec, TWO_PHASE_DEFECT)
    if N < 2:
        raise WindowTooSmall(f"window half-width must be >= 2, got {N}")
    minus, zero, plus = spec.left_tail, spec.site(0), spec.right_tail
    ell = (minus.b + minus.c + PI) / 2.0
    gauge = _two_phase_gauge(ell, plus.a, minus.a, zero.a - minus.a, plus.b, minus.c, N)

    mu1 = zero.b - minus.b
    mu3 = plus.b - minus.b + plus.c - minus.c
    # read the e_1^0 -> e_2^1 hop off the gauged operator: -e^{-i mu2} s_0
    if zero.s > TOL.norm:
        op = gauge.apply_window(build_window_operator(spec, 2))
        hop = op.matrix[op.index(1, 2), op.index(0, 1)]
        mu2 = -np.angle(-hop)
    else:
        mu2 = plus.b - minus.b + zero.c - minus.c
    form = CanonicalTwoPhaseDefect(plus.r, minus.r, zero.r, mu1, mu2, mu3)
    _verify(spec, gauge, form, N)
    return form, gauge


def canonicalize_complete_two_phase(spec: WalkSpec, N: int = DEFAULT_WINDOW
                                    ) -> tuple[CanonicalCompleteTwoPhase, GaugeTransform]:
    _require(spec, COMPLETE_TWO_PHASE)
    if N < 2:
        raise WindowTooSmall(f"window half-width must be >= 2, got {N}")
    minus, plus = spec.left_tail, spec.right_tail
    ell = (plus.b + minus.c + PI) / 2.0
    gauge = _two_phase_gauge(ell, plus.a, minus.a, plus.a - minus.a, plus.b, minus.c, N)
    form = CanonicalCompleteTwoPhase(plus.r, minus.r, plus.c - minus.c, minus.b - plus.b)
    _verify(spec, gauge, form, N)
    return form, gauge


def canonicalize_one_defect(spec: WalkSpec, N: int = DEFAULT_WINDOW
                            ) -> tuple[CanonicalOneDefect, GaugeTransform]:
    _require(spec, ONE_DEFECT)
    mu_form, gauge = canonicalize_two_phase_defect(spec, N)
    if phase_distance(mu_form.mu3, 0.0) > TOL.phase:
        raise InternalInconsistency(f"mu3 = {mu_form.mu3!r} for a one-defect walk")
    form = CanonicalOneDefect(mu_form.r_plus, mu_form.r_0, mu_form.mu1, mu_form.mu2)
    _verify(spec, gauge, form, N)
    return form, gauge


def canonicalize_ti(spec: WalkSpec, N: int = DEFAULT_WINDOW
                    ) -> tuple[CanonicalTI, GaugeTransform]:
    _require(spec, TI)
    mu_form, gauge = canonicalize_two_phase_defect(spec, N)
    form = CanonicalTI(mu_form.r_0)
    _verify(spec, gauge, form, N)
    return form, gauge


_CANONICALIZERS = {
    TI: canonicalize_ti,
    ONE_DEFECT: canonicalize_one_defect,
    COMPLETE_TWO_PHASE: canonicalize_complete_two_phase,
    TWO_PHASE_DEFECT: canonicalize_two_phase_defect,
    GENERAL: canonicalize_general,
}


def canonicalize(spec: WalkSpec, cls: str = "auto", N: int = DEFAULT_WINDOW
                 ) -> tuple[CanonicalForm, GaugeTransform]:
    """Canonicalize with the reduction for ``cls`` (``"auto"`` picks :func:`classify`)."""
    if cls == "auto":
        cls = classify(spec)
    if cls not in _CANONICALIZERS:
        raise ValueError(f"unknown class {cls!r}; expected one of {', '.join(CLASSES)}")
    return _CANONICALIZERS[cls](spec, N)


def canonicalize_with_state(spec: WalkSpec, phi, cls: str = "auto", N: int = DEFAULT_WINDOW
                            ) -> tuple[CanonicalForm, CanonicalState, GaugeTransform]:
    """Canonicalize a walk together with an initial state living on site 0."""
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    if phi.shape != (2,) or abs(np.vdot(phi, phi).real - 1.0) > TOL.norm:
        raise NotUnitState("initial state must be a unit vector in C^2")
    form, gauge = canonicalize(spec, cls, N)
    w = gauge.apply_state(phi)
    alpha = abs(w[0])
    theta = float(np.angle(w[1]) - np.angle(w[0])) if abs(w[0]) > TOL.norm else 0.0
    return form, CanonicalState(alpha, theta), gauge
