"""Walk data: site coefficients, eventually-constant lattices and window matrices.

A two-state walk on the integer lattice is stored in *standard gauge*: at each
site ``n`` five numbers ``(r, a, b, c, d)`` fix the two columns of the
operator attached to that site,

    column (n, 1) -> r e^{-ia} at (n-1, 1),   s e^{-ic} at (n+1, 2)
    column (n, 2) -> s e^{-ib} at (n-1, 1),   r e^{-id} at (n+1, 2)

with ``s = sqrt(1 - r**2)``.  The phases enter conjugated because they are
the phases of the vector inside the bra ``<e^{ia} r e_1 + e^{ib} s e_2|``.
Unitarity is the single congruence ``a - b = c - d + pi (mod 2 pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Protocol

import numpy as np

from ._config import TOL
from .errors import (
    NonOrthonormal,
    PhaseConstraintViolation,
    ValidationError,
    WindowTooSmall,
)

TWO_PI = 2.0 * math.pi


def wrap_phase(x: float) -> float:
    """Representative of ``x`` in ``[0, 2 pi)``; values a hair below 2 pi snap to 0."""
    y = math.fmod(float(x), TWO_PI)
    if y < 0.0:
        y += TWO_PI
    if TWO_PI - y < 1e-12:
        y = 0.0
    return y + 0.0  # no negative zero


def phase_distance(x: float, y: float) -> float:
    """Arc length between two phases on the unit circle, in ``[0, pi]``."""
    return abs(math.remainder(float(x) - float(y), TWO_PI))


def phase_equal(x: float, y: float, tol: float | None = None) -> bool:
    return phase_distance(x, y) <= (TOL.phase if tol is None else tol)


@dataclass(frozen=True)
class CoeffSite:
    """Standard-gauge data of one site.

    Phases are stored in ``[0, 2 pi)``.  When ``r`` is exactly 0 or 1 two of
    the phases multiply vanishing amplitudes; they are replaced by the
    representatives that keep the unitarity congruence true (``b = 0`` and
    ``c = a + d - pi`` for ``r = 1``; ``a = 0`` and ``d = b + c + pi`` for
    ``r = 0``), so every stored site satisfies it.
    """

    r: float
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __post_init__(self):
        r = float(self.r)
        if not (math.isfinite(r) and 0.0 <= r <= 1.0):
            raise ValidationError(f"radius r={self.r!r} outside [0, 1]")
        a, b, c, d = (wrap_phase(p) for p in (self.a, self.b, self.c, self.d))
        if r == 1.0:
            b = 0.0
            c = wrap_phase(a + d - math.pi)
        elif r == 0.0:
            a = 0.0
            d = wrap_phase(b + c + math.pi)
        elif not phase_equal(a - b, c - d + math.pi):
            raise PhaseConstraintViolation(
                f"phase constraint a - b = c - d + pi violated by "
                f"{phase_distance(a - b, c - d + math.pi):.3e} rad"
            )
        object.__setattr__(self, "r", r)
        for name, value in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, value)

    @property
    def s(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.r * self.r))

    @property
    def degenerate(self) -> bool:
        return self.r == 0.0 or self.r == 1.0

    def amplitudes(self) -> tuple[complex, complex, complex, complex]:
        """Matrix entries ``(A, B, C, D)`` as laid out in the module docstring."""
        r, s = self.r, self.s
        return (
            r * complex(math.cos(self.a), -math.sin(self.a)),
            s * complex(math.cos(self.b), -math.sin(self.b)),
            s * complex(math.cos(self.c), -math.sin(self.c)),
            r * complex(math.cos(self.d), -math.sin(self.d)),
        )

    def shifted(self, da: float, db: float, dc: float, dd: float) -> CoeffSite:
        return CoeffSite(self.r, self.a + da, self.b + db, self.c + dc, self.d + dd)

    def isclose(self, other: CoeffSite) -> bool:
        if abs(self.r - other.r) > TOL.radius:
            return False
        return all(
            phase_equal(x, y)
            for x, y in zip((self.a, self.b, self.c, self.d), (other.a, other.b, other.c, other.d))
        )

    def to_dict(self) -> dict[str, float]:
        return {"r": self.r, "a": self.a, "b": self.b, "c": self.c, "d": self.d}


@dataclass(frozen=True, eq=False)
class SiteVectors:
    """The four C^2 vectors that define a walk at one site.

    ``xi_right``/``xi_left`` are the outgoing directions towards ``n+1`` and
    ``n-1``; ``zeta_to_left``/``zeta_to_right`` are the incoming covectors
    whose images leave the site to the left and to the right.
    """

    xi_right: np.ndarray
    xi_left: np.ndarray
    zeta_to_left: np.ndarray
    zeta_to_right: np.ndarray

    def __post_init__(self):
        for name in ("xi_right", "xi_left", "zeta_to_left", "zeta_to_right"):
            vec = np.asarray(getattr(self, name), dtype=complex).reshape(-1)
            if vec.shape != (2,):
                raise ValidationError(f"{name} must have two components")
            object.__setattr__(self, name, vec)


def _check_orthonormal(u: np.ndarray, v: np.ndarray, label: str) -> None:
    gram = np.array([[np.vdot(u, u), np.vdot(u, v)], [np.vdot(v, u), np.vdot(v, v)]])
    dev = np.max(np.abs(gram - np.eye(2)))
    if dev > TOL.norm:
        raise NonOrthonormal(f"{label} pair is not orthonormal (deviation {dev:.3e})")


def _polar(z: complex) -> tuple[float, float]:
    mag = abs(z)
    return mag, (math.atan2(z.imag, z.real) if mag > TOL.norm else 0.0)


def coeffs_from_vectors(sv: SiteVectors) -> CoeffSite:
    """Express a site in standard gauge.

    The outgoing pair is rotated onto the standard basis, so the coefficients
    are the inner products of the incoming covectors with ``xi_right`` and
    ``xi_left``.
    """
    _check_orthonormal(sv.xi_right, sv.xi_left, "xi")
    _check_orthonormal(sv.zeta_to_left, sv.zeta_to_right, "zeta")
    r, a = _polar(np.vdot(sv.xi_right, sv.zeta_to_left))
    _, b = _polar(np.vdot(sv.xi_left, sv.zeta_to_left))
    _, c = _polar(np.vdot(sv.xi_right, sv.zeta_to_right))
    _, d = _polar(np.vdot(sv.xi_left, sv.zeta_to_right))
    # the phases of the smaller pair are only known to ~eps/modulus; push the
    # rounding residue of the congruence onto that pair
    defect = math.remainder(a - b - c + d - math.pi, TWO_PI)
    if r * r < 0.5:
        a, d = a - defect / 2, d - defect / 2
    else:
        b, c = b + defect / 2, c + defect / 2
    if r > 1.0 - TOL.norm:
        r = 1.0
    elif r < TOL.norm:
        r = 0.0
    return CoeffSite(r, a, b, c, d)


class SiteSource(Protocol):
    """Anything that can report standard-gauge data for an arbitrary site."""

    def site(self, n: int) -> CoeffSite: ...


@dataclass(frozen=True)
class WalkSpec:
    """Eventually-constant walk.

    ``left_tail`` covers ``n <= -1``, ``right_tail`` covers ``n >= 0`` and
    ``exceptions`` override single sites.
    """

    left_tail: CoeffSite
    right_tail: CoeffSite
    exceptions: Mapping[int, CoeffSite] = field(default_factory=dict)

    def __post_init__(self):
        exc = {int(k): v for k, v in dict(self.exceptions).items()}
        for k, v in exc.items():
            if not isinstance(v, CoeffSite):
                raise ValidationError(f"exception at site {k} is not a CoeffSite")
        object.__setattr__(self, "exceptions", dict(sorted(exc.items())))

    @classmethod
    def uniform(cls, site: CoeffSite) -> WalkSpec:
        return cls(site, site, {})

    def tail(self, n: int) -> CoeffSite:
        return self.left_tail if n <= -1 else self.right_tail

    def site(self, n: int) -> CoeffSite:
        return self.exceptions.get(n) or self.tail(n)

    def effective_exceptions(self) -> dict[int, CoeffSite]:
        """Exceptions that actually differ from the tail they override."""
        return {n: c for n, c in self.exceptions.items() if not c.isclose(self.tail(n))}

    def extent(self) -> int:
        """Smallest ``K`` with every exception inside ``[-K, K]``."""
        return max((abs(n) for n in self.exceptions), default=0)

    def is_strict(self) -> bool:
        sites = [self.left_tail, self.right_tail, *self.exceptions.values()]
        return all(TOL.radius < c.r < 1.0 - TOL.radius for c in sites)


@dataclass(frozen=True, eq=False)
class WindowOperator:
    """Compression of a walk to the sites ``[-N, N]``.

    Rows and columns are indexed by ``2 * (n + N) + spin`` with spin 0 or 1.
    Columns at ``-N`` and ``N`` lose the entries that would leave the window;
    ``interior`` marks the columns that are complete.
    """

    N: int
    matrix: np.ndarray
    interior: np.ndarray

    @property
    def sites(self) -> range:
        return range(-self.N, self.N + 1)

    def index(self, n: int, spin: int) -> int:
        """Row/column index of ``(n, spin)``; ``spin`` is 1 or 2."""
        if not -self.N <= n <= self.N or spin not in (1, 2):
            raise IndexError(f"({n}, {spin}) outside window [-{self.N}, {self.N}]")
        return 2 * (n + self.N) + spin - 1

    def block(self, m: int, n: int) -> np.ndarray:
        i, j = self.index(m, 1), self.index(n, 1)
        return self.matrix[i:i + 2, j:j + 2]


def window_amplitudes(source: SiteSource, N: int) -> np.ndarray:
    """``(2N+1, 4)`` array of ``(A, B, C, D)`` for sites ``-N..N``."""
    return np.array([source.site(n).amplitudes() for n in range(-N, N + 1)], dtype=complex)


def build_window_operator(source: SiteSource, N: int) -> WindowOperator:
    if N < 2:
        raise WindowTooSmall(f"window half-width must be >= 2, got {N}")
    dim = 2 * (2 * N + 1)
    mat = np.zeros((dim, dim), dtype=complex)
    amps = window_amplitudes(source, N)
    for k, n in enumerate(range(-N, N + 1)):
        A, B, C, D = amps[k]
        col1, col2 = 2 * k, 2 * k + 1
        if n > -N:
            mat[2 * (k - 1), col1] = A
            mat[2 * (k - 1), col2] = B
        if n < N:
            mat[2 * (k + 1) + 1, col1] = C
            mat[2 * (k + 1) + 1, col2] = D
    interior = np.zeros(dim, dtype=bool)
    interior[2:-2] = True
    return WindowOperator(N, mat, interior)


def check_unitary(op: WindowOperator) -> float:
    """Max-norm deviation of ``U^* U - I`` over the complete (interior) columns."""
    sub = op.matrix[:, op.interior]
    gram = sub.conj().T @ sub
    return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))
