"""Time evolution on finite windows and site distributions."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from ._config import TOL
from .canonical import GaugeTransform, gauge_residual
from .core import SiteSource, window_amplitudes
from .errors import InternalInconsistency, InvalidWitness, NotUnitState
from .kernels import walk_evolve


@dataclass(frozen=True, eq=False)
class LatticeState:
    """Amplitudes on the window ``[-N, N]``; row ``n + N`` holds spins 1 and 2."""

    N: int
    amplitudes: np.ndarray

    def amp(self, n: int, spin: int) -> complex:
        return complex(self.amplitudes[n + self.N, spin - 1])

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


@dataclass(frozen=True, eq=False)
class Distribution:
    N: int
    probabilities: np.ndarray

    def __getitem__(self, n: int) -> float:
        if not -self.N <= n <= self.N:
            return 0.0
        return float(self.probabilities[n + self.N])

    def as_dict(self) -> dict[int, float]:
        """Nonzero entries, sites ascending."""
        return {n - self.N: float(p) for n, p in enumerate(self.probabilities) if p != 0.0}


def _unit_state(phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    if phi.shape != (2,) or abs(np.vdot(phi, phi).real - 1.0) > TOL.norm:
        raise NotUnitState("initial state must be a unit vector in C^2")
    return phi


def _run(source: SiteSource, phi, steps: int) -> tuple[int, np.ndarray, np.ndarray]:
    if steps < 0:
        raise ValueError("number of steps must be nonnegative")
    phi = _unit_state(phi)
    N = steps + 2
    psi = np.zeros((2 * N + 1, 2), dtype=complex)
    psi[N] = phi
    final, probs = walk_evolve(window_amplitudes(source, N), psi, steps)
    # nothing may reach the two outermost sites on either side
    if np.any(final[:2] != 0) or np.any(final[-2:] != 0):
        raise InternalInconsistency("amplitude leaked to the window edge")
    return N, final, probs


def evolve(source: SiteSource, phi, t: int) -> LatticeState:
    """``U^t`` applied to ``phi`` placed at site 0."""
    N, final, _ = _run(source, phi, t)
    return LatticeState(N, final)


def distribution(state: LatticeState) -> Distribution:
    return Distribution(state.N, np.sum(np.abs(state.amplitudes) ** 2, axis=1))


def distributions(source: SiteSource, phi, steps: int) -> list[Distribution]:
    """Site distributions for ``t = 0, ..., steps`` from one run."""
    N, _, probs = _run(source, phi, steps)
    return [Distribution(N, row) for row in probs]


def check_distribution_invariance(spec_a: SiteSource, phi_a, spec_b: SiteSource, phi_b,
                                  witness: GaugeTransform, t_max: int) -> float:
    """Largest ``|P_A,t(n) - P_B,t(n)|`` over ``t <= t_max`` and all sites.

    The witness must map ``(A, phi_a)`` to ``(B, phi_b)`` (states up to a
    global phase) on the window the evolution needs, otherwise
    :class:`InvalidWitness` is raised.  Sites absent from the witness count
    as identity.
    """
    N = t_max + 2
    if gauge_residual(spec_a, witness, spec_b, N) > TOL.gauge:
        raise InvalidWitness("witness does not map walk A onto walk B")
    mapped = witness.apply_state(_unit_state(phi_a))
    if abs(abs(np.vdot(mapped, _unit_state(phi_b))) - 1.0) > 1e-10:
        raise InvalidWitness("witness does not map state A onto state B")
    _, _, pa = _run(spec_a, phi_a, t_max)
    _, _, pb = _run(spec_b, phi_b, t_max)
    return float(np.max(np.abs(pa - pb)))


def write_distribution_csv(dists: Iterable[Distribution], out: TextIO) -> None:
    """``t,site,probability`` rows, nonzero entries only, 17 significant digits."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "site", "probability"])
    for t, dist in enumerate(dists):
        for n, p in dist.as_dict().items():
            writer.writerow([t, n, f"{p:.17g}"])
