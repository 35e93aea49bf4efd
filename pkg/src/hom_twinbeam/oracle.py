"""Brute-force reference evaluators.

``wick_moment`` contracts a normally ordered operator string of two
independent twin-beam sources by enumerating every complete pairing, taking
pairwise second moments from the kernels. ``fock_tmsv_moment`` evaluates
photon-number moments of a single-mode two-mode squeezed vacuum by summing
over its truncated Fock expansion.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .kernels import KernelSet


@dataclass(frozen=True)
class Op:
    """One field operator: ``beam`` is 's' or 'i', ``source`` is 'a' or 'b'."""

    dagger: bool
    beam: str
    source: str
    time: float

    def __post_init__(self):
        if self.beam not in ("s", "i") or self.source not in ("a", "b"):
            raise ValueError(f"bad operator descriptor {self!r}")


def op(label: str, time: float) -> Op:
    """Parse labels like ``'a_s+'`` (creation) or ``'b_i'`` (annihilation)."""
    dagger = label.endswith("+")
    source, beam = label.rstrip("+").split("_")
    return Op(dagger, beam, source, float(time))


class MomentSpec(tuple):
    """Normally ordered operator string."""

    def __new__(cls, ops: Sequence[Op]):
        ops = tuple(ops)
        flags = [o.dagger for o in ops]
        if flags != sorted(flags, reverse=True):
            raise ValueError("operator string is not normally ordered")
        return super().__new__(cls, ops)

    @property
    def balanced(self) -> bool:
        """Equal numbers of creators and annihilators."""
        return 2 * sum(o.dagger for o in self) == len(self)


def pairings(items: Sequence[int]) -> Iterator[list[tuple[int, int]]]:
    """All complete pairings of ``items`` (order of each pair preserved)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k, partner in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        for tail in pairings(remaining):
            yield [(first, partner)] + tail


def _contraction_args(x: Op, y: Op):
    """Which kernel, at which argument, with which transform, gives <x y>.

    Returns None for pairs with vanishing second moment.
    """
    if x.source != y.source:
        return None
    if x.dagger and not y.dagger:
        if x.beam != y.beam:
            return None
        # signal: <a_s^dag(t1) a_s(t2)> = A(t2 - t1); the idler is the mirror image
        tau = y.time - x.time if x.beam == "s" else x.time - y.time
        return ("A", tau, 1.0, False)
    if x.beam == y.beam:
        return None
    s, i = (x, y) if x.beam == "s" else (y, x)
    # <a_s(ts) a_i(ti)> = -C(ts - ti), and its conjugate for creators
    return ("C", s.time - i.time, -1.0, x.dagger)


class ContractionTable:
    """Pairwise second moments of every operator pair in a moment string."""

    def __init__(self, spec: MomentSpec, kernels: dict[str, KernelSet]):
        n = len(spec)
        self.values = np.zeros((n, n), dtype=complex)
        jobs = []
        for i, j in itertools.combinations(range(n), 2):
            args = _contraction_args(spec[i], spec[j])
            if args is not None:
                jobs.append((i, j, spec[i].source) + args)
        # one vectorized kernel call per (source, kernel) pair
        for key in {(job[2], job[3]) for job in jobs}:
            group = [job for job in jobs if (job[2], job[3]) == key]
            ks = kernels[key[0]]
            taus = np.array([job[4] for job in group])
            vals = np.atleast_1d(ks.A(taus) if key[1] == "A" else ks.C(taus))
            for job, v in zip(group, vals):
                i, j, _, _, _, sign, conj = job
                self.values[i, j] = sign * (np.conj(v) if conj else v)

    def __getitem__(self, pair):
        return self.values[pair]


def wick_moment(spec: MomentSpec | Sequence[Op], ksA: KernelSet, ksB: KernelSet | None = None,
                return_count: bool = False):
    """Normally ordered moment as a sum over all pairings of second moments.

    With ``return_count`` also returns ``(total, nonzero)`` pairing counts.
    """
    spec = spec if isinstance(spec, MomentSpec) else MomentSpec(spec)
    kernels = {"a": ksA, "b": ksB if ksB is not None else ksA}
    if len(spec) % 2:
        return (0j, 0, 0) if return_count else 0j
    table = ContractionTable(spec, kernels)
    total = 0j
    count = nonzero = 0
    for pairing in pairings(list(range(len(spec)))):
        count += 1
        term = 1 + 0j
        for pair in pairing:
            term *= table[pair]
            if term == 0:
                break
        if term != 0:
            nonzero += 1
        total += term
    return (total, count, nonzero) if return_count else total


def four_fold_oracle(ksA: KernelSet, ksB: KernelSet, setup, t, tau1, tau2, dt) -> float:
    """Four-fold coincidence density by expanding all sixteen beam-splitter terms.

    Each term is an eight-operator moment contracted from scratch.
    """
    T = setup.T
    t1, t2, tb = t + tau1, t + dt + tau2, t + dt
    # (source, amplitude) choices for the c and d outputs
    c_modes = [("a", math.sqrt(setup.eta2 * (1 - T))), ("b", math.sqrt(setup.eta3 * T))]
    d_modes = [("a", math.sqrt(setup.eta2 * T)), ("b", -math.sqrt(setup.eta3 * (1 - T)))]
    herald = setup.eta1 * setup.eta4
    total = 0j
    for (sc1, kc1), (sd1, kd1), (sd2, kd2), (sc2, kc2) in itertools.product(c_modes, d_modes, d_modes, c_modes):
        coeff = herald * kc1 * kd1 * kd2 * kc2
        if coeff == 0:
            continue
        spec = MomentSpec([
            Op(True, "i", "a", t), Op(True, "i", "b", tb),
            Op(True, "s", sc1, t1), Op(True, "s", sd1, t2),
            Op(False, "s", sd2, t2), Op(False, "s", sc2, t1),
            Op(False, "i", "b", tb), Op(False, "i", "a", t),
        ])
        total += coeff * wick_moment(spec, ksA, ksB)
    return float(total.real)


FOCK_OBSERVABLES = ("ns", "ns_ni", "ns_sq", "ns_sq_ni", "g2_cross0", "g2_marg0")


def fock_tmsv_moment(r: float, n_max: int, observable: str) -> float:
    """Photon-number moment of sum_n tanh(r)^n / cosh(r) |n, n>, truncated at ``n_max``.

    Observables: ``ns`` <n_s>, ``ns_ni`` <n_s n_i>, ``ns_sq`` <n_s(n_s-1)>,
    ``ns_sq_ni`` <n_s(n_s-1) n_i>, and the normalized ``g2_cross0`` and
    ``g2_marg0``.
    """
    if observable not in FOCK_OBSERVABLES:
        raise ValueError(f"unknown observable {observable!r}")
    if r < 0:
        raise ValueError("r must be non-negative")
    lam = math.tanh(r)
    if lam ** (2 * n_max) >= 1e-12:
        raise ValueError(f"n_max = {n_max} too small for r = {r}")
    n = np.arange(n_max + 1, dtype=float)
    p = lam ** (2 * n) / math.cosh(r) ** 2
    moments = {
        "ns": p @ n,
        "ns_ni": p @ n**2,
        "ns_sq": p @ (n * (n - 1)),
        "ns_sq_ni": p @ (n * (n - 1) * n),
    }
    if observable == "g2_cross0":
        return float(moments["ns_ni"] / moments["ns"] ** 2)
    if observable == "g2_marg0":
        return float(moments["ns_sq"] / moments["ns"] ** 2)
    return float(moments[observable])
