"""Fusion rings: labels, unit, duals, multiplicity tensor, PF dimensions.

A :class:`FusionRing` is the combinatorial skeleton of a unitary tensor
category.  Everything downstream (tree bases, F-moves, algebra objects) only
ever talks to the ring through the small query surface here, so validation is
strict and happens once, in :func:`validate_ring`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AxiomViolation, NonIrreducibleInput, RingAxiomError, UnknownLabel

__all__ = ["FusionRing", "SupportSet", "validate_ring"]

_POWER_ITER_TOL = 1e-12
_POWER_ITER_MAX = 10_000


@dataclass(frozen=True)
class SupportSet:
    """Finite, dual-closed, unit-containing truncation of the label set."""

    labels: tuple[str, ...]
    generators: tuple[str, ...]
    depth: int

    def __contains__(self, label: str) -> bool:
        return label in self.labels

    def __iter__(self):
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


class FusionRing:
    """Validated fusion data.  Immutable; construct via :func:`validate_ring`."""

    def __init__(self, labels, unit, dual, mult):
        # labels sorted lexicographically: the single deterministic ordering
        # used for every basis enumeration in the engine.
        self.labels: tuple[str, ...] = tuple(sorted(labels))
        self.unit: str = unit
        self.dual: dict[str, str] = dict(dual)
        self.index: dict[str, int] = {x: i for i, x in enumerate(self.labels)}
        n = len(self.labels)
        N = np.zeros((n, n, n), dtype=np.int64)
        for (x, y, z), m in mult.items():
            N[self.index[x], self.index[y], self.index[z]] = m
        self._N = N
        self._N.setflags(write=False)

    # -- queries ----------------------------------------------------------

    def _i(self, x: str) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise UnknownLabel(x) from None

    def N(self, x: str, y: str, z: str) -> int:
        """Multiplicity of ``z`` in ``x ⊗ y``."""
        return int(self._N[self._i(x), self._i(y), self._i(z)])

    def fuse(self, x: str, y: str) -> dict[str, int]:
        row = self._N[self._i(x), self._i(y)]
        return {self.labels[k]: int(m) for k, m in enumerate(row) if m}

    def fusion_matrix(self, x: str) -> np.ndarray:
        """The matrix (N_x)[y, z] = N(x, y, z)."""
        return self._N[self._i(x)].astype(float)

    def fp_dimension(self, x: str) -> float:
        if x not in self.index:
            raise NonIrreducibleInput(x)
        return self._fp_dimension_cached(x)

    @lru_cache(maxsize=None)
    def _fp_dimension_cached(self, x: str) -> float:
        # Power iteration on N_x + I (the shift keeps the Perron pair but
        # breaks the period-2 oscillation of bipartite fusion graphs).
        M = self.fusion_matrix(x) + np.eye(len(self.labels))
        v = np.ones(len(self.labels))
        lam = 0.0
        for _ in range(_POWER_ITER_MAX):
            w = M @ v
            new_lam = float(v @ w) / float(v @ v)
            v = w / np.linalg.norm(w)
            if abs(new_lam - lam) < _POWER_ITER_TOL:
                return new_lam - 1.0
            lam = new_lam
        return lam - 1.0

    def global_dim_sq(self) -> float:
        return sum(self.fp_dimension(x) ** 2 for x in self.labels)

    def fusion_closure(self, generators, depth: int) -> SupportSet:
        gens = tuple(sorted(set(generators)))
        for g in gens:
            self._i(g)
        current = set(gens) | {self.unit}
        current |= {self.dual[x] for x in current}
        for _ in range(max(depth, 0)):
            new = set(current)
            for x in current:
                for y in current:
                    new |= set(self.fuse(x, y))
            new |= {self.dual[x] for x in new}
            if new == current:
                break
            current = new
        return SupportSet(labels=tuple(sorted(current)), generators=gens, depth=depth)

    # -- misc --------------------------------------------------------------

    def __repr__(self) -> str:
        return f"FusionRing(labels={self.labels}, unit={self.unit!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FusionRing)
            and self.labels == other.labels
            and self.unit == other.unit
            and self.dual == other.dual
            and np.array_equal(self._N, other._N)
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.unit, tuple(sorted(self.dual.items()))))


def check_ring_axioms(labels, unit, dual, mult) -> list[AxiomViolation]:
    """Return the full list of violated axioms (empty when the data is a ring)."""
    violations: list[AxiomViolation] = []
    labels = sorted(labels)
    idx = {x: i for i, x in enumerate(labels)}
    n = len(labels)
    N = np.zeros((n, n, n), dtype=np.int64)
    for (x, y, z), m in mult.items():
        if m < 0:
            violations.append(AxiomViolation("nonnegativity", (x, y, z), f"N={m}"))
        N[idx[x], idx[y], idx[z]] = m

    u = idx[unit]
    for y in range(n):
        for z in range(n):
            if N[u, y, z] != (1 if y == z else 0):
                violations.append(AxiomViolation("unit_left", (unit, labels[y], labels[z])))
            if N[y, u, z] != (1 if y == z else 0):
                violations.append(AxiomViolation("unit_right", (labels[y], unit, labels[z])))

    for x in labels:
        if dual.get(dual.get(x)) != x:
            violations.append(AxiomViolation("dual_involution", (x,)))
    if dual.get(unit) != unit:
        violations.append(AxiomViolation("dual_unit", (unit,)))

    dvec = np.array([idx[dual[x]] for x in labels])
    for x in range(n):
        for y in range(n):
            want = 1 if dvec[x] == y else 0
            if N[x, y, u] != want:
                violations.append(AxiomViolation("duality", (labels[x], labels[y], unit)))

    # associativity: sum_w N[x,y,w] N[w,v,z] == sum_w N[y,v,w] N[x,w,z]
    lhs = np.einsum("xyw,wvz->xyvz", N, N)
    rhs = np.einsum("yvw,xwz->xyvz", N, N)
    for x, y, v, z in zip(*np.nonzero(lhs != rhs)):
        violations.append(
            AxiomViolation(
                "associativity",
                (labels[x], labels[y], labels[v], labels[z]),
                f"{lhs[x, y, v, z]} != {rhs[x, y, v, z]}",
            )
        )

    # Frobenius reciprocity: N[x][y][z] = N[dual x][z][y] = N[z][dual y][x]
    for x in range(n):
        for y in range(n):
            for z in range(n):
                a = N[x, y, z]
                if N[dvec[x], z, y] != a or N[z, dvec[y], x] != a:
                    violations.append(
                        AxiomViolation("frobenius_reciprocity", (labels[x], labels[y], labels[z]))
                    )
    return violations


def validate_ring(raw: dict) -> FusionRing:
    """Validate raw ring data ``{labels, unit, dual, mult}`` and build the ring.

    ``mult`` maps (x, y, z) triples to non-negative integers; missing triples
    are zero.  Raises :class:`RingAxiomError` carrying all violations.
    """
    labels = list(raw["labels"])
    if not labels:
        raise RingAxiomError([AxiomViolation("nonempty_labels", ())])
    unit = raw["unit"]
    if unit not in labels:
        raise RingAxiomError([AxiomViolation("unit_in_labels", (unit,))])
    if len(set(labels)) != len(labels):
        raise RingAxiomError([AxiomViolation("distinct_labels", ())])
    dual = dict(raw["dual"])
    if set(dual) != set(labels) or not set(dual.values()) <= set(labels):
        raise RingAxiomError([AxiomViolation("dual_domain", ())])
    mult = {k: int(v) for k, v in raw["mult"].items()}
    for (x, y, z) in mult:
        for lbl in (x, y, z):
            if lbl not in set(labels):
                raise RingAxiomError([AxiomViolation("unknown_label_in_mult", (x, y, z))])
    violations = check_ring_axioms(labels, unit, dual, mult)
    if violations:
        raise RingAxiomError(violations)
    return FusionRing(labels, unit, dual, mult)
