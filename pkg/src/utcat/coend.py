"""Graded realization |𝔸×𝔹| of a pair of algebra objects and its module ℰ.

𝔸 lives over the opposite category, 𝔹 over the category itself; the graded
piece at X is 𝔸(X)⊗𝔹(X) in the lexicographic product basis.  Elements act on
the truncated ℓ²-module ℰ_S = ⊕_{X∈S} 𝔸(X)⊗𝔹(X) through the triangle action

    ξ₀ ▹ ξ₁ = Σ_v 𝒟(v)(𝒟²(ξ₀ ⊙ ξ₁)),

the canonical expectation is the vacuum matrix coefficient 𝔼(T) = ⟨TΩ, Ω⟩,
and crossed products A ⋊ 𝒟 are the same construction with 𝔸 an action on A.

Support truncation has two modes: "strict" raises :class:`SupportOverflow`
when a product has a channel outside S, "project" silently cuts it.  All
norm statements are computed in strict mode on fusion-closed supports.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra_object import AlgebraObject
from .errors import (
    CenterNotTrivial,
    CounterexampleFound,
    LabelMismatch,
    NotAState,
    SolveFailed,
    SupportOverflow,
    SupportTooSmall,
)

__all__ = [
    "CoendAlgebra",
    "GradedElement",
    "ModuleVector",
    "crossed_product",
    "descend_expectation",
    "faithfulness_probe",
    "norm_sandwich_check",
    "positivity_check",
]


@dataclass
class ModuleVector:
    """Finitely supported map label → vector in 𝔸(X)⊗𝔹(X)."""

    comps: dict = field(default_factory=dict)

    def __post_init__(self):
        self.comps = {k: np.asarray(v, dtype=complex)
                      for k, v in self.comps.items() if np.any(np.asarray(v))}

    def __add__(self, other):
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out.get(k, 0.0) + v
        return type(self)(out)

    def scaled(self, c):
        return type(self)({k: c * v for k, v in self.comps.items()})


class GradedElement(ModuleVector):
    """Same storage as a ModuleVector, regarded as an operator on ℰ."""


class CoendAlgebra:
    """|𝔸×𝔹| over a common category, truncated to the support S."""

    def __init__(self, A: AlgebraObject, B: AlgebraObject, S=None,
                 mode: str = "strict"):
        if A.cat is not B.cat and A.cat.ring.labels != B.cat.ring.labels:
            raise LabelMismatch("left and right objects live over different rings")
        if A.side != "op" or B.side != "cat":
            raise LabelMismatch(
                f"expected sides (op, cat), got ({A.side}, {B.side})")
        if mode not in ("strict", "project"):
            raise ValueError(f"mode must be 'strict' or 'project', got {mode!r}")
        self.A, self.B, self.mode = A, B, mode
        self.cat = B.cat
        ring = self.cat.ring
        labels = tuple(S) if S is not None else ring.labels
        # grading only sees labels where both objects have a fiber
        self.support = tuple(X for X in ring.labels
                             if X in labels and A.n(X) > 0 and B.n(X) > 0)
        if ring.unit not in self.support:
            raise SupportTooSmall([ring.unit])
        self.dims = {X: A.n(X) * B.n(X) for X in self.support}
        self.offsets = {}
        off = 0
        for X in self.support:
            self.offsets[X] = slice(off, off + self.dims[X])
            off += self.dims[X]
        self.total_dim = off
        self._gram = None
        self._gns = None

    # -- distinguished elements ---------------------------------------------

    def vacuum(self) -> ModuleVector:
        return ModuleVector({self.cat.ring.unit:
                             np.kron(self.A.unit, self.B.unit)})

    def unit(self) -> GradedElement:
        return GradedElement({self.cat.ring.unit:
                              np.kron(self.A.unit, self.B.unit)})

    def basis(self):
        """Graded basis elements (X, index) in flattening order."""
        for X in self.support:
            for i in range(self.dims[X]):
                e = np.zeros(self.dims[X])
                e[i] = 1.0
                yield X, i, GradedElement({X: e})

    def random_element(self, rng) -> GradedElement:
        return GradedElement({
            X: rng.normal(size=self.dims[X]) + 1j * rng.normal(size=self.dims[X])
            for X in self.support})

    # -- triangle action ------------------------------------------------------

    def _component_product(self, X0, X1, m0, m1) -> dict:
        """Channels of (𝔸(X0)⊗𝔹(X0)) · (𝔸(X1)⊗𝔹(X1)); matrices in/(out)."""
        ring = self.cat.ring
        out = {}
        for X2 in ring.labels:
            nch = ring.N(X0, X1, X2)
            if nch == 0 or self.A.n(X2) == 0 or self.B.n(X2) == 0:
                continue
            if X2 not in self.support:
                if self.mode == "strict":
                    raise SupportOverflow(
                        f"product channel {X2} of {X0}⊠{X1} is outside the support")
                continue
            acc = np.zeros((self.A.n(X2), self.B.n(X2)), dtype=complex)
            for v in range(nch):
                acc += np.einsum("aij,bkl,ik,jl->ab",
                                 self.A.mu(X0, X1, X2, v),
                                 self.B.mu(X0, X1, X2, v), m0, m1)
            if np.any(acc):
                out[X2] = acc
        return out

    def _shape(self, X, vec):
        return np.asarray(vec, dtype=complex).reshape(self.A.n(X), self.B.n(X))

    def triangle_act(self, T: GradedElement, xi: ModuleVector) -> ModuleVector:
        out = {}
        for X0, t in T.comps.items():
            m0 = self._shape(X0, t)
            for X1, x in xi.comps.items():
                m1 = self._shape(X1, x)
                for X2, acc in self._component_product(X0, X1, m0, m1).items():
                    out[X2] = out.get(X2, 0.0) + acc.reshape(-1)
        return ModuleVector(out)

    def mul(self, T: GradedElement, U: GradedElement) -> GradedElement:
        return GradedElement(self.triangle_act(T, ModuleVector(U.comps)).comps)

    def star(self, T: GradedElement) -> GradedElement:
        ring = self.cat.ring
        out = {}
        for X, t in T.comps.items():
            m = self._shape(X, t)
            jm = self.A.star[X] @ np.conj(m) @ self.B.star[X].T
            Xb = ring.dual[X]
            out[Xb] = out.get(Xb, 0.0) + jm.reshape(-1)
        return GradedElement(out)

    # -- inner product on ℰ_S -------------------------------------------------

    def _unit_channel(self, X0, X1, m0, m1) -> np.ndarray:
        """Only the 1-graded channel of the product, never overflowing S."""
        ring = self.cat.ring
        unit = ring.unit
        acc = np.zeros((self.A.n(unit), self.B.n(unit)), dtype=complex)
        for v in range(ring.N(X0, X1, unit)):
            acc += np.einsum("aij,bkl,ik,jl->ab",
                             self.A.mu(X0, X1, unit, v),
                             self.B.mu(X0, X1, unit, v), m0, m1)
        return acc

    def state(self, T: GradedElement) -> complex:
        """φ(T) = (tr⊗tr)(𝔼(T)) for the canonical traces on 𝔸(1), 𝔹(1)."""
        unit = self.cat.ring.unit
        m = self.canonical_expectation(T).reshape(self.A.n(unit),
                                                  self.B.n(unit))
        wA = self._ground_trace_vec(self.A)
        wB = self._ground_trace_vec(self.B)
        return complex(wA @ m @ wB)

    @staticmethod
    def _ground_trace_vec(obj) -> np.ndarray:
        g = obj.ground()
        return np.array([g.trace(np.eye(g.dim)[i]) for i in range(g.dim)])

    def gram(self) -> np.ndarray:
        """GNS form of φ = (tr⊗tr)∘𝔼 on the graded basis: G[i,j] = φ(eᵢ*eⱼ).

        Star maps grade X to X̄ and X̄⊗Y hits 1 only for Y = X, so G is
        block diagonal in the grading; adjointness of the action under the
        GNS conjugation is automatic for this inner product.
        """
        if self._gram is None:
            ring = self.cat.ring
            wA = self._ground_trace_vec(self.A)
            wB = self._ground_trace_vec(self.B)
            G = np.zeros((self.total_dim, self.total_dim), dtype=complex)
            for X, sl in self.offsets.items():
                Xb = ring.dual[X]
                block = np.zeros((self.dims[X], self.dims[X]), dtype=complex)
                stars = []
                for i in range(self.dims[X]):
                    e = np.zeros(self.dims[X])
                    e[i] = 1.0
                    stars.append(self._shape(Xb, self.star(
                        GradedElement({X: e})).comps[Xb]))
                for i in range(self.dims[X]):
                    for k in range(self.dims[X]):
                        e = np.zeros(self.dims[X])
                        e[k] = 1.0
                        m = self._unit_channel(Xb, X, stars[i], self._shape(X, e))
                        block[i, k] = wA @ m @ wB
                G[sl, sl] = block
            self._gram = (G + G.conj().T) / 2.0
        return self._gram

    def _gns_transform(self) -> np.ndarray:
        if self._gns is None:
            G = self.gram()
            w, U = np.linalg.eigh(G)
            if np.min(w) <= 1e-12 * max(float(np.max(w)), 1.0):
                raise SolveFailed("module inner product on ℰ_S is degenerate")
            self._gns = (U * np.sqrt(w)) @ U.conj().T
        return self._gns

    def flatten(self, xi: ModuleVector) -> np.ndarray:
        out = np.zeros(self.total_dim, dtype=complex)
        for X, v in xi.comps.items():
            if X not in self.offsets:
                raise SupportOverflow(f"component {X} outside the support")
            out[self.offsets[X]] = v
        return out

    def module_norm(self, xi: ModuleVector) -> float:
        v = self.flatten(xi)
        return float(np.sqrt(max((v.conj() @ self.gram() @ v).real, 0.0)))

    def act_matrix(self, T: GradedElement) -> np.ndarray:
        M = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        for X in self.support:
            for i in range(self.dims[X]):
                e = np.zeros(self.dims[X])
                e[i] = 1.0
                col = self.flatten(self.triangle_act(T, ModuleVector({X: e})))
                M[:, self.offsets[X]][:, i] = col
        return M

    def op_norm(self, T: GradedElement) -> float:
        S = self._gns_transform()
        return float(np.linalg.norm(S @ self.act_matrix(T) @ np.linalg.inv(S), 2))

    # -- canonical expectation --------------------------------------------------

    def canonical_expectation(self, T: GradedElement) -> np.ndarray:
        """𝔼(T) = ⟨TΩ, Ω⟩: the vacuum-graded component of TΩ ∈ 𝔸(1)⊗𝔹(1)."""
        out = self.triangle_act(T, self.vacuum())
        unit = self.cat.ring.unit
        comp = out.comps.get(unit)
        if comp is None:
            return np.zeros(self.dims[unit], dtype=complex)
        return comp


# ---------------------------------------------------------------------------
# theorem-level checks
# ---------------------------------------------------------------------------

def ground_op_norm(co: CoendAlgebra, m: np.ndarray) -> float:
    """C*-norm of m ∈ 𝔸(1)⊗𝔹(1) through the tensor left-regular rep."""
    gA, gB = co.A.ground(), co.B.ground()
    SA, SB = gA._gns_transform(), gB._gns_transform()
    SAi, SBi = np.linalg.inv(SA), np.linalg.inv(SB)
    m = np.asarray(m, dtype=complex).reshape(gA.dim, gB.dim)
    acc = np.zeros((gA.dim * gB.dim,) * 2, dtype=complex)
    for i in range(gA.dim):
        LA = SA @ gA.left_mult(np.eye(gA.dim)[i]) @ SAi
        for k in range(gB.dim):
            if m[i, k] == 0:
                continue
            LB = SB @ gB.left_mult(np.eye(gB.dim)[k]) @ SBi
            acc += m[i, k] * np.kron(LA, LB)
    return float(np.linalg.norm(acc, 2))


def norm_sandwich_check(co: CoendAlgebra, T: GradedElement,
                        slack: float = 1e-8) -> dict:
    """‖TΩ‖ ≤ ‖T‖ ≤ d_X²‖TΩ‖ for homogeneous T of grade X.

    ‖TΩ‖ is the Hilbert-module norm ‖𝔼(T*T)‖^{1/2}, with the C*-norm of the
    ground algebra 𝔸(1)⊗𝔹(1) on the inside, and ‖T‖ the operator norm in
    the GNS representation of the canonical state.  On fusion-closed strict
    supports the truncation is a genuine submodule, so both inequalities
    hold exactly; the scalar vacuum norm φ(T*T)^{1/2} is reported alongside.
    """
    if co.mode != "strict":
        raise SupportOverflow("norm sandwich requires strict mode")
    grades = list(T.comps)
    if len(grades) != 1:
        raise LabelMismatch(f"T must be homogeneous, has grades {grades}")
    X = grades[0]
    d = co.cat.d(X)
    ete = co.canonical_expectation(co.mul(co.star(T), T))
    vac_norm = float(np.sqrt(max(ground_op_norm(co, ete), 0.0)))
    scalar_norm = co.module_norm(co.triangle_act(T, co.vacuum()))
    op_norm = co.op_norm(T)
    ok_left = vac_norm <= op_norm + slack * max(1.0, op_norm)
    ok_right = op_norm <= d * d * vac_norm + slack * max(1.0, op_norm)
    return {"grade": X, "vacuum_norm": vac_norm, "scalar_vacuum_norm":
            scalar_norm, "op_norm": op_norm, "bound": d * d,
            "left_ok": bool(ok_left), "right_ok": bool(ok_right)}


def positivity_check(co: CoendAlgebra, X: str, terms: list,
                     floor: float = 1e-10) -> tuple:
    """Σᵢⱼ 𝔸²(j(aᵢ)⊙aⱼ) ⊗ 𝔹²(j(bᵢ)⊙bⱼ) is positive in the square algebras.

    ``terms`` is a list of (a, b) vector pairs in 𝔸(X)×𝔹(X).  Returns
    (is_positive, min_eigenvalue) from the GNS matrices of the squares.
    """
    sqA = co.A.square_algebra(X)
    sqB = co.B.square_algebra(X)
    SA, SB = sqA._gns_transform(), sqB._gns_transform()
    SAi, SBi = np.linalg.inv(SA), np.linalg.inv(SB)
    Xb = co.cat.ring.dual[X]
    acc = np.zeros((sqA.dim * sqB.dim, sqA.dim * sqB.dim), dtype=complex)
    for a_i, b_i in terms:
        for a_j, b_j in terms:
            ea = sqA.element(co.A.lax_product(Xb, X, co.A.j(X, a_i), a_j))
            eb = sqB.element(co.B.lax_product(Xb, X, co.B.j(X, b_i), b_j))
            MA = SA @ sqA.left_mult_matrix(ea) @ SAi
            MB = SB @ sqB.left_mult_matrix(eb) @ SBi
            acc += np.kron(MA, MB)
    acc = (acc + acc.conj().T) / 2.0
    ev = float(np.min(np.linalg.eigvalsh(acc)))
    return ev >= -floor, ev


def faithfulness_probe(co: CoendAlgebra, trials: int, seed: int = 0) -> dict:
    """𝔼(T*T) ≠ 0 for random nonzero T, plus the quantitative Gram bound.

    The kernel bound compares λ_min of the vacuum Gram ⟨T_kΩ, T_lΩ⟩ against
    (max d over S)⁻⁴ times λ_min of the normalized Hilbert–Schmidt Gram of
    the acting matrices, the constant coming from the norm sandwich.  The
    comparison is tight when the canonical trace weights the ground algebra
    uniformly; strongly skewed traces can shrink the vacuum Gram below it.
    """
    rng = np.random.default_rng(seed)
    unit = co.cat.ring.unit

    failures = 0
    min_expect = np.inf
    for _ in range(trials):
        T = co.random_element(rng)
        E = co.canonical_expectation(co.mul(co.star(T), T))
        nA1, nB1 = co.A.n(unit), co.B.n(unit)
        m = E.reshape(nA1, nB1)
        val = 0.0
        for i in range(nA1):
            for k in range(nB1):
                val += abs(m[i, k])
        min_expect = min(min_expect, val)
        if val < 1e-12:
            failures += 1
    if failures:
        raise CounterexampleFound(
            f"canonical expectation vanished on {failures} nonzero samples")

    # quantitative kernel bound on the graded basis
    S = co._gns_transform()
    Sinv = np.linalg.inv(S)
    vac_cols = []
    op_mats = []
    for X, i, T in co.basis():
        vac_cols.append(co.flatten(co.triangle_act(T, co.vacuum())))
        op_mats.append(S @ co.act_matrix(T) @ Sinv)
    V = np.stack(vac_cols, axis=1)
    gram_vac = V.conj().T @ co.gram() @ V
    n = len(op_mats)
    gram_op = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for k in range(n):
            gram_op[i, k] = np.trace(op_mats[i].conj().T @ op_mats[k]) / co.total_dim
    lo_vac = float(np.min(np.linalg.eigvalsh((gram_vac + gram_vac.conj().T) / 2)))
    lo_op = float(np.min(np.linalg.eigvalsh((gram_op + gram_op.conj().T) / 2)))
    dmax = max(co.cat.d(X) for X in co.support)
    bound_ok = lo_vac >= lo_op / dmax**4 - 1e-10
    if not bound_ok:
        raise CounterexampleFound(
            f"vacuum Gram floor {lo_vac:.3e} below sandwich bound "
            f"{lo_op / dmax**4:.3e}")
    return {"trials": trials, "seed": seed, "failures": failures,
            "min_expectation_mass": float(min_expect),
            "vacuum_gram_floor": lo_vac, "operator_gram_floor": lo_op,
            "bound_constant": dmax**-4, "cyclic_rank": int(
                np.linalg.matrix_rank(V, tol=1e-10)),
            "expected_rank": co.total_dim}


# ---------------------------------------------------------------------------
# crossed products and expectation descent
# ---------------------------------------------------------------------------

def crossed_product(A: AlgebraObject, D: AlgebraObject, S=None,
                    mode: str = "strict") -> CoendAlgebra:
    """A ⋊ 𝒟: the coend realization of an action 𝔸 against the object 𝒟."""
    co = CoendAlgebra(A, D, S=S, mode=mode)
    co.alias = "crossed_product"
    return co


def descend_expectation(co: CoendAlgebra, omega: np.ndarray):
    """E_ω = (id ⊗ ω) ∘ 𝔼 : A ⋊ 𝒟 → A for a state ω on 𝒟(1).

    ``omega`` is the coefficient vector of the functional on the basis of
    𝒟(1).  Returns (E_ω as a callable GradedElement → vector in 𝔸(1),
    report dict with faithfulness of ω and of E_ω).
    """
    gb = co.B.ground()
    omega = np.asarray(omega, dtype=complex)
    if omega.shape != (gb.dim,):
        raise NotAState(f"expected functional on a {gb.dim}-dim algebra")
    if abs(omega @ co.B.unit - 1.0) > 1e-10:
        raise NotAState("ω is not unital")
    # positivity and faithfulness through the GNS form ω(e_i* e_j)
    Q = np.array([[omega @ gb.mul(gb.star(np.eye(gb.dim)[i]), np.eye(gb.dim)[k])
                   for k in range(gb.dim)] for i in range(gb.dim)])
    Q = (Q + Q.conj().T) / 2.0
    ev = np.linalg.eigvalsh(Q)
    if float(np.min(ev)) < -1e-10:
        raise NotAState(f"ω is not positive: min GNS eigenvalue {np.min(ev):.3e}")
    omega_faithful = bool(np.min(ev) > 1e-10 * max(float(np.max(ev)), 1.0))
    if not co.A.meta.get("center_trivial", False):
        raise CenterNotTrivial(
            "expectation descent needs 𝔸(1) with trivial center "
            "(declared by fixture metadata)")

    nA1, nB1 = co.A.n(co.cat.ring.unit), co.B.n(co.cat.ring.unit)

    def E_omega(T: GradedElement) -> np.ndarray:
        m = co.canonical_expectation(T).reshape(nA1, nB1)
        return m @ omega

    # faithfulness of E_ω through the Gram kernel on the graded basis:
    # K[i,j] = tr_A(E_ω(eᵢ*eⱼ)) is PSD and degenerate iff E_ω has a kernel
    wA = co._ground_trace_vec(co.A)
    els = [(T, co.star(T)) for _, _, T in co.basis()]
    K = np.array([[wA @ E_omega(co.mul(si, tj))
                   for tj, _ in els] for _, si in els])
    K = (K + K.conj().T) / 2.0
    kev = np.linalg.eigvalsh(K)
    e_faithful = bool(np.min(kev) > 1e-10 * max(float(np.max(kev)), 1.0))
    report = {"omega_faithful": omega_faithful, "E_omega_faithful": e_faithful,
              "gns_rank": int(np.sum(ev > 1e-10 * max(float(np.max(ev)), 1.0)))}
    return E_omega, report
