"""Algebra objects internal to a skeletal unitary tensor category.

An :class:`AlgebraObject` stores a functor value ``fibers[X] = dim 𝒟(X)`` on
each irreducible label, the lax multiplication through its irreducible
components ``mult[(X, Y, Z, v)]`` (one bilinear map per tree basis vector
v ∈ O(Z, X⊗Y)), an antilinear star ``j_X : 𝒟(X) → 𝒟(X̄)`` given by
``star[X] @ conj(ξ)``, and the algebra unit in 𝒟(1).

``side`` records whether the object lives over the category itself ("cat") or
its opposite ("op"); the opposite category has conjugated structure scalars,
so every coefficient drawn from the category data passes through
:meth:`AlgebraObject.scalar`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CounterexampleFound,
    LabelMismatch,
    PositivityFailure,
    SolveFailed,
    SupportTooSmall,
)
from .skeletal import SkeletalUTC, TreeVector

__all__ = [
    "AlgebraObject",
    "FiberElement",
    "GroundAlgebra",
    "SquareAlgebra",
    "validate_algebra_object",
    "group_algebra_object",
    "trivial_action_object",
    "opposite_object",
    "pp_check",
]


@dataclass(frozen=True)
class FiberElement:
    label: str
    vec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vec", np.asarray(self.vec, dtype=complex))


@dataclass
class AlgebraObject:
    cat: SkeletalUTC
    fibers: dict                    # label -> dimension (0 entries allowed)
    mult: dict                      # (X, Y, Z, v) -> ndarray (n_Z, n_X, n_Y)
    star: dict                      # label -> ndarray (n_Xbar, n_X)
    unit: np.ndarray                # vector in 𝒟(1)
    side: str = "cat"
    unitary_lax: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.unit = np.asarray(self.unit, dtype=complex)
        self.mult = {k: np.asarray(v, dtype=complex) for k, v in self.mult.items()}
        self.star = {k: np.asarray(v, dtype=complex) for k, v in self.star.items()}
        if self.side not in ("cat", "op"):
            raise ValueError(f"side must be 'cat' or 'op', got {self.side!r}")

    # -- basic queries -----------------------------------------------------

    @property
    def support(self) -> tuple:
        return tuple(X for X in self.cat.ring.labels if self.fibers.get(X, 0) > 0)

    def n(self, X: str) -> int:
        return int(self.fibers.get(X, 0))

    def scalar(self, z):
        """Category structure scalar, conjugated on the opposite side."""
        return np.conj(z) if self.side == "op" else z

    def mu(self, X, Y, Z, v) -> np.ndarray:
        arr = self.mult.get((X, Y, Z, v))
        if arr is None:
            return np.zeros((self.n(Z), self.n(X), self.n(Y)), dtype=complex)
        return arr

    def mu_apply(self, X, Y, Z, v, xi, eta) -> np.ndarray:
        return np.einsum("zxy,x,y->z", self.mu(X, Y, Z, v), xi, eta)

    def j(self, X: str, xi) -> np.ndarray:
        return self.star[X] @ np.conj(np.asarray(xi, dtype=complex))

    # -- distributed elements over a pair word (A, B) ----------------------
    # An element of 𝒟(A⊗B) is a dict (Z, v) -> vector in 𝒟(Z); the map
    # θ ⊗ v ↦ 𝒟(v*)θ identifies ⊕_{Z,v} 𝒟(Z) with 𝒟(A⊗B).

    def lax_product(self, X: str, Y: str, xi, eta) -> dict:
        """𝒟²_{X,Y}(ξ ⊙ η) distributed over the channels of X⊗Y."""
        out = {}
        for Z in self.cat.ring.labels:
            if self.n(Z) == 0:
                continue
            for v in range(self.cat.ring.N(X, Y, Z)):
                val = self.mu_apply(X, Y, Z, v, xi, eta)
                if np.any(val):
                    out[(Z, v)] = val
        return out

    def contract_against(self, dist: dict, target: TreeVector, pair: tuple) -> np.ndarray:
        """𝒟(q)(Θ) for Θ distributed over the channels of pair = (A, B).

        ``target`` is the morphism q : root -> A⊗B as a TreeVector; the result
        lives in 𝒟(root).  Uses 𝒟(M*∘q) = ⟨M, q⟩ on the tree basis M.
        """
        A, B = pair
        root = target.root
        out = np.zeros(self.n(root), dtype=complex)
        for (Z, v), vec in dist.items():
            if Z != root:
                continue
            coeff = target.coeffs.get(((Z, v),), 0.0)
            out += self.scalar(coeff) * vec
        return out

    def conjugate_distributed(self, dist: dict, pair: tuple) -> dict:
        """j applied to a distributed element of 𝒟(A⊗B); lands over (B̄, Ā)."""
        A, B = pair
        ring = self.cat.ring
        out = {}
        for (Z, v), vec in dist.items():
            n = ring.N(A, B, Z)
            e = np.zeros(n)
            e[v] = 1.0
            conj_coeffs = self.cat.conj_pair_basis(A, B, Z, e)
            jvec = self.j(Z, vec)
            Zb = ring.dual[Z]
            for s, K in enumerate(conj_coeffs):
                K = self.scalar(K)
                if abs(K) == 0.0:
                    continue
                key = (Zb, s)
                out[key] = out.get(key, np.zeros(self.n(Zb), dtype=complex)) + K * jvec
        return out

    # -- canonical expectation and inner products ---------------------------

    def cond_expect_component(self, X: str, dist: dict) -> np.ndarray:
        """E_X = d_X⁻¹ 𝒟(R_X) on an element distributed over X̄⊗X."""
        ring = self.cat.ring
        unit = ring.unit
        if self.n(unit) == 0:
            raise SupportTooSmall([unit])
        sol = self.cat.conjugate_solution(X)
        comp = dist.get((unit, 0))
        if comp is None:
            return np.zeros(self.n(unit), dtype=complex)
        return self.scalar(sol.r) / self.cat.d(X) * comp

    def fiber_inner_product(self, xi: FiberElement, eta: FiberElement) -> np.ndarray:
        """⟨ξ,η⟩_{𝒟(1)} = E_X(𝒟²(j(ξ) ⊙ η)); conjugate-linear in ξ."""
        if xi.label != eta.label:
            raise LabelMismatch(f"{xi.label} != {eta.label}")
        X = xi.label
        Xb = self.cat.ring.dual[X]
        dist = self.lax_product(Xb, X, self.j(X, xi.vec), eta.vec)
        return self.cond_expect_component(X, dist)

    def fiber_gram(self, X: str) -> np.ndarray:
        """The 𝒟(1)-valued Gram matrix of the standard basis of 𝒟(X),
        flattened to shape (n_X, n_X, n_1)."""
        nx, n1 = self.n(X), self.n(self.cat.ring.unit)
        G = np.zeros((nx, nx, n1), dtype=complex)
        for i in range(nx):
            for k in range(nx):
                G[i, k] = self.fiber_inner_product(
                    FiberElement(X, np.eye(nx)[i]), FiberElement(X, np.eye(nx)[k])
                )
        return G

    def composite_inner_product(self, pair: tuple, dist1: dict, dist2: dict) -> np.ndarray:
        """⟨Θ₁,Θ₂⟩_{𝒟(1)} for Θᵢ ∈ 𝒟(A⊗B) distributed, via the standard
        solution R_{A⊗B} = (id_B̄ ⊗ R_A ⊗ id_B) ∘ R_B."""
        A, B = pair
        cat = self.cat
        ring = cat.ring
        jdist = self.conjugate_distributed(dist1, pair)
        r_ab = cat.insert_pair(cat.r_vector(B), 1, ring.dual[A], A,
                               [cat.conjugate_solution(A).r])
        d_ab = cat.d(A) * cat.d(B)
        out = np.zeros(self.n(ring.unit), dtype=complex)
        # expand R_{AB} in merged trees (s ⊗ t)∘w over (B̄Ā)(AB) and contract
        for (Zb, s), jvec in jdist.items():
            for (Z2, t), vec2 in dist2.items():
                nw = ring.N(Zb, Z2, ring.unit)
                for w in range(nw):
                    e_w = np.zeros(nw)
                    e_w[w] = 1.0
                    M = cat.merge(
                        cat.basis_tree(Zb, (ring.dual[B], ring.dual[A]), ((Zb, s),)),
                        cat.basis_tree(Z2, (A, B), ((Z2, t),)),
                        ring.unit, e_w)
                    coeff = M.inner(r_ab)
                    if abs(coeff) == 0.0:
                        continue
                    out += (self.scalar(coeff) / d_ab) * self.mu_apply(
                        Zb, Z2, ring.unit, w, jvec, vec2)
        return out

    def fiber_action(self, xi: FiberElement, T: "SquareElement") -> FiberElement:
        """Right action ξ ◁ T = 𝒟(R̄_X ⊗ id_X)(𝒟²(ξ ⊙ T)) on 𝒟(X).

        The adjoint of R̄_X ⊗ id_X caps ξ's strand with the left X̄ of the
        square algebra; by the conjugate equations the zig-zag against the
        unit ι(1) = 𝒟(R_X*)(1) is exactly 1, so no dimension factor is
        needed for the unit to act as the identity and ξ ◁ ι(x) = ξ·x.
        """
        X = xi.label
        cat = self.cat
        ring = cat.ring
        sol = cat.conjugate_solution(X)
        q = cat.insert_pair(TreeVector((X,), X, {(): 1.0 + 0j}), 0,
                            X, ring.dual[X], [sol.rbar])
        out = np.zeros(self.n(X), dtype=complex)
        for (Z, v), tvec in T.comps.items():
            for s in range(ring.N(X, Z, X)):
                M = cat.merge(TreeVector((X,), X, {(): 1.0 + 0j}),
                              cat.basis_tree(Z, (ring.dual[X], X), ((Z, v),)),
                              X, np.eye(ring.N(X, Z, X))[s])
                coeff = M.inner(q)
                if abs(coeff) == 0.0:
                    continue
                out += self.scalar(coeff) * self.mu_apply(X, Z, X, s, xi.vec, tvec)
        return FiberElement(X, out)

    # -- derived algebras ---------------------------------------------------

    def ground(self) -> "GroundAlgebra":
        return GroundAlgebra(self)

    def square_algebra(self, X: str) -> "SquareAlgebra":
        return SquareAlgebra(self, X)

    def fiber_norms(self, xi: FiberElement) -> tuple:
        """(module norm ‖ξ‖_{𝒟(1)}, operator norm ‖ξ‖)."""
        g = self.ground()
        module = np.sqrt(max(g.op_norm(self.fiber_inner_product(xi, xi)), 0.0))
        sq = self.square_algebra(xi.label)
        Xb = self.cat.ring.dual[xi.label]
        dist = self.lax_product(Xb, xi.label, self.j(xi.label, xi.vec), xi.vec)
        operator = np.sqrt(max(sq.op_norm(sq.element(dist)), 0.0))
        return module, operator


# ---------------------------------------------------------------------------
# ground algebra 𝒟(1)
# ---------------------------------------------------------------------------

class GroundAlgebra:
    """𝒟(1) as a concrete finite-dimensional C*-algebra."""

    def __init__(self, D: AlgebraObject):
        self.D = D
        unit_lbl = D.cat.ring.unit
        self.dim = D.n(unit_lbl)
        if self.dim == 0:
            raise SupportTooSmall([unit_lbl])
        self.P = D.mu(unit_lbl, unit_lbl, unit_lbl, 0)  # (z, x, y)
        self.star_mat = D.star[unit_lbl]
        self.unit = D.unit
        self._gns = None

    def mul(self, x, y) -> np.ndarray:
        return np.einsum("zxy,x,y->z", self.P, x, y)

    def star(self, x) -> np.ndarray:
        return self.star_mat @ np.conj(x)

    def left_mult(self, x) -> np.ndarray:
        return np.einsum("zxy,x->zy", self.P, x)

    def trace(self, x) -> complex:
        """The canonical faithful trace tr(x) = Tr(L_x)/Tr(L_1); tr(1) = 1."""
        return complex(np.trace(self.left_mult(x)) / np.trace(self.left_mult(self.unit)))

    def _gns_transform(self):
        if self._gns is None:
            n = self.dim
            basis = np.eye(n)
            G = np.array([[self.trace(self.mul(self.star(basis[i]), basis[k]))
                           for k in range(n)] for i in range(n)])
            G = (G + G.conj().T) / 2.0
            w, U = np.linalg.eigh(G)
            if np.min(w) <= 1e-13:
                raise SolveFailed("ground algebra trace form is degenerate")
            self._gns = (U * np.sqrt(w)) @ U.conj().T  # G^{1/2}
        return self._gns

    def op_norm(self, x) -> float:
        S = self._gns_transform()
        M = S @ self.left_mult(x) @ np.linalg.inv(S)
        return float(np.linalg.norm(M, 2))

    def is_positive(self, x, floor=1e-10) -> bool:
        # positive iff x = x* and spectrum of L_x on the GNS space ≥ -floor
        if np.max(np.abs(self.star(x) - x)) > 1e-8 * max(1.0, np.max(np.abs(x))):
            return False
        S = self._gns_transform()
        M = S @ self.left_mult(x) @ np.linalg.inv(S)
        return bool(np.min(np.linalg.eigvalsh((M + M.conj().T) / 2.0)) >= -floor)


# ---------------------------------------------------------------------------
# square algebras 𝒟(X̄⊗X)
# ---------------------------------------------------------------------------

class SquareElement:
    """Element of 𝒟(X̄⊗X) distributed over (channel, tree) pairs."""

    def __init__(self, algebra: "SquareAlgebra", comps: dict):
        self.algebra = algebra
        self.comps = {k: np.asarray(v, dtype=complex) for k, v in comps.items()
                      if np.any(np.asarray(v))}

    def to_vec(self) -> np.ndarray:
        out = np.zeros(self.algebra.dim, dtype=complex)
        for key, sl in self.algebra.slices.items():
            if key in self.comps:
                out[sl] = self.comps[key]
        return out


class SquareAlgebra:
    """𝒟(X̄⊗X) with product a·b = 𝒟(id ⊗ R̄_X ⊗ id ∘ -)(𝒟²(a ⊙ b))."""

    def __init__(self, D: AlgebraObject, X: str):
        self.D = D
        self.X = X
        cat = D.cat
        ring = cat.ring
        self.Xb = ring.dual[X]
        missing = [Z for Z in ring.labels
                   if ring.N(self.Xb, X, Z) > 0 and D.fibers.get(Z, None) is None]
        if missing:
            raise SupportTooSmall(missing)
        self.keys = []      # (Z, v) with n_Z > 0
        self.slices = {}
        off = 0
        for Z in ring.labels:
            nz = D.n(Z)
            if nz == 0:
                continue
            for v in range(ring.N(self.Xb, X, Z)):
                self.keys.append((Z, v))
                self.slices[(Z, v)] = slice(off, off + nz)
                off += nz
        self.dim = off
        self._tensor = None
        self._star = None
        self._gns = None

    # -- element plumbing ---------------------------------------------------

    def element(self, comps: dict) -> SquareElement:
        return SquareElement(self, comps)

    def from_vec(self, vec) -> SquareElement:
        vec = np.asarray(vec, dtype=complex)
        return SquareElement(self, {k: vec[sl] for k, sl in self.slices.items()})

    def unit(self) -> SquareElement:
        r = self.D.scalar(self.D.cat.conjugate_solution(self.X).r)
        return self.element({(self.D.cat.ring.unit, 0): r * self.D.unit})

    def include_ground(self, x) -> SquareElement:
        """ι : 𝒟(1) → 𝒟(X̄⊗X), ι = 𝒟(R_X*)."""
        r = self.D.scalar(self.D.cat.conjugate_solution(self.X).r)
        return self.element({(self.D.cat.ring.unit, 0): r * np.asarray(x, dtype=complex)})

    # -- product ------------------------------------------------------------

    def _structure_tensor(self) -> np.ndarray:
        """Dense P[k, i, j] with (a·b)_k = Σ P[k,i,j] a_i b_j."""
        if self._tensor is not None:
            return self._tensor
        D, cat = self.D, self.D.cat
        ring = cat.ring
        X, Xb = self.X, self.Xb
        rbar = cat.conjugate_solution(X).rbar
        P = np.zeros((self.dim, self.dim, self.dim), dtype=complex)
        # m∘u for every output basis tree u
        targets = {}
        for (U, u) in self.keys:
            tu = cat.basis_tree(U, (Xb, X), ((U, u),))
            targets[(U, u)] = cat.insert_pair(tu, 1, X, Xb, [rbar])
        for (Z, v) in self.keys:
            tv = cat.basis_tree(Z, (Xb, X), ((Z, v),))
            for (W, w) in self.keys:
                tw = cat.basis_tree(W, (Xb, X), ((W, w),))
                for U in ring.labels:
                    nu_dim = D.n(U)
                    if nu_dim == 0:
                        continue
                    ns = ring.N(Z, W, U)
                    for s in range(ns):
                        M = cat.merge(tv, tw, U, np.eye(ns)[s])
                        mu = D.mu(Z, W, U, s)       # (n_U, n_Z, n_W)
                        for u in range(ring.N(Xb, X, U)):
                            gamma = D.scalar(M.inner(targets[(U, u)]))
                            if abs(gamma) == 0.0:
                                continue
                            so = self.slices[(U, u)]
                            sz = self.slices[(Z, v)]
                            sw = self.slices[(W, w)]
                            P[so, sz, sw] += gamma * mu
        self._tensor = P
        return P

    def mul(self, a: SquareElement, b: SquareElement) -> SquareElement:
        P = self._structure_tensor()
        return self.from_vec(np.einsum("kij,i,j->k", P, a.to_vec(), b.to_vec()))

    def star(self, a: SquareElement) -> SquareElement:
        if self._star is None:
            D, cat = self.D, self.D.cat
            ring = cat.ring
            S = np.zeros((self.dim, self.dim), dtype=complex)
            for (Z, v) in self.keys:
                n = ring.N(self.Xb, self.X, Z)
                e = np.zeros(n)
                e[v] = 1.0
                K = cat.conj_pair_basis(self.Xb, self.X, Z, e)
                Zb = ring.dual[Z]
                for s, k_vs in enumerate(K):
                    k_vs = D.scalar(k_vs)
                    if abs(k_vs) == 0.0 or (Zb, s) not in self.slices:
                        continue
                    S[self.slices[(Zb, s)], self.slices[(Z, v)]] += k_vs * D.star[Z]
            self._star = S
        return self.from_vec(self._star @ np.conj(a.to_vec()))

    def expect(self, a: SquareElement) -> np.ndarray:
        """E_X(a) ∈ 𝒟(1)."""
        return self.D.cond_expect_component(self.X, a.comps)

    # -- operator norm via GNS of tr∘E_X ------------------------------------

    def _phi(self, a: SquareElement) -> complex:
        return self.D.ground().trace(self.expect(a))

    def _gns_transform(self):
        if self._gns is None:
            n = self.dim
            G = np.zeros((n, n), dtype=complex)
            basis = [self.from_vec(np.eye(n)[i]) for i in range(n)]
            stars = [self.star(b) for b in basis]
            for i in range(n):
                for k in range(n):
                    G[i, k] = self._phi(self.mul(stars[i], basis[k]))
            G = (G + G.conj().T) / 2.0
            w, U = np.linalg.eigh(G)
            if np.min(w) <= 1e-12 * max(np.max(w), 1.0):
                raise SolveFailed(f"tr∘E_{self.X} is degenerate on 𝒟({self.Xb}⊗{self.X})")
            self._gns = (U * np.sqrt(w)) @ U.conj().T
        return self._gns

    def left_mult_matrix(self, a: SquareElement) -> np.ndarray:
        P = self._structure_tensor()
        return np.einsum("kij,i->kj", P, a.to_vec())

    def op_norm(self, a: SquareElement) -> float:
        S = self._gns_transform()
        M = S @ self.left_mult_matrix(a) @ np.linalg.inv(S)
        return float(np.linalg.norm(M, 2))

    def random_element(self, rng) -> SquareElement:
        v = rng.normal(size=self.dim) + 1j * rng.normal(size=self.dim)
        return self.from_vec(v)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_algebra_object(D: AlgebraObject, rng=None, tol: float = 1e-9) -> dict:
    """Residuals of all AlgebraObjectData invariants; raises nothing itself.

    Returns a dict with keys associativity, unitality, star_involution,
    star_monoidality, positivity_floor.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    cat = D.cat
    ring = cat.ring
    unit = ring.unit
    sup = D.support
    res = {"associativity": 0.0, "unitality": 0.0, "star_involution": 0.0,
           "star_monoidality": 0.0, "positivity_floor": 0.0}

    # unitality
    for X in sup:
        nx = D.n(X)
        lm = D.mu(unit, X, X, 0)
        rm = D.mu(X, unit, X, 0)
        L = np.einsum("zxy,x->zy", lm, D.unit)
        R = np.einsum("zxy,y->zx", rm, D.unit)
        res["unitality"] = max(res["unitality"],
                               float(np.max(np.abs(L - np.eye(nx)))),
                               float(np.max(np.abs(R - np.eye(nx)))))

    # associativity via F-recoupling on random fiber vectors
    def rand(n):
        return rng.normal(size=n) + 1j * rng.normal(size=n)

    for X, Y, Z in itertools.product(sup, repeat=3):
        xi, eta, zeta = rand(D.n(X)), rand(D.n(Y)), rand(D.n(Z))
        for W in ring.labels:
            nw = D.n(W)
            if nw == 0:
                continue
            lidx = cat.left_index(X, Y, Z, W)
            ridx = cat.right_index(X, Y, Z, W)
            if not lidx:
                continue
            thL = np.zeros((len(lidx), nw), dtype=complex)
            for i, (E, al, be) in enumerate(lidx):
                if D.n(E) == 0:
                    continue
                thL[i] = D.mu_apply(E, Z, W, be, D.mu_apply(X, Y, E, al, xi, eta), zeta)
            thR = np.zeros((len(ridx), nw), dtype=complex)
            for i, (Fc, mu_i, nu) in enumerate(ridx):
                if D.n(Fc) == 0:
                    continue
                thR[i] = D.mu_apply(X, Fc, W, nu, xi, D.mu_apply(Y, Z, Fc, mu_i, eta, zeta))
            F = cat.fmat(X, Y, Z, W)
            if D.side == "op":
                F = F.conj()
            pred = F.T @ thL
            scale = max(1.0, float(np.max(np.abs(thL))), float(np.max(np.abs(thR))))
            res["associativity"] = max(res["associativity"],
                                       float(np.max(np.abs(pred - thR))) / scale)

    # star involution and unit fixing
    for X in sup:
        Xb = ring.dual[X]
        M = D.star[Xb] @ np.conj(D.star[X])
        res["star_involution"] = max(res["star_involution"],
                                     float(np.max(np.abs(M - np.eye(D.n(X))))))
    res["star_involution"] = max(res["star_involution"],
                                 float(np.max(np.abs(D.j(unit, D.unit) - D.unit))))

    # star monoidality: j(𝒟²(ξ⊙η)) = 𝒟²(j(η)⊙j(ξ)) after conjugating trees
    for X, Y in itertools.product(sup, repeat=2):
        xi, eta = rand(D.n(X)), rand(D.n(Y))
        lhs = D.conjugate_distributed(D.lax_product(X, Y, xi, eta), (X, Y))
        rhs = D.lax_product(ring.dual[Y], ring.dual[X], D.j(Y, eta), D.j(X, xi))
        keys = set(lhs) | set(rhs)
        for k in keys:
            a = lhs.get(k)
            b = rhs.get(k)
            a = np.zeros(D.n(k[0]), dtype=complex) if a is None else a
            b = np.zeros(D.n(k[0]), dtype=complex) if b is None else b
            scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
            res["star_monoidality"] = max(res["star_monoidality"],
                                          float(np.max(np.abs(a - b))) / scale)

    # positivity of the 𝒟(1)-valued Gram on each fiber
    g = D.ground()
    S = g._gns_transform()
    Sinv = np.linalg.inv(S)
    floor = 0.0
    for X in sup:
        nx = D.n(X)
        G = D.fiber_gram(X)  # (nx, nx, n1)
        big = np.zeros((nx * g.dim, nx * g.dim), dtype=complex)
        for i in range(nx):
            for k in range(nx):
                blk = S @ g.left_mult(G[i, k]) @ Sinv
                big[i * g.dim:(i + 1) * g.dim, k * g.dim:(k + 1) * g.dim] = blk
        big = (big + big.conj().T) / 2.0
        ev = np.linalg.eigvalsh(big)
        floor = min(floor, float(np.min(ev)))
    res["positivity_floor"] = floor
    return res


# ---------------------------------------------------------------------------
# Pimsner–Popa verification
# ---------------------------------------------------------------------------

def pp_check(D: AlgebraObject, X: str, samples: int, seed: int = 0,
             slack: float = 1e-8) -> dict:
    """Sample positive T = S*S in 𝒟(X̄⊗X) and verify
    ‖E_X(T)‖ ≤ ‖T‖ ≤ d_X²·‖E_X(T)‖ for each sample."""
    sq = D.square_algebra(X)
    g = D.ground()
    dsq = D.cat.d(X) ** 2
    rng = np.random.default_rng(seed)
    worst_ratio = 0.0
    worst_lower = 0.0
    violations = 0
    for _ in range(samples):
        s = sq.random_element(rng)
        T = sq.mul(sq.star(s), s)
        nT = sq.op_norm(T)
        nE = g.op_norm(sq.expect(T))
        if nE > nT + slack * max(1.0, nT):
            violations += 1
        if nT > dsq * nE + slack * max(1.0, nT):
            violations += 1
        if nE > 0:
            worst_ratio = max(worst_ratio, nT / nE)
        worst_lower = max(worst_lower, nE - nT)
    if violations:
        raise CounterexampleFound(
            f"Pimsner–Popa sandwich failed {violations} times at X={X}"
        )
    return {"X": X, "samples": samples, "seed": seed, "max_ratio": worst_ratio,
            "bound": dsq, "violations": violations}


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

def group_algebra_object(cat: SkeletalUTC, side: str = "cat") -> AlgebraObject:
    """The group algebra of a pointed category: 𝒟(g) = ℂ, μ = group law."""
    ring = cat.ring
    fibers = {g: 1 for g in ring.labels}
    mult = {}
    for g in ring.labels:
        for h in ring.labels:
            gh = next(iter(cat.ring.fuse(g, h)))
            mult[(g, h, gh, 0)] = np.ones((1, 1, 1), dtype=complex)
    star = {g: np.ones((1, 1), dtype=complex) for g in ring.labels}
    return AlgebraObject(cat=cat, fibers=fibers, mult=mult, star=star,
                         unit=np.ones(1, dtype=complex), side=side,
                         unitary_lax=True, meta={"fixture": "group_algebra"})


def opposite_object(D: AlgebraObject) -> AlgebraObject:
    """The same algebra object regarded over the opposite category.

    All structure coefficients are conjugated along with the side flip, so
    every validation residual is preserved verbatim.
    """
    side = "op" if D.side == "cat" else "cat"
    return AlgebraObject(
        cat=D.cat,
        fibers=dict(D.fibers),
        mult={k: np.conj(v) for k, v in D.mult.items()},
        star={k: np.conj(v) for k, v in D.star.items()},
        unit=np.conj(D.unit),
        side=side,
        unitary_lax=D.unitary_lax,
        meta=dict(D.meta, opposite_of=D.meta.get("fixture")),
    )


def trivial_action_object(cat: SkeletalUTC) -> AlgebraObject:
    """The trivial action of a pointed category on ℂ, as an object over 𝒞^op.

    Requires every label invertible (d = 1); the lax structure is unitary.
    """
    for x in cat.ring.labels:
        if abs(cat.d(x) - 1.0) > 1e-9:
            raise PositivityFailure(
                f"no action on ℂ exists: label {x} has dimension {cat.d(x):.4f} ≠ 1"
            )
    obj = group_algebra_object(cat, side="op")
    obj.meta = {"fixture": "trivial_action", "base": "C", "center_trivial": True}
    return obj
