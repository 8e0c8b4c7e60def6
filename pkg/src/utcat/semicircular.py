"""Truncated Fock-space model of algebra-valued semicircular systems.

The base algebra A is a concrete multi-matrix algebra ⊕_b M_{k_b} embedded
block-diagonally in M_d.  A covariance matrix is a completely positive
η: A → A⊗ℒ(ℓ²(I)) stored entrywise as linear maps η_ij in A-coordinates.
The Fock space ⨁_{m≤n} 𝒳^{⊠m} is assembled level by level: a raw level-m
basis vector is a word ((a₁,i₁),…,(a_m,i_m); b) of slot coefficients and a
right tail, the A-valued inner product follows the recursion

    ⟨(a,i)::u, (c,j)::v⟩ = ⟨u, η_ij(a*c) ▹ v⟩,      ⟨b, b′⟩₀ = b*b′,

and degenerate directions are quotiented per level through the normalized
trace.  Creation prepends a slot, annihilation is its adjoint in the
quotient orthonormal coordinates, and X_i = T_i + T_i† is self-adjoint by
construction.  Vacuum moments of words with at most 2·depth letters are
exact: a path through the truncated level cannot return to the vacuum.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CPFailure,
    DimensionCap,
    NotAnAutomorphism,
    NotAState,
    RowBoundFailure,
    WordTooLong,
)

__all__ = [
    "BaseAlgebra",
    "CovarianceMatrix",
    "SemicircularFamily",
    "TruncatedFock",
    "build_fock",
    "covariance_from_automorphisms",
    "covariance_from_vectors",
    "ind_faithfulness_probe",
    "semicircular_ops",
    "vacuum_expectation",
]


class BaseAlgebra:
    """⊕_b M_{k_b} inside M_d with the matrix-unit basis and trace Tr/d."""

    def __init__(self, blocks=(1,)):
        self.blocks = tuple(int(k) for k in blocks)
        if any(k <= 0 for k in self.blocks):
            raise ValueError("block sizes must be positive")
        self.d = sum(self.blocks)
        self.basis = []
        self._slots = []  # (row, col) of each matrix unit
        off = 0
        for k in self.blocks:
            for r in range(k):
                for c in range(k):
                    e = np.zeros((self.d, self.d), dtype=complex)
                    e[off + r, off + c] = 1.0
                    self.basis.append(e)
                    self._slots.append((off + r, off + c))
            off += k
        self.dim = len(self.basis)
        self.unit_coords = self.coords(np.eye(self.d))

    def coords(self, mat) -> np.ndarray:
        mat = np.asarray(mat, dtype=complex)
        return np.array([mat[r, c] for r, c in self._slots])

    def element(self, coords) -> np.ndarray:
        out = np.zeros((self.d, self.d), dtype=complex)
        for v, (r, c) in zip(coords, self._slots):
            out[r, c] = v
        return out

    def trace(self, mat) -> complex:
        return complex(np.trace(mat)) / self.d

    def random(self, rng) -> np.ndarray:
        return self.element(rng.normal(size=self.dim)
                            + 1j * rng.normal(size=self.dim))


@dataclass
class CovarianceMatrix:
    """η: A → A⊗ℒ(ℓ²(I)); entries[(i,j)] maps A-coordinates to A-coordinates."""

    algebra: BaseAlgebra
    index: tuple
    entries: dict
    bound: float = None
    cp_floor: float = field(default=None)

    def __post_init__(self):
        alg = self.algebra
        self.index = tuple(self.index)
        full = {}
        for i in self.index:
            for j in self.index:
                m = self.entries.get((i, j))
                if m is None:
                    m = np.zeros((alg.dim, alg.dim))
                full[(i, j)] = np.asarray(m, dtype=complex)
        self.entries = full
        self.cp_floor = self._verify_cp()
        computed = self._row_bound()
        if self.bound is not None and computed > self.bound + 1e-9:
            raise RowBoundFailure(
                f"row bound {computed:.6f} exceeds declared C = {self.bound}")
        self.bound = computed

    def apply(self, i, j, a) -> np.ndarray:
        alg = self.algebra
        return alg.element(self.entries[(i, j)] @ alg.coords(a))

    def _verify_cp(self) -> float:
        """[η_ij(e_α* e_β)] over a basis of A must be PSD in M_n(A⊗M_I)."""
        alg = self.algebra
        nA, nI, d = alg.dim, len(self.index), alg.d
        big = np.zeros((nA * nI * d, nA * nI * d), dtype=complex)
        for ai, ei in enumerate(alg.basis):
            for bi, ej in enumerate(alg.basis):
                prod = ei.conj().T @ ej
                for x, i in enumerate(self.index):
                    for y, j in enumerate(self.index):
                        r = (ai * nI + x) * d
                        c = (bi * nI + y) * d
                        big[r:r + d, c:c + d] = self.apply(i, j, prod)
        floor = float(np.min(np.linalg.eigvalsh((big + big.conj().T) / 2)))
        if floor < -1e-10 * max(1.0, float(np.max(np.abs(big)))):
            raise CPFailure(f"Choi-type matrix has eigenvalue {floor:.3e}")
        return floor

    def _row_bound(self, samples: int = 20, seed: int = 0) -> float:
        rng = np.random.default_rng(seed)
        alg = self.algebra
        tests = [e for e in alg.basis] + [alg.random(rng) for _ in range(samples)]
        best = 0.0
        for a in tests:
            na = np.linalg.norm(a, 2)
            if na < 1e-14:
                continue
            for i in self.index:
                s = sum(np.linalg.norm(self.apply(i, j, a), 2) ** 2
                        for j in self.index)
                best = max(best, s / na ** 2)
        return best

    def trace_symmetry_residual(self) -> float:
        """max |τ(η_ij(x)·y) − τ(x·η_ji(y))| over basis pairs."""
        alg = self.algebra
        worst = 0.0
        for i in self.index:
            for j in self.index:
                for x in alg.basis:
                    for y in alg.basis:
                        lhs = alg.trace(self.apply(i, j, x) @ y)
                        rhs = alg.trace(x @ self.apply(j, i, y))
                        worst = max(worst, abs(lhs - rhs))
        return worst


def covariance_from_vectors(vectors, algebra: BaseAlgebra = None,
                            bound: float = None) -> CovarianceMatrix:
    """η_ij(a) = Σ_s ξ_{i,s}* a ξ_{j,s} for vectors ξ_i in the free module A^S.

    A vector is an array of shape (S, d, d) — its components in A — or a
    plain 1-d array of scalars when A = ℂ.
    """
    if algebra is None:
        algebra = BaseAlgebra((1,))
    alg = algebra
    xs = []
    for v in vectors:
        v = np.asarray(v, dtype=complex)
        if v.ndim == 1:
            v = v.reshape(-1, 1, 1)
        if v.shape[1:] != (alg.d, alg.d):
            raise ValueError(f"vector components must be {alg.d}×{alg.d}")
        xs.append(v)
    index = tuple(range(len(xs)))
    entries = {}
    for i in index:
        for j in index:
            cols = []
            for e in alg.basis:
                out = sum(xs[i][s].conj().T @ e @ xs[j][s]
                          for s in range(xs[i].shape[0]))
                cols.append(alg.coords(out))
            entries[(i, j)] = np.stack(cols, axis=1)
    return CovarianceMatrix(alg, index, entries, bound=bound)


def covariance_from_automorphisms(alphas, algebra: BaseAlgebra = None,
                                  tol: float = 1e-10) -> CovarianceMatrix:
    """Diagonal covariance η_i = α_i + α_i⁻¹ from verified automorphisms.

    Each α is a matrix on A-coordinates; multiplicativity, star-compatibility
    and unitality are checked before inverting.
    """
    if algebra is None:
        algebra = BaseAlgebra((1,))
    alg = algebra
    maps = []
    for t, al in enumerate(alphas):
        al = np.asarray(al, dtype=complex)
        if al.shape != (alg.dim, alg.dim):
            raise NotAnAutomorphism(f"α_{t} has shape {al.shape}")

        def act(a, al=al):
            return alg.element(al @ alg.coords(a))

        if np.linalg.norm(act(np.eye(alg.d)) - np.eye(alg.d)) > tol:
            raise NotAnAutomorphism(f"α_{t} is not unital")
        for x in alg.basis:
            for y in alg.basis:
                if np.linalg.norm(act(x @ y) - act(x) @ act(y)) > tol:
                    raise NotAnAutomorphism(f"α_{t} is not multiplicative")
            if np.linalg.norm(act(x.conj().T) - act(x).conj().T) > tol:
                raise NotAnAutomorphism(f"α_{t} does not commute with *")
        if abs(np.linalg.det(al)) < 1e-12:
            raise NotAnAutomorphism(f"α_{t} is not invertible")
        maps.append(al + np.linalg.inv(al))
    entries = {(i, i): m for i, m in enumerate(maps)}
    return CovarianceMatrix(alg, tuple(range(len(maps))), entries)


# ---------------------------------------------------------------------------
# truncated Fock space
# ---------------------------------------------------------------------------

@dataclass
class TruncatedFock:
    eta: CovarianceMatrix
    depth: int
    level_basis: list      # per level: list of (pairs, beta)
    level_dims: tuple      # quotient dimensions
    raw_dims: tuple
    to_onb: list           # per level: raw → ONB matrix
    from_onb: list         # per level: ONB → raw representative
    offsets: list
    total_dim: int

    def left_mult(self, a) -> np.ndarray:
        return self._diagonal_op(a, side="left")

    def right_mult(self, a) -> np.ndarray:
        return self._diagonal_op(a, side="right")

    def _diagonal_op(self, a, side) -> np.ndarray:
        alg = self.eta.algebra
        M = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        for m, basis in enumerate(self.level_basis):
            idx = {key: t for t, key in enumerate(basis)}
            raw = np.zeros((len(basis), len(basis)), dtype=complex)
            for t, (pairs, beta) in enumerate(basis):
                if side == "left" and pairs:
                    (al, i), rest = pairs[0], pairs[1:]
                    prod = alg.coords(a @ alg.basis[al])
                    for c, v in enumerate(prod):
                        if v:
                            raw[idx[(((c, i),) + rest, beta)], t] += v
                else:
                    e = alg.basis[beta]
                    prod = alg.coords(a @ e if side == "left" else e @ a)
                    for c, v in enumerate(prod):
                        if v:
                            raw[idx[(pairs, c)], t] += v
            sl = self.offsets[m]
            M[sl, sl] = self.to_onb[m] @ raw @ self.from_onb[m]
        return M

    def creation(self, i) -> np.ndarray:
        alg = self.eta.algebra
        M = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        for m in range(self.depth):
            basis, up = self.level_basis[m], self.level_basis[m + 1]
            idx = {key: t for t, key in enumerate(up)}
            raw = np.zeros((len(up), len(basis)), dtype=complex)
            for t, (pairs, beta) in enumerate(basis):
                for c, v in enumerate(alg.unit_coords):
                    if v:
                        raw[idx[(((c, i),) + pairs, beta)], t] += v
            M[self.offsets[m + 1], self.offsets[m]] = \
                self.to_onb[m + 1] @ raw @ self.from_onb[m]
        return M

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.total_dim, dtype=complex)
        alg = self.eta.algebra
        raw = np.zeros(len(self.level_basis[0]), dtype=complex)
        for t, (pairs, beta) in enumerate(self.level_basis[0]):
            raw[t] = self.eta.algebra.unit_coords[beta]
        v[self.offsets[0]] = self.to_onb[0] @ raw
        return v

    def ground_component(self, vec) -> np.ndarray:
        """A-element carried by the level-0 part of an ONB vector."""
        alg = self.eta.algebra
        raw = self.from_onb[0] @ vec[self.offsets[0]]
        out = np.zeros((alg.d, alg.d), dtype=complex)
        for t, (pairs, beta) in enumerate(self.level_basis[0]):
            out += raw[t] * alg.basis[beta]
        return out


def build_fock(eta: CovarianceMatrix, depth: int, max_depth: int = 12,
               dim_cap: int = 4096) -> TruncatedFock:
    """Assemble the inner products of 𝒳^{⊠m} for m ≤ depth and quotient."""
    if depth > max_depth:
        raise DimensionCap(f"depth {depth} exceeds the maximum {max_depth}")
    alg = eta.algebra
    nA, nI = alg.dim, len(eta.index)

    level_basis = []
    raw_dims = []
    for m in range(depth + 1):
        size = nA ** (m + 1) * nI ** m
        if sum(raw_dims) + size > dim_cap:
            raise DimensionCap(
                f"raw dimension exceeds the cap {dim_cap} at level {m}")
        pairs_iter = itertools.product(
            itertools.product(range(nA), range(len(eta.index))), repeat=m)
        basis = [(pairs, beta) for pairs in pairs_iter for beta in range(nA)]
        level_basis.append(basis)
        raw_dims.append(size)

    # A-valued Grams per level, shape (s, s, d, d)
    grams = []
    g0 = np.zeros((nA, nA, alg.d, alg.d), dtype=complex)
    for b in range(nA):
        for c in range(nA):
            g0[b, c] = alg.basis[b].conj().T @ alg.basis[c]
    grams.append(g0)
    for m in range(1, depth + 1):
        basis = level_basis[m]
        down = level_basis[m - 1]
        didx = {key: t for t, key in enumerate(down)}
        s = len(basis)
        G = np.zeros((s, s, alg.d, alg.d), dtype=complex)
        prev = grams[m - 1]
        for t, (pu, bu) in enumerate(basis):
            (au, iu), ru = pu[0], pu[1:]
            urow = didx[(ru, bu)]
            for tt, (pv, bv) in enumerate(basis):
                (av, iv), rv = pv[0], pv[1:]
                K = eta.apply(eta.index[iu], eta.index[iv],
                              alg.basis[au].conj().T @ alg.basis[av])
                first = rv[0][0] if rv else bv
                prod = alg.coords(K @ alg.basis[first])
                for c, coeff in enumerate(prod):
                    if not coeff:
                        continue
                    if rv:
                        key = (((c, rv[0][1]),) + rv[1:], bv)
                    else:
                        key = ((), c)
                    G[t, tt] += coeff * prev[urow, didx[key]]
        grams.append(G)

    to_onb, from_onb, dims = [], [], []
    for m in range(depth + 1):
        Q = np.einsum("stii->st", grams[m]) / alg.d  # scalar Gram via τ
        Q = (Q + Q.conj().T) / 2
        w, U = np.linalg.eigh(Q)
        thresh = 1e-10 * max(float(np.max(np.abs(w))), 1e-300)
        keep = w > thresh
        S = (np.sqrt(w[keep])[:, None] * U[:, keep].conj().T)
        P = U[:, keep] / np.sqrt(w[keep])[None, :]
        to_onb.append(S)
        from_onb.append(P)
        dims.append(int(np.sum(keep)))

    offsets = []
    off = 0
    for dmn in dims:
        offsets.append(slice(off, off + dmn))
        off += dmn
    return TruncatedFock(eta, depth, level_basis, tuple(dims),
                         tuple(raw_dims), to_onb, from_onb, offsets, off)


@dataclass
class SemicircularFamily:
    fock: TruncatedFock
    creations: dict
    ops: dict

    def X(self, i) -> np.ndarray:
        return self.ops[i]


def semicircular_ops(fock: TruncatedFock) -> SemicircularFamily:
    creations = {i: fock.creation(i) for i in fock.eta.index}
    ops = {i: T + T.conj().T for i, T in creations.items()}
    return SemicircularFamily(fock, creations, ops)


def vacuum_expectation(fam: SemicircularFamily, word) -> np.ndarray:
    """E(w) = ⟨wΩ, Ω⟩ ∈ A for a word in the X_i and left factors from A.

    Word letters: ("X", i) or a d×d matrix of A.  Exact when the number of
    X letters is at most 2·depth; longer words are refused.
    """
    fock = fam.fock
    nx = sum(1 for w in word if isinstance(w, tuple) and w[0] == "X")
    if nx > 2 * fock.depth:
        raise WordTooLong(
            f"{nx} semicircular letters exceed 2·depth = {2 * fock.depth}")
    v = fock.vacuum()
    for w in reversed(word):
        if isinstance(w, tuple) and w[0] == "X":
            v = fam.ops[w[1]] @ v
        else:
            v = fock.left_mult(np.asarray(w, dtype=complex)) @ v
    return fock.ground_component(v)


def catalan(m: int) -> int:
    cs = [1]
    for n in range(m):
        cs.append(sum(cs[k] * cs[n - k] for k in range(n + 1)))
    return cs[m]


# ---------------------------------------------------------------------------
# faithfulness / ind-criterion ingredients
# ---------------------------------------------------------------------------

def _kraus_vectors(eta: CovarianceMatrix) -> list:
    """Vectors ξ_i in a free module with η_ij(a) = Σ_s ξ_{i,s}* a ξ_{j,s}.

    Only available for single-block A (ℂ or M_k), via the eigenvectors of
    the Choi matrix of η viewed as a map M_k → M_k⊗M_I.
    """
    alg = eta.algebra
    if len(alg.blocks) != 1:
        return None
    k, nI = alg.d, len(eta.index)
    choi = np.zeros((k * k * nI, k * k * nI), dtype=complex)
    # Choi of Φ: M_k → M_{kI}, C = Σ_pq E_pq ⊗ Φ(E_pq)
    for p in range(k):
        for q in range(k):
            e = np.zeros((k, k), dtype=complex)
            e[p, q] = 1.0
            blk = np.zeros((k * nI, k * nI), dtype=complex)
            for x, i in enumerate(eta.index):
                for y, j in enumerate(eta.index):
                    blk[x * k:(x + 1) * k, y * k:(y + 1) * k] = \
                        eta.apply(i, j, e)
            choi[p * k * nI:(p + 1) * k * nI,
                 q * k * nI:(q + 1) * k * nI] = blk
    w, U = np.linalg.eigh((choi + choi.conj().T) / 2)
    keep = w > 1e-10 * max(float(np.max(np.abs(w))), 1e-300)
    vecs = []
    for i in range(len(eta.index)):
        comps = []
        for s in np.nonzero(keep)[0]:
            v = (np.sqrt(w[s]) * U[:, s]).reshape(k, nI, k)
            # with W_s^{(i)}[o,p] = v[p,i,o] the Choi gives
            # η_ij(a) = Σ_s W^{(i)} a W^{(j)†}, so ξ_{i,s} = W_s^{(i)†}
            comps.append(v[:, i, :].conj())
        vecs.append(np.stack(comps, axis=0))
    return vecs


def ind_faithfulness_probe(eta: CovarianceMatrix, depth: int = 4,
                           samples: int = 20, seed: int = 0) -> dict:
    """Checkable ingredients of the ind-inclusion criterion for finite A.

    (a) trace symmetry of η against the canonical trace; (b) kernel probe:
    sampled polynomials with E(p*p) ≈ 0 must satisfy pΩ ≈ 0 at truncation;
    (c) block decomposition of the corner correspondences A⊗_{η_ii}A and,
    for single-block A, the Corollary's vector presentation round-trip.
    """
    from .inclusion import HilbertSpaceObject, commutant_blocks, realize

    alg = eta.algebra
    sym = eta.trace_symmetry_residual()
    fock = build_fock(eta, depth)
    fam = semicircular_ops(fock)
    rng = np.random.default_rng(seed)

    kernel_failures = 0
    for _ in range(samples):
        # random polynomial of X-degree ≤ depth acting on the vacuum
        p = np.zeros((fock.total_dim, fock.total_dim), dtype=complex)
        for _ in range(3):
            term = np.eye(fock.total_dim, dtype=complex)
            for _ in range(int(rng.integers(0, depth + 1))):
                i = eta.index[rng.integers(len(eta.index))]
                term = fam.ops[i] @ term
            term = fock.left_mult(alg.random(rng)) @ term
            p = p + (rng.normal() + 1j * rng.normal()) * term
        v = p @ fock.vacuum()
        ee = fock.ground_component(p.conj().T @ p @ fock.vacuum())
        if abs(alg.trace(ee)) < 1e-12 and np.linalg.norm(v) > 1e-8:
            kernel_failures += 1

    corner_dims = {}
    for i in eta.index:
        # scalar Gram of A⊗_{η_ii}A: ⟨a⊗b, c⊗d⟩ = τ(b* η_ii(a*c) d)
        n = alg.dim
        Q = np.zeros((n * n, n * n), dtype=complex)
        for (ai, a), (bi, b) in itertools.product(enumerate(alg.basis),
                                                  repeat=2):
            for (ci, c), (di, dd) in itertools.product(enumerate(alg.basis),
                                                       repeat=2):
                val = alg.trace(b.conj().T
                                @ eta.apply(i, i, a.conj().T @ c) @ dd)
                Q[ai * n + bi, ci * n + di] = val
        w = np.linalg.eigvalsh((Q + Q.conj().T) / 2)
        thresh = 1e-10 * max(float(np.max(np.abs(w))), 1e-300)
        corner_dims[i] = int(np.sum(w > thresh))
    hobj = HilbertSpaceObject({f"i{i}": h for i, h in corner_dims.items()})
    blocks = commutant_blocks(realize(hobj)) if hobj.dims else None

    vecs = _kraus_vectors(eta)
    roundtrip = None
    if vecs is not None:
        eta2 = covariance_from_vectors(vecs, alg)
        roundtrip = max(
            float(np.max(np.abs(eta2.entries[k] - eta.entries[k])))
            for k in eta.entries)

    return {
        "trace_symmetry_residual": sym,
        "trace_symmetric": sym < 1e-12,
        "kernel_failures": kernel_failures,
        "samples": samples,
        "corner_dims": corner_dims,
        "blocks": blocks.blocks if blocks else None,
        "vector_presentation_residual": roundtrip,
        "verdict": "criterion ingredients verified (finite A)"
        if kernel_failures == 0 else "kernel probe failed",
    }
