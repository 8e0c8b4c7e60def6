"""Convergence of truncated semicircular moments as the Fock depth grows.

With η = 1 the 2m-th vacuum moment is the m-th Catalan number once the
depth reaches m; the scan makes the exactness threshold visible and also
tracks a 2×2 automorphism-induced covariance for comparison.  Run:

    python3 scripts/fock_depth_convergence.py --max-depth 8
"""

import argparse
from dataclasses import dataclass

import numpy as np

from utcat.semicircular import (
    BaseAlgebra,
    build_fock,
    catalan,
    covariance_from_automorphisms,
    covariance_from_vectors,
    semicircular_ops,
    vacuum_expectation,
)


@dataclass
class DepthScanConfig:
    max_depth: int = 8
    moment: int = 8          # even moment 2m with 2m = moment


def scalar_scan(cfg: DepthScanConfig):
    m = cfg.moment // 2
    target = catalan(m)
    print(f"η = 1, moment E(X^{cfg.moment}), exact value C_{m} = {target}")
    for depth in range(1, cfg.max_depth + 1):
        eta = covariance_from_vectors([np.array([1.0])])
        fam = semicircular_ops(build_fock(eta, depth))
        if 2 * depth < cfg.moment:
            print(f"  depth {depth:>2}: word too long for exactness, skipped")
            continue
        val = vacuum_expectation(fam, [("X", 0)] * cfg.moment)[0, 0].real
        print(f"  depth {depth:>2}: {val:.12f}  (err {abs(val - target):.1e})")


def automorphism_scan(cfg: DepthScanConfig):
    alg = BaseAlgebra((2,))
    th = 0.5
    u = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]],
                 dtype=complex)
    ad = np.zeros((4, 4), dtype=complex)
    for c, e in enumerate(alg.basis):
        ad[:, c] = alg.coords(u @ e @ u.conj().T)
    eta = covariance_from_automorphisms([ad], alg)
    print("\nη = Ad(u) + Ad(u)⁻¹ on M₂, trace of E(X^4):")
    # 2×2 base with one index: raw level dims grow 16-fold per level, so the
    # default dimension cap is reached just past depth 4
    for depth in range(2, min(cfg.max_depth, 4) + 1):
        fam = semicircular_ops(build_fock(eta, depth))
        val = alg.trace(vacuum_expectation(fam, [("X", 0)] * 4)).real
        print(f"  depth {depth:>2}: {val:.12f}  "
              f"(level dims {fam.fock.level_dims})")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-depth", type=int, default=8)
    ap.add_argument("--moment", type=int, default=8)
    args = ap.parse_args()
    cfg = DepthScanConfig(max_depth=args.max_depth, moment=args.moment)
    scalar_scan(cfg)
    automorphism_scan(cfg)
