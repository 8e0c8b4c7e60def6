import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from utcat.algebra_object import group_algebra_object
from utcat.annulus import build_annulus, z_state
from utcat.errors import NotAState, NotSemisimpleInput
from utcat.fixtures import fibonacci, ising, vec_zn
from utcat.inclusion import (
    HilbertSpaceObject,
    boxtimes,
    commutant_blocks,
    corrupt_correspondence,
    discreteness_report,
    gns_object,
    hom_count,
    ind_check,
    realize,
)


def test_hilbert_space_object_drops_zeros_and_rejects_negatives():
    h = HilbertSpaceObject({"1": 0, "tau": 3})
    assert h.dims == {"tau": 3} and h.total() == 3
    with pytest.raises(ValueError):
        HilbertSpaceObject({"tau": -1})


def test_realize_single_block():
    corr = realize(HilbertSpaceObject({"tau": 3}))
    assert corr.total_dim == 3
    assert corr.graded_dims() == {"tau": 3}
    bd = commutant_blocks(corr)
    assert bd.blocks == (("tau", 3),) and bd.commutant_dim == 9


def test_realize_base_algebra_itself():
    # ℋ = δ_1 realizes to A with commutant Z(A) = ℂ
    for k in (1, 2):
        corr = realize(HilbertSpaceObject({"1": 1}), base_dim=k)
        bd = commutant_blocks(corr)
        assert bd.blocks == (("1", 1),)


def test_projections_resolve_identity():
    corr = realize(HilbertSpaceObject({"a": 2, "b": 1}), base_dim=2,
                   rng=np.random.default_rng(3))
    total = sum(corr.projections.values())
    assert np.max(np.abs(total - np.eye(corr.total_dim))) < 1e-12


def test_two_block_commutant():
    # K₁⊗ℂ² ⊕ K₂⊗ℂ → commutant M₂ ⊕ ℂ
    corr = realize(HilbertSpaceObject({"K1": 2, "K2": 1}),
                   rng=np.random.default_rng(7))
    bd = commutant_blocks(corr)
    assert bd.dims() == {"K1": 2, "K2": 1} and bd.commutant_dim == 5


@pytest.mark.parametrize("seed", range(10))
def test_randomized_recovery(seed):
    rng = np.random.default_rng(seed)
    nlab = rng.integers(1, 5)
    dims = {f"K{i}": int(rng.integers(1, 6)) for i in range(nlab)}
    h = HilbertSpaceObject(dims)
    corr = realize(h, rng=rng)
    assert commutant_blocks(corr).dims() == h.dims
    assert ind_check(corr)["verdict"] == "IND"


def test_hom_count_oracles():
    h1 = HilbertSpaceObject({"a": 2, "b": 3})
    assert hom_count(h1, h1, cross_check=True) == 13
    d1 = HilbertSpaceObject({"1": 1})
    assert hom_count(d1, d1, cross_check=True) == 1
    disjoint = HilbertSpaceObject({"c": 4})
    assert hom_count(h1, disjoint, cross_check=True) == 0
    mixed = HilbertSpaceObject({"a": 1, "c": 2})
    assert hom_count(h1, mixed, cross_check=True) == 2


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3),
       st.integers(0, 3))
@settings(max_examples=25, deadline=None)
def test_hom_count_matches_solve(a1, b1, a2, b2):
    h1 = HilbertSpaceObject({"a": a1, "b": b1})
    h2 = HilbertSpaceObject({"a": a2, "b": b2})
    # cross_check raises if the Schur count and the explicit solve disagree
    assert hom_count(h1, h2, cross_check=True) == a1 * a2 + b1 * b2


def test_boxtimes_fusion_arithmetic():
    fib = fibonacci()
    ha = HilbertSpaceObject({"1": 1, "tau": 2})
    hb = HilbertSpaceObject({"tau": 3})
    # (1 + 2τ)·3τ = 3τ + 6τ² = 6·1 + 9τ
    assert boxtimes(ha, hb, fib.ring).dims == {"1": 6, "tau": 9}
    isg = ising()
    hs = HilbertSpaceObject({"sigma": 2})
    # 2σ · 2σ = 4(1 + ψ)
    assert boxtimes(hs, hs, isg.ring).dims == {"1": 4, "psi": 4}


def test_realize_is_tensor_compatible():
    rng = np.random.default_rng(11)
    fib = fibonacci()
    for _ in range(5):
        h1 = HilbertSpaceObject({X: int(rng.integers(0, 4))
                                 for X in fib.ring.labels})
        h2 = HilbertSpaceObject({X: int(rng.integers(0, 4))
                                 for X in fib.ring.labels})
        if not h1.dims or not h2.dims:
            continue
        prod = boxtimes(h1, h2, fib.ring)
        assert realize(prod).graded_dims() == prod.dims


def test_corrupted_correspondence_is_not_ind():
    corr = realize(HilbertSpaceObject({"a": 3, "b": 2}),
                   rng=np.random.default_rng(5))
    bad = corrupt_correspondence(corr)
    with pytest.raises(NotSemisimpleInput):
        commutant_blocks(bad)
    verdict = ind_check(bad)
    assert verdict["verdict"] == "NOT-IND"
    assert "star-closed" in verdict["obstruction"]


def test_corrupt_needs_multiplicity():
    corr = realize(HilbertSpaceObject({"a": 1}))
    with pytest.raises(ValueError):
        corrupt_correspondence(corr)


# -- GNS objects --------------------------------------------------------------

def test_gns_group_object_faithful_state():
    ga = group_algebra_object(vec_zn(3))
    h, quotients = gns_object(ga, np.array([1.0]))
    assert h.dims == {"g0": 1, "g1": 1, "g2": 1}
    assert all(q.shape == (1, 1) for q in quotients.values())


def test_gns_character_state_kills_a_summand():
    ann = build_annulus(vec_zn(2))
    h_trace, _ = gns_object(ann, np.array([1.0, 0.0]))
    assert h_trace.dims == {"g0": 2}
    h_char, _ = gns_object(ann, np.array([1.0, 1.0]))
    assert h_char.dims == {"g0": 1}


def test_gns_rejects_non_states():
    ann = build_annulus(vec_zn(2))
    with pytest.raises(NotAState):
        gns_object(ann, np.array([2.0, 0.0]))
    with pytest.raises(NotAState):
        gns_object(ann, np.array([1.0, 3.0]))


# -- discreteness -------------------------------------------------------------

ALL_BRAIDED = {
    "fib": fibonacci,
    "ising": ising,
    "vec_z2": lambda: vec_zn(2),
    "vec_z3": lambda: vec_zn(3),
}


@pytest.mark.parametrize("name", sorted(ALL_BRAIDED))
def test_discreteness_chain_on_annulus_fixtures(name):
    ann = build_annulus(ALL_BRAIDED[name]())
    omega = z_state(ann)["omega"]
    rep = discreteness_report(ann, omega)
    assert rep["chain_ok"]
    assert rep["discrete"] and rep["pqr"] and rep["ind"]


def test_discreteness_chain_on_group_objects():
    for n in (2, 3, 5):
        ga = group_algebra_object(vec_zn(n))
        rep = discreteness_report(ga, np.array([1.0]))
        assert rep["discrete"] and rep["pqr"] and rep["ind"]
        assert rep["gns_dims"] == {f"g{k}": 1 for k in range(n)}


def test_corrupted_report_breaks_only_ind():
    ann = build_annulus(vec_zn(2))
    rep = discreteness_report(ann, np.array([1.0, 0.0]), corrupt=True)
    assert rep["discrete"] and rep["pqr"] and not rep["ind"]
    assert rep["verdict"]["verdict"] == "NOT-IND"
