from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.sparse.linalg import eigsh

from hyperdual.errors import DependentEdges, DimensionMismatch, TooLarge
from hyperdual.hypergraph import Hypergraph, independent_set, orthogonal
from hyperdual.lattice_gen import LatticeSpec, build_graph, toric_code_hypergraph
from hyperdual.pauli_ham import (
    PauliSum,
    PauliTerm,
    StateVector,
    apply,
    as_linear_operator,
    commutes,
    css_ground_energy,
    css_hamiltonian,
    css_state,
    dual_model,
    format_pauli_sum,
    hamiltonian_terms_commute,
    ising_like_hamiltonian,
    parity,
    perturbed_css_hamiltonian,
    sector_projector_apply,
    stabilizer_terms,
    to_dense,
)

from .conftest import oracle_matrix


def random_pauli_sum(rng: np.random.Generator, k: int, n_terms: int) -> PauliSum:
    terms = []
    for _ in range(n_terms):
        x = int(rng.integers(0, 1 << k))
        z = int(rng.integers(0, 1 << k)) & ~x
        terms.append(PauliTerm(k, x, z, float(rng.normal())))
    return PauliSum.build(k, terms, float(rng.normal()))


def test_commutes():
    xx = PauliTerm.x(2, [0, 1])
    zz = PauliTerm.z(2, [0, 1])
    assert commutes(xx, zz)
    assert not commutes(PauliTerm.x(1, [0]), PauliTerm.z(1, [0]))
    with pytest.raises(DimensionMismatch):
        commutes(PauliTerm.x(1, [0]), PauliTerm.x(2, [0]))


def test_term_validation():
    with pytest.raises(ValueError):
        PauliTerm(2, 0b01, 0b01, 1.0)
    with pytest.raises(DimensionMismatch):
        PauliTerm(2, 0b100, 0, 1.0)


def test_build_merges_equal_masks_and_folds_identity():
    s = PauliSum.build(2, [PauliTerm.x(2, [0], 1.0), PauliTerm.x(2, [0], 0.5), PauliTerm(2, 0, 0, 2.0)], 1.0)
    assert s.as_dict() == {(1, 0): 1.5}
    assert s.constant == 3.0
    # zero coefficients survive merging
    assert PauliSum.build(1, [PauliTerm.x(1, [0], 1.0), PauliTerm.x(1, [0], -1.0)]).as_dict() == {(1, 0): 0.0}


def test_parity():
    values = np.arange(64, dtype=np.int64)
    expected = [bin(v).count("1") % 2 for v in range(64)]
    assert parity(values).tolist() == expected
    assert parity(np.array([(1 << 62) | 1], dtype=np.int64)).tolist() == [0]


def test_apply_basic_actions():
    z1 = PauliSum.build(1, [PauliTerm.z(1, [0])])
    zero = StateVector.basis(1, 0)
    assert np.allclose(apply(z1, zero).amplitudes, zero.amplitudes)
    xx = PauliSum.build(2, [PauliTerm.x(2, [0, 1])])
    assert np.allclose(apply(xx, StateVector.basis(2, 0)).amplitudes, StateVector.basis(2, 3).amplitudes)
    with pytest.raises(DimensionMismatch):
        apply(xx, zero)


def test_apply_matches_kronecker_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        k = int(rng.integers(1, 9))
        hsum = random_pauli_sum(rng, k, int(rng.integers(1, 12)))
        s = StateVector.random(k, seed=int(rng.integers(1 << 30)))
        expected = oracle_matrix(hsum) @ s.amplitudes
        assert np.max(np.abs(apply(hsum, s).amplitudes - expected)) <= 1e-12
        assert np.max(np.abs(to_dense(hsum) - oracle_matrix(hsum))) <= 1e-12


def test_linear_operator_with_eigsh():
    rng = np.random.default_rng(5)
    hsum = random_pauli_sum(rng, 8, 20)
    w = eigsh(as_linear_operator(hsum), k=1, which="SA")[0]
    assert w[0] == pytest.approx(np.linalg.eigvalsh(oracle_matrix(hsum))[0], abs=1e-8)


def test_to_dense_limit():
    with pytest.raises(TooLarge):
        to_dense(PauliSum.build(13, [PauliTerm.z(13, [0])]))


def test_css_hamiltonian_examples(loop1, single_edge2, sample5):
    assert css_hamiltonian(loop1, orthogonal(loop1), 0.7).as_dict() == {(1, 0): -0.7}
    assert css_hamiltonian(single_edge2, orthogonal(single_edge2), 1.0).as_dict() == {(3, 0): -1.0, (0, 3): -1.0}
    h = css_hamiltonian(sample5, orthogonal(sample5), 1.0)
    assert len(h.x_terms()) == 4
    assert [(t.z_mask, t.coeff) for t in h.z_terms()] == [(0b10110, -1.0)]
    assert hamiltonian_terms_commute(h)
    with pytest.raises(ValueError):
        css_hamiltonian(sample5, orthogonal(sample5), 0.0)
    with pytest.raises(DimensionMismatch):
        css_hamiltonian(sample5, orthogonal(single_edge2), 1.0)


def test_css_hamiltonian_uses_independent_edges_only():
    tc = toric_code_hypergraph(build_graph(LatticeSpec("chain", (4,))))
    h = css_hamiltonian(tc, orthogonal(tc), 1.0)
    assert len(h.x_terms()) == len(independent_set(tc).edge_indices) == 3


def test_perturbed_css_hamiltonian(loop1, single_edge2, sample5):
    hstar = orthogonal(sample5)
    assert perturbed_css_hamiltonian(sample5, hstar, 1.0, 0.0).as_dict() == {
        **css_hamiltonian(sample5, hstar, 1.0).as_dict(),
        **{(0, 1 << v): 0.0 for v in range(5)},
    }
    j, f = 0.8, 0.6
    w = np.linalg.eigvalsh(to_dense(perturbed_css_hamiltonian(loop1, orthogonal(loop1), j, f)))
    assert w == pytest.approx([-math.hypot(j, f), math.hypot(j, f)], abs=1e-12)
    # field terms are Z-type, so the B sector is preserved
    pert = perturbed_css_hamiltonian(sample5, hstar, 1.0, 0.3)
    assert hamiltonian_terms_commute(pert, stabilizer_terms(hstar))
    with pytest.raises(ValueError):
        perturbed_css_hamiltonian(sample5, hstar, 1.0, -0.1)


def test_ising_like_hamiltonian():
    h = Hypergraph.from_edges(3, [[0, 1], [1, 2]])
    s = ising_like_hamiltonian(h, a=2.0, b=0.5, shift=-1.0)
    assert s.as_dict() == {(0b011, 0): -2.0, (0b110, 0): -2.0, (0, 1): -0.5, (0, 2): -0.5, (0, 4): -0.5}
    assert s.constant == -1.0
    empty = ising_like_hamiltonian(Hypergraph.from_edges(2, []), a=1.0, b=0.3, shift=4.0)
    assert empty.as_dict() == {(0, 1): -0.3, (0, 2): -0.3}
    assert empty.constant == 4.0


def test_dual_model_examples(loop1, single_edge2):
    assert dual_model(loop1, 1.3, 0.4).as_dict() == {(1, 0): -0.4, (0, 1): -1.3}
    assert dual_model(loop1, 1.3, 0.4).constant == 0.0
    d = dual_model(single_edge2, 1.0, 0.3)
    assert d.as_dict() == {(1, 0): pytest.approx(-0.6), (0, 1): -1.0}
    assert d.constant == -1.0
    j, f = 1.0, 0.3
    w = np.linalg.eigvalsh(to_dense(d))
    root = math.sqrt(j * j + 4 * f * f)
    assert w == pytest.approx([-j - root, -j + root], abs=1e-12)


def test_dual_model_term_counts(sample5):
    d = dual_model(sample5, 1.0, 0.5)
    assert d.num_qubits == 4
    assert len(d.x_terms()) == 5
    assert len(d.z_terms()) == 4


def test_dual_model_rejects_dependent_edges():
    tc = toric_code_hypergraph(build_graph(LatticeSpec("chain", (4,))))
    with pytest.raises(DependentEdges) as info:
        dual_model(tc, 1.0, 0.5)
    assert info.value.dependent == (3,)


def test_dual_model_counts_isolated_vertices_in_the_shift():
    h = Hypergraph.from_edges(3, [[0, 1]])
    assert dual_model(h, 1.0, 0.25).constant == pytest.approx(-1.0 * 2 - 0.25)


def test_sector_projector():
    hstar = Hypergraph.from_edges(2, [[0, 1]])
    zero = StateVector.basis(2, 0)
    assert np.allclose(sector_projector_apply(hstar, zero).amplitudes, zero.amplitudes)
    assert sector_projector_apply(hstar, StateVector.basis(2, 1)).norm() == 0.0
    s = StateVector.random(2, seed=3)
    once = sector_projector_apply(hstar, s)
    twice = sector_projector_apply(hstar, once)
    assert np.allclose(once.amplitudes, twice.amplitudes)


def test_css_state_is_a_ground_state(sample5):
    tc = toric_code_hypergraph(build_graph(LatticeSpec("square", (2, 2))))
    for h in (sample5, tc):
        hstar = orthogonal(h)
        ham = css_hamiltonian(h, hstar, 0.9)
        psi = css_state(h)
        assert psi.norm() == pytest.approx(1.0, abs=1e-12)
        energy = psi.overlap(apply(ham, psi)).real
        assert energy == pytest.approx(css_ground_energy(h, hstar, 0.9), abs=1e-12)
        assert np.linalg.eigvalsh(to_dense(ham))[0] == pytest.approx(energy, abs=1e-9)


def test_format_pauli_sum(single_edge2):
    text = format_pauli_sum(css_hamiltonian(single_edge2, orthogonal(single_edge2), 1.0))
    assert text == "-1 1 2 |\n-1 | 1 2\nconst 0\n"


def test_relabel():
    s = PauliSum.build(3, [PauliTerm.x(3, [0, 1], -1.0), PauliTerm.z(3, [2], 0.5)])
    moved = s.relabel([2, 0, 1])
    assert moved.as_dict() == {(0b101, 0): -1.0, (0, 0b010): 0.5}
    with pytest.raises(DimensionMismatch):
        s.relabel([0, 0, 1])


def test_state_vector_validation():
    with pytest.raises(DimensionMismatch):
        StateVector(2, np.ones(3))
    with pytest.raises(ValueError):
        StateVector(1, np.zeros(2)).normalized()
