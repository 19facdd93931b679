from __future__ import annotations

import math

import numpy as np
import pytest

from hyperdual.errors import NotConverged, SectorNotInvariant, TooLarge
from hyperdual.hypergraph import Hypergraph, orthogonal, rank
from hyperdual.lattice_gen import generate, selfdual_chain
from hyperdual.pauli_ham import (
    PauliSum,
    PauliTerm,
    ising_like_hamiltonian,
    perturbed_css_hamiltonian,
)
from hyperdual.spectra import (
    ParametrizedModel,
    eig_dense,
    fidelity_susceptibility,
    ground_lanczos,
    sector_spectrum,
)

from .conftest import random_hypergraph


def tfim_ground_energy(n: int, g: float) -> float:
    """Free-fermion ground energy of -sum X_i X_{i+1} - g sum Z_i on a ring (even-parity sector)."""
    ks = (2 * np.arange(n) + 1) * np.pi / n
    return float(-np.sum(np.sqrt(1 + g * g - 2 * g * np.cos(ks))))


def chain_model(n: int) -> ParametrizedModel:
    h = selfdual_chain(n)
    return ParametrizedModel(f"chain{n}", lambda r: ising_like_hamiltonian(h, a=1.0, b=r), sector=orthogonal(h))


def test_eig_dense_examples():
    assert eig_dense(PauliSum.build(1, [PauliTerm.x(1, [0], -1.0)])).eigenvalues == pytest.approx([-1, 1])
    j = 0.7
    xz = PauliSum.build(2, [PauliTerm.x(2, [0, 1], -j), PauliTerm.z(2, [0, 1], -j)])
    assert eig_dense(xz).eigenvalues == pytest.approx([-2 * j, 0, 0, 2 * j], abs=1e-12)
    tfim2 = PauliSum.build(2, [PauliTerm.x(2, [0, 1], -1.0), PauliTerm.z(2, [0], -1.0), PauliTerm.z(2, [1], -1.0)])
    result = eig_dense(tfim2)
    assert result.ground_energy == pytest.approx(-math.sqrt(5), abs=1e-12)
    assert result.residual < 1e-12
    with pytest.raises(TooLarge):
        eig_dense(PauliSum.build(13, []))


def acceptance_models():
    sample5 = Hypergraph.from_edges(5, [[0], [0, 1, 3, 4], [1, 2], [2, 4]])
    tc = generate("square:2x2:periodic")
    yield perturbed_css_hamiltonian(sample5, orthogonal(sample5), 1.0, 0.5)
    yield perturbed_css_hamiltonian(tc, orthogonal(tc), 1.0, 0.0)
    yield perturbed_css_hamiltonian(tc, orthogonal(tc), 1.0, 0.7)
    yield ising_like_hamiltonian(selfdual_chain(10), a=1.0, b=0.9)
    rng = np.random.default_rng(17)
    for _ in range(6):
        h = random_hypergraph(rng, 10)
        yield ising_like_hamiltonian(h, a=float(rng.uniform(0.2, 2.0)), b=float(rng.uniform(0.2, 2.0)))


def test_lanczos_agrees_with_dense_lowest_three():
    for hsum in acceptance_models():
        dense = eig_dense(hsum).eigenvalues[:3]
        result = ground_lanczos(hsum, k=3)
        assert result.converged
        assert result.eigenvalues == pytest.approx(dense, abs=1e-9)
        assert result.residual <= 1e-10


def test_lanczos_finds_degenerate_levels():
    hsum = PauliSum.build(2, [PauliTerm.x(2, [0, 1], -1.0), PauliTerm.z(2, [0, 1], -1.0)])
    assert ground_lanczos(hsum, k=3).eigenvalues == pytest.approx([-2, 0, 0], abs=1e-10)
    # k larger than the space is clamped
    assert len(ground_lanczos(hsum, k=10).eigenvalues) == 4


def test_lanczos_tfim_ring_matches_free_fermions():
    h = selfdual_chain(12)
    for g in (0.5, 1.0, 1.5):
        hsum = ising_like_hamiltonian(h, a=1.0, b=g)
        assert ground_lanczos(hsum).ground_energy == pytest.approx(tfim_ground_energy(12, g), abs=1e-9)
        in_sector = ground_lanczos(hsum, sector=orthogonal(h)).ground_energy
        assert in_sector == pytest.approx(tfim_ground_energy(12, g), abs=1e-9)


def test_lanczos_constant_operator():
    result = ground_lanczos(PauliSum.build(3, [], 2.5))
    assert result.eigenvalues.tolist() == pytest.approx([2.5])
    assert result.converged


def test_lanczos_is_variational_and_seeded():
    rng = np.random.default_rng(8)
    hsum = ising_like_hamiltonian(random_hypergraph(rng, 9), a=1.0, b=0.6)
    result = ground_lanczos(hsum, seed=123)
    assert result.seed == 123
    for _ in range(20):
        v = rng.standard_normal(hsum.dimension)
        assert result.ground_energy <= v @ hsum.matvec(v) / (v @ v) + 1e-12
    again = ground_lanczos(hsum, seed=123)
    assert np.array_equal(again.eigenvalues, result.eigenvalues)


def test_lanczos_reports_non_convergence(capsys):
    result = ground_lanczos(ising_like_hamiltonian(selfdual_chain(8), a=1.0, b=1.0), max_iter=2)
    assert not result.converged
    assert "[LANCZOS]" in capsys.readouterr().err


@pytest.mark.parametrize("kwargs", [{"k": 0}, {"max_iter": 0}, {"max_iter": -3}])
def test_lanczos_rejects_bad_arguments(kwargs):
    with pytest.raises(ValueError):
        ground_lanczos(ising_like_hamiltonian(selfdual_chain(4), a=1.0, b=1.0), **kwargs)


def test_sector_spectrum_examples(sample5):
    hstar = Hypergraph.from_edges(2, [[0, 1]])
    hsum = PauliSum.build(2, [PauliTerm.z(2, [0], -1.0), PauliTerm.z(2, [1], -1.0)])
    assert sector_spectrum(hsum, hstar).eigenvalues == pytest.approx([-2, 2])

    fstar = orthogonal(sample5)
    pert = perturbed_css_hamiltonian(sample5, fstar, 1.0, 0.7)
    sector = sector_spectrum(pert, fstar).eigenvalues
    assert len(sector) == 2 ** rank(sample5) == 16
    full = list(eig_dense(pert).eigenvalues)
    for e in sector:
        match = min(range(len(full)), key=lambda i: abs(full[i] - e))
        assert abs(full[match] - e) <= 1e-9
        full.pop(match)


def test_sector_dimension_is_two_to_the_rank():
    rng = np.random.default_rng(21)
    for _ in range(20):
        h = random_hypergraph(rng, 8)
        hstar = orthogonal(h)
        pert = perturbed_css_hamiltonian(h, hstar, 1.0, 0.4)
        assert len(sector_spectrum(pert, hstar).eigenvalues) == 2 ** rank(h)


def test_sector_must_be_invariant():
    hstar = Hypergraph.from_edges(2, [[0, 1]])
    with pytest.raises(SectorNotInvariant):
        sector_spectrum(PauliSum.build(2, [PauliTerm.x(2, [0])]), hstar)
    with pytest.raises(SectorNotInvariant):
        ground_lanczos(PauliSum.build(2, [PauliTerm.x(2, [0])]), sector=hstar)


def test_spectrum_is_invariant_under_relabeling():
    rng = np.random.default_rng(4)
    for _ in range(10):
        h = random_hypergraph(rng, 7)
        hsum = ising_like_hamiltonian(h, a=0.8, b=1.1)
        perm = [int(q) for q in rng.permutation(h.num_vertices)]
        assert eig_dense(hsum.relabel(perm)).eigenvalues == pytest.approx(eig_dense(hsum).eigenvalues, abs=1e-10)


def test_fidelity_susceptibility_symmetric_in_delta():
    model = chain_model(8)
    forward = fidelity_susceptibility(model, 0.9, 1e-3)
    backward = fidelity_susceptibility(model, 0.9 + 1e-3, -1e-3)
    assert forward > 0
    assert forward == pytest.approx(backward, abs=1e-6)


def test_fidelity_susceptibility_vanishes_deep_in_the_paramagnet():
    model = chain_model(8)
    assert fidelity_susceptibility(model, 50.0) < 1e-3
    assert fidelity_susceptibility(model, 1.0) > 100 * fidelity_susceptibility(model, 50.0)


def test_fidelity_susceptibility_errors():
    model = chain_model(6)
    with pytest.raises(ValueError):
        fidelity_susceptibility(model, 1.0, 0.0)
    with pytest.raises(NotConverged) as info:
        fidelity_susceptibility(model, 1.0, max_iter=2)
    assert info.value.result is not None
    assert not info.value.result.converged


def test_gap_property():
    result = eig_dense(PauliSum.build(1, [PauliTerm.x(1, [0], -1.0)]))
    assert result.gap == pytest.approx(2.0)
    assert math.isnan(ground_lanczos(PauliSum.build(1, [], 1.0), k=1).gap)
