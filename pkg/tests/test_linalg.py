import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hhsynth.errors import ShapeError, SizeError
from hhsynth.linalg import (
    as_matrix,
    format_matrix,
    frobenius_distance,
    ginibre_matrix,
    haar_random_unitary,
    is_unitary,
    num_qubits,
    parse_matrix,
    probe_unitary,
    read_matrix,
    write_matrix,
)
from oracles import CNOT, PX, PZ


def test_haar_one_qubit_is_unitary():
    m = haar_random_unitary(1, 42)
    assert m.shape == (2, 2)
    assert np.abs(m.conj().T @ m - np.eye(2)).max() <= 1e-12


def test_haar_same_seed_bit_identical():
    a = haar_random_unitary(3, 7)
    b = haar_random_unitary(3, 7)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, haar_random_unitary(3, 8))


def test_haar_column_norms():
    m = haar_random_unitary(2, 1)
    assert np.allclose(np.linalg.norm(m, axis=0), 1, atol=1e-13, rtol=0)


@pytest.mark.parametrize("n", range(1, 13))
def test_haar_unitary_up_to_12_qubits(n):
    m = haar_random_unitary(n, n)
    assert m.flags.f_contiguous
    assert is_unitary(m, 1e-12)
    assert np.abs(np.linalg.norm(m, axis=0) - 1).max() <= 1e-13
    assert np.abs(np.linalg.norm(m, axis=1) - 1).max() <= 1e-13


def test_haar_accepts_generator():
    g = np.random.default_rng(3)
    assert is_unitary(haar_random_unitary(2, g))


def test_haar_phase_statistics():
    # Haar measure is invariant under left multiplication by diagonal phases,
    # so E[U_00] = 0 and E|U_00|^2 = 1/N.
    samples = np.array([haar_random_unitary(2, s)[0, 0] for s in range(2000)])
    assert abs(samples.mean()) < 0.05
    assert abs(np.mean(np.abs(samples) ** 2) - 0.25) < 0.02


@pytest.mark.parametrize("n", [0, 16, -1])
def test_haar_size_errors(n):
    with pytest.raises(SizeError):
        haar_random_unitary(n, 0)


def test_haar_memory_budget():
    with pytest.raises(SizeError):
        haar_random_unitary(10, 0, memory_budget=2**20)


def test_is_unitary_examples():
    assert is_unitary(np.eye(4), 1e-12)
    assert not is_unitary(2 * np.eye(2), 1e-12)
    assert is_unitary(CNOT, 1e-15)
    assert not is_unitary(np.ones((2, 3)))


def test_probe_unitary():
    assert probe_unitary(haar_random_unitary(5, 0))
    assert not probe_unitary(ginibre_matrix(32, 0))
    # unit columns but not orthogonal
    m = np.ones((4, 4)) / 2
    assert not probe_unitary(m)


def test_frobenius_examples():
    assert frobenius_distance(np.eye(2), np.eye(2)) == 0
    assert frobenius_distance(np.eye(2), -np.eye(2)) == pytest.approx(np.sqrt(8), abs=1e-15)
    assert frobenius_distance(PX, PZ) == pytest.approx(2, abs=1e-15)
    with pytest.raises(ShapeError):
        frobenius_distance(np.eye(2), np.eye(4))


@given(st.integers(0, 2**32 - 1))
def test_frobenius_symmetry_and_triangle(seed):
    g = np.random.default_rng(seed)
    a, b, c = (ginibre_matrix(4, g) for _ in range(3))
    assert frobenius_distance(a, b) == pytest.approx(frobenius_distance(b, a), abs=1e-15)
    assert frobenius_distance(a, c) <= frobenius_distance(a, b) + frobenius_distance(b, c) + 1e-12


def test_num_qubits():
    assert num_qubits(2) == 1
    assert num_qubits(1024) == 10
    for bad in (1, 3, 6, 0):
        with pytest.raises(ShapeError):
            num_qubits(bad)


def test_as_matrix_rejects():
    with pytest.raises(ShapeError):
        as_matrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        as_matrix([[np.nan, 0], [0, 1]])


def test_matrix_text_round_trip(tmp_path):
    m = haar_random_unitary(2, 1)
    p = tmp_path / "m.txt"
    write_matrix(m, p)
    assert np.array_equal(read_matrix(p), m)
    lines = p.read_text().splitlines()
    assert lines[0] == "4"
    assert len(lines[1].split()) == 4
    # row i on line i + 1
    re, im = lines[2].split()[3].split(",")
    assert complex(float(re), float(im)) == m[1, 3]


@given(st.lists(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e300),
                min_size=4, max_size=4))
def test_matrix_text_round_trip_exact(entries):
    m = np.array(entries, dtype=complex).reshape(2, 2)
    assert np.array_equal(parse_matrix(format_matrix(m)), m)


@pytest.mark.parametrize("text", ["", "x\n", "2\n1,0 0,0\n", "2\n1,0 0,0\n0,0\n", "1\n1\n", "1\nnan,0\n"])
def test_parse_matrix_rejects(text):
    with pytest.raises(ValueError):
        parse_matrix(text)
