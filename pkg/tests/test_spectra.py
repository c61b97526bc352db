"""Spectral computations: known spectra, structural invariants, CSV exchange."""

import numpy as np
import pytest

from elliptic_rmt import (
    EigenSpectrum,
    InvalidSpecError,
    eigenvalues,
    least_singular_value,
    operator_norm,
    read_eigenvalues_csv,
    shifted_singular_esd,
    singular_values,
    write_eigenvalues_csv,
    write_singular_values_csv,
)


def test_eigenvalues_identity_and_diagonal():
    w = eigenvalues(np.eye(4)).values
    assert np.allclose(w, 0.5)  # 1 / sqrt(4)
    w = np.sort(eigenvalues(np.diag([1.0, 2.0, 3.0])).values.real)
    assert np.allclose(w, np.array([1.0, 2.0, 3.0]) / np.sqrt(3))


def test_eigenvalues_rotation_block():
    # characteristic polynomial lambda^2 + 1 = 0, then the 1/sqrt(2) scaling
    w = eigenvalues(np.array([[0.0, 1.0], [-1.0, 0.0]])).values
    expected = np.array([1j, -1j]) / np.sqrt(2)
    assert np.allclose(np.sort_complex(w), np.sort_complex(expected), atol=1e-12)


def test_conjugate_pairs_adjacent():
    rng = np.random.default_rng(0)
    w = eigenvalues(rng.standard_normal((30, 30))).values
    i = 0
    while i < w.size:
        if w[i].imag == 0.0:
            i += 1
        else:
            assert w[i + 1] == np.conj(w[i])
            i += 2


def test_eigenvalue_trace_identity():
    rng = np.random.default_rng(1)
    for n in (5, 40, 120):
        m = rng.standard_normal((n, n))
        w = eigenvalues(m).values
        assert abs(w.sum() - np.trace(m) / np.sqrt(n)) < 1e-8 * n


def test_singular_values_known():
    assert np.allclose(singular_values(np.eye(4)).values, 0.5)
    u = np.array([1.0, 0.0, 0.0])
    v = np.array([0.0, 1.0, 0.0])
    s = singular_values(np.outer(u, v)).values
    assert np.allclose(s, [1 / np.sqrt(3), 0.0, 0.0], atol=1e-12)
    s = singular_values(np.diag([3.0, -4.0])).values
    assert np.allclose(s, [4 / np.sqrt(2), 3 / np.sqrt(2)])


def test_frobenius_identity():
    rng = np.random.default_rng(2)
    for z in (0j, 0.7 + 0j, 0.3 - 0.4j):
        m = rng.standard_normal((60, 60))
        esd = shifted_singular_esd(m, z)
        operand = m / np.sqrt(60) - z * np.eye(60)
        assert np.isclose(np.sum(esd.values**2), np.linalg.norm(operand, "fro") ** 2,
                          rtol=1e-8)


def test_shifted_esd_known():
    s = shifted_singular_esd(np.zeros((5, 5)), 2.0 + 0j).values
    assert np.allclose(s, 2.0)
    n = 6
    a = np.sqrt(n) * np.eye(n)  # A / sqrt(n) = I
    assert np.allclose(shifted_singular_esd(a, 1.0).values, 0.0, atol=1e-12)
    assert np.allclose(shifted_singular_esd(a, 1j).values, np.sqrt(2.0))


def test_least_singular_value():
    assert np.isclose(least_singular_value(np.eye(3)), 1.0)
    assert np.isclose(least_singular_value(np.diag([5.0, 3.0])), 3.0)
    m = np.ones((4, 4))  # equal columns, singular
    assert least_singular_value(m) < 1e-12
    shift = np.eye(3)
    assert np.isclose(least_singular_value(np.zeros((3, 3)), shift), 1.0)
    with pytest.raises(InvalidSpecError):
        least_singular_value(np.eye(3), np.eye(4))


def test_operator_norm_known():
    assert np.isclose(operator_norm(np.eye(7)), 1.0)
    assert np.isclose(operator_norm(np.diag([2.0, -9.0])), 9.0)
    u = 2.0 * np.array([1.0, 0.0, 0.0])
    v = 3.0 * np.array([0.6, 0.8, 0.0])
    assert np.isclose(operator_norm(np.outer(u, v)), 6.0)


def test_weyl_bounds():
    rng = np.random.default_rng(3)
    for _ in range(10):
        m = rng.standard_normal((25, 25))
        w = np.abs(eigenvalues(m).values)
        s = singular_values(m).values
        assert s[0] >= w.max() - 1e-10
        assert s[-1] <= w.min() + 1e-10


def test_least_sv_perturbation():
    rng = np.random.default_rng(4)
    for _ in range(10):
        a = rng.standard_normal((20, 20))
        pert = 0.1 * rng.standard_normal((20, 20))
        gap = abs(least_singular_value(a + pert) - least_singular_value(a))
        assert gap <= operator_norm(pert) + 1e-10


def test_determinant_bridge():
    rng = np.random.default_rng(5)
    for n in (10, 50, 200):
        m = rng.standard_normal((n, n))
        z = 0.4 + 0.3j
        lhs = np.mean(np.log(shifted_singular_esd(m, z).values))
        rhs = np.mean(np.log(np.abs(eigenvalues(m).values - z)))
        assert abs(lhs - rhs) < 1e-6


def test_input_validation():
    with pytest.raises(InvalidSpecError):
        eigenvalues(np.ones((3, 4)))
    bad = np.eye(3)
    bad[0, 0] = np.nan
    with pytest.raises(InvalidSpecError):
        singular_values(bad)
    with pytest.raises(InvalidSpecError):  # descending order enforced
        from elliptic_rmt import SingularSpectrum
        SingularSpectrum(values=np.array([1.0, 2.0]), n=2)


def test_eigenvalue_csv_round_trip(tmp_path):
    rng = np.random.default_rng(6)
    spec = eigenvalues(rng.standard_normal((20, 20)))
    path = tmp_path / "eig.csv"
    write_eigenvalues_csv(spec, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "re,im"
    assert len(lines) == 21
    back = read_eigenvalues_csv(path)
    assert np.array_equal(back, spec.values)  # repr round-trips exactly


def test_eigenvalue_csv_errors(tmp_path):
    p = tmp_path / "bad_header.csv"
    p.write_text("x,y\n1.0,2.0\n")
    with pytest.raises(InvalidSpecError, match=":1:"):
        read_eigenvalues_csv(p)
    p = tmp_path / "bad_fields.csv"
    p.write_text("re,im\n1.0,2.0\n1.0\n")
    with pytest.raises(InvalidSpecError, match=":3:"):
        read_eigenvalues_csv(p)
    p = tmp_path / "bad_float.csv"
    p.write_text("re,im\n1.0,zebra\n")
    with pytest.raises(InvalidSpecError, match=":2:"):
        read_eigenvalues_csv(p)


def test_singular_value_csv(tmp_path):
    s = singular_values(np.diag([3.0, -4.0]))
    path = tmp_path / "svals.csv"
    write_singular_values_csv(s, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "index,s"
    assert lines[1].startswith("1,")
    assert lines[2].startswith("2,")
    assert float(lines[1].split(",")[1]) >= float(lines[2].split(",")[1])


def test_eigen_spectrum_shape_check():
    with pytest.raises(InvalidSpecError):
        EigenSpectrum(values=np.zeros(3, dtype=complex), n=4)
