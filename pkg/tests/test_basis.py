import pytest

from toricproj import basis
from toricproj.adapt import adapt_all
from toricproj.fan import refines, validate_fan
from toricproj.fan_io import builtin
from toricproj.normals import ordered_normals

SWAP13 = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
SHEAR = [[1, 1, 0], [0, 1, 0], [0, 2, 1]]


def test_inverse_and_round_trip(oda):
    inv = basis.inverse(SHEAR)
    for v in oda.rays:
        assert basis.apply(SHEAR, basis.apply(inv, v)) == v
    assert basis.from_basis(basis.to_basis(oda, SHEAR), SHEAR) == oda


def test_rejects_non_unimodular():
    with pytest.raises(basis.NotUnimodular):
        basis.check_basis([[2, 0], [0, 1]])
    with pytest.raises(basis.NotUnimodular):
        basis.check_basis([[1, 0, 0], [0, 1, 0]])


def test_covector_transform_preserves_pairing(oda):
    new = basis.to_basis(oda, SHEAR)
    for m_new in ordered_normals(new):
        m_old = basis.covector_from_basis(m_new, SHEAR)
        for r_old, r_new in zip(oda.rays, new.rays):
            assert sum(a * b for a, b in zip(m_old, r_old)) == \
                sum(a * b for a, b in zip(m_new, r_new))


@pytest.mark.parametrize("matrix", [SWAP13, SHEAR])
def test_changed_basis_run_is_valid(oda, matrix):
    work = basis.to_basis(oda, matrix)
    gamma, log = adapt_all(work)
    out = basis.from_basis(gamma, matrix)
    out_log = basis.log_from_basis(log, matrix)
    assert validate_fan(out).ok and refines(out, oda)
    assert [st.s for st in out_log.steps] == list(out.rays[oda.n_rays:])
