import math

import pytest
from hypothesis import given, settings, strategies as st

from klgamma.errors import DomainError, PoleError, StripMismatchError
from klgamma.gamma import gamma_pair
from klgamma.identities import (
    IdentityReport,
    TOLERANCES,
    builtin_grid,
    evaluate_point,
    fourier_closed_half,
    fourier_gamma_direct,
    fourier_gamma_repr,
    kl_classic_rhs,
    kl_extended_rhs,
    kl_mixed_rhs,
    mellin_ki_pair,
    ramanujan_closed,
    verify_all,
)

from conftest import rel

PI_OVER_SINH_PI = 0.27202905498213316


# -- classical and extended representations ------------------------------------


def test_classic_examples():
    assert rel(kl_classic_rhs(1.0, 0.0), 1.0) <= 1e-9
    assert rel(kl_classic_rhs(1.0, 1.0), PI_OVER_SINH_PI) <= 1e-9
    z = complex(0.5, 0.5)
    assert rel(kl_classic_rhs(z, 0.3), complex(0.31567369231426786, -1.1044167618478205)) <= 1e-9


def test_classic_domain():
    with pytest.raises(DomainError):
        kl_classic_rhs(-0.25, 0.0)


def test_extended_examples():
    assert rel(kl_extended_rhs(-0.5, 0.0, 0), 4 * math.pi) <= 1e-7
    # 4 pi / (5 cosh pi)
    assert rel(kl_extended_rhs(-0.5, 1.0, 0), 0.21681196111953468) <= 1e-7
    z = complex(-1.5, 0.2)
    assert rel(kl_extended_rhs(z, 0.5, 1), complex(0.9116970873100397, 0.27533183996259616)) <= 1e-7


def test_extended_strip_mismatch_names_n():
    with pytest.raises(StripMismatchError) as exc:
        kl_extended_rhs(-1.25, 0.0, 0)
    assert "n=1" in str(exc.value)


def test_mixed_examples():
    assert rel(kl_mixed_rhs(1.0, 1.0, 0), PI_OVER_SINH_PI) <= 1e-9
    assert rel(kl_mixed_rhs(-0.25, 0.0, 0), 24.026337514890075) <= 1e-8
    assert rel(kl_mixed_rhs(-0.25, 2.0, 0), gamma_pair(-0.25, 2.0)) <= 1e-8


def test_mixed_refuses_half_integers():
    with pytest.raises(DomainError):
        kl_mixed_rhs(-0.5, 1.0, 0)


@pytest.mark.parametrize("z,n,s", [(-0.25, 0, 0.5), (-0.75, 0, 2.0), (complex(-0.3, 0.4), 0, 0.5)])
def test_mixed_extended_consistency(z, n, s):
    assert rel(kl_mixed_rhs(z, s, n), kl_extended_rhs(z, s, n)) <= 1e-7


# -- Mellin pair -----------------------------------------------------------------


@pytest.mark.parametrize("z,k,s,closed", [(1, 0, 0, 1.0), (0.5, 1, 2, 0.16), (-0.4, 1, 0, 1 / 0.36)])
def test_mellin_examples(z, k, s, closed):
    r = mellin_ki_pair(z, k, s)
    assert isinstance(r, IdentityReport)
    assert rel(r.lhs, closed) <= 1e-15
    assert r.rel_residual <= 1e-9 and r.passed


def test_mellin_domain():
    with pytest.raises(DomainError):
        mellin_ki_pair(-1.2, 1, 0.5)


# -- Fourier transforms ------------------------------------------------------------


def test_ramanujan_examples():
    assert rel(fourier_gamma_direct(1.0, 0.0), math.pi / 2) <= 1e-8
    assert rel(ramanujan_closed(1.0, 0.0), math.pi / 2) <= 1e-15
    assert rel(ramanujan_closed(0.5, 0.0), math.pi) <= 1e-15
    assert rel(ramanujan_closed(1.0, 2.0), 0.65969415315541724) <= 1e-14
    with pytest.raises(DomainError):
        ramanujan_closed(-0.5, 0.0)


def test_half_closed_form_values():
    assert rel(fourier_closed_half(0.0), 8.7103443612144085) <= 1e-15
    assert rel(fourier_closed_half(1.0), 8.2499145782379885) <= 1e-15


def test_repr_examples():
    assert rel(fourier_gamma_repr(-0.5, 0.0, 0), 4 * math.pi * math.log(2)) <= 1e-7
    assert rel(fourier_gamma_direct(-0.5, 0.0), 4 * math.pi * math.log(2)) <= 1e-7
    assert rel(fourier_gamma_repr(-0.25, 2.0, 0), fourier_gamma_direct(-0.25, 2.0)) <= 1e-6
    assert rel(fourier_gamma_repr(-1.5, 0.0, 1), fourier_gamma_direct(-1.5, 0.0)) <= 1e-6


def test_repr_strip_mismatch():
    with pytest.raises(StripMismatchError):
        fourier_gamma_repr(-0.25, 0.0, 1)


def test_direct_pole():
    with pytest.raises(PoleError):
        fourier_gamma_direct(-1.0, 0.0)


@settings(max_examples=15)
@given(a=st.sampled_from([-1.7, -0.6, -0.25, 0.5, 1.0, 2.5]), xi=st.floats(0, 6))
def test_fourier_even_in_xi(a, xi):
    assert abs(fourier_gamma_direct(a, xi) - fourier_gamma_direct(a, -xi)) <= 1e-10


@pytest.mark.parametrize("a", [-2.5, -1.5, -0.75, -0.5, -0.25, 0.5, 1.0, 2.0])
def test_fourier_positive_at_origin(a):
    assert fourier_gamma_direct(a, 0.0) > 0


# -- reports and sweeps -------------------------------------------------------------


def test_report_invariants():
    r = IdentityReport.compare("demo", 2.0, 2.0 + 1e-9, evaluations=12, params={"z": 1}, tol=1e-6)
    assert r.abs_residual == abs(r.lhs - r.rhs)
    assert r.rel_residual == r.abs_residual / max(abs(r.lhs), abs(r.rhs), 1e-300)
    assert r.passed


def test_grid_cardinality():
    assert len(builtin_grid("kl")) == 25
    assert len(builtin_grid("mellin")) == 9
    assert len(builtin_grid("fourier")) == 9 + 16 + 8
    assert verify_all([]) == []
    with pytest.raises(DomainError):
        builtin_grid("nope")


def test_invalid_points_never_raise():
    grid = [
        ("mellin", {"z": 1, "k": 0, "s": 0}),
        ("kl_extended", {"z": -1.25, "s": 0.0, "n": 0}),
        ("kl_mixed", {"z": -0.5, "s": 1.0, "n": 0}),
        ("kl_classic", {"z": -1.0, "s": 0.0}),
        ("no_such_identity", {}),
    ]
    reps = verify_all(grid)
    assert [r.name for r in reps] == [g[0] for g in grid]
    assert reps[0].passed and reps[0].error is None
    for r in reps[1:]:
        assert not r.converged and not r.passed and r.error
    assert reps[1].error == "strip_mismatch"
    assert reps[4].error == "unknown_identity"


def test_threads_preserve_order():
    grid = builtin_grid("mellin")
    a = verify_all(grid, threads=1)
    b = verify_all(grid, threads=3)
    assert [(r.name, r.params, r.rhs) for r in a] == [(r.name, r.params, r.rhs) for r in b]


def test_tol_override():
    r = evaluate_point("mellin", {"z": 1, "k": 0, "s": 0}, tol=1e-30)
    assert r.tol == 1e-30 and not r.passed
    assert evaluate_point("mellin", {"z": 1, "k": 0, "s": 0}).tol == TOLERANCES["mellin"]
