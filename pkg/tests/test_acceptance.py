"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Every assertion is exact; there are no tolerances anywhere.
"""

import json
import random
import time
import warnings
from contextlib import contextmanager

import pytest
from click.testing import CliRunner

import oracles
from quiverchow import build_presentation, kronecker
from quiverchow.cli import main as cli_main
from quiverchow.invariants import invariant_report, orbit_consistency
from quiverchow.polyring import (
    Layout,
    Poly,
    discriminant,
    from_elementary,
    symmetrize,
    weyl_order,
)


@contextmanager
def criterion(number: int, description: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} FAIL: {description}")
        raise
    else:
        elapsed = time.perf_counter() - start
        print(f"ACCEPTANCE {number} PASS: {description} ({elapsed:.2f}s)")


def _cli_invariants(m: int, d: int, e: int) -> dict:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = CliRunner().invoke(
            cli_main, ["invariants", "--kronecker", str(m), str(d), str(e), "--format", "json"])
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


def test_criterion_1_small_census_row():
    with criterion(1, "K_3(2,3): dimension 6, degree 57, chi_top 13, twist values, numerator"):
        start = time.perf_counter()
        body = _cli_invariants(3, 2, 3)
        elapsed = time.perf_counter() - start
        assert body["dimension"] == 6
        assert body["degree"] == 57
        assert body["chi_top"] == 13
        assert body["hilbert_values"][:7] == [1, 20, 148, 664, 2206, 5999, 14140]
        assert body["hilbert_numerator"] == [1, 13, 29, 13, 1]
        assert elapsed < 30, f"runtime {elapsed:.1f}s exceeds the 30s target"


def test_criterion_2_twelve_dimensional_row():
    with criterion(2, "K_4(2,3): dimension 12, degree 119020, chi_top 58, numerator"):
        start = time.perf_counter()
        body = _cli_invariants(4, 2, 3)
        elapsed = time.perf_counter() - start
        assert body["dimension"] == 12
        assert body["degree"] == 119020
        assert body["chi_top"] == 58
        assert body["hilbert_numerator"] == [
            1, 113, 2472, 16394, 40530, 40530, 16394, 2472, 113, 1]
        assert elapsed < 900, f"runtime {elapsed:.1f}s exceeds the 15min target"


def test_criterion_3_three_four_row():
    with criterion(3, "K_3(3,4): dimension 12, degree 1654983, palindromic numerator"):
        start = time.perf_counter()
        body = _cli_invariants(3, 3, 4)
        elapsed = time.perf_counter() - start
        assert body["dimension"] == 12
        assert body["degree"] == 1654983
        numerator = body["hilbert_numerator"]
        assert numerator == [
            1, 253, 9842, 105014, 401785, 621193, 401785, 105014, 9842, 253, 1]
        assert numerator == numerator[::-1]
        assert body["hilbert_values"][:7] == [
            1, 266, 13222, 256438, 2779524, 20345430, 112317667]
        assert elapsed < 1800, f"runtime {elapsed:.1f}s exceeds the 30min target"


@pytest.mark.extended
def test_criterion_4_extended_row():
    with criterion(4, "K_5(2,3): degree 720578490, twist values (extended)"):
        body = _cli_invariants(5, 2, 3)
        assert body["dimension"] == 18
        assert body["degree"] == 720578490
        assert body["hilbert_values"][:7] == [
            1, 500, 51920, 2058485, 43370250, 585084682, 5666879250]
        assert body["hilbert_numerator"] == [
            1, 481, 42591, 1156536, 12656731, 64666759, 167366129, 228800034,
            167366129, 64666759, 12656731, 1156536, 42591, 481, 1]


def test_criterion_5_tangent_sections(kreport):
    with criterion(5, "chi(T) = m^2 - 1 for all computed two-vertex cases"):
        for (m, d, e) in [(3, 1, 1), (4, 1, 2), (5, 1, 2), (3, 2, 3), (4, 2, 3),
                          (3, 3, 4), (5, 2, 3)]:
            assert kreport(m, d, e).chi_T == m * m - 1, (m, d, e)


def test_criterion_6_grassmannian_oracle(kreport):
    with criterion(6, "Grassmannian gate: dimension, degree, chi_top, twist values"):
        for (m, e) in [(3, 1), (4, 2), (5, 2)]:
            rep = kreport(m, 1, e)
            dim = oracles.gr_dimension(e, m)
            assert rep.dimension == dim
            assert rep.index == m
            assert rep.degree == oracles.gr_degree(e, m)
            assert rep.chi_top == oracles.gr_chi_top(e, m)
            assert rep.hilbert_values == tuple(
                oracles.gr_sections(e, m, n) for n in range(dim + 2))


def test_criterion_7a_two_sided_point_class(kpres):
    with criterion(7, "property: the two point-class expressions agree after reduction"):
        # computed independently and compared inside every build; spot-check
        # the reduced class and its normalization through the public surface
        for (m, d, e) in [(3, 1, 1), (4, 1, 2), (3, 2, 3), (4, 2, 3)]:
            p = kpres(m, d, e)
            assert p.integrate(p.point_class()) == 1


def test_criterion_7b_symmetrization_identities():
    with criterion(7, "property: symmetrizing the discriminant and the constant"):
        for dims in [(2, 3), (2, 2), (3, 2)]:
            layout = Layout(dims)
            assert symmetrize(Poly.const(layout, 1)).is_zero()
            assert symmetrize(discriminant(layout)) == weyl_order(dims)


def test_criterion_7c_linearity_over_invariants():
    with criterion(7, "property: linearity over the invariant subring, 100 instances"):
        rng = random.Random(424242)
        layouts = [Layout((2, 2)), Layout((2, 3)), Layout((3,)), Layout((1, 2))]
        for i in range(100):
            layout = layouts[i % len(layouts)]
            chern = Layout(layout.dims, "chern")
            f_terms = {}
            for _ in range(rng.randint(1, 4)):
                expo = [0] * layout.nvars
                for _ in range(rng.randint(0, 3)):
                    expo[rng.randrange(layout.nvars)] += 1
                f_terms[tuple(expo)] = rng.randint(-3, 3)
            f = Poly(layout, {k: v for k, v in f_terms.items() if v})
            g_expo = [0] * chern.nvars
            for _ in range(rng.randint(0, 2)):
                g_expo[rng.randrange(chern.nvars)] += 1
            g = from_elementary(
                Poly.monomial(chern, tuple(g_expo), rng.randint(1, 3)), layout)
            assert symmetrize(g * f) == g * symmetrize(f)


def test_criterion_7d_palindromic_dimensions(kpres):
    with criterion(7, "property: palindromic quotient dimensions"):
        for (m, d, e) in [(3, 1, 1), (4, 1, 2), (5, 1, 2), (3, 2, 3), (4, 2, 3),
                          (3, 3, 4), (5, 2, 3)]:
            dims = kpres(m, d, e).quotient_dimensions
            assert dims == dims[::-1], (m, d, e)
            assert dims[0] == dims[-1] == 1


@pytest.mark.slow
def test_criterion_7e_orbit_consistency():
    with criterion(7, "property: duality/reflection orbit consistency"):
        out = orbit_consistency(3, 2, 3, bound=7)
        assert set(out["members"]) == {(2, 3), (3, 2), (3, 7), (7, 3)}
        out = orbit_consistency(4, 2, 3, bound=3)
        assert set(out["members"]) == {(2, 3), (3, 2)}


def test_criterion_7f_normalization_independence():
    with criterion(7, "property: invariants independent of the normalization vector"):
        q, dv, theta = kronecker(3, 2, 3)
        reports = [
            invariant_report(build_presentation(q, dv, theta, a=a), label="K_3(2,3)")
            for a in ((-1, 1), (2, -1))
        ]
        assert reports[0] == reports[1]


def test_criterion_8_no_betti_numbers(kpres):
    with criterion(8, "chi_top via the top Chern class only; no per-degree counts"):
        import quiverchow

        # the package computes chi_top as an integral, and exposes no
        # per-degree cohomology counting beyond presentation bookkeeping
        assert not any("betti" in name.lower() for name in dir(quiverchow))
        p = kpres(3, 2, 3)
        cT, _ = p.tangent_chern()
        chi_top = p.integrate(cT.component(p.dim))
        assert chi_top == 13
        assert sum(p.quotient_dimensions) == chi_top
