"""Built-in verification suite behind the ``check`` command.

Two levels:

* ``quick`` -- closed-form gates (projective spaces and Grassmannians between
  one and six dimensions), the symmetrization identities, and the full
  reference row for the 6-dimensional two-vertex case;
* ``full``  -- adds the two 12-dimensional reference rows, duality and
  reflection orbits, and independence of the normalization vector.

The extended flag adds the 18-dimensional reference row.  Reference values
are regression fixtures of this package; the Grassmannian gates are computed
here from hook-length and hook-content formulas, independently of the engine.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from . import chow, invariants, polyring, quiver as qv
from .errors import QuiverChowError

# Reference census rows: (m, d, e) -> expected invariants.
KRONECKER_CENSUS = {
    (3, 2, 3): {
        "dimension": 6,
        "index": 3,
        "degree": 57,
        "chi_O": 1,
        "chi_T": 8,
        "chi_top": 13,
        "hilbert_values": (1, 20, 148, 664, 2206, 5999, 14140),
        "hilbert_numerator": (1, 13, 29, 13, 1),
    },
    (4, 2, 3): {
        "dimension": 12,
        "index": 4,
        "degree": 119020,
        "chi_O": 1,
        "chi_T": 15,
        "chi_top": 58,
        "hilbert_values": (1, 126, 4032, 59268, 531839, 3395882, 16907632),
        "hilbert_numerator": (1, 113, 2472, 16394, 40530, 40530, 16394, 2472, 113, 1),
    },
    (3, 3, 4): {
        "dimension": 12,
        "index": 3,
        "degree": 1654983,
        "chi_O": 1,
        "chi_T": 8,
        "hilbert_values": (1, 266, 13222, 256438, 2779524, 20345430, 112317667),
        "hilbert_numerator": (1, 253, 9842, 105014, 401785, 621193, 401785, 105014, 9842, 253, 1),
    },
    (5, 2, 3): {
        "dimension": 18,
        "index": 5,
        "degree": 720578490,
        "chi_O": 1,
        "chi_T": 24,
        "chi_top": 170,
        "hilbert_values": (1, 500, 51920, 2058485, 43370250, 585084682, 5666879250),
        "hilbert_numerator": (1, 481, 42591, 1156536, 12656731, 64666759, 167366129,
                              228800034, 167366129, 64666759, 12656731, 1156536, 42591, 481, 1),
    },
}


# ---- closed-form Grassmannian facts (hook lengths/contents), engine-free


def grassmannian_dimension(e: int, m: int) -> int:
    return e * (m - e)


def grassmannian_degree(e: int, m: int) -> int:
    """Number of standard tableaux of the e x (m-e) rectangle."""
    n = e * (m - e)
    hooks = 1
    for i in range(e):
        for j in range(m - e):
            hooks *= (e - i) + (m - e - j) - 1
    return factorial(n) // hooks


def grassmannian_chi_top(e: int, m: int) -> int:
    return comb(m, e)


def grassmannian_sections(e: int, m: int, n: int) -> int:
    """Hook-content formula for the n-th power of the primitive polarization."""
    val = Fraction(1)
    for i in range(e):
        for j in range(n):
            hook = (n - j) + (e - i) - 1
            val *= Fraction(m + j - i, hook)
    assert val.denominator == 1
    return int(val)


def grassmannian_betti(e: int, m: int) -> list[int]:
    """Partitions inside the e x (m-e) box, counted by size."""
    counts = [0] * (e * (m - e) + 1)
    def rec(row, prev, size):
        if row == e:
            counts[size] += 1
            return
        for part in range(prev + 1):
            rec(row + 1, part, size + part)
    rec(0, m - e, 0)
    return counts


# ---- the check machinery


@dataclass
class CheckResult:
    lines: list[str] = field(default_factory=list)
    passed: int = 0
    failed: int = 0

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, name: str, fn):
        try:
            fn()
        except AssertionError as exc:
            self.failed += 1
            self.lines.append(f"FAIL {name}: {exc}")
        except QuiverChowError as exc:
            self.failed += 1
            self.lines.append(f"FAIL {name}: {exc}")
        else:
            self.passed += 1
            self.lines.append(f"PASS {name}")


def _check_census_row(m: int, d: int, e: int, threads: int = 1):
    expected = KRONECKER_CENSUS[(m, d, e)]
    rep = invariants.kronecker_report(m, d, e, threads=threads)
    for key, val in expected.items():
        got = getattr(rep, key)
        if key == "hilbert_values":
            got = got[: len(val)]
        if isinstance(val, tuple):
            got = tuple(got)
        assert got == val, f"{key}: computed {got}, expected {val}"
    assert rep.chi_T == m * m - 1, f"chi(T) = {rep.chi_T} != m^2-1"


def _check_grassmannian(m: int, e: int, threads: int = 1):
    rep = invariants.kronecker_report(m, 1, e, threads=threads)
    dim = grassmannian_dimension(e, m)
    assert rep.dimension == dim, f"dimension {rep.dimension} != {dim}"
    assert rep.index == m, f"index {rep.index} != {m}"
    assert rep.degree == grassmannian_degree(e, m), (
        f"degree {rep.degree} != {grassmannian_degree(e, m)}")
    assert rep.chi_top == grassmannian_chi_top(e, m)
    expect = tuple(grassmannian_sections(e, m, n) for n in range(dim + 2))
    assert rep.hilbert_values == expect, f"twist values {rep.hilbert_values} != {expect}"


def _check_symmetrization():
    layout = polyring.Layout((2, 3), "roots")
    delta = polyring.discriminant(layout)
    order = polyring.weyl_order(layout.dims)
    one = polyring.Poly.const(layout, 1)
    assert polyring.symmetrize(one).is_zero(), "symmetrizing 1 should vanish"
    assert polyring.symmetrize(delta) == order, f"symmetrizing the discriminant should give {order}"
    rng = random.Random(20240601)
    for _ in range(10):
        f = _random_poly(layout, rng, maxdeg=3)
        g = _random_invariant(layout, rng)
        assert polyring.symmetrize(g * f) == g * polyring.symmetrize(f), (
            "linearity over the invariant subring fails")
        rho = polyring.symmetrize(f)
        assert polyring.is_invariant(rho), "symmetrization left a non-invariant"
        assert polyring.symmetrize_elementary(f) == polyring.to_elementary(rho), (
            "per-monomial symmetrization disagrees with the definition")


def _random_poly(layout, rng, maxdeg=3):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        expo = [0] * layout.nvars
        for _ in range(rng.randint(0, maxdeg)):
            expo[rng.randrange(layout.nvars)] += 1
        terms[tuple(expo)] = terms.get(tuple(expo), 0) + rng.randint(-3, 3)
    return polyring.Poly(layout, {e: c for e, c in terms.items() if c})


def _random_invariant(layout, rng):
    target = polyring.Layout(layout.dims, "chern")
    expo = [0] * target.nvars
    for _ in range(rng.randint(0, 2)):
        expo[rng.randrange(target.nvars)] += 1
    g = polyring.Poly.monomial(target, tuple(expo), rng.randint(1, 3))
    return polyring.from_elementary(g, layout)


def _check_point_identity(threads: int = 1):
    # the two-sided identity is asserted inside the build; reaching a report
    # means it held, and the integral of the point class is 1 by construction
    q, dv, theta = qv.kronecker(3, 2, 3)
    p = chow.build_presentation(q, dv, theta, threads=threads)
    assert p.integrate(p.point_class()) == 1, "point class does not integrate to 1"
    dims = p.quotient_dimensions
    assert dims == dims[::-1], f"quotient dimensions {dims} not palindromic"


def _check_normalization_independence(threads: int = 1):
    q, dv, theta = qv.kronecker(3, 2, 3)
    reps = []
    for a in ((-1, 1), (2, -1)):
        p = chow.build_presentation(q, dv, theta, a=a, threads=threads)
        reps.append(invariants.invariant_report(p, label="K_3(2,3)"))
    assert reps[0] == reps[1], "invariants depend on the normalization vector"


def _check_orbits(threads: int = 1):
    invariants.orbit_consistency(3, 2, 3, bound=7, threads=threads)
    invariants.orbit_consistency(4, 2, 3, bound=3, threads=threads)
    invariants.orbit_consistency(4, 1, 2, bound=7, threads=threads)


def run_checks(level: str = "quick", extended: bool = False, threads: int = 1) -> CheckResult:
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    result = CheckResult()
    result.record("symmetrization identities", _check_symmetrization)
    result.record("projective plane gate K_3(1,1)", lambda: _check_grassmannian(3, 1, threads))
    result.record("grassmannian gate K_4(1,2)", lambda: _check_grassmannian(4, 2, threads))
    result.record("grassmannian gate K_5(1,2)", lambda: _check_grassmannian(5, 2, threads))
    result.record("point class and duality pairing K_3(2,3)",
                  lambda: _check_point_identity(threads))
    result.record("census row K_3(2,3)", lambda: _check_census_row(3, 2, 3, threads))
    if level == "full":
        result.record("census row K_4(2,3)", lambda: _check_census_row(4, 2, 3, threads))
        result.record("census row K_3(3,4)", lambda: _check_census_row(3, 3, 4, threads))
        result.record("normalization independence", lambda: _check_normalization_independence(threads))
        result.record("duality/reflection orbits", lambda: _check_orbits(threads))
    if extended:
        result.record("census row K_5(2,3) (extended)", lambda: _check_census_row(5, 2, 3, threads))
    return result
