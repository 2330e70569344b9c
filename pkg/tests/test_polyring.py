import random
from fractions import Fraction
from itertools import product as iproduct

import pytest

from quiverchow.polyring import (
    Layout,
    Poly,
    TruncatedClass,
    WeylElement,
    antisymmetrize,
    bernoulli,
    descending_basis,
    descending_exponents,
    discriminant,
    from_elementary,
    is_invariant,
    symmetrize,
    symmetrize_elementary,
    to_elementary,
    todd_factor,
    todd_series,
    weyl_group,
    weyl_order,
)


def rand_weyl(dims, rng):
    perms = []
    for x in dims:
        p = list(range(x))
        rng.shuffle(p)
        perms.append(tuple(p))
    return WeylElement(tuple(perms))


def rand_poly(layout, rng, nterms=4, maxdeg=3):
    terms = {}
    for _ in range(nterms):
        expo = [0] * layout.nvars
        for _ in range(rng.randint(0, maxdeg)):
            expo[rng.randrange(layout.nvars)] += 1
        c = rng.randint(-4, 4)
        key = tuple(expo)
        terms[key] = terms.get(key, 0) + c
    return Poly(layout, {e: c for e, c in terms.items() if c})


# ---- action


def test_act_identity_and_transposition():
    from quiverchow.polyring import act

    layout = Layout((2, 3))
    f = rand_poly(layout, random.Random(0))
    assert f.act(WeylElement.identity(layout.dims)) == f
    swap = WeylElement(((1, 0), (0, 1, 2)))
    x11 = Poly.variable(layout, layout.var(0, 1))
    x12 = Poly.variable(layout, layout.var(0, 2))
    assert x11.act(swap) == x12
    assert act(swap, x11) == x12


def test_act_group_law():
    # (sigma tau)(f) = sigma(tau(f))
    layout = Layout((2, 2))
    rng = random.Random(1)
    for _ in range(15):
        f = rand_poly(layout, rng)
        s, t = rand_weyl(layout.dims, rng), rand_weyl(layout.dims, rng)
        assert f.act(s.compose(t)) == f.act(t).act(s)


def test_weyl_sign_and_inverse():
    layout = Layout((2, 3))
    rng = random.Random(2)
    assert WeylElement.identity((2, 3)).sign == 1
    for _ in range(10):
        w = rand_weyl(layout.dims, rng)
        assert w.sign * w.inverse().sign == 1
        assert w.compose(w.inverse()).perms == WeylElement.identity(layout.dims).perms


# ---- discriminant


def test_discriminant_trivial_blocks():
    assert discriminant(Layout((1, 1))) == 1


def test_discriminant_degree():
    assert discriminant(Layout((2, 3))).degree() == 4


def test_discriminant_antisymmetry():
    layout = Layout((2, 3))
    delta = discriminant(layout)
    rng = random.Random(3)
    for _ in range(8):
        w = rand_weyl(layout.dims, rng)
        assert delta.act(w) == delta.scale(w.sign)


# ---- symmetrization


def test_symmetrize_one_and_delta():
    layout = Layout((2, 3))
    assert symmetrize(Poly.const(layout, 1)).is_zero()
    assert symmetrize(discriminant(layout)) == 12
    assert weyl_order((2, 3)) == 12


def test_symmetrize_equivariance():
    layout = Layout((2, 2))
    rng = random.Random(4)
    for _ in range(10):
        f = rand_poly(layout, rng)
        w = rand_weyl(layout.dims, rng)
        assert symmetrize(f.act(w)) == symmetrize(f).scale(w.sign)


def test_symmetrize_invariant_linearity():
    layout = Layout((2, 2))
    chern = Layout((2, 2), "chern")
    rng = random.Random(5)
    for _ in range(10):
        f = rand_poly(layout, rng)
        g = from_elementary(rand_poly(chern, rng, nterms=2, maxdeg=1), layout)
        assert symmetrize(g * f) == g * symmetrize(f)


def test_symmetrize_fast_path_matches_definition():
    for dims in [(2,), (2, 2), (2, 3), (1, 2)]:
        layout = Layout(dims)
        rng = random.Random(sum(dims))
        for _ in range(12):
            f = rand_poly(layout, rng, maxdeg=4)
            rho = symmetrize(f)
            assert is_invariant(rho)
            assert symmetrize_elementary(f) == to_elementary(rho)


def test_antisymmetrize_divisible():
    # antisymmetrized polynomials are divisible by the discriminant: the
    # quotient times the discriminant reproduces the antisymmetrization
    layout = Layout((3,))
    rng = random.Random(6)
    for _ in range(6):
        f = rand_poly(layout, rng, maxdeg=4)
        assert from_elementary(symmetrize_elementary(f), layout) * discriminant(layout) \
            == antisymmetrize(f)


# ---- descending basis


def test_descending_basis_sizes():
    assert [b.dump() for b in descending_basis(Layout((1, 1)))] == ["1"]
    assert len(descending_basis(Layout((2, 3)))) == 12
    basis21 = descending_basis(Layout((2, 1)))
    assert sorted(b.dump() for b in basis21) == ["1", "1 * xi_1_1"]


def test_descending_basis_spans():
    # every polynomial decomposes over the basis with invariant coefficients:
    # per degree, the products (invariant monomial) * (basis element) span
    layout = Layout((2, 2))
    chern = Layout((2, 2), "chern")
    basis = list(descending_exponents(layout))
    for n in range(0, 4):
        rows = []
        target_monomials = sorted(
            e for e in _monomials(layout.nvars, n)
        )
        index = {e: i for i, e in enumerate(target_monomials)}
        for b in basis:
            db = sum(b)
            if db > n:
                continue
            for a_expo in _weighted_monomials(chern, n - db):
                vec = [Fraction(0)] * len(index)
                prod = from_elementary(Poly.monomial(chern, a_expo), layout) \
                    * Poly.monomial(layout, b)
                for e, c in prod.terms.items():
                    vec[index[e]] += c
                rows.append(vec)
        assert _rank(rows) == len(index), f"descending basis does not span degree {n}"


def _monomials(nvars, n):
    def rec(j, rem):
        if j == nvars - 1:
            yield (rem,)
            return
        for k in range(rem + 1):
            for rest in rec(j + 1, rem - k):
                yield (k,) + rest
    return list(rec(0, n)) if nvars else ([()] if n == 0 else [])


def _weighted_monomials(layout, n):
    out = []

    def rec(j, rem, expo):
        if j == layout.nvars:
            if rem == 0:
                out.append(tuple(expo))
            return
        w = layout.weights[j]
        for k in range(rem // w + 1):
            rec(j + 1, rem - k * w, expo + [k])

    rec(0, n, [])
    return out


def _rank(rows):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                factor = Fraction(rows[i][col], pv)
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# ---- elementary-symmetric rewriting


def test_to_elementary_examples():
    layout = Layout((3,))
    chern = Layout((3,), "chern")
    e1 = sum((Poly.variable(layout, j) for j in range(3)), Poly.zero(layout))
    assert to_elementary(e1) == Poly.variable(chern, 0)
    p2 = sum((Poly.variable(layout, j) ** 2 for j in range(3)), Poly.zero(layout))
    x1, x2 = Poly.variable(chern, 0), Poly.variable(chern, 1)
    assert to_elementary(p2) == x1 * x1 - x2.scale(2)


def test_to_elementary_round_trip():
    layout = Layout((2, 3))
    chern = Layout((2, 3), "chern")
    rng = random.Random(8)
    for _ in range(10):
        g = rand_poly(chern, rng, nterms=3, maxdeg=2)
        f = from_elementary(g, layout)
        assert to_elementary(f) == g


def test_to_elementary_rejects_non_invariant():
    layout = Layout((2,))
    with pytest.raises(ValueError):
        to_elementary(Poly.variable(layout, 0))


# ---- Bernoulli numbers and Todd series


def test_bernoulli_convention():
    assert [bernoulli(k) for k in range(7)] == [
        1, Fraction(1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0, Fraction(1, 42)]


def test_todd_series_coefficients():
    assert todd_series(4) == [1, Fraction(1, 2), Fraction(1, 12), 0, Fraction(-1, 720)]


def test_todd_factor_examples():
    layout = Layout((1,))
    t = Poly.variable(layout, 0)
    td = todd_factor(t, 4)
    assert td.component(0) == 1
    assert td.component(1) == t.scale(Fraction(1, 2))
    assert td.component(2) == (t * t).scale(Fraction(1, 12))
    assert td.component(3).is_zero()
    assert td.component(4) == (t ** 4).scale(Fraction(-1, 720))
    assert todd_factor(Poly.zero(layout), 4) == TruncatedClass.const(layout, 4, 1)


def test_todd_factor_times_one_minus_exp():
    # the defining identity: factor(t) * (1 - exp(-t)) = t, up to the bound
    layout = Layout((1,))
    t = Poly.variable(layout, 0)
    bound = 9
    tc = TruncatedClass.from_poly(t, bound)
    one_minus_exp = TruncatedClass.const(layout, bound, 1) - (-tc).exp()
    assert todd_factor(t, bound) * one_minus_exp == tc


def test_todd_factor_rejects_higher_degree():
    layout = Layout((1,))
    with pytest.raises(ValueError):
        todd_factor(Poly.variable(layout, 0) ** 2, 4)


# ---- truncated series


def test_series_inverse_geometric():
    layout = Layout((1,))
    x = Poly.variable(layout, 0)
    u = TruncatedClass.const(layout, 5, 1) + TruncatedClass.from_poly(x, 5)
    inv = u.inverse()
    for n in range(6):
        assert inv.component(n) == (x ** n).scale((-1) ** n)
    assert u * inv == TruncatedClass.const(layout, 5, 1)
    assert TruncatedClass.const(layout, 5, 1).inverse() == TruncatedClass.const(layout, 5, 1)


def test_series_inverse_requires_unit():
    layout = Layout((1,))
    with pytest.raises(ValueError):
        TruncatedClass.from_poly(Poly.variable(layout, 0), 3).inverse()


def test_series_exp():
    layout = Layout((2,))
    x = TruncatedClass.from_poly(Poly.variable(layout, 0), 6)
    assert x.exp() * (-x).exp() == TruncatedClass.const(layout, 6, 1)
    y = TruncatedClass.from_poly(Poly.variable(layout, 1), 6)
    assert (x + y).exp() == x.exp() * y.exp()
    with pytest.raises(ValueError):
        TruncatedClass.const(layout, 3, 1).exp()


def test_dump_format():
    layout = Layout((2, 3))
    f = Poly.variable(layout, 0) ** 2 * Poly.variable(layout, 2) + Poly.const(layout, 1).scale(
        Fraction(1, 2))
    assert f.dump() == "1/2 + 1 * xi_1_1^2 xi_2_1"


def test_weyl_group_enumeration():
    assert sum(1 for _ in weyl_group((2, 3))) == 12
    assert sum(w.sign for w in weyl_group((2, 3))) == 0


def test_inexact_vandermonde_division_raises():
    from quiverchow import StructuralError
    from quiverchow.polyring import divide_linear_difference

    layout = Layout((2,))
    f = Poly.variable(layout, 0) + 1
    with pytest.raises(StructuralError):
        divide_linear_difference(f, 0, 1)
