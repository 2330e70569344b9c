"""Derived numerical invariants of a presented moduli space.

Everything is exact: indices and degrees are integers, Euler characteristics
of sheaves are integers, and any failure of integrality is reported as a
structural inconsistency instead of being rounded away.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, gcd

from .chow import Presentation, build_presentation
from .errors import StructuralError
from .polyring import Poly, TruncatedClass
from . import quiver as qv


def lattice_complement_basis(a: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Basis of the integer functionals vanishing on a primitive vector a.

    Computed from a unimodular matrix V with V a = e_1; rows 2..n of V are the
    basis.  Contents computed against it are independent of all choices.
    """
    n = len(a)
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    w = list(a)
    # eliminate entries pairwise against a pivot position
    piv = next((i for i, x in enumerate(w) if x != 0), None)
    if piv is None:
        raise ValueError("zero vector has no complement basis")
    for i in range(n):
        if i == piv or w[i] == 0:
            continue
        g, u, t = _ext_gcd(w[piv], w[i])
        # rows piv, i of V are recombined unimodularly
        rp = [u * x + t * y for x, y in zip(v[piv], v[i])]
        q1, q2 = w[piv] // g, w[i] // g
        ri = [-q2 * x + q1 * y for x, y in zip(v[piv], v[i])]
        v[piv], v[i] = rp, ri
        w[piv], w[i] = g, 0
    if abs(w[piv]) != 1:
        raise ValueError(f"vector {a} is not primitive")
    if w[piv] == -1:
        v[piv] = [-x for x in v[piv]]
    return [tuple(v[i]) for i in range(n) if i != piv]


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    if y == 0:
        return (abs(x), 1 if x >= 0 else -1, 0)
    g, u, t = _ext_gcd(y, x % y)
    return (g, t, u - (x // y) * t)


def picard_index_and_H(p: Presentation, polarization=None) -> tuple[int, TruncatedClass]:
    """Divisibility index of c_1(T) in the degree-one lattice, and the
    polarization H = c_1(T)/index.

    Requires the degree-one quotient to be one-dimensional unless an explicit
    polarization (integer coordinates on the degree-one generators) is given.
    """
    if p.dim == 0:
        return 1, TruncatedClass(p.layout, p.bound)
    v = p.c1_tangent_coeffs()
    if polarization is None:
        if p.quotient_dimensions[1] != 1:
            raise StructuralError(
                "degree-one quotient has dimension "
                f"{p.quotient_dimensions[1]} != 1; supply an explicit polarization"
            )
        index = _lattice_content(v, p.a)
        if index == 0:
            raise StructuralError("c_1 of the tangent bundle vanishes; no canonical polarization")
        coeffs = [Fraction(x, index) for x in v]
    else:
        coeffs = [Fraction(int(x)) for x in polarization]
        if len(coeffs) != len(p.d):
            raise ValueError("polarization must give one coordinate per vertex")
        index = _lattice_content(v, p.a) if any(v) else 1
    h = Poly.zero(p.layout)
    for i, c in enumerate(coeffs):
        if c and p.d[i]:
            h += p.substitute(Poly.variable(p.layout, p.layout.var(i, 1))).scale(c)
    return index, TruncatedClass.from_poly(h, p.bound)


def _lattice_content(v, a) -> int:
    content = 0
    for phi in lattice_complement_basis(tuple(a)):
        content = gcd(content, sum(f * x for f, x in zip(phi, v)))
    return abs(content)


def degree(p: Presentation, H: TruncatedClass) -> int:
    """The top self-intersection number of the polarization."""
    val = p.integrate(H ** p.dim)
    if val.denominator != 1:
        raise StructuralError(f"degree {val} is not an integer")
    return int(val)


def _twist_integrals(p: Presentation, H: TruncatedClass) -> list[Fraction]:
    """r_k = (1/k!) int H^k td_{dim-k}; chi of the n-th power of the
    polarization is then the polynomial sum_k r_k n^k."""
    td = p.todd_class()
    out = []
    hk = TruncatedClass.const(p.layout, p.bound, 1)
    for k in range(0, p.dim + 1):
        tdc = td.component(p.dim - k)
        if tdc.is_zero():
            out.append(Fraction(0))
        else:
            piece = hk * TruncatedClass(p.layout, p.bound, {p.dim - k: tdc})
            out.append(p.integrate(piece) / factorial(k))
        if k < p.dim:
            hk = hk * H
    return out


def hilbert_series(p: Presentation, H: TruncatedClass, n_values: int | None = None
                   ) -> tuple[list[int], list[int]]:
    """chi of the n-th twist for n = 0..n_values, and the numerator
    coefficients of the generating series times (1-t)^(dim+1).

    The numerator is extracted by exact finite differences of the
    Hilbert-polynomial values; coefficients beyond the dimension must vanish
    and trailing zeros are stripped.
    """
    if n_values is None:
        n_values = p.dim + 1
    if n_values < p.dim + 1:
        raise ValueError(f"need at least dim+1 = {p.dim + 1} values for the numerator")
    rk = _twist_integrals(p, H)
    values = []
    for n in range(0, n_values + 1):
        val = sum((Fraction(n) ** k) * rk[k] for k in range(len(rk)))
        if val.denominator != 1:
            raise StructuralError(f"chi of twist {n} is not an integer: {val}")
        values.append(int(val))
    numerator = []
    for j in range(0, n_values + 1):
        c = sum((-1) ** k * comb(p.dim + 1, k) * values[j - k] for k in range(0, min(j, p.dim + 1) + 1))
        numerator.append(c)
    for j in range(p.dim + 1, n_values + 1):
        if numerator[j] != 0:
            raise StructuralError("numerator does not terminate: values are not polynomial")
    numerator = numerator[: p.dim + 1]
    while numerator and numerator[-1] == 0:
        numerator.pop()
    return values, numerator


def euler_characteristics(p: Presentation) -> tuple[int, int, int]:
    """(chi of the structure sheaf, chi of the tangent bundle, topological
    Euler characteristic)."""
    td = p.todd_class()
    cT, chT = p.tangent_chern()
    out = []
    for val in (p.integrate(td), p.integrate(chT * td), p.integrate(cT.component(p.dim))):
        if val.denominator != 1:
            raise StructuralError(f"Euler characteristic {val} is not an integer")
        out.append(int(val))
    return tuple(out)


@dataclass(frozen=True)
class InvariantReport:
    label: str
    dimension: int
    index: int
    degree: int
    hilbert_values: tuple[int, ...]
    hilbert_numerator: tuple[int, ...]
    chi_O: int
    chi_T: int
    chi_top: int

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "dimension": self.dimension,
            "index": self.index,
            "degree": self.degree,
            "hilbert_values": list(self.hilbert_values),
            "hilbert_numerator": list(self.hilbert_numerator),
            "chi_O": self.chi_O,
            "chi_T": self.chi_T,
            "chi_top": self.chi_top,
        }


def invariant_report(p: Presentation, label: str = "", n_values: int | None = None,
                     polarization=None) -> InvariantReport:
    if p.dim == 0:
        n = (n_values if n_values is not None else 1)
        return InvariantReport(label=label, dimension=0, index=1, degree=1,
                               hilbert_values=tuple([1] * (n + 1)), hilbert_numerator=(1,),
                               chi_O=1, chi_T=0, chi_top=1)
    index, H = picard_index_and_H(p, polarization=polarization)
    values, numerator = hilbert_series(p, H, n_values)
    chi_o, chi_t, chi_top = euler_characteristics(p)
    return InvariantReport(
        label=label,
        dimension=p.dim,
        index=index,
        degree=degree(p, H),
        hilbert_values=tuple(values),
        hilbert_numerator=tuple(numerator),
        chi_O=chi_o,
        chi_T=chi_t,
        chi_top=chi_top,
    )


def kronecker_report(m: int, d: int, e: int, n_values: int | None = None,
                     threads: int = 1) -> InvariantReport:
    q, dv, theta = qv.kronecker(m, d, e)
    p = build_presentation(q, dv, theta, threads=threads)
    return invariant_report(p, label=f"K_{m}({d},{e})", n_values=n_values)


def orbit_consistency(m: int, d: int, e: int, bound: int, threads: int = 1) -> dict:
    """Compute the invariant report for every pair in the duality/periodicity
    orbit (entries capped by ``bound``) and insist that all agree.

    A mismatch names the offending invariant and raises.
    """
    members = sorted(qv.duality_periodicity_orbit(m, d, e, bound))
    dim = m * d * e - d * d - e * e + 1
    reports = {}
    for (dd, ee) in members:
        rep = kronecker_report(m, dd, ee, n_values=dim + 1, threads=threads)
        reports[(dd, ee)] = rep
    base_key = (d, e)
    base = reports[base_key]
    for pair, rep in reports.items():
        for field in ("dimension", "index", "degree", "hilbert_values",
                      "hilbert_numerator", "chi_O", "chi_T", "chi_top"):
            if getattr(rep, field) != getattr(base, field):
                raise StructuralError(
                    f"orbit member K_{m}{pair} disagrees with K_{m}{base_key} on {field}: "
                    f"{getattr(rep, field)} vs {getattr(base, field)}"
                )
    return {"members": members, "reports": {f"K_{m}({a},{b})": reports[(a, b)].to_dict()
                                            for (a, b) in members}}


def format_numerator(coeffs) -> str:
    """Render a coefficient list as a polynomial in t, constant term first."""
    if not coeffs:
        return "0"
    pieces = []
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        if j == 0:
            pieces.append(str(c))
        else:
            t = "t" if j == 1 else f"t^{j}"
            pieces.append(t if c == 1 else f"{c}{t}")
    return " + ".join(pieces) if pieces else "0"


def format_report_table(rep: InvariantReport) -> str:
    rows = [
        ("case", rep.label or "-"),
        ("dimension", str(rep.dimension)),
        ("index", str(rep.index)),
        ("degree", str(rep.degree)),
        ("chi(O)", str(rep.chi_O)),
        ("chi(T)", str(rep.chi_T)),
        ("chi_top", str(rep.chi_top)),
        ("hilbert", ", ".join(str(v) for v in rep.hilbert_values)),
        ("numerator", format_numerator(rep.hilbert_numerator)),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)
