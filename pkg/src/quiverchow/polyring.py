"""Exact sparse multivariate polynomial kernel in per-vertex variable blocks.

Two variable layouts share all machinery:

* ``roots``  -- Chern-root variables ``xi_i_k`` (one block per vertex, all of
  weight 1), on which the Weyl group ``W = prod_i Sym(d_i)`` acts by permuting
  the second index within each block;
* ``chern``  -- the elementary-symmetric generators ``x_i_k`` of the invariant
  subring, where ``x_i_k`` has weight ``k``.

Coefficients are exact rationals throughout (``int`` where possible,
``fractions.Fraction`` otherwise); there is no floating point anywhere in this
package.

The module provides the symmetrization map (antisymmetrize over the Weyl
group, then divide by the discriminant), both literally and through a
per-monomial shortcut: antisymmetrizing a monomial block against the
Vandermonde determinant yields, up to sign, a Schur polynomial, which is then
rewritten in the elementary-symmetric generators.  The two implementations
must agree exactly and the test suite checks that they do.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product as iproduct
from math import comb, factorial

from .errors import StructuralError

Expo = tuple[int, ...]


class Layout:
    """Variable layout: one block of variables per vertex.

    ``dims[i]`` variables in block ``i``.  Vertices with ``dims[i] == 0``
    contribute no variables.
    """

    __slots__ = ("dims", "kind", "offsets", "nvars", "weights", "names")

    def __init__(self, dims, kind: str = "roots"):
        if kind not in ("roots", "chern"):
            raise ValueError(f"unknown layout kind {kind!r}")
        self.dims = tuple(int(x) for x in dims)
        if any(x < 0 for x in self.dims):
            raise ValueError("block sizes must be nonnegative")
        self.kind = kind
        offsets = []
        total = 0
        for x in self.dims:
            offsets.append(total)
            total += x
        self.offsets = tuple(offsets)
        self.nvars = total
        prefix = "xi" if kind == "roots" else "x"
        names = []
        weights = []
        for i, x in enumerate(self.dims):
            for k in range(1, x + 1):
                names.append(f"{prefix}_{i + 1}_{k}")
                weights.append(1 if kind == "roots" else k)
        self.names = tuple(names)
        self.weights = tuple(weights)

    def block(self, i: int) -> range:
        return range(self.offsets[i], self.offsets[i] + self.dims[i])

    def var(self, i: int, k: int) -> int:
        """Index of the k-th variable (1-based) in block i."""
        if not (0 <= i < len(self.dims) and 1 <= k <= self.dims[i]):
            raise ValueError(f"no variable ({i},{k}) in this layout")
        return self.offsets[i] + k - 1

    def degree(self, expo: Expo) -> int:
        if self.kind == "roots":
            return sum(expo)
        return sum(w * e for w, e in zip(self.weights, expo))

    def zero_expo(self) -> Expo:
        return (0,) * self.nvars

    def __eq__(self, other):
        return isinstance(other, Layout) and self.dims == other.dims and self.kind == other.kind

    def __hash__(self):
        return hash((self.dims, self.kind))

    def __repr__(self):
        return f"Layout(dims={self.dims}, kind={self.kind!r})"


def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction) and c.denominator == 1:
        c = c.numerator
    return str(c)


class Poly:
    """Sparse polynomial over a :class:`Layout`; immutable by convention."""

    __slots__ = ("layout", "terms")

    def __init__(self, layout: Layout, terms: dict | None = None):
        self.layout = layout
        self.terms = terms or {}

    # ---- constructors

    @classmethod
    def zero(cls, layout: Layout) -> "Poly":
        return cls(layout, {})

    @classmethod
    def const(cls, layout: Layout, c) -> "Poly":
        if c == 0:
            return cls.zero(layout)
        return cls(layout, {layout.zero_expo(): c})

    @classmethod
    def variable(cls, layout: Layout, j: int) -> "Poly":
        expo = tuple(1 if i == j else 0 for i in range(layout.nvars))
        return cls(layout, {expo: 1})

    @classmethod
    def monomial(cls, layout: Layout, expo: Expo, c=1) -> "Poly":
        if c == 0:
            return cls.zero(layout)
        return cls(layout, {tuple(expo): c})

    # ---- predicates and views

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Maximal weighted total degree (-1 for the zero polynomial)."""
        if not self.terms:
            return -1
        return max(self.layout.degree(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {self.layout.degree(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_parts(self) -> dict[int, "Poly"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(self.layout.degree(e), {})[e] = c
        return {n: Poly(self.layout, t) for n, t in sorted(parts.items())}

    def coefficient(self, expo: Expo):
        return self.terms.get(tuple(expo), 0)

    def constant(self):
        return self.terms.get(self.layout.zero_expo(), 0)

    # ---- arithmetic

    def _check(self, other: "Poly"):
        if self.layout != other.layout:
            raise ValueError("polynomials live on different layouts")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.layout, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                del out[e]
        return Poly(self.layout, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.layout, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.layout, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly(self.layout, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Poly":
        if c == 0:
            return Poly.zero(self.layout)
        return Poly(self.layout, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Poly.const(self.layout, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.layout, other)
        return isinstance(other, Poly) and self.layout == other.layout and _same_terms(self.terms, other.terms)

    def __hash__(self):
        return hash((self.layout, tuple(sorted((e, Fraction(c)) for e, c in self.terms.items()))))

    # ---- group action

    def act(self, w: "WeylElement") -> "Poly":
        """Permute the second indices of the root variables block by block."""
        if self.layout.kind != "roots":
            raise ValueError("the Weyl group acts on the root variables only")
        maps = []
        for i, perm in enumerate(w.perms):
            off = self.layout.offsets[i]
            maps.extend(off + perm[k] for k in range(len(perm)))
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.layout.nvars
            for j, x in enumerate(e):
                if x:
                    ne[maps[j]] = x
            out[tuple(ne)] = c
        return Poly(self.layout, out)

    # ---- canonical dump

    def dump(self) -> str:
        """Canonical plain text, terms sorted by degree then exponent."""
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=lambda t: (self.layout.degree(t), t)):
            c = self.terms[e]
            monom = " ".join(
                self.layout.names[j] if x == 1 else f"{self.layout.names[j]}^{x}"
                for j, x in enumerate(e)
                if x
            )
            pieces.append(f"{_fmt_coeff(c)} * {monom}" if monom else _fmt_coeff(c))
        return " + ".join(pieces)

    def __repr__(self):
        return f"Poly({self.dump()})"


def _same_terms(a: dict, b: dict) -> bool:
    if len(a) != len(b):
        return False
    for e, c in a.items():
        if e not in b or b[e] != c:
            return False
    return True


# --------------------------------------------------------------------------
# Weyl group


@dataclass(frozen=True)
class WeylElement:
    """One permutation per vertex block; ``perms[i][k]`` is the image of k."""

    perms: tuple[tuple[int, ...], ...]

    @classmethod
    def identity(cls, dims) -> "WeylElement":
        return cls(tuple(tuple(range(x)) for x in dims))

    @property
    def sign(self) -> int:
        s = 1
        for p in self.perms:
            inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
            if inv % 2:
                s = -s
        return s

    def compose(self, other: "WeylElement") -> "WeylElement":
        """self after other: (self.compose(other)).apply = self.apply o other.apply."""
        return WeylElement(
            tuple(tuple(p[qk] for qk in qp) for p, qp in zip(self.perms, other.perms))
        )

    def inverse(self) -> "WeylElement":
        out = []
        for p in self.perms:
            inv = [0] * len(p)
            for k, pk in enumerate(p):
                inv[pk] = k
            out.append(tuple(inv))
        return WeylElement(tuple(out))


def act(w: WeylElement, f: Poly) -> Poly:
    """Apply a Weyl-group element to a polynomial in the root variables."""
    return f.act(w)


def weyl_group(dims):
    """Iterate the full group prod_i Sym(dims[i]); order is deterministic."""
    for combo in iproduct(*[permutations(range(x)) for x in dims]):
        yield WeylElement(tuple(combo))


def weyl_order(dims) -> int:
    out = 1
    for x in dims:
        out *= factorial(x)
    return out


def discriminant(layout: Layout) -> Poly:
    """prod over vertices of prod_{k<l} (xi_{i,l} - xi_{i,k}); 1 if all blocks tiny."""
    if layout.kind != "roots":
        raise ValueError("the discriminant lives in the root variables")
    out = Poly.const(layout, 1)
    for i, x in enumerate(layout.dims):
        for k in range(x):
            for l in range(k + 1, x):
                out = out * (Poly.variable(layout, layout.offsets[i] + l)
                             - Poly.variable(layout, layout.offsets[i] + k))
    return out


def antisymmetrize(f: Poly) -> Poly:
    """Sum of sign(w) * w(f) over the full Weyl group."""
    acc: dict = {}
    for w in weyl_group(f.layout.dims):
        g = f.act(w)
        s = w.sign
        for e, c in g.terms.items():
            v = acc.get(e, 0) + s * c
            if v:
                acc[e] = v
            else:
                del acc[e]
    return Poly(f.layout, acc)


def divide_linear_difference(f: Poly, var_a: int, var_b: int) -> Poly:
    """Exact division by (v_a - v_b); raises if the remainder is nonzero."""
    if f.is_zero():
        return f
    slices: dict[int, dict] = {}
    for e, c in f.terms.items():
        j = e[var_a]
        le = list(e)
        le[var_a] = 0
        slices.setdefault(j, {})[tuple(le)] = c
    top = max(slices)
    q_parts: dict[int, dict] = {}
    carry: dict = {}
    for j in range(top, 0, -1):
        cur = dict(carry)
        for e, c in slices.get(j, {}).items():
            v = cur.get(e, 0) + c
            if v:
                cur[e] = v
            else:
                del cur[e]
        if cur:
            q_parts[j - 1] = cur
        carry = {}
        for e, c in cur.items():
            le = list(e)
            le[var_b] += 1
            carry[tuple(le)] = c
    remainder = dict(slices.get(0, {}))
    for e, c in carry.items():
        v = remainder.get(e, 0) + c
        if v:
            remainder[e] = v
        else:
            del remainder[e]
    if remainder:
        raise StructuralError("division by a Vandermonde factor left a remainder")
    out: dict = {}
    for j, part in q_parts.items():
        for e, c in part.items():
            le = list(e)
            le[var_a] = j
            out[tuple(le)] = c
    return Poly(f.layout, out)


def symmetrize(f: Poly) -> Poly:
    """The symmetrization map: antisymmetrize over the Weyl group, then divide
    by the discriminant.  The division is exact by construction; a nonzero
    remainder indicates a bug and raises :class:`StructuralError`.

    The result is invariant and the map is linear over the invariant subring.
    """
    g = antisymmetrize(f)
    layout = f.layout
    for i, x in enumerate(layout.dims):
        for k in range(x):
            for l in range(k + 1, x):
                g = divide_linear_difference(g, layout.offsets[i] + l, layout.offsets[i] + k)
    return g


def descending_basis(layout: Layout) -> list[Poly]:
    """The monomials prod xi_{i,k}^{e_{i,k}} with 0 <= e_{i,k} <= d_i - k.

    They form a free module basis of the root polynomial ring over its
    invariant subring; there are exactly |W| of them.
    """
    if layout.kind != "roots":
        raise ValueError("the descending basis lives in the root variables")
    out = []
    for expo in descending_exponents(layout):
        out.append(Poly.monomial(layout, expo))
    return out


def descending_exponents(layout: Layout):
    """Exponent tuples of the descending basis, in a deterministic order."""
    ranges = []
    for i, x in enumerate(layout.dims):
        for k in range(1, x + 1):
            ranges.append(range(0, x - k + 1))
    for combo in iproduct(*ranges):
        yield tuple(combo)


def is_invariant(f: Poly) -> bool:
    """Check invariance under the adjacent transpositions of every block."""
    layout = f.layout
    for i, x in enumerate(layout.dims):
        for k in range(x - 1):
            perms = [tuple(range(y)) for y in layout.dims]
            p = list(perms[i])
            p[k], p[k + 1] = p[k + 1], p[k]
            perms[i] = tuple(p)
            if not _same_terms(f.act(WeylElement(tuple(perms))).terms, f.terms):
                return False
    return True


# --------------------------------------------------------------------------
# Per-monomial symmetrization via Schur polynomials
#
# Antisymmetrizing a monomial whose block exponents are pairwise distinct
# gives a generalized Vandermonde determinant; divided by the plain
# Vandermonde this is a Schur polynomial.  Blocks with a repeated exponent
# die.  The sign bookkeeping includes a fixed per-block orientation factor
# (-1)^(d choose 2) relating the determinant orientation to the discriminant.


@lru_cache(maxsize=None)
def part_signature(part: Expo):
    """For one block's exponents: None if repeated, else (sign, partition)."""
    d = len(part)
    if len(set(part)) < d:
        return None
    inv = 0
    for i in range(d):
        for j in range(i + 1, d):
            if part[i] < part[j]:
                inv += 1
    if (d * (d - 1) // 2) % 2:
        inv += 1
    beta = sorted(part, reverse=True)
    lam = tuple(beta[j] - (d - 1 - j) for j in range(d))
    return (-1 if inv % 2 else 1, tuple(x for x in lam if x))


@lru_cache(maxsize=None)
def complete_homogeneous(d: int, r: int) -> tuple:
    """h_r of d variables written in e_1..e_d; exponent tuples of length d."""
    if r < 0:
        return ()
    if r == 0:
        return (((0,) * d, 1),)
    acc: dict = {}
    for k in range(1, min(d, r) + 1):
        sgn = 1 if k % 2 == 1 else -1
        for e, c in complete_homogeneous(d, r - k):
            le = list(e)
            le[k - 1] += 1
            te = tuple(le)
            v = acc.get(te, 0) + sgn * c
            if v:
                acc[te] = v
            else:
                del acc[te]
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=None)
def schur_elementary(d: int, lam: tuple) -> tuple:
    """The Schur polynomial s_lam of d variables in e_1..e_d.

    Uses the determinant det(h_{lam_i - i + j}) of complete homogeneous
    pieces, whose size is the number of parts (at most d after trimming).
    """
    lam = tuple(x for x in lam if x)
    if len(lam) > d:
        return ()
    if not lam:
        return (((0,) * d, 1),)
    if len(lam) == 1:
        return complete_homogeneous(d, lam[0])
    l = len(lam)
    acc: dict = {}
    for perm in permutations(range(l)):
        rows = []
        ok = True
        for i in range(l):
            r = lam[i] - i + perm[i]
            h = complete_homogeneous(d, r)
            if not h:
                ok = False
                break
            rows.append(h)
        if not ok:
            continue
        inv = sum(1 for i in range(l) for j in range(i + 1, l) if perm[i] > perm[j])
        sgn = -1 if inv % 2 else 1
        prod: dict = {(0,) * d: 1}
        for h in rows:
            nxt: dict = {}
            for e1, c1 in prod.items():
                for e2, c2 in h:
                    e = tuple(a + b for a, b in zip(e1, e2))
                    v = nxt.get(e, 0) + c1 * c2
                    if v:
                        nxt[e] = v
                    else:
                        del nxt[e]
            prod = nxt
        for e, c in prod.items():
            v = acc.get(e, 0) + sgn * c
            if v:
                acc[e] = v
            else:
                del acc[e]
    return tuple(sorted(acc.items()))


def symmetrize_elementary(f: Poly) -> Poly:
    """Symmetrize and rewrite in the elementary-symmetric generators in one
    pass, monomial by monomial.  Equal to ``to_elementary(symmetrize(f))`` but
    without touching the Weyl group; the equality is covered by tests.
    """
    layout = f.layout
    if layout.kind != "roots":
        raise ValueError("expected a polynomial in the root variables")
    target = Layout(layout.dims, "chern")
    buckets: dict[tuple, object] = {}
    blocks = [(layout.offsets[i], layout.dims[i]) for i in range(len(layout.dims))]
    for e, c in f.terms.items():
        sgn = 1
        lams = []
        dead = False
        for off, d in blocks:
            sig = part_signature(e[off:off + d])
            if sig is None:
                dead = True
                break
            sgn *= sig[0]
            lams.append(sig[1])
        if dead:
            continue
        key = tuple(lams)
        v = buckets.get(key, 0) + sgn * c
        if v:
            buckets[key] = v
        else:
            del buckets[key]
    return expand_schur_buckets(buckets, target)


def expand_schur_buckets(buckets: dict, target: Layout) -> Poly:
    """Assemble sum of c * prod_i s_{lam_i}(block i) on the chern layout."""
    acc: dict = {}
    for lams, c in buckets.items():
        pieces = [schur_elementary(target.dims[i], lam) for i, lam in enumerate(lams)]
        if any(not p for p in pieces):
            continue
        partial: dict = {target.zero_expo(): c}
        for i, piece in enumerate(pieces):
            off = target.offsets[i]
            nxt: dict = {}
            for e1, c1 in partial.items():
                for e2, c2 in piece:
                    le = list(e1)
                    for k in range(len(e2)):
                        le[off + k] += e2[k]
                    te = tuple(le)
                    v = nxt.get(te, 0) + c1 * c2
                    if v:
                        nxt[te] = v
                    else:
                        del nxt[te]
            partial = nxt
        for e, c2 in partial.items():
            v = acc.get(e, 0) + c2
            if v:
                acc[e] = v
            else:
                del acc[e]
    return Poly(target, acc)


def to_elementary(f: Poly) -> Poly:
    """Rewrite an invariant polynomial in the generators x_{i,k}.

    The rewrite is obtained from linearity of the symmetrization map over the
    invariant subring: symmetrizing f * discriminant returns |W| * f already
    expressed in the generators.
    """
    if not is_invariant(f):
        raise ValueError("polynomial is not invariant under the Weyl group")
    delta = discriminant(f.layout)
    g = symmetrize_elementary(f * delta)
    order = weyl_order(f.layout.dims)
    return Poly(g.layout, {e: _exact_div(c, order) for e, c in g.terms.items()})


def _exact_div(c, n: int):
    v = Fraction(c, n)
    return v.numerator if v.denominator == 1 else v


def from_elementary(f: Poly, roots: Layout) -> Poly:
    """Back-substitute x_{i,k} -> e_k(block i) into the root variables."""
    if f.layout.kind != "chern" or roots.kind != "roots" or f.layout.dims != roots.dims:
        raise ValueError("layout mismatch")
    elem: dict[int, Poly] = {}
    out = Poly.zero(roots)
    for e, c in f.terms.items():
        term = Poly.const(roots, c)
        for j, x in enumerate(e):
            if not x:
                continue
            if j not in elem:
                i = _block_of(f.layout, j)
                k = j - f.layout.offsets[i] + 1
                acc = Poly.zero(roots)
                for sub in combinations(roots.block(i), k):
                    expo = [0] * roots.nvars
                    for v in sub:
                        expo[v] = 1
                    acc += Poly.monomial(roots, tuple(expo))
                elem[j] = acc
            term = term * elem[j] ** x
        out += term
    return out


def _block_of(layout: Layout, j: int) -> int:
    for i in range(len(layout.dims)):
        if layout.offsets[i] <= j < layout.offsets[i] + layout.dims[i]:
            return i
    raise ValueError("variable index out of range")


# --------------------------------------------------------------------------
# Bernoulli numbers and the univariate series behind the Todd class


@lru_cache(maxsize=None)
def _bernoulli_minus(n: int) -> tuple:
    """B_0..B_n with the B_1 = -1/2 convention, by the standard recurrence."""
    out = [Fraction(1)]
    for m in range(1, n + 1):
        s = Fraction(0)
        for k in range(m):
            s += comb(m + 1, k) * out[k]
        out.append(-s / (m + 1))
    return tuple(out)


def bernoulli(n: int) -> Fraction:
    """n-th Bernoulli number in the convention fixed by t/(1 - exp(-t)),
    i.e. B_1 = +1/2."""
    return (-1) ** n * _bernoulli_minus(n)[n]


def todd_series(n: int) -> list[Fraction]:
    """Coefficients of t/(1 - exp(-t)) up to degree n: 1, 1/2, 1/12, 0, -1/720, ..."""
    return [bernoulli(k) / factorial(k) for k in range(n + 1)]


def log_todd_series(n: int) -> list[Fraction]:
    return _series_log(todd_series(n))


def log_one_plus_series(n: int) -> list[Fraction]:
    """Coefficients of log(1 + t) up to degree n."""
    return [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, n + 1)]


def _series_log(q: list[Fraction]) -> list[Fraction]:
    """log of a univariate series with constant term 1, exact."""
    if q[0] != 1:
        raise ValueError("series log needs constant term 1")
    n = len(q) - 1
    out = [Fraction(0)] * (n + 1)
    for m in range(1, n + 1):
        s = q[m]
        for k in range(1, m):
            s -= Fraction(k, m) * out[k] * q[m - k]
        out[m] = s
    return out


# --------------------------------------------------------------------------
# Truncated graded classes


class TruncatedClass:
    """Graded element with homogeneous components in degrees 0..bound.

    Arithmetic silently discards everything above the bound, which realizes
    truncation at the dimension of the ambient variety.
    """

    __slots__ = ("layout", "bound", "parts")

    def __init__(self, layout: Layout, bound: int, parts: dict[int, Poly] | None = None):
        self.layout = layout
        self.bound = bound
        self.parts = {}
        for n, p in (parts or {}).items():
            if p.is_zero() or n > bound:
                continue
            if not p.is_homogeneous() or p.degree() != n:
                raise ValueError(f"component {n} is not homogeneous of degree {n}")
            self.parts[n] = p

    @classmethod
    def const(cls, layout: Layout, bound: int, c) -> "TruncatedClass":
        return cls(layout, bound, {0: Poly.const(layout, c)})

    @classmethod
    def from_poly(cls, p: Poly, bound: int) -> "TruncatedClass":
        return cls(p.layout, bound, p.homogeneous_parts())

    def component(self, n: int) -> Poly:
        return self.parts.get(n, Poly.zero(self.layout))

    def top(self) -> Poly:
        return self.component(self.bound)

    def as_poly(self) -> Poly:
        out = Poly.zero(self.layout)
        for p in self.parts.values():
            out += p
        return out

    def constant(self):
        return self.component(0).constant()

    def _check(self, other):
        if self.layout != other.layout or self.bound != other.bound:
            raise ValueError("truncated classes live on different layouts or bounds")

    def __add__(self, other):
        if not isinstance(other, TruncatedClass):
            other = TruncatedClass.const(self.layout, self.bound, other)
        self._check(other)
        out = dict(self.parts)
        for n, p in other.parts.items():
            s = out.get(n, Poly.zero(self.layout)) + p
            if s.is_zero():
                out.pop(n, None)
            else:
                out[n] = s
        return TruncatedClass(self.layout, self.bound, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedClass(self.layout, self.bound, {n: -p for n, p in self.parts.items()})

    def __sub__(self, other):
        if not isinstance(other, TruncatedClass):
            other = TruncatedClass.const(self.layout, self.bound, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedClass):
            return self.scale(other)
        self._check(other)
        out: dict[int, Poly] = {}
        for n1, p1 in self.parts.items():
            for n2, p2 in other.parts.items():
                n = n1 + n2
                if n > self.bound:
                    continue
                pr = p1 * p2
                if pr.is_zero():
                    continue
                out[n] = out.get(n, Poly.zero(self.layout)) + pr
        return TruncatedClass(self.layout, self.bound, {n: p for n, p in out.items() if not p.is_zero()})

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        if c == 0:
            return TruncatedClass(self.layout, self.bound)
        return TruncatedClass(self.layout, self.bound, {n: p.scale(c) for n, p in self.parts.items()})

    def __pow__(self, k: int) -> "TruncatedClass":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = TruncatedClass.const(self.layout, self.bound, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def inverse(self) -> "TruncatedClass":
        c0 = self.constant()
        if c0 == 0:
            raise ValueError("cannot invert: constant term is zero")
        inv0 = Fraction(1) / Fraction(c0)
        if inv0.denominator == 1:
            inv0 = inv0.numerator
        parts = {0: Poly.const(self.layout, inv0)}
        for n in range(1, self.bound + 1):
            acc = Poly.zero(self.layout)
            for k in range(1, n + 1):
                if k in self.parts and (n - k) in parts:
                    acc += self.parts[k] * parts[n - k]
            if not acc.is_zero():
                parts[n] = acc.scale(-inv0)
        return TruncatedClass(self.layout, self.bound, parts)

    def exp(self) -> "TruncatedClass":
        """Termwise exponential; requires vanishing constant term so the sum
        terminates exactly."""
        if self.constant() != 0:
            raise ValueError("exp needs a vanishing degree-0 component")
        out = TruncatedClass.const(self.layout, self.bound, 1)
        term = TruncatedClass.const(self.layout, self.bound, 1)
        for k in range(1, self.bound + 1):
            term = term * self
            if not term.parts:
                break
            out = out + term.scale(Fraction(1, factorial(k)))
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncatedClass):
            return NotImplemented
        if self.layout != other.layout or self.bound != other.bound:
            return False
        keys = set(self.parts) | set(other.parts)
        return all(self.component(n) == other.component(n) for n in keys)

    def dump(self) -> dict[int, str]:
        return {n: self.parts[n].dump() for n in sorted(self.parts)}

    def __repr__(self):
        return f"TruncatedClass(bound={self.bound}, parts={self.dump()})"


def todd_factor(t: Poly, bound: int) -> TruncatedClass:
    """The multiplicative Todd factor of a degree-1 class t:
    sum_k B_k/k! t^k with the t/(1 - exp(-t)) convention."""
    if t.is_zero():
        return TruncatedClass.const(t.layout, bound, 1)
    if not t.is_homogeneous() or t.degree() != 1:
        raise ValueError("todd_factor expects a homogeneous degree-1 class")
    q = todd_series(bound)
    parts: dict[int, Poly] = {}
    power = Poly.const(t.layout, 1)
    for k in range(0, bound + 1):
        if k:
            power = power * t
        piece = power.scale(q[k])
        if not piece.is_zero():
            parts[k] = parts.get(k, Poly.zero(t.layout)) + piece
    return TruncatedClass(t.layout, bound, parts)


def series_inverse(u: TruncatedClass) -> TruncatedClass:
    return u.inverse()


def series_exp(v: TruncatedClass) -> TruncatedClass:
    return v.exp()
