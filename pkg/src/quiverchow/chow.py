"""The tautological presentation of the rational Chow ring of a quiver moduli
space, with exact per-degree reduction and the classes needed for integration.

The quotient ring is presented on the elementary-symmetric generators
``x_{i,k}`` (Chern classes of the universal summands) by

* one linear relation ``sum_i a_i x_{i,1}`` fixed by a normalization vector
  ``a`` with ``a . d = 1``, and
* the symmetrizations of the relation polynomials attached to the forbidden
  subvectors, spread over a free-module basis of the root ring.

Instead of Groebner bases, each graded piece of the relation ideal is row
reduced exactly: the ideal piece in degree n is spanned by the generators of
degree n together with the variable shifts of the reduced rows one step
below.  Reduced rows are kept fully substituted (a normal-form table), so
rows stay as short as the quotient is small and both reduction and rank
computations are cheap.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import comb, factorial

from .errors import StructuralError
from .polyring import (
    Layout,
    Poly,
    TruncatedClass,
    expand_schur_buckets,
    log_one_plus_series,
    log_todd_series,
    part_signature,
)
from . import quiver as qv

_PACK_SHIFT = 16  # plenty for desk-scale exponents


def relation_polynomial(q: qv.Quiver, d, dprime, layout: Layout | None = None) -> Poly:
    """The product over arrows of prod_{k <= d'_s} prod_{l > d'_t} (xi_{t,l} - xi_{s,k}).

    Arrows are grouped so parallel arrows cost one expansion and a power.
    """
    d = qv.check_dim_vector(q, d)
    dprime = tuple(int(x) for x in dprime)
    if len(dprime) != len(d):
        raise ValueError("subvector has the wrong length")
    if not (any(dprime) and dprime != d and all(0 <= x <= y for x, y in zip(dprime, d))):
        raise ValueError(f"{dprime} is not a proper nonzero subvector of {d}")
    layout = layout or Layout(d, "roots")
    out = Poly.const(layout, 1)
    for (s, t), mult in _arrow_classes(q).items():
        base = Poly.const(layout, 1)
        for k in range(1, dprime[s] + 1):
            for l in range(dprime[t] + 1, d[t] + 1):
                base = base * (Poly.variable(layout, layout.var(t, l))
                               - Poly.variable(layout, layout.var(s, k)))
        out = out * base ** mult
    return out


def _arrow_classes(q: qv.Quiver) -> dict[tuple[int, int], int]:
    classes: dict[tuple[int, int], int] = {}
    for a in q.arrows:
        classes[a] = classes.get(a, 0) + 1
    return classes


def minimal_forbidden(q: qv.Quiver, d, theta) -> list[tuple[int, ...]]:
    """Forbidden subvectors whose relation polynomial divides no other one.

    d' makes d'' redundant when, for every arrow class (s, t), the factor set
    of d' is contained in that of d'': d'_s <= d''_s and d'_t >= d''_t.  The
    generated ideal is unchanged; ties are broken towards the lex-smaller
    vector.
    """
    forb = qv.forbidden_vectors(q, d, theta)
    classes = _arrow_classes(q)

    def covers(dp, dq):
        return all(dp[s] <= dq[s] and dp[t] >= dq[t] for (s, t) in classes)

    keep = []
    for dp in forb:
        redundant = False
        for other in forb:
            if other == dp or not covers(other, dp):
                continue
            if covers(dp, other) and dp < other:
                continue  # mutual cover: the lex-smaller one stays
            redundant = True
            break
        if not redundant:
            keep.append(dp)
    return keep


# --------------------------------------------------------------------------
# Relation generation: symmetrized products of relation polynomials with the
# descending basis, computed per monomial through Schur-polynomial buckets.


def _pack(part) -> int:
    acc = 0
    for e in reversed(part):
        acc = (acc << _PACK_SHIFT) | e
    return acc


def _unpack(packed: int, dim: int) -> tuple[int, ...]:
    mask = (1 << _PACK_SHIFT) - 1
    out = []
    for _ in range(dim):
        out.append(packed & mask)
        packed >>= _PACK_SHIFT
    return tuple(out)


class _SignatureCache:
    """packed block exponents -> 0 (repeated entry) or (sign, partition)."""

    __slots__ = ("dim", "table")

    def __init__(self, dim: int):
        self.dim = dim
        self.table: dict[int, object] = {}

    def get(self, packed: int):
        hit = self.table.get(packed)
        if hit is None:
            sig = part_signature(_unpack(packed, self.dim))
            hit = 0 if sig is None else sig
            self.table[packed] = hit
        return hit


def _basis_by_degree(dims) -> list[dict[int, list[tuple[int, ...]]]]:
    """Per block: degree -> list of packed descending-box exponents."""
    out = []
    for dsize in dims:
        box: dict[int, list[int]] = {}
        ranges = [range(0, dsize - k + 1) for k in range(1, dsize + 1)]
        for combo in itertools.product(*ranges):
            box.setdefault(sum(combo), []).append(_pack(combo))
        out.append({deg: sorted(vals) for deg, vals in sorted(box.items())})
    return out


def generate_symmetrized_relations(q: qv.Quiver, d, theta, bound: int,
                                   prune: bool = True, threads: int = 1) -> list[Poly]:
    """All nonzero symmetrized relation generators of degree <= bound, as
    homogeneous polynomials on the chern layout, deduplicated up to scalar.
    """
    d = qv.check_dim_vector(q, d)
    layout = Layout(d, "roots")
    target = Layout(d, "chern")
    forb = minimal_forbidden(q, d, theta) if prune else qv.forbidden_vectors(q, d, theta)
    delta_deg = sum(x * (x - 1) // 2 for x in d)
    boxes = _basis_by_degree(d)
    caches = [_SignatureCache(x) for x in d]

    def handle(dp):
        f = relation_polynomial(q, d, dp, layout)
        return _symmetrized_products(f, layout, target, boxes, caches, delta_deg, bound)

    found: dict[tuple, tuple[int, Poly]] = {}
    if threads > 1 and len(forb) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(handle, forb))
    else:
        chunks = [handle(dp) for dp in forb]
    for chunk in chunks:
        for key, val in chunk.items():
            found.setdefault(key, val)
    return [poly for _, (_, poly) in sorted(found.items(), key=lambda kv: (kv[1][0], kv[0]))]


def _symmetrized_products(f: Poly, layout: Layout, target: Layout, boxes, caches,
                          delta_deg: int, bound: int) -> dict:
    """Symmetrize f * b for every descending-basis monomial b with result
    degree in [0, bound]; returns canonical-form -> (degree, chern Poly)."""
    if f.is_zero():
        return {}
    degf = f.degree()
    lo = max(0, delta_deg - degf)
    hi = delta_deg + bound - degf
    if hi < lo:
        return {}
    nblocks = len(layout.dims)
    live = [i for i in range(nblocks) if layout.dims[i] > 0]
    terms = []
    for e, c in f.terms.items():
        parts = tuple(_pack(e[layout.offsets[i]:layout.offsets[i] + layout.dims[i]]) for i in live)
        terms.append((parts, c))
    out: dict[tuple, tuple[int, Poly]] = {}

    def emit(buckets, degb):
        if not buckets:
            return
        poly = expand_schur_buckets(_relabel(buckets, live, nblocks), target)
        if poly.is_zero():
            return
        key = _canonical_key(poly)
        if key not in out:
            out[key] = (degf + degb - delta_deg, poly)

    if len(live) == 2:
        _products_two_blocks(terms, boxes, caches, live, lo, hi, emit)
    else:
        _products_generic(terms, boxes, caches, live, lo, hi, emit)
    return out


def _relabel(buckets: dict, live, nblocks: int) -> dict:
    """Reinsert empty blocks (with empty partitions) into bucket keys."""
    if len(live) == nblocks:
        return buckets
    out = {}
    for lams, c in buckets.items():
        full = [()] * nblocks
        for pos, i in enumerate(live):
            full[i] = lams[pos]
        out[tuple(full)] = c
    return out


def _products_two_blocks(terms, boxes, caches, live, lo, hi, emit):
    i0, i1 = live
    cache0, cache1 = caches[i0], caches[i1]
    box1 = boxes[i1]
    grouped: dict[int, list] = {}
    for parts, c in terms:
        grouped.setdefault(parts[0], []).append((parts[1], c))
    grouped_items = sorted(grouped.items())
    for db0, b0s in sorted(boxes[i0].items()):
        deg1_range = [deg for deg in box1 if lo <= db0 + deg <= hi]
        if not deg1_range:
            continue
        for b0 in b0s:
            rows = []
            for p0, lst in grouped_items:
                sig = cache0.get(p0 + b0)
                if sig:
                    rows.append((sig[0], sig[1], lst))
            if not rows:
                continue
            for db1 in deg1_range:
                for b1 in box1[db1]:
                    buckets: dict = {}
                    for s0, l0, lst in rows:
                        for p1, c in lst:
                            sig = cache1.get(p1 + b1)
                            if not sig:
                                continue
                            key = (l0, sig[1])
                            v = buckets.get(key, 0) + s0 * sig[0] * c
                            if v:
                                buckets[key] = v
                            else:
                                del buckets[key]
                    emit(buckets, db0 + db1)


def _products_generic(terms, boxes, caches, live, lo, hi, emit):
    degree_lists = [sorted(boxes[i].items()) for i in live]
    for combo in itertools.product(*degree_lists):
        degb = sum(deg for deg, _ in combo)
        if not (lo <= degb <= hi):
            continue
        for bs in itertools.product(*[vals for _, vals in combo]):
            buckets: dict = {}
            for parts, c in terms:
                sgn = 1
                lams = []
                dead = False
                for pos in range(len(live)):
                    sig = caches[live[pos]].get(parts[pos] + bs[pos])
                    if not sig:
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
            emit(buckets, degb)


def _canonical_key(poly: Poly) -> tuple:
    items = sorted(poly.terms.items())
    lead = Fraction(items[-1][1])
    return tuple((e, Fraction(c) / lead) for e, c in items)


# --------------------------------------------------------------------------
# The presentation itself


class Presentation:
    """Per-degree exact reduction data for the quotient ring.

    Construction computes, for every degree up to the bound, a normal-form
    table sending pivot monomials to combinations of quotient-basis monomials,
    together with the reduced point class.  Instances are immutable after
    construction and safe to share.
    """

    def __init__(self, q: qv.Quiver, d, theta=None, a=None, bound=None,
                 prune: bool = True, threads: int = 1):
        q.require_acyclic()
        d = qv.check_dim_vector(q, d)
        if not any(d):
            raise ValueError("dimension vector must have a positive entry")
        theta = qv.canonical_stability(q, d) if theta is None else qv.check_stability(q, d, theta)
        if not qv.is_coprime(q, d, theta):
            from .errors import AssumptionViolation

            raise AssumptionViolation(
                "standing assumption violated: the dimension vector is not "
                "coprime for this stability parameter; refusing to build"
            )
        dim = qv.expected_dimension(q, d)
        if dim < 0:
            raise StructuralError(f"expected dimension {dim} < 0: empty or non-coprime moduli")
        if a is None:
            a = qv.normalization(d)
        else:
            a = tuple(int(x) for x in a)
            if sum(x * y for x, y in zip(a, d)) != 1:
                raise ValueError("normalization vector must pair to 1 with the dimension vector")
        self.quiver = q
        self.d = d
        self.theta = theta
        self.a = a
        self.dim = dim
        self.bound = dim if bound is None else int(bound)
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")
        self.layout_roots = Layout(d, "roots")
        self.layout = Layout(d, "chern")
        self._cc: dict = {}
        self._setup_substitution()
        self._build(prune, threads)
        self._point_class()

    # ---- linear relation and substitution

    def _setup_substitution(self):
        pivot_vertex = next(i for i, ai in enumerate(self.a) if ai != 0 and self.d[i] > 0)
        self.pivot_vertex = pivot_vertex
        self.pivot = self.layout.var(pivot_vertex, 1)
        coef = Fraction(-1, self.a[pivot_vertex])
        terms = {}
        for i, ai in enumerate(self.a):
            if i == pivot_vertex or ai == 0 or self.d[i] == 0:
                continue
            expo = [0] * self.layout.nvars
            expo[self.layout.var(i, 1)] = 1
            terms[tuple(expo)] = coef * ai
        self._sub_linear = Poly(self.layout, terms)
        self._sub_pows = {0: Poly.const(self.layout, 1), 1: self._sub_linear}
        linear = Poly.zero(self.layout)
        for i, ai in enumerate(self.a):
            if ai == 0 or self.d[i] == 0:
                continue
            linear += Poly.variable(self.layout, self.layout.var(i, 1)).scale(ai)
        self.linear_relation = linear

    def _sub_pow(self, k: int) -> Poly:
        while k not in self._sub_pows:
            m = max(self._sub_pows)
            self._sub_pows[m + 1] = self._sub_pows[m] * self._sub_linear
        return self._sub_pows[k]

    def substitute(self, p: Poly) -> Poly:
        """Eliminate the pivot generator using the linear relation."""
        out = Poly.zero(self.layout)
        plain: dict = {}
        for e, c in p.terms.items():
            k = e[self.pivot]
            if k == 0:
                v = plain.get(e, 0) + c
                if v:
                    plain[e] = v
                else:
                    del plain[e]
            else:
                base = list(e)
                base[self.pivot] = 0
                out += Poly.monomial(self.layout, tuple(base), c) * self._sub_pow(k)
        return out + Poly(self.layout, plain)

    # ---- monomial bookkeeping (pivot-free, lex-descending)

    def _monomials(self, n: int) -> list:
        cache = self._cc.setdefault("mon", {})
        if n not in cache:
            vars_ = [j for j in range(self.layout.nvars) if j != self.pivot]
            weights = self.layout.weights
            out = []
            expo = [0] * self.layout.nvars

            def rec(i, rem):
                if i == len(vars_):
                    if rem == 0:
                        out.append(tuple(expo))
                    return
                j = vars_[i]
                w = weights[j]
                for k in range(rem // w, -1, -1):
                    expo[j] = k
                    rec(i + 1, rem - k * w)
                expo[j] = 0

            rec(0, n)
            out.sort(reverse=True)
            cache[n] = out
        return cache[n]

    def monomial_basis(self, n: int) -> list[Poly]:
        """All degree-n monomials of the ambient polynomial ring (every
        generator, including the one eliminated by the linear relation)."""
        out = []
        expo = [0] * self.layout.nvars

        def rec(j, rem):
            if j == self.layout.nvars:
                if rem == 0:
                    out.append(tuple(expo))
                return
            w = self.layout.weights[j]
            for k in range(rem // w, -1, -1):
                expo[j] = k
                rec(j + 1, rem - k * w)
            expo[j] = 0

        rec(0, n)
        out.sort(reverse=True)
        return [Poly.monomial(self.layout, e) for e in out]

    # ---- ideal row reduction

    def _build(self, prune: bool, threads: int):
        gens = generate_symmetrized_relations(self.quiver, self.d, self.theta,
                                              self.bound, prune=prune, threads=threads)
        self.relations = (self.linear_relation,) + tuple(gens)
        by_degree: dict[int, list[dict]] = {}
        for g in gens:
            sub = self.substitute(g)
            if sub.is_zero():
                continue
            n = sub.degree()
            if n == 0:
                raise StructuralError(
                    "a relation reduces to a nonzero constant: empty or non-coprime moduli"
                )
            by_degree.setdefault(n, []).append(dict(sub.terms))
        nf_tables: list[dict] = []
        dims: list[int] = []
        for n in range(0, self.bound + 1):
            nf: dict = {}
            occ: dict = {}
            for vec in by_degree.get(n, []):
                self._insert(nf, occ, vec)
            for j in range(self.layout.nvars):
                if j == self.pivot:
                    continue
                w = self.layout.weights[j]
                if n - w < 0:
                    continue
                for piv in sorted(nf_tables[n - w], reverse=True):
                    row = nf_tables[n - w][piv]
                    vec = {_shift(piv, j): 1}
                    for m, c in row.items():
                        vec[_shift(m, j)] = -c
                    self._insert(nf, occ, vec)
            nf_tables.append(nf)
            dims.append(len(self._monomials(n)) - len(nf))
        self._nf = nf_tables
        self.quotient_dimensions = tuple(dims)
        if dims[0] != 1:
            raise StructuralError("degree-0 quotient is not one-dimensional")
        if self.bound == self.dim:
            if dims[-1] != 1:
                raise StructuralError(
                    f"top-degree quotient has dimension {dims[-1]}: empty or non-coprime moduli"
                )
            if dims != dims[::-1]:
                raise StructuralError(f"quotient dimensions {dims} are not palindromic")

    @staticmethod
    def _insert(nf: dict, occ: dict, vec: dict):
        red: dict = {}
        for mon, c in vec.items():
            row = nf.get(mon)
            if row is None:
                v = red.get(mon, 0) + c
                if v:
                    red[mon] = v
                else:
                    del red[mon]
            else:
                for m2, c2 in row.items():
                    v = red.get(m2, 0) + c * c2
                    if v:
                        red[m2] = v
                    else:
                        del red[m2]
        if not red:
            return
        piv = max(red)
        cp = red.pop(piv)
        row = {m: Fraction(-c) / cp for m, c in red.items()}
        for other in list(occ.get(piv, ())):
            r2 = nf[other]
            c2 = r2.pop(piv)
            occ[piv].discard(other)
            for m3, c3 in row.items():
                v = r2.get(m3, 0) + c2 * c3
                if v:
                    r2[m3] = v
                    occ.setdefault(m3, set()).add(other)
                else:
                    del r2[m3]
                    occ.get(m3, set()).discard(other)
        occ.pop(piv, None)
        nf[piv] = row
        for m3 in row:
            occ.setdefault(m3, set()).add(piv)

    def quotient_basis(self, n: int) -> list[Poly]:
        """Monomials spanning the degree-n quotient, in the reduction order."""
        if not (0 <= n <= self.bound):
            raise ValueError(f"degree {n} outside 0..{self.bound}")
        nf = self._nf[n]
        return [Poly.monomial(self.layout, e) for e in self._monomials(n) if e not in nf]

    def _reduce_component(self, p: Poly, n: int) -> dict:
        """Reduce a substituted homogeneous degree-n polynomial to coordinates
        on the quotient basis."""
        nf = self._nf[n]
        red: dict = {}
        for mon, c in p.terms.items():
            row = nf.get(mon)
            if row is None:
                v = red.get(mon, 0) + c
                if v:
                    red[mon] = v
                else:
                    del red[mon]
            else:
                for m2, c2 in row.items():
                    v = red.get(m2, 0) + c * c2
                    if v:
                        red[m2] = v
                    else:
                        del red[m2]
        return red

    def normal_form(self, c) -> TruncatedClass:
        """Image in the chosen quotient basis, degree by degree; idempotent."""
        tc = self._coerce(c)
        parts: dict[int, Poly] = {}
        for n, p in tc.parts.items():
            red = self._reduce_component(self.substitute(p), n)
            if red:
                parts[n] = Poly(self.layout, red)
        return TruncatedClass(self.layout, self.bound, parts)

    def _coerce(self, c) -> TruncatedClass:
        if isinstance(c, TruncatedClass):
            if c.layout != self.layout or c.bound != self.bound:
                raise ValueError("class lives on a different layout or bound")
            return c
        if isinstance(c, Poly):
            return TruncatedClass.from_poly(c, self.bound)
        return TruncatedClass.const(self.layout, self.bound, c)

    # ---- point class and integration

    def _point_class(self):
        if self.bound != self.dim:
            self.point = None
            self._point_coord = None
            return
        right = self._point_side(dual=False)
        left = self._point_side(dual=True)
        r = self._reduce_component(self.substitute(right.component(self.dim)), self.dim)
        l = self._reduce_component(self.substitute(left.component(self.dim)), self.dim)
        if r != l:
            raise StructuralError("the two expressions for the point class disagree after reduction")
        if not r:
            raise StructuralError("point class reduces to zero: moduli empty or assumptions violated")
        self._point_coord = r
        self.point = TruncatedClass(self.layout, self.bound, {self.dim: Poly(self.layout, r)})

    def _point_side(self, dual: bool) -> TruncatedClass:
        num_exp = [0] * len(self.d)
        for (s, t), mult in _arrow_classes(self.quiver).items():
            if dual:
                num_exp[s] += mult * self.d[t]
            else:
                num_exp[t] += mult * self.d[s]
        num = TruncatedClass.const(self.layout, self.bound, 1)
        den = TruncatedClass.const(self.layout, self.bound, 1)
        for i in range(len(self.d)):
            if self.d[i] == 0:
                continue
            ci = self.chern_universal(i, dual=dual)
            if num_exp[i]:
                num = num * ci ** num_exp[i]
            den = den * ci ** self.d[i]
        return num * den.inverse()

    def point_class(self) -> TruncatedClass:
        """The reduced top-degree point class; both defining expressions are
        computed and must agree."""
        if self.point is None:
            raise StructuralError("point class requires the bound to equal the dimension")
        return self.point

    def integrate(self, c) -> Fraction:
        """Degree map: coefficient of the top component against the point class."""
        if self.point is None:
            raise StructuralError("integration requires the bound to equal the dimension")
        top = self.normal_form(c).component(self.dim)
        if top.is_zero():
            return Fraction(0)
        ((mon, coeff),) = top.terms.items()
        ((monp, coeffp),) = self._point_coord.items()
        if mon != monp:
            raise StructuralError("reduced class not supported on the point-class monomial")
        return Fraction(coeff) / Fraction(coeffp)

    # ---- characteristic classes on the chern generators

    def chern_universal(self, i: int, dual: bool = False) -> TruncatedClass:
        """Total Chern class of the i-th universal summand (or its dual)."""
        key = ("cU", i, dual)
        if key not in self._cc:
            p = Poly.const(self.layout, 1)
            for k in range(1, self.d[i] + 1):
                sign = (-1) ** k if dual else 1
                p += self.substitute(Poly.variable(self.layout, self.layout.var(i, k))).scale(sign)
            self._cc[key] = TruncatedClass.from_poly(p, self.bound)
        return self._cc[key]

    def ch_universal(self, i: int) -> TruncatedClass:
        """Chern character of the i-th universal summand."""
        key = ("chU", i)
        if key not in self._cc:
            parts = {0: Poly.const(self.layout, self.d[i])}
            for k in range(1, self.bound + 1):
                p = self._power_sum(i, k).scale(Fraction(1, factorial(k)))
                if not p.is_zero():
                    parts[k] = p
            self._cc[key] = TruncatedClass(self.layout, self.bound, parts)
        return self._cc[key]

    def _power_sum(self, i: int, k: int) -> Poly:
        """Power sum of the Chern roots of vertex i, substituted."""
        key = ("ps", i, k)
        if key not in self._cc:
            if k == 0:
                res = Poly.const(self.layout, self.d[i])
            else:
                res = Poly.zero(self.layout)
                for j in range(1, min(k, self.d[i]) + 1):
                    ej = self.substitute(Poly.variable(self.layout, self.layout.var(i, j)))
                    sign = 1 if j % 2 == 1 else -1
                    if j == k:
                        res += ej.scale(sign * k)
                    else:
                        res += (ej * self._power_sum(i, k - j)).scale(sign)
            self._cc[key] = res
        return self._cc[key]

    def _pair_sum(self, i: int, j: int, k: int) -> Poly:
        """sum over roots of vertex i and j of (xi_j - xi_i)^k."""
        key = ("pair", i, j, k)
        if key not in self._cc:
            res = Poly.zero(self.layout)
            for u in range(0, k + 1):
                c = comb(k, u) * (-1) ** (k - u)
                res += (self._power_sum(j, u) * self._power_sum(i, k - u)).scale(c)
            self._cc[key] = res
        return self._cc[key]

    def _endo_sums(self, k: int) -> Poly:
        """Arrow pair sums minus vertex pair sums in degree k (k >= 1)."""
        key = ("endo", k)
        if key not in self._cc:
            res = Poly.zero(self.layout)
            for (s, t), mult in _arrow_classes(self.quiver).items():
                res += self._pair_sum(s, t, k).scale(mult)
            for i in range(len(self.d)):
                if self.d[i]:
                    res -= self._pair_sum(i, i, k)
            self._cc[key] = res
        return self._cc[key]

    def _exp_of_series(self, coeffs) -> TruncatedClass:
        parts: dict[int, Poly] = {}
        for k in range(1, self.bound + 1):
            if coeffs[k] == 0:
                continue
            p = self._endo_sums(k).scale(coeffs[k])
            if not p.is_zero():
                parts[k] = p
        return TruncatedClass(self.layout, self.bound, parts).exp()

    def todd_class(self) -> TruncatedClass:
        """Todd class of the moduli space, on the chern generators.

        Multiplicativity over the tangent-bundle presentation turns the class
        into exp of a series in the root differences, which lands in power
        sums and stays entirely on the invariant generators.
        """
        if "td" not in self._cc:
            self._cc["td"] = self._exp_of_series(log_todd_series(self.bound))
        return self._cc["td"]

    def tangent_chern(self) -> tuple[TruncatedClass, TruncatedClass]:
        """(total Chern class, Chern character) of the tangent bundle."""
        if "cT" not in self._cc:
            self._cc["cT"] = self._exp_of_series(log_one_plus_series(self.bound))
            parts = {0: Poly.const(self.layout, self.dim)}
            for k in range(1, self.bound + 1):
                p = self._endo_sums(k).scale(Fraction(1, factorial(k)))
                if not p.is_zero():
                    parts[k] = p
            self._cc["chT"] = TruncatedClass(self.layout, self.bound, parts)
        return self._cc["cT"], self._cc["chT"]

    def c1_tangent_coeffs(self) -> tuple[int, ...]:
        """Integer coordinates of c_1(T) on the degree-one generators.

        Arrows with a rank-zero endpoint carry a zero bundle and contribute
        nothing; in particular empty vertices get no phantom coordinate.
        """
        v = [0] * len(self.d)
        for (s, t), mult in _arrow_classes(self.quiver).items():
            if self.d[s] == 0 or self.d[t] == 0:
                continue
            v[t] += mult * self.d[s]
            v[s] -= mult * self.d[t]
        return tuple(v)

    # ---- reporting

    def __repr__(self):
        return (f"Presentation(d={self.d}, theta={self.theta}, dim={self.dim}, "
                f"quotient_dimensions={self.quotient_dimensions})")

    def report(self) -> dict:
        return {
            "quiver": self.quiver.to_dict(),
            "d": list(self.d),
            "theta": list(self.theta),
            "a": list(self.a),
            "dimension": self.dim,
            "bound": self.bound,
            "generators": list(self.layout.names),
            "quotient_dimensions": list(self.quotient_dimensions),
            "relations": [g.dump() for g in self.relations],
        }


def _shift(expo: tuple, j: int) -> tuple:
    out = list(expo)
    out[j] += 1
    return tuple(out)


def build_presentation(q: qv.Quiver, d, theta=None, a=None, bound=None,
                       prune: bool = True, threads: int = 1) -> Presentation:
    """Build the per-degree reduction data; see :class:`Presentation`."""
    return Presentation(q, d, theta=theta, a=a, bound=bound, prune=prune, threads=threads)


def normal_form(p: Presentation, c) -> TruncatedClass:
    return p.normal_form(c)


def point_class(p: Presentation) -> TruncatedClass:
    return p.point_class()


def todd_class(p: Presentation) -> TruncatedClass:
    return p.todd_class()


def tangent_chern(p: Presentation) -> tuple[TruncatedClass, TruncatedClass]:
    return p.tangent_chern()


def integrate(p: Presentation, c) -> Fraction:
    return p.integrate(c)


def todd_of_total_chern(c: TruncatedClass) -> TruncatedClass:
    """Todd class assembled from a total Chern class by the splitting
    principle: formal power sums via Newton's identities, then exp of the
    logarithmic Todd series.  Used as an independent cross-check.
    """
    bound = c.bound
    if c.constant() != 1:
        raise ValueError("total Chern class must start with 1")
    p: dict[int, Poly] = {}
    for k in range(1, bound + 1):
        acc = Poly.zero(c.layout)
        for i in range(1, k):
            acc += (c.component(i) * p[k - i]).scale((-1) ** (i - 1))
        acc += c.component(k).scale((-1) ** (k - 1) * k)
        p[k] = acc
    lq = log_todd_series(bound)
    parts: dict[int, Poly] = {}
    for k in range(1, bound + 1):
        piece = p[k].scale(lq[k])
        if not piece.is_zero():
            parts[k] = piece
    return TruncatedClass(c.layout, bound, parts).exp()
