"""Quivers, dimension vectors, stability and the combinatorics they generate.

Everything here is small exact integer arithmetic: the Euler form, canonical
stability, coprimality tests, forbidden subvectors, and the
duality/periodicity orbit of Kronecker pairs.  All values are immutable after
construction and every function is pure.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from itertools import product as iproduct
from math import gcd

from .errors import AssumptionViolation

IntVec = tuple[int, ...]


@dataclass(frozen=True)
class Quiver:
    """A finite directed multigraph: ``vertex_count`` vertices, ordered arrows.

    Arrows are pairs ``(source, target)`` of 0-based vertex indices.  Loops
    and parallel arrows are allowed by the data structure, but the moduli
    machinery requires acyclicity (checked by callers via :meth:`is_acyclic`).
    """

    vertex_count: int
    arrows: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not isinstance(self.vertex_count, int) or self.vertex_count <= 0:
            raise ValueError("vertex_count must be a positive integer")
        object.__setattr__(self, "arrows", tuple((int(s), int(t)) for s, t in self.arrows))
        for s, t in self.arrows:
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise ValueError(f"arrow ({s},{t}) out of range for {self.vertex_count} vertices")

    def is_acyclic(self) -> bool:
        """Kahn's algorithm; loops count as cycles."""
        indeg = [0] * self.vertex_count
        out = [[] for _ in range(self.vertex_count)]
        for s, t in self.arrows:
            indeg[t] += 1
            out[s].append(t)
        queue = [v for v in range(self.vertex_count) if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for w in out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        return seen == self.vertex_count

    def require_acyclic(self):
        if not self.is_acyclic():
            raise AssumptionViolation("the quiver must be acyclic")

    def to_dict(self) -> dict:
        return {"vertices": self.vertex_count, "arrows": [list(a) for a in self.arrows]}


def _check_vector(q: Quiver, v, name: str) -> IntVec:
    v = tuple(int(x) for x in v)
    if len(v) != q.vertex_count:
        raise ValueError(f"{name} has length {len(v)}, expected {q.vertex_count}")
    return v


def check_dim_vector(q: Quiver, d) -> IntVec:
    d = _check_vector(q, d, "dimension vector")
    if any(x < 0 for x in d):
        raise ValueError("dimension vector entries must be nonnegative")
    return d


def euler_form(q: Quiver, d, e) -> int:
    """Homological Euler form: sum_i d_i e_i - sum_arrows d_source e_target."""
    d = _check_vector(q, d, "first argument")
    e = _check_vector(q, e, "second argument")
    total = sum(a * b for a, b in zip(d, e))
    for s, t in q.arrows:
        total -= d[s] * e[t]
    return total


def expected_dimension(q: Quiver, d) -> int:
    """Dimension 1 - <d,d> of the moduli space when nonempty."""
    d = check_dim_vector(q, d)
    return 1 - euler_form(q, d, d)


def pairing(theta, d) -> int:
    return sum(a * b for a, b in zip(theta, d))


def canonical_stability(q: Quiver, d) -> IntVec:
    """Primitive integer vector of the functional x -> <d,x> - <x,d>.

    Vanishes identically in degenerate (e.g. symmetric) situations, in which
    case the caller must supply a stability parameter explicitly.
    """
    d = check_dim_vector(q, d)
    theta = [0] * q.vertex_count
    for s, t in q.arrows:
        theta[s] += d[t]
        theta[t] -= d[s]
    content = 0
    for x in theta:
        content = gcd(content, x)
    if content == 0:
        raise AssumptionViolation(
            "canonical stability vanishes for this dimension vector; supply theta explicitly"
        )
    return tuple(x // content for x in theta)


def check_stability(q: Quiver, d, theta) -> IntVec:
    theta = _check_vector(q, theta, "stability parameter")
    if pairing(theta, d) != 0:
        raise ValueError(f"theta(d) = {pairing(theta, d)} != 0")
    return theta


def proper_subvectors(d: IntVec):
    """All d' with 0 < d' < d componentwise-with-strict-inequality-somewhere."""
    full = tuple(d)
    for sub in iproduct(*[range(x + 1) for x in d]):
        if any(sub) and sub != full:
            yield sub


def is_coprime(q: Quiver, d, theta) -> bool:
    """True iff theta is nonzero on every proper nonzero subvector of d."""
    d = check_dim_vector(q, d)
    theta = check_stability(q, d, theta)
    return all(pairing(theta, sub) != 0 for sub in proper_subvectors(d))


def forbidden_vectors(q: Quiver, d, theta) -> list[IntVec]:
    """Proper nonzero subvectors d' of d with theta(d') > 0, in lex order."""
    d = check_dim_vector(q, d)
    theta = check_stability(q, d, theta)
    return sorted(sub for sub in proper_subvectors(d) if pairing(theta, sub) > 0)


def normalization(d) -> IntVec:
    """Integer vector a with a.d = 1; exists iff d is indivisible.

    Fixes the twist that normalizes the universal bundles and thereby the
    linear relation of the presentation.
    """
    d = tuple(int(x) for x in d)
    g = 0
    coeffs: list[int] = []
    for x in d:
        # extend gcd(g, x) keeping Bezout coefficients for all previous entries
        gg, u, v = _ext_gcd(g, x)
        coeffs = [u * c for c in coeffs] + [v]
        g = gg
    if g != 1:
        raise AssumptionViolation(f"dimension vector {d} is divisible (gcd {g}); no normalization exists")
    return tuple(coeffs)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if a == 0:
        return (abs(b), 0, 1 if b >= 0 else -1)
    g, x, y = _ext_gcd(b % a, a)
    return (g, y - (b // a) * x, x)


def kronecker(m: int, d: int, e: int) -> tuple[Quiver, IntVec, IntVec]:
    """The two-vertex quiver with m parallel arrows, dimension vector (d, e)
    and its canonical stability."""
    if m < 1:
        raise ValueError("need at least one arrow")
    if gcd(d, e) != 1:
        warnings.warn(f"gcd({d},{e}) != 1: the standing coprimality assumption fails", stacklevel=2)
    q = Quiver(2, tuple((0, 1) for _ in range(m)))
    dv = (int(d), int(e))
    return q, dv, canonical_stability(q, dv)


def duality_periodicity_orbit(m: int, d: int, e: int, bound: int) -> set[tuple[int, int]]:
    """Closure of {(d, e)} under the swap (d,e)->(e,d) and the reflection
    (d,e)->(m*e-d, e), keeping pairs with positive entries <= bound.

    Both maps come from isomorphisms of the corresponding moduli spaces, so
    every invariant must agree across the orbit; they also preserve
    m*d*e - d^2 - e^2 + 1.
    """
    if m < 3:
        raise ValueError("orbit maps are used for m >= 3")
    start = (int(d), int(e))
    if min(start) <= 0 or max(start) > bound:
        raise ValueError("seed pair must have positive entries within the bound")
    orbit = {start}
    stack = [start]
    while stack:
        a, b = stack.pop()
        for nxt in ((b, a), (m * b - a, b)):
            if 0 < nxt[0] <= bound and 0 < nxt[1] <= bound and nxt not in orbit:
                orbit.add(nxt)
                stack.append(nxt)
    return orbit


def parse_quiver_spec(data: dict) -> tuple[Quiver, IntVec, IntVec | None]:
    """Parse the documented input schema:

        {"vertices": n, "arrows": [[s, t], ...], "d": [...], "theta": [...]}

    ``theta`` may be omitted, meaning canonical stability.
    """
    if not isinstance(data, dict):
        raise ValueError("quiver spec must be a JSON object")
    unknown = set(data) - {"vertices", "arrows", "d", "theta"}
    if unknown:
        raise ValueError(f"unknown keys in quiver spec: {sorted(unknown)}")
    for key in ("vertices", "arrows", "d"):
        if key not in data:
            raise ValueError(f"quiver spec is missing {key!r}")
    q = Quiver(data["vertices"], tuple(tuple(a) for a in data["arrows"]))
    d = check_dim_vector(q, data["d"])
    if not any(d):
        raise ValueError("dimension vector must have a positive entry")
    theta = None
    if data.get("theta") is not None:
        theta = check_stability(q, d, data["theta"])
    return q, d, theta


def load_quiver_spec(path: str) -> tuple[Quiver, IntVec, IntVec | None]:
    with open(path, encoding="utf-8") as fh:
        return parse_quiver_spec(json.load(fh))
