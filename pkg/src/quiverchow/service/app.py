"""FastAPI application wrapping the engine.

Presentations are cached in process (they are expensive and immutable), so a
long-running server amortizes the heavy construction across requests.  Error
mapping: malformed input is 400/422, violated standing assumptions are 409,
internal inconsistencies are 500; all carry a typed body.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import chow, invariants, quiver as qv, selfcheck
from ..errors import AssumptionViolation, StructuralError
from .models import (
    CheckRequest,
    CheckResponse,
    ErrorBody,
    HilbertResponse,
    InvariantsResponse,
    JobRequest,
    PointClassResponse,
    ToddResponse,
)

app = FastAPI(title="quiverchow", version="0.1.0")

_cache: dict = {}
_cache_lock = threading.Lock()


def _resolve(req: JobRequest):
    """Turn a request into (label, Quiver, d, theta)."""
    if req.kronecker is not None:
        k = req.kronecker
        q, d, theta = qv.kronecker(k.m, k.d, k.e)
        label = f"K_{k.m}({k.d},{k.e})"
    else:
        spec = req.quiver
        q, d, theta = qv.parse_quiver_spec(spec.model_dump())
        label = f"quiver({spec.vertices} vertices, {len(spec.arrows)} arrows, d={tuple(d)})"
    if req.theta is not None:
        theta = qv.check_stability(q, d, req.theta)
    if theta is None:
        theta = qv.canonical_stability(q, d)
    return label, q, d, theta


def _presentation(label, q, d, theta, threads: int) -> chow.Presentation:
    key = (q.vertex_count, q.arrows, tuple(d), tuple(theta))
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    p = chow.build_presentation(q, d, theta, threads=threads)
    with _cache_lock:
        _cache.setdefault(key, p)
    return p


@app.exception_handler(AssumptionViolation)
async def _assumption_handler(request: Request, exc: AssumptionViolation):
    return JSONResponse(status_code=409,
                        content=ErrorBody(kind="assumption-violation", message=str(exc)).model_dump())


@app.exception_handler(StructuralError)
async def _structural_handler(request: Request, exc: StructuralError):
    return JSONResponse(status_code=500,
                        content=ErrorBody(kind="structural", message=str(exc)).model_dump())


@app.exception_handler(ValueError)
async def _value_handler(request: Request, exc: ValueError):
    return JSONResponse(status_code=400,
                        content=ErrorBody(kind="usage", message=str(exc)).model_dump())


@app.exception_handler(RequestValidationError)
async def _validation_handler(request: Request, exc: RequestValidationError):
    return JSONResponse(status_code=422,
                        content=ErrorBody(kind="usage", message=str(exc)).model_dump())


@app.get("/api/health")
def health():
    return {"status": "ok"}


@app.post("/api/invariants", response_model=InvariantsResponse)
def api_invariants(req: JobRequest):
    label, q, d, theta = _resolve(req)
    p = _presentation(label, q, d, theta, req.threads)
    n_values = req.series_length
    if n_values is not None and n_values < p.dim + 1:
        raise ValueError(f"series length must be at least dim+1 = {p.dim + 1}")
    rep = invariants.invariant_report(p, label=label, n_values=n_values,
                                      polarization=req.polarization)
    return InvariantsResponse(**rep.to_dict(), quotient_dimensions=list(p.quotient_dimensions))


@app.post("/api/point-class", response_model=PointClassResponse)
def api_point_class(req: JobRequest):
    label, q, d, theta = _resolve(req)
    p = _presentation(label, q, d, theta, req.threads)
    pt = p.point_class().component(p.dim)
    reduced = {_monomial_name(p, e): str(c) for e, c in sorted(pt.terms.items())}
    return PointClassResponse(label=label, dimension=p.dim, reduced=reduced,
                              sides_agree=True, integral=str(p.integrate(p.point_class())))


@app.post("/api/todd", response_model=ToddResponse)
def api_todd(req: JobRequest):
    label, q, d, theta = _resolve(req)
    p = _presentation(label, q, d, theta, req.threads)
    td = p.todd_class()
    bound = p.bound if req.series_length is None else min(req.series_length, p.bound)
    return ToddResponse(label=label, dimension=p.dim,
                        components={n: td.component(n).dump() for n in range(bound + 1)})


@app.post("/api/hilbert", response_model=HilbertResponse)
def api_hilbert(req: JobRequest):
    label, q, d, theta = _resolve(req)
    p = _presentation(label, q, d, theta, req.threads)
    n_values = req.series_length
    if n_values is not None and n_values < p.dim + 1:
        raise ValueError(f"series length must be at least dim+1 = {p.dim + 1}")
    if p.dim == 0:
        rep = invariants.invariant_report(p, label=label, n_values=n_values)
        return HilbertResponse(label=label, dimension=0, index=rep.index,
                               values=list(rep.hilbert_values), numerator=list(rep.hilbert_numerator))
    index, H = invariants.picard_index_and_H(p, polarization=req.polarization)
    values, numerator = invariants.hilbert_series(p, H, n_values)
    return HilbertResponse(label=label, dimension=p.dim, index=index,
                           values=values, numerator=numerator)


@app.post("/api/check", response_model=CheckResponse)
def api_check(req: CheckRequest):
    result = selfcheck.run_checks(level=req.level, extended=req.extended, threads=req.threads)
    return CheckResponse(ok=result.ok, passed=result.passed, failed=result.failed,
                         lines=result.lines)


def _monomial_name(p: chow.Presentation, expo) -> str:
    parts = [
        p.layout.names[j] if k == 1 else f"{p.layout.names[j]}^{k}"
        for j, k in enumerate(expo)
        if k
    ]
    return " ".join(parts) if parts else "1"
