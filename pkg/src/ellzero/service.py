"""In-process handlers and the HTTP service wrapping the library.

Each operation is a plain function taking and returning pydantic models, so
the command-line client can call them directly without a running server; the
FastAPI application exposes the same handlers over HTTP with DomainError
mapped to 400 and verification/structural failures to 409.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional, Sequence, Union

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import elliptic, picard_fuchs, zero_count
from .errors import DegenerateMuError, DomainError, StructuralError, VerificationError
from .polyalg import Poly, RatFunc
from .reduction import (
    MU_RATIONAL_SPECIAL,
    ReductionCase,
    ReductionInput,
    identity_residual,
    psi_bound,
    psi_bound_rational,
    reduce as reduce_form,
)
from .triangle.decompose import PerturbationSpec, melnikov_decompose
from .triangle.geometry import level_params
from .triangle.melnikov import melnikov_eval, melnikov_eval_quadrature, melnikov_zero_report

MuSpec = Union[str, Sequence[str]]


def parse_mu(mu: MuSpec):
    """Parse a parameter-function spec: "special", a rational constant, or a
    coefficient list (lowest power first) for a polynomial in k."""
    if isinstance(mu, str):
        if mu == "special":
            return MU_RATIONAL_SPECIAL
        try:
            return Fraction(mu)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse mu constant {mu!r}") from exc
    return Poly.from_strings(list(mu))


def _infer_case(mu) -> ReductionCase:
    if isinstance(mu, RatFunc):
        return ReductionCase.RATIONAL_SPECIAL
    if isinstance(mu, Poly):
        if mu.degree() >= 2:
            return ReductionCase.POLY_S_GE_2
        if mu.degree() == 1:
            return ReductionCase.POLY_S_EQ_1
        return ReductionCase.CONSTANT_MU
    return ReductionCase.CONSTANT_MU


# ---------------------------------------------------------------------------
# Schemas
# ---------------------------------------------------------------------------


class EllipticEvalRequest(BaseModel):
    kind: Literal["K", "E", "Pi", "RF", "RD", "RJ"]
    k: float
    mu: Optional[float] = None


class ValueResponse(BaseModel):
    value: float


class PFVerifyRequest(BaseModel):
    mu: MuSpec
    k_values: list[float] = Field(default=[-0.8, -0.5, -0.2, 0.2, 0.5, 0.8])
    step_first: float = 1e-4
    step_second: float = 1e-3
    tol_first: float = 1e-6
    tol_second: float = 1e-3
    tol_wronskian: float = 1e-4


class PFPointResult(BaseModel):
    k: float
    residual_first: float
    residual_second: float
    wronskian_closed: float
    wronskian_fd: float
    wronskian_rel_err: float


class PFVerifyResponse(BaseModel):
    points: list[PFPointResult]
    limit_at_zero: Optional[float]
    ok: bool


class BoundRequest(BaseModel):
    m: int
    n: int
    l: int
    s: Optional[int] = None
    special: bool = False


class BoundResponse(BaseModel):
    psi: int


class ReduceRequest(BaseModel):
    p: list[str]
    q: list[str]
    r: list[str]
    mu: MuSpec
    check_points: list[float] = Field(default=[])
    tol: float = 1e-5


class ReduceResponse(BaseModel):
    case: str
    M1: list[str]
    N1: list[str]
    degree_cap_m: int
    degree_cap_n: int
    scale_description: str
    residuals: list[float]
    ok: bool


class ZerosRequest(BaseModel):
    p: list[str]
    q: list[str]
    r: list[str]
    mu: Optional[MuSpec] = None
    interval: tuple[float, float] = (-1.0, 1.0)
    grid: int = 64


class ZeroReportModel(BaseModel):
    roots: list[tuple[float, float]]
    touch_points: list[float]
    count: int
    bound: int
    bound_satisfied: bool
    stable: bool
    grid_used: int
    message: str


class SpecModel(BaseModel):
    n: int
    a_plus: list[tuple[int, int, str]] = Field(default=[])
    a_minus: list[tuple[int, int, str]] = Field(default=[])
    b_plus: list[tuple[int, int, str]] = Field(default=[])
    b_minus: list[tuple[int, int, str]] = Field(default=[])

    def to_spec(self) -> PerturbationSpec:
        def conv(entries):
            return [(i, j, Fraction(c)) for i, j, c in entries]

        return PerturbationSpec(
            n=self.n,
            a_plus=conv(self.a_plus),
            a_minus=conv(self.a_minus),
            b_plus=conv(self.b_plus),
            b_minus=conv(self.b_minus),
        )


class MelnikovDecomposeRequest(BaseModel):
    spec: SpecModel


class DecompositionModel(BaseModel):
    n: int
    alpha_p: list[str]
    beta_p: list[str]
    gamma_p: list[str]
    alpha_m: list[str]
    beta_m: list[str]
    gamma_m: list[str]
    phi_h: list[str]
    phi_0: list[str]
    log_h: list[str]


class MelnikovEvalRequest(BaseModel):
    spec: SpecModel
    h_values: list[float]
    quadrature: bool = False


class MelnikovPoint(BaseModel):
    h: float
    u: float
    value: float


class MelnikovEvalResponse(BaseModel):
    points: list[MelnikovPoint]


class MelnikovZerosRequest(BaseModel):
    spec: SpecModel
    grid: int = 64


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------


def handle_elliptic_eval(req: EllipticEvalRequest) -> ValueResponse:
    k = req.k
    if req.kind == "K":
        return ValueResponse(value=elliptic.complete_k(k))
    if req.kind == "E":
        return ValueResponse(value=elliptic.complete_e(k))
    if req.kind == "Pi":
        if req.mu is None:
            raise DomainError("kind Pi requires mu")
        return ValueResponse(value=elliptic.complete_pi(req.mu, k))
    # The Carlson kinds evaluate the symmetric form underlying the Legendre
    # integral at modulus k (and parameter mu for RJ).
    y = 1.0 - k * k
    if req.kind == "RF":
        return ValueResponse(value=elliptic.carlson_rf(0.0, y, 1.0))
    if req.kind == "RD":
        return ValueResponse(value=elliptic.carlson_rd(0.0, y, 1.0))
    if req.mu is None:
        raise DomainError("kind RJ requires mu")
    return ValueResponse(value=elliptic.carlson_rj(0.0, y, 1.0, 1.0 - req.mu))


def handle_pf_verify(req: PFVerifyRequest) -> PFVerifyResponse:
    mu = parse_mu(req.mu)
    points = []
    ok = True
    for k in req.k_values:
        r1, _ = picard_fuchs.pf_residual(mu, k, step=req.step_first)
        _, r2 = picard_fuchs.pf_residual(mu, k, step=req.step_second)
        w_closed = picard_fuchs.wronskian(mu, k)
        w_fd = picard_fuchs.wronskian_fd(mu, k)
        rel = abs(w_closed - w_fd) / max(1e-300, abs(w_fd))
        ok = ok and r1 <= req.tol_first and r2 <= req.tol_second and rel <= req.tol_wronskian
        points.append(
            PFPointResult(
                k=k,
                residual_first=r1,
                residual_second=r2,
                wronskian_closed=w_closed,
                wronskian_fd=w_fd,
                wronskian_rel_err=rel,
            )
        )
    try:
        limit = picard_fuchs.wronskian_limit_zero(mu)
    except (DomainError, DegenerateMuError):
        limit = None
    return PFVerifyResponse(points=points, limit_at_zero=limit, ok=ok)


def handle_bound(req: BoundRequest) -> BoundResponse:
    if req.special:
        return BoundResponse(psi=psi_bound_rational(req.m, req.n, req.l))
    if req.s is None:
        raise DomainError("polynomial bound requires the parameter degree s")
    return BoundResponse(psi=psi_bound(req.m, req.n, req.l, req.s))


def handle_reduce(req: ReduceRequest) -> ReduceResponse:
    mu = parse_mu(req.mu)
    case = _infer_case(mu)
    inp = ReductionInput(
        p=Poly.from_strings(req.p),
        q=Poly.from_strings(req.q),
        r=Poly.from_strings(req.r),
        mu=mu,
        case=case,
    )
    form = reduce_form(inp)
    residuals = [identity_residual(inp, k) for k in req.check_points]
    ok = all(r <= req.tol for r in residuals)
    if not ok:
        raise VerificationError(
            f"derivative identity residuals {residuals} exceed tolerance {req.tol}"
        )
    return ReduceResponse(
        case=case.value,
        M1=form.M1.to_strings(),
        N1=form.N1.to_strings(),
        degree_cap_m=form.degree_cap_m,
        degree_cap_n=form.degree_cap_n,
        scale_description=form.scale_description,
        residuals=residuals,
        ok=ok,
    )


def _report_model(report: zero_count.ZeroReport) -> ZeroReportModel:
    return ZeroReportModel(
        roots=list(report.roots),
        touch_points=list(report.touch_points),
        count=report.count,
        bound=report.bound,
        bound_satisfied=report.bound_satisfied,
        stable=report.stable,
        grid_used=report.grid_used,
        message=report.message,
    )


def handle_zeros(req: ZerosRequest) -> ZeroReportModel:
    r = Poly.from_strings(req.r)
    mu = parse_mu(req.mu) if req.mu is not None else None
    if not r.is_zero() and mu is None:
        raise DomainError("a nonzero r requires a parameter function mu")
    report = zero_count.count_zeros(
        Poly.from_strings(req.p), Poly.from_strings(req.q), r, mu,
        interval=req.interval, grid=req.grid,
    )
    return _report_model(report)


def handle_melnikov_decompose(req: MelnikovDecomposeRequest) -> DecompositionModel:
    dec = melnikov_decompose(req.spec.to_spec())
    return DecompositionModel(
        n=dec.n,
        alpha_p=dec.alpha_p.to_strings(),
        beta_p=dec.beta_p.to_strings(),
        gamma_p=dec.gamma_p.to_strings(),
        alpha_m=dec.alpha_m.to_strings(),
        beta_m=dec.beta_m.to_strings(),
        gamma_m=dec.gamma_m.to_strings(),
        phi_h=dec.phi_h.to_strings(),
        phi_0=dec.phi_0.to_strings(),
        log_h=dec.log_h.to_strings(),
    )


def handle_melnikov_eval(req: MelnikovEvalRequest) -> MelnikovEvalResponse:
    spec = req.spec.to_spec()
    dec = None if req.quadrature else melnikov_decompose(spec)
    points = []
    for h in req.h_values:
        u = level_params(h).u
        value = (
            melnikov_eval_quadrature(spec, h)
            if req.quadrature
            else melnikov_eval(dec, h)
        )
        points.append(MelnikovPoint(h=h, u=u, value=value))
    return MelnikovEvalResponse(points=points)


def handle_melnikov_zeros(req: MelnikovZerosRequest) -> ZeroReportModel:
    report = melnikov_zero_report(req.spec.to_spec(), grid=req.grid)
    return _report_model(report)


# ---------------------------------------------------------------------------
# FastAPI application
# ---------------------------------------------------------------------------


def create_app() -> FastAPI:
    app = FastAPI(title="elliptic-zero toolkit", version="0.1.0")

    @app.exception_handler(DomainError)
    async def _domain(request: Request, exc: DomainError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(VerificationError)
    async def _verify(request: Request, exc: VerificationError):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(StructuralError)
    async def _structural(request: Request, exc: StructuralError):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    app.post("/elliptic/eval", response_model=ValueResponse)(handle_elliptic_eval)
    app.post("/picard-fuchs/verify", response_model=PFVerifyResponse)(handle_pf_verify)
    app.post("/bound/psi", response_model=BoundResponse)(handle_bound)
    app.post("/reduce", response_model=ReduceResponse)(handle_reduce)
    app.post("/zeros/count", response_model=ZeroReportModel)(handle_zeros)
    app.post("/melnikov/decompose", response_model=DecompositionModel)(handle_melnikov_decompose)
    app.post("/melnikov/eval", response_model=MelnikovEvalResponse)(handle_melnikov_eval)
    app.post("/melnikov/zeros", response_model=ZeroReportModel)(handle_melnikov_zeros)
    return app


app = create_app()
