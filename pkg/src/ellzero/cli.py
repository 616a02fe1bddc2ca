"""Command-line client for the toolkit.

Thin wrapper over the in-process service handlers: every command builds a
request model, calls the handler directly, and serializes the response as
deterministic JSON (sorted keys) on stdout with a one-line human summary on
stderr.  Exit codes: 0 success, 1 schema error, 2 domain error,
3 verification failure (a computed result violating a certified bound).
"""

from __future__ import annotations

import json
import random
import sys
from fractions import Fraction
from pathlib import Path

import click
from pydantic import ValidationError

from . import elliptic
from .errors import DomainError, StructuralError, VerificationError
from .polyalg import Poly
from .service import (
    BoundRequest,
    EllipticEvalRequest,
    MelnikovDecomposeRequest,
    MelnikovEvalRequest,
    MelnikovZerosRequest,
    PFVerifyRequest,
    ReduceRequest,
    SpecModel,
    ZerosRequest,
    handle_bound,
    handle_elliptic_eval,
    handle_melnikov_decompose,
    handle_melnikov_eval,
    handle_melnikov_zeros,
    handle_pf_verify,
    handle_reduce,
    handle_zeros,
    parse_mu,
)

EXIT_SCHEMA = 1
EXIT_DOMAIN = 2
EXIT_VERIFICATION = 3


def _emit(model) -> None:
    click.echo(json.dumps(model.model_dump(), sort_keys=True))


def _summary(text: str) -> None:
    click.echo(text, err=True)


def _load_json(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot read spec {path}: {exc}")
    if not isinstance(data, dict):
        raise click.ClickException(f"spec {path} must be a JSON object")
    return data


def _run(action):
    try:
        action()
    except (ValidationError, click.ClickException) as exc:
        _summary(f"schema error: {exc}")
        sys.exit(EXIT_SCHEMA)
    except DomainError as exc:
        _summary(f"domain error: {exc}")
        sys.exit(EXIT_DOMAIN)
    except (VerificationError, StructuralError) as exc:
        _summary(f"verification failure: {exc}")
        sys.exit(EXIT_VERIFICATION)


@click.group()
def main() -> None:
    """Elliptic-integral zero counting and Melnikov decomposition toolkit."""


@main.command("elliptic-eval")
@click.option("--k", type=float, required=True, help="Modulus in (-1, 1).")
@click.option("--mu", type=float, default=None, help="Third-kind parameter.")
@click.option(
    "--kind",
    type=click.Choice(["K", "E", "Pi", "RF", "RD", "RJ"]),
    default="K",
    show_default=True,
)
def elliptic_eval(k: float, mu: float, kind: str) -> None:
    """Evaluate a complete elliptic integral or its Carlson symmetric form."""

    def action():
        resp = handle_elliptic_eval(EllipticEvalRequest(kind=kind, k=k, mu=mu))
        _emit(resp)
        _summary(f"{kind}({k}) = {resp.value:.15g}")

    _run(action)


@main.command("pf-verify")
@click.option("--mu", "mu_text", required=True,
              help='Parameter function: "special", a rational constant, or comma-separated polynomial coefficients (lowest power first).')
@click.option("--k", "k_values", type=float, multiple=True, help="Grid points (repeatable).")
@click.option("--tol", type=click.FloatRange(1e-15, 1e-3), default=1e-3, show_default=True)
def pf_verify(mu_text: str, k_values, tol: float) -> None:
    """Check the first- and second-order ODE systems and the Wronskian."""

    def action():
        mu = mu_text.split(",") if "," in mu_text else mu_text
        req = PFVerifyRequest(mu=mu, tol_second=tol)
        if k_values:
            req = req.model_copy(update={"k_values": list(k_values)})
        resp = handle_pf_verify(req)
        _emit(resp)
        if not resp.ok:
            raise VerificationError("ODE residuals or Wronskian mismatch above tolerance")
        _summary(f"verified at {len(resp.points)} grid points")

    _run(action)


@main.command("bound")
@click.option("--psi", nargs=4, type=int, default=None,
              help="m n l s for the polynomial-parameter bound.")
@click.option("--special", "special_args", nargs=3, type=int, default=None,
              help="m n l for the fixed rational parameter 2k^2/(1+k^2).")
def bound(psi, special_args) -> None:
    """Evaluate the zero-count bound tables."""

    def action():
        if psi and special_args:
            raise click.ClickException("choose exactly one of --psi and --special")
        if psi:
            resp = handle_bound(BoundRequest(m=psi[0], n=psi[1], l=psi[2], s=psi[3]))
        elif special_args:
            m, n, l = special_args
            resp = handle_bound(BoundRequest(m=m, n=n, l=l, special=True))
        else:
            raise click.ClickException("one of --psi or --special is required")
        _emit(resp)
        _summary(f"psi = {resp.psi}")

    _run(action)


@main.command("reduce")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True),
              help="JSON file with p, q, r (coefficient lists) and mu.")
@click.option("--tol", type=click.FloatRange(1e-15, 1e-3), default=1e-5, show_default=True)
@click.option("--check-k", "check_points", type=float, multiple=True,
              help="Verify the derivative identity at these moduli.")
def reduce_cmd(spec_path: str, tol: float, check_points) -> None:
    """Reduce p K + q E + r Pi to its M K + N E numerator form."""

    def action():
        data = _load_json(spec_path)
        req = ReduceRequest(**data, tol=tol) if "tol" not in data else ReduceRequest(**data)
        if check_points:
            req = req.model_copy(update={"check_points": list(check_points)})
        resp = handle_reduce(req)
        _emit(resp)
        _summary(f"case {resp.case}: deg M = {len(resp.M1) - 1}, deg N = {len(resp.N1) - 1}")

    _run(action)


@main.command("zeros")
@click.argument("action_name", type=click.Choice(["count"]), default="count")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True),
              help="JSON file with p, q, r, mu and optional interval.")
@click.option("--grid", type=int, default=64, show_default=True)
@click.option("--out", type=click.Choice(["json", "csv"]), default="json", show_default=True)
def zeros(action_name: str, spec_path: str, grid: int, out: str) -> None:
    """Count sign-change zeros of I(k) = p K + q E + r Pi on an interval."""

    def action():
        data = _load_json(spec_path)
        req = ZerosRequest(**data, grid=grid)
        resp = handle_zeros(req)
        if out == "csv":
            p, q, r = (Poly.from_strings(data[name]) for name in ("p", "q", "r"))
            mu = parse_mu(data["mu"]) if data.get("mu") is not None else None
            lo, hi = req.interval
            lo, hi = max(lo, -1 + 1e-4), min(hi, 1 - 1e-4)
            click.echo("k,I")
            for idx in range(513):
                k = lo + (hi - lo) * idx / 512
                val = float(p.eval(k)) * elliptic.complete_k(k) + float(q.eval(k)) * elliptic.complete_e(k)
                if not r.is_zero():
                    mval = float(mu.eval(k)) if not isinstance(mu, Fraction) else float(mu)
                    val += float(r.eval(k)) * elliptic.complete_pi(mval, k)
                click.echo(f"{k!r},{val!r}")
        else:
            _emit(resp)
        if not resp.bound_satisfied:
            raise VerificationError(
                f"count {resp.count} exceeds bound {resp.bound}"
            )
        _summary(f"count = {resp.count} (bound {resp.bound}, stable={resp.stable})")

    _run(action)


def _spec_model(path: str) -> SpecModel:
    return SpecModel(**_load_json(path))


def _random_spec_model(n: int, seed: int) -> SpecModel:
    rng = random.Random(seed)

    def side():
        return [
            (i, j, str(Fraction(rng.randint(-3, 3), rng.randint(1, 4))))
            for i in range(n + 1)
            for j in range(n + 1 - i)
            if rng.random() < 0.5
        ]

    return SpecModel(n=n, a_plus=side(), a_minus=side(), b_plus=side(), b_minus=side())


@main.command("melnikov-decompose")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True))
def melnikov_decompose_cmd(spec_path: str) -> None:
    """Decompose a perturbation onto the six generator integrals."""

    def action():
        resp = handle_melnikov_decompose(
            MelnikovDecomposeRequest(spec=_spec_model(spec_path))
        )
        _emit(resp)
        _summary(f"decomposed degree-{resp.n} spec")

    _run(action)


@main.command("melnikov-eval")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True))
@click.option("--h", "h_values", type=float, multiple=True, help="Energies (repeatable).")
@click.option("--grid", type=int, default=0,
              help="Sweep this many energies across (0, 1/64) instead of --h.")
@click.option("--out", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--quadrature", is_flag=True, help="Use the direct line-integral route.")
def melnikov_eval_cmd(spec_path, h_values, grid, out, quadrature) -> None:
    """Evaluate the first-order Melnikov function at given energies."""

    def action():
        hs = list(h_values)
        if grid:
            hs = [1.0 / 64.0 * (i + 1) / (grid + 1) for i in range(grid)]
        if not hs:
            raise click.ClickException("provide --h values or --grid")
        resp = handle_melnikov_eval(
            MelnikovEvalRequest(spec=_spec_model(spec_path), h_values=hs, quadrature=quadrature)
        )
        if out == "csv":
            click.echo("h,u,I")
            for pt in resp.points:
                click.echo(f"{pt.h!r},{pt.u!r},{pt.value!r}")
        else:
            _emit(resp)
        _summary(f"evaluated at {len(resp.points)} energies")

    _run(action)


@main.command("melnikov-zeros")
@click.option("--spec", "spec_path", type=click.Path(exists=True), default=None)
@click.option("--random-n", type=int, default=None, help="Generate a random degree-n spec.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--grid", type=int, default=64, show_default=True)
def melnikov_zeros_cmd(spec_path, random_n, seed, grid) -> None:
    """Count zeros of the Melnikov function against the degree bound."""

    def action():
        if (spec_path is None) == (random_n is None):
            raise click.ClickException("provide exactly one of --spec and --random-n")
        model = _spec_model(spec_path) if spec_path else _random_spec_model(random_n, seed)
        resp = handle_melnikov_zeros(MelnikovZerosRequest(spec=model, grid=grid))
        _emit(resp)
        if not resp.bound_satisfied:
            raise VerificationError(f"count {resp.count} exceeds bound {resp.bound}")
        _summary(f"count = {resp.count} (bound {resp.bound}) {resp.message}".rstrip())

    _run(action)


if __name__ == "__main__":
    main()
