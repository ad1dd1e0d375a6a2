"""Command-line front end: ``invclosed verify|classify|hua|poly|enumerate``.

Every option can also be set through an ``INVCLOSED_<OPTION>`` environment
variable; explicit flags take precedence.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click

from .errors import BudgetExceeded, PreconditionError, TheoremViolation
from .field import FieldSpec, GF, is_prime, prime_power
from .polynomials import (
    DensePolynomial,
    is_self_reciprocal,
    linearized_to_dense,
    reciprocal,
)
from .subgroups import (
    DEFAULT_MAX_FIELD_SIZE,
    DEFAULT_MAX_SUBSPACES,
    AdditiveSubgroup,
    SubgroupIterator,
    is_inverse_closed_direct,
    subspace_polynomial,
)
from .verifier import (
    classify,
    default_fields,
    hua_exhaustive,
    hua_random_rationals,
    verify_theorem_finite,
)

ENV_PREFIX = "INVCLOSED"
FORMATS = ("json", "csv", "table")


def _env(name: str) -> str:
    return f"{ENV_PREFIX}_{name}"


class CliError(Exception):
    def __init__(self, kind: str, message: str, exit_code: int = 2, **detail):
        super().__init__(message)
        self.kind = kind
        self.exit_code = exit_code
        self.detail = detail


@dataclass
class RunConfig:
    fields: list = field(default_factory=list)  # FieldSpec instances
    max_field_size: int = DEFAULT_MAX_FIELD_SIZE
    max_subspaces: int = DEFAULT_MAX_SUBSPACES
    workers: int = 1
    seed: int = 0
    output_format: str = "json"
    out: Path | None = None

    def __post_init__(self):
        if self.max_field_size < 1 or self.max_subspaces < 1:
            raise CliError("ConfigError", "budgets must be positive")
        if self.workers < 1:
            raise CliError("ConfigError", "--workers must be at least 1")
        if self.output_format not in FORMATS:
            raise CliError("ConfigError", f"unknown format {self.output_format!r}")


def parse_field(text: str, modulus: str | None = None) -> FieldSpec:
    """Accept ``q``, ``p^f`` or ``p**f``; an explicit modulus overrides the default."""
    text = text.strip().replace("**", "^")
    try:
        if "^" in text:
            p_s, f_s = text.split("^", 1)
            p, f = int(p_s), int(f_s)
            if not is_prime(p) or f < 1:
                raise ValueError(f"{text} is not of the form prime^positive")
        else:
            p, f = prime_power(int(text))
        if modulus is None:
            return GF(p, f)
        coeffs = [int(c) for c in modulus.replace(" ", "").split(",") if c != ""]
        spec = FieldSpec(p, coeffs)
    except ValueError as exc:
        raise CliError("ParseError", str(exc)) from exc
    if spec.f != f:
        raise CliError("ParseError", f"modulus has degree {spec.f}, field {text} needs {f}")
    return spec


def parse_basis(spec: FieldSpec, text: str) -> AdditiveSubgroup:
    """Rows separated by ';', coordinates by ',' (constant term first)."""
    rows = []
    try:
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            coords = [int(c) for c in chunk.split(",")]
            if len(coords) != spec.f:
                raise ValueError(f"row {chunk!r} needs {spec.f} coordinates")
            if any(not 0 <= c < spec.p for c in coords):
                raise ValueError(f"row {chunk!r} has coordinates outside 0..{spec.p - 1}")
            rows.append(coords)
    except ValueError as exc:
        raise CliError("ParseError", str(exc)) from exc
    return AdditiveSubgroup(spec, rows)


def _field_label(spec: FieldSpec) -> str:
    return f"GF({spec.p}^{spec.f})"


def _emit(text: str, out: Path | None, name: str | None = None):
    if out is None:
        click.echo(text, nl=not text.endswith("\n"))
        return
    target = out / name if (out.is_dir() and name) else out
    target.write_text(text if text.endswith("\n") else text + "\n")


def _basis_text(matrix) -> str:
    return ";".join(",".join(map(str, row)) for row in matrix)


# -- report rendering -------------------------------------------------------------

def render_reports(reports, fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in reports)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "f", "dim", "kind", "r", "basis"])
        for r in reports:
            for A, c in r.inverse_closed:
                w.writerow([r.spec.p, r.spec.f, A.dim, c.kind.value, c.r or 0, _basis_text(A.matrix)])
        return buf.getvalue()
    lines = []
    for r in reports:
        status = "ok" if r.ok else f"{len(r.violations)} violation(s)"
        lines.append(f"{_field_label(r.spec)} modulus={list(r.spec.modulus)} "
                     f"scanned={r.subspaces_scanned} found={r.count_found} "
                     f"predicted={r.count_predicted} {status}")
        for A, c in r.inverse_closed:
            lines.append(f"  dim={A.dim:<2} {str(c):<20} basis={_basis_text(A.matrix) or '-'}")
    return "\n".join(lines) + "\n"


def polynomial_report(A: AdditiveSubgroup) -> dict:
    spec = A.spec
    L = subspace_polynomial(A)
    dense = linearized_to_dense(L)
    quotient = DensePolynomial(spec, dense.coeffs[1:])
    recip = reciprocal(quotient)
    return {
        "f_A": {"linearized": L.to_json(), "dense": dense.to_json(), "text": str(L)},
        "f_A_over_x": {"dense": quotient.to_json(), "text": str(quotient)},
        "reciprocal": {"dense": recip.to_json(), "text": str(recip)},
        "self_reciprocal": is_self_reciprocal(quotient),
    }


# -- commands -------------------------------------------------------------------

format_option = click.option("--format", "output_format", type=click.Choice(FORMATS),
                             default="json", envvar=_env("FORMAT"), show_default=True)
out_option = click.option("--out", type=click.Path(path_type=Path), envvar=_env("OUT"),
                          help="Output file, or an existing directory for one file per field.")
modulus_option = click.option("--modulus", envvar=_env("MODULUS"),
                              help="Explicit modulus c0,c1,...,1 (constant term first).")


@click.group()
def cli():
    """Inverse-closed additive subgroups of finite fields."""


@cli.command()
@click.option("--field", "fields", multiple=True, envvar=_env("FIELD"),
              help="Field as q or p^f; repeatable. Default: every prime power <= 512.")
@modulus_option
@format_option
@click.option("--workers", type=int, default=1, envvar=_env("WORKERS"), show_default=True)
@click.option("--seed", type=int, default=0, envvar=_env("SEED"), show_default=True)
@click.option("--max-field-size", type=int, default=DEFAULT_MAX_FIELD_SIZE,
              envvar=_env("MAX_FIELD_SIZE"), show_default=True)
@click.option("--max-subspaces", type=int, default=DEFAULT_MAX_SUBSPACES,
              envvar=_env("MAX_SUBSPACES"), show_default=True)
@out_option
def verify(fields, modulus, output_format, workers, seed, max_field_size, max_subspaces, out):
    """Exhaustively classify every inverse-closed subgroup of each field."""
    if modulus and len(fields) != 1:
        raise CliError("ConfigError", "--modulus needs exactly one --field")
    if fields:
        specs = [parse_field(t, modulus) for t in fields]
    else:
        specs = [GF(p, f) for p, f in default_fields(512)]
    config = RunConfig(specs, max_field_size, max_subspaces, workers, seed, output_format, out)

    reports = []
    for spec in config.fields:
        try:
            report = verify_theorem_finite(spec, workers=config.workers,
                                           max_field_size=config.max_field_size,
                                           max_subspaces=config.max_subspaces)
        except BudgetExceeded as exc:
            raise CliError("BudgetExceeded", str(exc), 2, field=spec.to_json()) from exc
        except TheoremViolation as exc:
            raise CliError("TheoremViolation", str(exc), 3, **exc.detail) from exc
        reports.append(report)

    ext = {"json": "json", "csv": "csv", "table": "txt"}[config.output_format]
    if config.out is not None and config.out.is_dir():
        for r in reports:
            _emit(render_reports([r], config.output_format), config.out,
                  f"GF{r.spec.p}^{r.spec.f}.{ext}")
    else:
        _emit(render_reports(reports, config.output_format), config.out)

    failed = [r for r in reports if not r.ok]
    if failed:
        raise CliError("VerificationFailed", f"{len(failed)} field(s) with violations", 1,
                       fields=[_field_label(r.spec) for r in failed])


def _single_field(field_text, modulus) -> FieldSpec:
    if not field_text:
        raise CliError("ConfigError", "--field is required")
    return parse_field(field_text, modulus)


@cli.command("classify")
@click.option("--field", "field_text", envvar=_env("FIELD"), help="Field as q or p^f.")
@modulus_option
@click.option("--basis", default="", envvar=_env("BASIS"), help='Rows like "1,0;0,1".')
def classify_cmd(field_text, modulus, basis):
    """Classify the subgroup spanned by the given rows."""
    spec = _single_field(field_text, modulus)
    A = parse_basis(spec, basis)
    try:
        result = classify(A)
    except TheoremViolation as exc:
        raise CliError("TheoremViolation", str(exc), 3, **exc.detail) from exc
    except BudgetExceeded as exc:
        raise CliError("BudgetExceeded", str(exc)) from exc
    L = subspace_polynomial(A)
    payload = {
        "field": spec.to_json(),
        "subgroup": A.to_json(),
        "classification": {**result.to_json(), "label": str(result)},
        "f_A": {"linearized": L.to_json(), "dense": linearized_to_dense(L).to_json(), "text": str(L)},
    }
    click.echo(json.dumps(payload, sort_keys=True))


@cli.command()
@click.option("--field", "field_text", envvar=_env("FIELD"), help="Field as q or p^f.")
@modulus_option
@click.option("--basis", default="", envvar=_env("BASIS"), help='Rows like "1,0;0,1".')
def poly(field_text, modulus, basis):
    """Print f_A, f_A(x)/x, its reciprocal and the self-reciprocal verdict."""
    spec = _single_field(field_text, modulus)
    A = parse_basis(spec, basis)
    payload = {"field": spec.to_json(), "subgroup": A.to_json(), **polynomial_report(A)}
    click.echo(json.dumps(payload, sort_keys=True))


@cli.command()
@click.option("--field", "field_text", envvar=_env("FIELD"), help="Finite field as q or p^f.")
@modulus_option
@click.option("--rationals", is_flag=True, help="Sample random pairs of rationals instead.")
@click.option("--trials", type=int, default=10_000, envvar=_env("TRIALS"), show_default=True)
@click.option("--seed", type=int, default=0, envvar=_env("SEED"), show_default=True)
def hua(field_text, modulus, rationals, trials, seed):
    """Check Hua's identity on every pair of a field, or on seeded random rationals."""
    if rationals == bool(field_text):
        raise CliError("ConfigError", "give exactly one of --field or --rationals")
    if rationals:
        if trials < 1:
            raise CliError("ConfigError", "--trials must be positive")
        tally = hua_random_rationals(trials, seed)
        target = {"rationals": True, "seed": seed, "mode": "random"}
    else:
        spec = parse_field(field_text, modulus)
        if spec.order > DEFAULT_MAX_FIELD_SIZE:
            raise CliError("BudgetExceeded", f"exhaustive scan of GF({spec.order}) exceeds the budget")
        tally = hua_exhaustive(spec)
        target = {"field": spec.to_json(), "mode": "exhaustive"}
    click.echo(json.dumps({**target, **tally.to_json()}, sort_keys=True))
    if tally.failed:
        raise CliError("HuaFailure", f"{tally.failed} failing pair(s)", 1)


@cli.command("enumerate")
@click.option("--field", "field_text", envvar=_env("FIELD"), help="Field as q or p^f.")
@modulus_option
@click.option("--dim", type=int, default=None, help="Only this dimension (default: all).")
@click.option("--inverse-closed", is_flag=True, help="Only emit inverse-closed subgroups.")
@click.option("--max-subspaces", type=int, default=DEFAULT_MAX_SUBSPACES,
              envvar=_env("MAX_SUBSPACES"), show_default=True)
def enumerate_cmd(field_text, modulus, dim, inverse_closed, max_subspaces):
    """Stream subgroups as one JSON object per line."""
    spec = _single_field(field_text, modulus)
    dims = range(spec.f + 1) if dim is None else [dim]
    try:
        iterators = [SubgroupIterator(spec, d, None) for d in dims]
        total = sum(len(it) for it in iterators)
        if total > max_subspaces:
            raise BudgetExceeded(f"{total} subspaces exceed the budget {max_subspaces}")
    except (BudgetExceeded, PreconditionError) as exc:
        raise CliError(type(exc).__name__, str(exc)) from exc
    for it in iterators:
        for A in it:
            if inverse_closed and not is_inverse_closed_direct(A):
                continue
            click.echo(json.dumps(A.to_json()))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="invclosed", standalone_mode=False)
    except CliError as exc:
        err = {"error": exc.kind, "message": str(exc), **exc.detail}
        click.echo(json.dumps(err, sort_keys=True), err=True)
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo(json.dumps({"error": "Aborted", "message": "aborted"}), err=True)
        return 130
    except click.ClickException as exc:
        click.echo(json.dumps({"error": type(exc).__name__, "message": exc.format_message()}), err=True)
        return exc.exit_code
    except (PreconditionError, ValueError) as exc:
        click.echo(json.dumps({"error": type(exc).__name__, "message": str(exc)}), err=True)
        return 2
    return 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
