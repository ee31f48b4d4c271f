"""Command-line front end.

Exit codes: 0 success, 2 usage or validation error, 3 resource limit,
4 verification failure.  Every JSON document carries a ``meta`` header with
the tool version, field, code parameters, channel and seed, so identical
arguments give byte-identical output.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from . import qudit as qs
from .bounds import BOUND_IDS, classify, crossing, format_fraction, frontier
from .codes import LinearCode, identity_code, min_distance, repeat_code, rs_code, verify_min_distance
from .errors import EacommError, ResourceLimit, ValidationError
from .field import field_for_order, field_to_string, parse_field_spec
from .protocol import (
    SchemeParams,
    code_for_scheme,
    ea_send,
    ea_send_fully_quantum,
    exhaustive_check,
    monte_carlo,
    parse_channel,
    scheme_from_code,
)


class _Failure(click.ClickException):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ResourceLimit as exc:
            raise _Failure(str(exc), 3) from exc
        except ValidationError as exc:
            raise _Failure(str(exc), 2) from exc
        except EacommError as exc:
            raise _Failure(str(exc), 4) from exc


def _meta(seed: int | None = None, field=None, code: LinearCode | None = None, channel: str | None = None) -> dict:
    return {
        "tool": "eacomm",
        "version": __version__,
        "field": None if field is None else field_to_string(field),
        "code": None if code is None else {"n": code.n, "kappa": code.kappa, "d": code.d, "q": code.q},
        "channel": channel,
        "seed": seed,
    }


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        Path(out).write_text(text, newline="\n")
    else:
        click.echo(text, nl=False)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2)


def _code_options(f):
    for opt in reversed(
        [
            click.option("--scheme", help="Scheme shorthand n,k,d,c,q; picks the built-in code."),
            click.option("--code", "code_path", type=click.Path(exists=True, dir_okay=False), help="Code JSON file."),
            click.option("--field", "field_spec", help="Field spec p=..,m=..,poly=..|auto."),
            click.option("--family", type=click.Choice(["rs", "repeat", "identity"])),
            click.option("--n", type=int, help="Length (base length for --family repeat)."),
            click.option("--kappa", type=int, help="Dimension."),
            click.option("--ell", type=int, default=1, show_default=True, help="Repetitions for --family repeat."),
        ]
    ):
        f = opt(f)
    return f


def _resolve_code(scheme, code_path, field_spec, family, n, kappa, ell) -> LinearCode:
    if scheme:
        return code_for_scheme(SchemeParams.parse(scheme))
    if code_path:
        return LinearCode.from_json(Path(code_path).read_text())
    if not (field_spec and family and n):
        raise click.UsageError("give --scheme, --code, or --field with --family and --n")
    field = parse_field_spec(field_spec)
    if family == "identity":
        return identity_code(field, n)
    if kappa is None:
        raise click.UsageError(f"--family {family} needs --kappa")
    base = rs_code(field, n, kappa)
    return repeat_code(base, ell) if family == "repeat" else base


@click.group(cls=_Group)
@click.version_option(__version__, prog_name="eacomm")
def main():
    """Teleportation-based entanglement-assisted communication: codes, simulation, bounds."""


# ---------------------------------------------------------------------------
# code


@main.group(cls=_Group)
def code():
    """Build and inspect classical codes."""


@code.command("build")
@_code_options
@click.option("--out", type=click.Path(dir_okay=False), help="Write to file instead of stdout.")
def code_build(out, **kw):
    """Emit code JSON for a code family."""
    c = _resolve_code(**kw)
    min_distance(c)
    _emit(_dump(c.to_json()), out)


@code.command("info")
@_code_options
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text", show_default=True)
@click.option("--json", "fmt", flag_value="json", help="Same as --format json.")
@click.option("--out", type=click.Path(dir_okay=False))
def code_info(fmt, out, **kw):
    """Print code parameters and the scheme they give."""
    c = _resolve_code(**kw)
    d = min_distance(c)
    scheme = scheme_from_code(c) if c.kappa % 2 == 0 else None
    if fmt == "json":
        doc = {"meta": _meta(field=c.field, code=c), "params": [c.n, c.kappa, d, c.q]}
        doc["scheme"] = None if scheme is None else scheme.to_json()
        _emit(_dump(doc), out)
    else:
        text = f"[{c.n},{c.kappa},{d}]_{c.q} over {field_to_string(c.field)}"
        if scheme is not None:
            text += f"\nscheme {scheme}"
        _emit(text, out)


@code.command("distance")
@_code_options
def code_distance(**kw):
    """Exhaustive minimum-distance computation (ignores any stored d)."""
    c = _resolve_code(**kw)
    click.echo(verify_min_distance(c))


# ---------------------------------------------------------------------------
# simulate


def _payload(spec: str, q: int, k: int, rng: np.random.Generator) -> qs.QuditState:
    labels = [f"P{i}" for i in range(k)]
    kind, _, body = spec.partition(":")
    if kind == "basis":
        symbols = [int(s) for s in body.split(",")] if body else [0] * k
        return qs.basis_state(q, labels, symbols)
    if kind == "uniform":
        return qs.state_from_amplitudes(q, labels, np.ones(q**k))
    if kind == "random":
        return qs.random_state(q, labels, rng)
    raise ValidationError(f"payload must be basis[:s,..], uniform or random, got {spec!r}")


@main.group(cls=_Group)
def simulate():
    """Run the entanglement-assisted scheme."""


@simulate.command("trial")
@_code_options
@click.option("--channel", default="none", show_default=True, help="none | subst:p=v,.. | subst:p+v,.. | phase:random | rand:eps=E | erase:p,.. | haar:p,..")
@click.option("--payload", default="random", show_default=True, help="basis[:s,..] | uniform | random")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--quantum", is_flag=True, help="Use the fully-quantum pipeline.")
@click.option("--dump-state", is_flag=True, help="Include the receiver state in the output.")
@click.option("--out", type=click.Path(dir_okay=False))
def simulate_trial(channel, payload, seed, quantum, dump_state, out, **kw):
    """One transmission; prints the transcript."""
    c = _resolve_code(**kw)
    min_distance(c)
    chan = parse_channel(channel)
    rng = np.random.default_rng(seed)
    state = _payload(payload, c.q, c.kappa // 2, rng)
    send = ea_send_fully_quantum if quantum else ea_send
    result, transcript = send(state, c, chan, rng)
    doc = {"meta": _meta(seed, c.field, c, chan.to_string()), "transcript": transcript.to_json()}
    if dump_state:
        doc["state"] = result.to_json()
    _emit(_dump(doc), out)


@simulate.command("exhaustive")
@_code_options
@click.option("--maxweight", type=int, default=None, help="Largest substitution weight (default: correction radius).")
@click.option("--erasures/--no-erasures", default=True, show_default=True, help="Also run every erasure set of size <= d-1.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
def simulate_exhaustive(maxweight, erasures, seed, out, **kw):
    """Every probe payload x error pattern x Bell outcome; exit 4 unless all have fidelity 1."""
    c = _resolve_code(**kw)
    min_distance(c)
    report = exhaustive_check(c, maxweight, erasures=erasures, seed=seed)
    doc = {"meta": _meta(seed, c.field, c, "exhaustive"), "scheme": str(scheme_from_code(c)), **report.to_json()}
    _emit(_dump(doc), out)
    if not report.passed:
        raise click.exceptions.Exit(4)


@simulate.command("montecarlo")
@_code_options
@click.option("--channel", default="rand:eps=0.01", show_default=True)
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True, help="Worker processes; results do not depend on it.")
@click.option("--out", type=click.Path(dir_okay=False))
def simulate_montecarlo(channel, trials, seed, workers, out, **kw):
    """Seeded Monte Carlo run of the scheme."""
    c = _resolve_code(**kw)
    min_distance(c)
    chan = parse_channel(channel)
    summary = monte_carlo(c, chan, trials, seed, workers=workers)
    _emit(_dump({"meta": _meta(seed, c.field, c, chan.to_string()), "summary": summary.to_json()}), out)


# ---------------------------------------------------------------------------
# bounds


@main.group(cls=_Group)
def bounds():
    """Singleton-type bounds and the asymptotic frontier."""


@bounds.command("check")
@click.option("--params", required=True, help="n,k,d,c,q")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--json", "fmt", flag_value="json", help="Same as --format json.")
@click.option("--text", "fmt", flag_value="text", help="Same as --format text.")
@click.option("--out", type=click.Path(dir_okay=False))
def bounds_check(params, fmt, out):
    """Classify parameters against every bound."""
    p = SchemeParams.parse(params)
    report = classify(p)
    if fmt == "text":
        _emit(report.to_text(), out)
        return
    try:
        field = field_for_order(p.q)
    except ValidationError:
        field = None
    doc = {"meta": _meta(None, field), **report.to_json()}
    doc["violations"] = [bid for bid in BOUND_IDS if report.violates(bid)]
    doc["meets"] = [bid for bid in BOUND_IDS if report.per_bound[bid].status == "meets"]
    _emit(_dump(doc), out)


@bounds.command("frontier")
@click.option("--variant", default="absolute,qecc,eaHalf,eaKC,ours", show_default=True, help="Comma-separated variants.")
@click.option("--points", type=int, default=11, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--csv", "fmt", flag_value="csv", help="Same as --format csv.")
@click.option("--out", type=click.Path(dir_okay=False))
def bounds_frontier(variant, points, fmt, out):
    """Points on the normalised-distance frontier, as variant,R,delta rows."""
    names = [v.strip() for v in variant.split(",") if v.strip()]
    rows = [pt for name in names for pt in frontier(name, points)]
    if fmt == "csv":
        lines = ["variant,R,delta"] + [f"{pt.variant},{format_fraction(pt.R)},{format_fraction(pt.delta)}" for pt in rows]
        _emit("\n".join(lines), out)
        return
    crossings = []
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            x = crossing(a, b)
            if x is not None:
                crossings.append({"variants": [a, b], "R": str(x[0]), "delta": str(x[1])})
    doc = {
        "meta": _meta(),
        "points": [{"variant": pt.variant, "R": str(pt.R), "delta": str(pt.delta)} for pt in rows],
        "crossings": crossings,
    }
    _emit(_dump(doc), out)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
