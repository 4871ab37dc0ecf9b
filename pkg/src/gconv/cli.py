"""Command-line surface: convolve and mollify CSV signals, run law checks,
validate smoothness orders, benchmark the dense fast path.

Exit codes: 0 success, 1 check failure, 2 parse or validation error,
3 dimension or carrier mismatch, 4 mollifier radius below 10h.
"""
import functools
import json
import sys

import click
import numpy as np

from . import fastpath
from .calculus import cont_diff_check
from .convolution import (
    ConvRequest,
    convolve,
    fubini_swap_check,
    integral_identity_check,
)
from .errors import (
    CsvFormatError,
    DimensionMismatchError,
    GconvError,
    SpaceMismatchError,
)
from .functions import (
    SampledFunction,
    atomic_write_text,
    lin_comb,
    max_deviation,
    read_csv,
    write_csv,
)
from .groups import Lattice, format_float, parse_group, parse_measure
from .mollify import BumpSpec, bump, convergence_study, mollify
from .pairings import Mul, ScalarSmul, transpose

EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_DIM_MISMATCH = 3
EXIT_RADIUS = 4


def _die(code: int, message: str):
    click.echo("error: " + message, err=True)
    sys.exit(code)


def guarded(fn):
    # CsvFormatError first: it is a GconvError but belongs to exit 2 with
    # its line-numbered message intact.
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CsvFormatError as exc:
            _die(EXIT_BAD_INPUT, str(exc))
        except (DimensionMismatchError, SpaceMismatchError) as exc:
            _die(EXIT_DIM_MISMATCH, str(exc))
        except GconvError as exc:
            _die(EXIT_BAD_INPUT, str(exc))

    return wrapper


def _parse_pairing(token: str):
    tok = token.strip()
    if tok == "mul":
        return Mul()
    if tok.startswith("smul:"):
        try:
            m = int(tok[5:])
        except ValueError:
            raise GconvError("bad pairing token %r" % token) from None
        return ScalarSmul(m)
    raise GconvError("unknown pairing token %r (want mul or smul:<m>)" % token)


def _load(path: str) -> SampledFunction:
    return read_csv(path)


def _require_same_group(f: SampledFunction, g: SampledFunction):
    if f.group != g.group:
        raise SpaceMismatchError(
            "inputs live on different carriers: %s vs %s"
            % (f.group.token(), g.group.token())
        )


def _check_group_flag(token, fn: SampledFunction, path: str):
    if token is None:
        return
    want = parse_group(token)
    if want != fn.group:
        raise GconvError(
            "%s declares carrier %s but --group asked for %s"
            % (path, fn.group.token(), want.token())
        )


def _cell(v) -> str:
    if isinstance(v, bool):
        return "pass" if v else "fail"
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def _emit_rows(rows: list, fmt: str, out_path=None):
    """Render report rows as csv or json, to stdout or a file."""
    if fmt == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        keys = list(rows[0].keys()) if rows else []
        lines = [",".join(keys)]
        for r in rows:
            lines.append(",".join(_cell(r[k]) for k in keys))
        text = "\n".join(lines) + "\n"
    if out_path:
        atomic_write_text(out_path, text)
    else:
        click.echo(text, nl=False)


def _sup_norm(fn: SampledFunction) -> float:
    worst = 0.0
    for p in fn.support():
        worst = max(worst, float(np.max(np.abs(fn.eval(p)))))
    return worst


def _rel_dev(a: SampledFunction, b: SampledFunction) -> float:
    return max_deviation(a, b) / (1.0 + _sup_norm(b))


def _worst_point(a: SampledFunction, b: SampledFunction):
    """Point of largest disagreement, with both values; for failure reports."""
    worst, where = -1.0, None
    for p in set(a.support()) | set(b.support()):
        d = float(np.max(np.abs(a.eval(p) - b.eval(p))))
        if d > worst:
            worst, where = d, p
    if where is None:
        return None
    return where, a.eval(where), b.eval(where)


@click.group()
@click.version_option(package_name="gconv", prog_name="gconv")
def main():
    """Convolution on discrete groups: signals in, signals or reports out."""


@main.command("conv")
@click.argument("input_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("input_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--group", "group_tok", default=None, help="Expected carrier; checked against the CSV headers.")
@click.option("--measure", "measure_tok", type=click.Choice(["counting", "grid"]), default="counting", show_default=True)
@click.option("--pairing", "pairing_tok", default="mul", show_default=True, help="mul or smul:<m>.")
@click.option("--variant", type=click.Choice(["std", "alt"]), default="std", show_default=True)
@click.option("--fast", is_flag=True, help="Route eligible scalar cases through the transform path.")
@click.option("-o", "out_path", required=True, type=click.Path(dir_okay=False, writable=True))
@guarded
def cmd_conv(input_a, input_b, group_tok, measure_tok, pairing_tok, variant, fast, out_path):
    """Convolve two CSV signals and write the result as CSV."""
    f = _load(input_a)
    g = _load(input_b)
    _require_same_group(f, g)
    _check_group_flag(group_tok, f, input_a)
    pairing = _parse_pairing(pairing_tok)
    measure = parse_measure(measure_tok, f.group)
    req = ConvRequest(f, g, pairing, measure, "standard" if variant == "std" else "alt")
    result = None
    if fast:
        result = fastpath.try_fast_request(req)
    if result is None:
        result = convolve(req)
    write_csv(result, out_path)


@main.command("mollify")
@click.argument("input_a", type=click.Path(exists=True, dir_okay=False))
@click.option("-R", "radius", type=float, default=None, help="Bump radius; needs R >= 10h.")
@click.option("--study", "study_tok", default=None, help="Comma-separated decreasing radii; writes a convergence report instead of a signal.")
@click.option("--measure", "measure_tok", type=click.Choice(["counting", "grid"]), default="grid", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True, help="Report format for --study.")
@click.option("-o", "out_path", required=True, type=click.Path(dir_okay=False, writable=True))
@guarded
def cmd_mollify(input_a, radius, study_tok, measure_tok, fmt, out_path):
    """Smooth a lattice CSV signal with a normalized bump kernel."""
    g = _load(input_a)
    if not isinstance(g.group, Lattice):
        raise SpaceMismatchError(
            "mollify needs a lattice carrier, not %s" % g.group.token()
        )
    h = g.group.spacing
    measure = parse_measure(measure_tok, g.group)
    if study_tok is not None:
        try:
            radii = [float(s) for s in study_tok.split(",") if s.strip()]
        except ValueError:
            raise GconvError("bad --study list %r" % study_tok) from None
        if not radii:
            raise GconvError("--study needs at least one radius")
        for r in radii:
            if r < 10.0 * h:
                _die(EXIT_RADIUS, "radius %s is below 10h = %s" % (format_float(r), format_float(10.0 * h)))
        report = convergence_study(g, g.group.zero(), radii, measure)
        rows = [
            {k: row[k] for k in ("radius", "distance", "bound", "slack", "passed")}
            for row in report.rows()
        ]
        _emit_rows(rows, fmt, out_path)
        if not report.passed:
            _die(EXIT_CHECK_FAILED, "convergence study failed; see %s" % out_path)
        return
    if radius is None:
        raise GconvError("pass -R <radius> or --study <r1,r2,...>")
    if radius < 10.0 * h:
        _die(EXIT_RADIUS, "radius %s is below 10h = %s" % (format_float(radius), format_float(10.0 * h)))
    spec = BumpSpec(radius, g.group.dim, h)
    write_csv(mollify(g, spec, measure), out_path)


def _laws_rows(f, g, pairing, measure, variant, tol, verify_fn):
    group = f.group
    rows = []
    failures = []

    def record(name, dev, passed, status=None):
        rows.append(
            {
                "check": name,
                "status": status or ("pass" if passed else "fail"),
                "deviation": dev,
            }
        )
        if status is None and not passed:
            failures.append(name)

    c = 1.5
    base = convolve(ConvRequest(f, g, pairing, measure, variant))
    scaled = base.scale(c)
    left = convolve(ConvRequest(f.scale(c), g, pairing, measure, variant))
    right = convolve(ConvRequest(f, g.scale(c), pairing, measure, variant))
    dev = max(_rel_dev(left, scaled), _rel_dev(right, scaled))
    record("scalar", dev, dev <= tol)
    if dev > tol:
        _report_worst(left, scaled, "scalar")

    step = group.unit_step()
    f2 = f.translate(step)
    g2 = g.translate(step)
    lhs = convolve(ConvRequest(f, lin_comb(1.0, g, 1.0, g2), pairing, measure, variant))
    rhs = lin_comb(
        1.0,
        base,
        1.0,
        convolve(ConvRequest(f, g2, pairing, measure, variant)),
    )
    dev_r = _rel_dev(lhs, rhs)
    lhs2 = convolve(ConvRequest(lin_comb(1.0, f, 1.0, f2), g, pairing, measure, variant))
    rhs2 = lin_comb(
        1.0,
        base,
        1.0,
        convolve(ConvRequest(f2, g, pairing, measure, variant)),
    )
    dev_l = _rel_dev(lhs2, rhs2)
    dev = max(dev_r, dev_l)
    record("additivity", dev, dev <= tol)
    if dev > tol:
        _report_worst(lhs, rhs, "additivity")

    swapped = convolve(ConvRequest(g, f, transpose(pairing), measure, variant))
    dev = _rel_dev(swapped, base)
    if group.is_abelian:
        record("commutativity", dev, dev <= tol)
        if dev > tol:
            _report_worst(swapped, base, "commutativity")
    elif max_deviation(swapped, base) > 0.0:
        record("commutativity", dev, True, status="counterexample exhibited")
    else:
        record("commutativity", dev, True, status="skipped (nonabelian carrier)")

    ident = integral_identity_check(ConvRequest(f, g, pairing, measure, variant), tol)
    record("integral-identity", ident.deviation, ident.passed)
    if not ident.passed:
        click.echo(
            "integral-identity: lhs=%s rhs=%s deviation=%s"
            % (
                np.array2string(np.atleast_1d(ident.lhs)),
                np.array2string(np.atleast_1d(ident.rhs)),
                format_float(ident.deviation),
            ),
            err=True,
        )

    fub = fubini_swap_check(ConvRequest(f, g, pairing, measure, variant), tol)
    record("fubini", fub.deviation, fub.passed)

    if verify_fn is not None:
        dev = _rel_dev(base, verify_fn)
        record("verify", dev, dev <= tol)
        if dev > tol:
            _report_worst(base, verify_fn, "verify")
    return rows, failures


def _report_worst(a: SampledFunction, b: SampledFunction, name: str):
    hit = _worst_point(a, b)
    if hit is None:
        return
    where, va, vb = hit
    click.echo(
        "%s: worst point %s lhs=%s rhs=%s"
        % (name, where, np.array2string(va), np.array2string(vb)),
        err=True,
    )


@main.command("laws")
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--group", "group_tok", default=None)
@click.option("--measure", "measure_tok", type=click.Choice(["counting", "grid"]), default="counting", show_default=True)
@click.option("--pairing", "pairing_tok", default="mul", show_default=True)
@click.option("--variant", type=click.Choice(["std", "alt"]), default="std", show_default=True)
@click.option("--tol", type=float, default=1e-12, show_default=True, help="Relative tolerance for every check.")
@click.option("--verify", "verify_path", default=None, type=click.Path(exists=True, dir_okay=False), help="Compare the convolution of the inputs against this CSV.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("-o", "out_path", default=None, type=click.Path(dir_okay=False, writable=True))
@guarded
def cmd_laws(inputs, group_tok, measure_tok, pairing_tok, variant, tol, verify_path, fmt, out_path):
    """Run the algebraic law checks on one or two CSV signals."""
    if len(inputs) > 2:
        raise GconvError("laws takes one or two input files, got %d" % len(inputs))
    if tol <= 0:
        raise GconvError("--tol must be positive")
    f = _load(inputs[0])
    g = _load(inputs[-1])
    _require_same_group(f, g)
    _check_group_flag(group_tok, f, inputs[0])
    pairing = _parse_pairing(pairing_tok)
    measure = parse_measure(measure_tok, f.group)
    verify_fn = None
    if verify_path is not None:
        verify_fn = _load(verify_path)
        _require_same_group(f, verify_fn)
    var = "standard" if variant == "std" else "alt"
    rows, failures = _laws_rows(f, g, pairing, measure, var, tol, verify_fn)
    _emit_rows(rows, fmt, out_path)
    if failures:
        _die(EXIT_CHECK_FAILED, "failed checks: %s" % ", ".join(failures))


@main.command("deriv-check")
@click.argument("input_a", type=click.Path(exists=True, dir_okay=False))
@click.option("-R", "radius", type=float, default=0.5, show_default=True, help="Bump radius; needs R >= 10h.")
@click.option("--order", type=int, default=1, show_default=True)
@click.option("--tol", type=float, default=5e-3, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("-o", "out_path", default=None, type=click.Path(dir_okay=False, writable=True))
@guarded
def cmd_deriv_check(input_a, radius, order, tol, fmt, out_path):
    """Compare analytic convolution derivatives with finite differences."""
    f = _load(input_a)
    if not isinstance(f.group, Lattice):
        raise GconvError(
            "deriv-check needs a lattice carrier, not %s" % f.group.token()
        )
    if tol <= 0:
        raise GconvError("--tol must be positive")
    group = f.group
    spec = BumpSpec(radius, group.dim, group.spacing)
    g = bump(spec)
    pairing = Mul() if f.vdim == 1 else transpose(ScalarSmul(f.vdim))
    measure = parse_measure("grid", group)
    report = cont_diff_check(f, g, pairing, measure, order, tol)
    rows = [
        {
            "order": k,
            "deviation": report.deviations[k],
            "tol": tol,
            "passed": report.deviations[k] <= tol,
        }
        for k in range(order + 1)
    ]
    _emit_rows(rows, fmt, out_path)
    if not report.passed:
        _die(
            EXIT_CHECK_FAILED,
            "max deviation %s exceeds tol %s"
            % (format_float(max(report.deviations)), format_float(tol)),
        )


@main.command("bench")
@click.argument("sizes")
@click.option("--trials", type=int, default=3, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("-o", "out_path", default=None, type=click.Path(dir_okay=False, writable=True))
@guarded
def cmd_bench(sizes, trials, fmt, out_path):
    """Time the transform fast path against the naive kernel."""
    try:
        size_list = [int(s) for s in sizes.split(",") if s.strip()]
    except ValueError:
        raise GconvError("bad size list %r" % sizes) from None
    if not size_list:
        raise GconvError("need at least one size")
    entries = fastpath.bench(size_list, trials)
    _emit_rows([e.to_dict() for e in entries], fmt, out_path)


if __name__ == "__main__":
    main()
