"""Command-line entry point: `qkw kac|series|nakajima|gkm|census|verify`.

Every command emits {"quiver", "command", "box", "results"}; CSV and LaTeX are
flat projections of the same result rows. Output contains no timings, so
identical invocations produce identical bytes."""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from typing import Sequence

import click

from . import counts, gkm, hua, verify
from .ffrep import census
from .ffrep.predicates import CapacityError, configured_cap
from .quiver import NAMED_QUIVERS, Quiver, QuiverError, load_quiver
from .symcore import IntPoly, RatFun, box_keys

COMMANDS = ("kac", "series", "nakajima", "gkm", "census", "verify")


def _int_list(text: str | None, name: str) -> list[int] | None:
    if text is None:
        return None
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}", param_hint=name)
    if not out or any(x < 0 for x in out):
        raise click.BadParameter("entries must be nonnegative integers", param_hint=name)
    return out


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def _vector(values: list[int] | None, Q: Quiver, name: str, default: int | None = None) -> tuple[int, ...]:
    if values is None:
        if default is None:
            raise click.BadParameter("required", param_hint=name)
        values = [default]
    if len(values) == 1:
        values = values * Q.n
    if len(values) != Q.n:
        raise click.BadParameter(f"needs 1 or {Q.n} entries, got {len(values)}", param_hint=name)
    return tuple(values)


def _load(path: str | None) -> Quiver:
    if path is None:
        raise click.UsageError("--quiver is required for this command")
    if not os.path.exists(path) and path in NAMED_QUIVERS:
        return NAMED_QUIVERS[path]()
    try:
        return load_quiver(path)
    except OSError as exc:
        raise click.FileError(path, hint=str(exc))
    except QuiverError as exc:
        click.echo(f"error: {path}: {exc}", err=True)
        sys.exit(2)


def _coeffs(p: IntPoly) -> list[str]:
    return [str(c) for c in p.coefficients]


def _ratfun(f: RatFun) -> dict:
    return {"numerator": _coeffs(f.numerator), "denominator": _coeffs(f.denominator)}


# -- result builders ------------------------------------------------------------


def _kac_rows(Q, box, flavors):
    rows = []
    for fl in flavors:
        table = hua.kac_table(Q, fl, box)
        for v in box_keys(box):
            if any(v):
                rows.append({"flavor": fl, "dim_vector": list(v), "coeffs": _coeffs(table[v])})
    return rows


def _series_rows(Q, box, flavors, primes):
    rows = []
    for fl in flavors:
        P = counts.p_series(Q, fl, box)
        for v in box_keys(box):
            row = {"series": f"P-{fl}", "dim_vector": list(v), **_ratfun(P.coefficient(v))}
            if any(v):
                row["lambda_counts"] = {str(p): str(counts.predicted_lambda_count(Q, v, p, fl)) for p in primes}
            rows.append(row)
    mu = counts.mu_fiber_series(Q, box)
    for v in box_keys(box):
        row = {"series": "mu-fiber", "dim_vector": list(v), **_ratfun(mu.coefficient(v))}
        row["mu_fiber_counts"] = {str(p): str(counts.predicted_mu_fiber_count(Q, v, p)) for p in primes}
        rows.append(row)
    return rows


def _nakajima_rows(Q, box, wbox):
    rows = []
    for w in box_keys(wbox):
        if not any(w):
            continue
        for v in box_keys(box):
            for var in counts.VARIANTS:
                poly = counts.nakajima_poly(Q, v, w, var)
                rows.append({
                    "v": list(v), "w": list(w), "variant": var,
                    "half_dim": poly.half_dim, "dim_vector": list(v), "coeffs": _coeffs(poly.polynomial),
                })
    return rows


def _gkm_rows(Q, box, pairings):
    rows = []
    for v, m in gkm.root_multiplicities(Q, box).items():
        rows.append({"kind": "multiplicity", "dim_vector": list(v), "value": str(m)})
    for v, c in gkm.ch_uq_minus(Q, box).dense():
        rows.append({"kind": "ch_U_minus", "dim_vector": list(v), "value": str(c)})
    if pairings is not None:
        for v, c in gkm.ch_highest_weight(Q, pairings, box).dense():
            rows.append({"kind": "ch_highest_weight", "lambda": list(pairings), "dim_vector": list(v), "value": str(c)})
    return rows


def _census_rows(Q, box, flavors, primes, jobs, cap):
    rows, over = [], []
    tables = {fl: hua.kac_table(Q, fl, box) for fl in flavors}
    for v in box_keys(box):
        if not any(v):
            continue
        for p in primes:
            for fl in flavors:
                try:
                    rep = census.census_abs_indec(Q, v, p, fl, jobs=jobs, cap=cap)
                except CapacityError as exc:
                    over.append(f"v={list(v)} p={p} {fl}: {exc}")
                    continue
                expected = tables[fl][v](p)
                row = rep.to_json()
                row["dim_vector"] = row.pop("v")
                row["formula_value"] = expected
                row["status"] = verify.PASS if rep.a_value == expected else verify.FAIL
                rows.append(row)
    return rows, over


# -- output -----------------------------------------------------------------------


def _flat(value) -> str:
    if isinstance(value, list):
        return " ".join(_flat(x) for x in value)
    if isinstance(value, dict):
        return " ".join(f"{k}={_flat(x)}" for k, x in value.items())
    return str(value)


def _columns(rows: list[dict]) -> list[str]:
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    rows = doc["results"]
    cols = _columns(rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for r in rows:
            writer.writerow([_flat(r.get(c, "")) for c in cols])
        return buf.getvalue()
    esc = lambda s: s.replace("\\", r"\textbackslash{}").replace("_", r"\_").replace("&", r"\&").replace("%", r"\%").replace("#", r"\#").replace("{", r"\{").replace("}", r"\}")
    lines = [r"\begin{tabular}{" + "l" * len(cols) + "}", " & ".join(esc(c) for c in cols) + r" \\", r"\hline"]
    for r in rows:
        lines.append(" & ".join(esc(_flat(r.get(c, ""))) for c in cols) + r" \\")
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"


def _verify_rows(results: Sequence[verify.CheckResult]) -> list[dict]:
    rows = []
    for res in results:
        for f in res.findings:
            rows.append({"check": res.check_id, "status": f.status, "subject": f.subject, "detail": f.detail})
    return rows


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("command", type=click.Choice(COMMANDS))
@click.option("--quiver", "quiver_path", help="quiver JSON file or built-in name (jordan, 2-loop, a2, ...)")
@click.option("--box", help="dimension-vector bound, comma-separated; one value is broadcast")
@click.option("--flavor", type=click.Choice(hua.FLAVORS + ("all",)), default="all", show_default=True)
@click.option("--primes", default="2,3", show_default=True)
@click.option("--w", "w_text", help="framing vector (nakajima) or lambda pairings (gkm)")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "latex"]), default="json", show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--cap", type=click.IntRange(min=1), default=None, help="census cap (default QKW_CAP or 2^24)")
def main(command, quiver_path, box, flavor, primes, w_text, fmt, jobs, cap):
    """Kac polynomials, counting series and finite-field censuses for quivers."""
    prime_list = _int_list(primes, "--primes")
    bad = [p for p in prime_list if not _is_prime(p)]
    if bad:
        raise click.BadParameter(f"not prime: {bad}", param_hint="--primes")
    flavors = hua.FLAVORS if flavor == "all" else (flavor,)
    cap = configured_cap() if cap is None else cap
    box_list = _int_list(box, "--box")
    w_list = _int_list(w_text, "--w")

    if command == "verify" and quiver_path is None:
        results = verify.acceptance_suite(jobs=jobs)
        doc = {"quiver": None, "command": command, "box": None, "results": _verify_rows(results)}
        _finish(doc, fmt, results)
        return

    Q = _load(quiver_path)
    bvec = _vector(box_list, Q, "--box", default=2)
    doc = {"quiver": Q.to_json(), "command": command, "box": list(bvec), "results": []}
    if command == "kac":
        doc["results"] = _kac_rows(Q, bvec, flavors)
    elif command == "series":
        doc["results"] = _series_rows(Q, bvec, flavors, prime_list)
    elif command == "nakajima":
        doc["results"] = _nakajima_rows(Q, bvec, _vector(w_list, Q, "--w") if w_list else bvec)
    elif command == "gkm":
        doc["results"] = _gkm_rows(Q, bvec, _vector(w_list, Q, "--w") if w_list else None)
    elif command == "census":
        rows, over = _census_rows(Q, bvec, flavors, prime_list, jobs, cap)
        doc["results"] = rows
        click.echo(render(doc, fmt), nl=False)
        for line in over:
            click.echo(f"capacity exceeded: {line}", err=True)
        if over or any(r["status"] != verify.PASS for r in rows):
            sys.exit(1)
        return
    else:
        results = verify.quiver_suite(Q, bvec, prime_list, jobs=jobs, cap=cap)
        doc["results"] = _verify_rows(results)
        _finish(doc, fmt, results)
        return
    click.echo(render(doc, fmt), nl=False)


def _finish(doc: dict, fmt: str, results: Sequence[verify.CheckResult]) -> None:
    click.echo(render(doc, fmt), nl=False)
    for res in results:
        click.echo(res.summary(), err=True)
        for f in res.deviations:
            click.echo(f"  {verify.SMALL_CHAR}: {res.check_id} {f.subject} {f.detail}", err=True)
    if any(not r.ok for r in results):
        sys.exit(1)


if __name__ == "__main__":
    main()
