"""Command-line frontend: ingestion, pipeline commands and verification
suites with JSON/CSV reports and rendered figures.

Exit codes: 0 success (all checks pass for verify), 1 failed checks,
2 schema violation, 3 resource cap exceeded.
"""

from __future__ import annotations

import csv
import json
import pathlib
import sys

import click

from . import blowup as bl
from . import corpus
from . import covers as cv
from . import figures
from . import geometry as geo
from . import morse
from . import verify as vf
from .complexes import SimplicialComplex, pos
from .errors import ResourceCapError, SchemaError
from .homology import barcode


def _die(exc: Exception, code: int):
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _die(exc, 2)


def _load_cloud(path: str) -> geo.PointCloud:
    p = pathlib.Path(path)
    if p.suffix.lower() == ".csv":
        try:
            return geo.PointCloud.from_csv(p.read_text())
        except (OSError, SchemaError) as exc:
            _die(exc, 2)
    return geo.PointCloud.from_json(_load_json(path))


def _write_json(data, out: str | None):
    text = json.dumps(data, indent=2, sort_keys=True)
    if out:
        pathlib.Path(out).write_text(text + "\n")
    else:
        click.echo(text)


def _write_text(text: str, out: str | None):
    if out:
        pathlib.Path(out).write_text(text + "\n")
    else:
        click.echo(text)


@click.group()
def main():
    """Finite nerve constructions and their verification pipelines."""


@main.command("nerve")
@click.argument("cover_file", type=click.Path(exists=True))
@click.option("-o", "--out", type=click.Path(), default=None, help="output file")
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json")
def cmd_nerve(cover_file, out, fmt):
    """Nerve of an indexed cover (JSON cover schema)."""
    try:
        cover = cv.IndexedCover.from_json(_load_json(cover_file))
        N = cv.nerve(cover)
        if fmt == "dot":
            _write_text(pos(N).to_dot(), out)
        else:
            _write_json(N.to_json(), out)
    except ResourceCapError as exc:
        _die(exc, 3)
    except SchemaError as exc:
        _die(exc, 2)


@main.command("blowup")
@click.argument("cover_file", type=click.Path(exists=True))
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json")
def cmd_blowup(cover_file, out, fmt):
    """Pair-poset summary of a cover: sizes of the poset, its flag complex,
    the triangulating subcomplex, and the gradient pairing split."""
    try:
        cover = cv.IndexedCover.from_json(_load_json(cover_file))
        if fmt == "dot":
            _write_text(bl.pobar(cover).to_dot(), out)
        else:
            _write_json(bl.blowup_report(cover), out)
    except ResourceCapError as exc:
        _die(exc, 3)
    except SchemaError as exc:
        _die(exc, 2)


@main.command("morse")
@click.argument("complex_file", type=click.Path(exists=True))
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--seed", type=int, default=0, help="first seed for the greedy search")
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json")
def cmd_morse(complex_file, out, fmt, seed):
    """Collapse a complex: with a provided field ("pairs"/"critical" keys),
    execute and trace it; otherwise search greedily for a small field."""
    try:
        data = _load_json(complex_file)
        K = SimplicialComplex.from_json(data.get("complex", data))
        if "pairs" in data:
            field = morse.DiscreteVectorField(
                K, [(tuple(t), tuple(s)) for t, s in data["pairs"]],
                [tuple(s) for s in data.get("critical", [])])
        else:
            field = morse.greedy_gradient_search(K, seeds=range(seed, seed + 32))
        if fmt == "dot":
            _write_text(morse.modified_hasse_dot(K, field), out)
            return
        if not morse.is_gradient(K, field):
            raise SchemaError("provided vector field is not a gradient field")
        payload = {"field": field.to_json(),
                   "critical_count": len(field.critical)}
        critical = SimplicialComplex(field.critical) if field.critical else None
        if critical is not None and vf._face_closed(field.critical):
            trace, final = morse.collapse(K, field, critical)
            payload["trace"] = morse.trace_to_json(trace)
            payload["final"] = final.to_json()
        _write_json(payload, out)
    except ResourceCapError as exc:
        _die(exc, 3)
    except SchemaError as exc:
        _die(exc, 2)


@main.command("cech")
@click.argument("cloud_file", type=click.Path(exists=True))
@click.option("-r", "--radius", type=float, required=True)
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--max-dim", type=int, default=None)
@click.option("--tol", type=float, default=1e-9)
@click.option("--format", "fmt", type=click.Choice(["json", "svg"]), default="json")
def cmd_cech(cloud_file, radius, out, max_dim, tol, fmt):
    """Cech nerve of a cloud at one radius."""
    try:
        cloud = _load_cloud(cloud_file)
        N = geo.cech_nerve(cloud, radius, max_dim=max_dim, tol=tol)
        if fmt == "svg":
            target = out or "cech.svg"
            figures.save_cloud_figure(cloud, target, radius=radius, nerve=N,
                                      title=f"Cech nerve at r={radius:g}")
            click.echo(target)
        else:
            _write_json(N.to_json(), out)
    except ResourceCapError as exc:
        _die(exc, 3)
    except SchemaError as exc:
        _die(exc, 2)


@main.command("alpha")
@click.argument("cloud_file", type=click.Path(exists=True))
@click.option("-r", "--radius", type=float, required=True)
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--tol", type=float, default=1e-9)
@click.option("--format", "fmt", type=click.Choice(["json", "svg"]), default="json")
def cmd_alpha(cloud_file, radius, out, tol, fmt):
    """Alpha complex of a planar cloud at one radius."""
    try:
        cloud = _load_cloud(cloud_file)
        A = geo.alpha_complex_2d(cloud, radius, tol=tol)
        if fmt == "svg":
            target = out or "alpha.svg"
            figures.save_complex_figure(cloud, A, target,
                                        title=f"alpha complex at r={radius:g}")
            click.echo(target)
        else:
            _write_json(A.to_json(), out)
    except ResourceCapError as exc:
        _die(exc, 3)
    except SchemaError as exc:
        _die(exc, 2)


@main.command("barcode")
@click.argument("cloud_file", type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(["cech", "alpha"]), default="cech")
@click.option("-o", "--out", type=click.Path(), default=None)
@click.option("--max-dim", type=int, default=2)
@click.option("--format", "fmt", type=click.Choice(["json", "svg"]), default="json")
def cmd_barcode(cloud_file, mode, out, max_dim, fmt):
    """Persistence barcode of the Cech or alpha filtration."""
    try:
        cloud = _load_cloud(cloud_file)
        if mode == "cech":
            F = geo.cech_filtration(cloud, max_dim=max_dim)
        else:
            F = geo.alpha_filtration_2d(cloud)
        bc = barcode(F, max_degree=max_dim - 1 if max_dim else None)
        if fmt == "svg":
            target = out or f"{mode}_barcode.svg"
            figures.save_barcode_figure(bc, target, title=f"{mode} barcode")
            click.echo(target)
        else:
            _write_json(bc.to_json(), out)
    except ResourceCapError as exc:
        _die(exc, 3)
    except SchemaError as exc:
        _die(exc, 2)


@main.command("verify")
@click.argument("suite", type=click.Choice(sorted(vf.SUITES)))
@click.option("-o", "--outdir", type=click.Path(), default=None,
              help="directory for report.json, report.csv and figures")
def cmd_verify(suite, outdir):
    """Run one verification suite; exit status 0 iff every check passes."""
    try:
        reports = vf.run_suite(suite)
    except ResourceCapError as exc:
        _die(exc, 3)
    except SchemaError as exc:
        _die(exc, 2)
    ok = all(r.all_pass() for r in reports)
    for rep in reports:
        for c in rep.checks:
            mark = "PASS" if c.status else "FAIL"
            click.echo(f"[{mark}] {rep.instance}: {c.name} ({c.ms:.0f} ms)")
    if outdir:
        d = pathlib.Path(outdir)
        d.mkdir(parents=True, exist_ok=True)
        payload = [r.to_json() for r in reports]
        (d / "report.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        with open(d / "report.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["instance", "check", "status", "ms", "witness"])
            for rep in reports:
                for row in rep.csv_rows():
                    w.writerow([rep.instance] + row)
        _suite_figures(suite, d)
        click.echo(f"report written to {d}")
    sys.exit(0 if ok else 1)


def _suite_figures(suite: str, d: pathlib.Path) -> None:
    """Illustrative figures rendered next to the delimited report."""
    if suite == "cech-alpha":
        sq = corpus.unit_square_cloud()
        figures.save_barcode_figure(barcode(geo.cech_filtration(sq, max_dim=2), max_degree=1),
                                    str(d / "unit_square_cech_barcode.svg"),
                                    title="unit square, Cech")
        figures.save_barcode_figure(barcode(geo.alpha_filtration_2d(sq), max_degree=1),
                                    str(d / "unit_square_alpha_barcode.svg"),
                                    title="unit square, alpha")
        cloud = corpus.random_cloud(0)
        figures.save_barcode_figure(barcode(geo.cech_filtration(cloud, max_dim=2), max_degree=1),
                                    str(d / "cloud_00_cech_barcode.svg"),
                                    title="cloud 00, Cech")
    elif suite in ("gamma-psi", "functorial"):
        cloud = corpus.random_cloud(0)
        values = geo.cech_filtration(cloud, max_dim=2).values()
        r = values[len(values) // 2]
        N = geo.cech_nerve(cloud, r, max_dim=2)
        figures.save_cloud_figure(cloud, str(d / "cloud_00_cover.svg"), radius=r,
                                  nerve=N, title=f"cloud 00 at r={r:.3f}")


if __name__ == "__main__":
    main()
