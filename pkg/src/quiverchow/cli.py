"""Command-line front end; a thin client over the HTTP service.

Without ``--server`` the commands run against an in-process instance of the
service, so no deployment is needed.  All numeric output is exact and the
rendering is deterministic byte for byte.

Exit codes: 0 success, 1 usage error, 2 standing-assumption violation,
3 structural inconsistency.
"""

from __future__ import annotations

import json
import sys

import click

from .client import ServiceClient

EXIT_USAGE = 1
EXIT_ASSUMPTION = 2
EXIT_STRUCTURAL = 3


class ExitCodeGroup(click.Group):
    """Pin every usage problem to exit code 1.

    Click's own convention reserves 2 for usage errors, but here 2 means a
    violated standing assumption, so parse errors are remapped.
    """

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            super().main(*args, **kwargs)
        except click.exceptions.Exit as exc:
            sys.exit(exc.exit_code)
        except click.UsageError as exc:
            exc.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as exc:
            exc.show()
            sys.exit(exc.exit_code)
        except click.exceptions.Abort:
            sys.exit(EXIT_USAGE)


def _parse_int_list(text: str) -> list[int]:
    cleaned = text.replace(",", " ").split()
    if not cleaned:
        raise click.UsageError("expected a list of integers")
    try:
        return [int(x) for x in cleaned]
    except ValueError as exc:
        raise click.UsageError(f"expected integers: {exc}") from None


def _job_options(fn):
    fn = click.option("--kronecker", nargs=3, type=int, metavar="M D E",
                      help="Two-vertex quiver with M arrows and dimension vector (D, E).")(fn)
    fn = click.option("--file", "file_", type=click.Path(dir_okay=False),
                      help="JSON quiver spec: vertices, arrows, d, optional theta.")(fn)
    fn = click.option("--theta", help="Override the stability parameter, e.g. '3,-2'.")(fn)
    fn = click.option("--polarization",
                      help="Explicit polarization as integer coordinates on the degree-1 generators.")(fn)
    fn = click.option("--series-length", type=int, default=None,
                      help="Number of twists for the Hilbert values (default dim+1).")(fn)
    fn = click.option("--threads", type=int, default=1, show_default=True,
                      help="Cap on internal worker threads.")(fn)
    fn = click.option("--extended", is_flag=True, help="Enable the long-running extended cases.")(fn)
    return fn


def _payload(kronecker, file_, theta, polarization, series_length, threads, extended) -> dict:
    if (kronecker is None or kronecker == ()) == (file_ is None):
        raise click.UsageError("provide exactly one input: --kronecker M D E or --file PATH")
    payload: dict = {"threads": threads, "extended": extended}
    if kronecker:
        m, d, e = kronecker
        payload["kronecker"] = {"m": m, "d": d, "e": e}
    else:
        try:
            with open(file_, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise click.UsageError(f"cannot read {file_}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise click.UsageError(f"invalid JSON in {file_}: {exc}") from None
        payload["quiver"] = data
    if theta is not None:
        payload["theta"] = _parse_int_list(theta)
    if polarization is not None:
        payload["polarization"] = _parse_int_list(polarization)
    if series_length is not None:
        payload["series_length"] = series_length
    return payload


def _call(ctx, path: str, payload: dict) -> dict:
    with ServiceClient(ctx.obj.get("server")) as client:
        resp = client.post(path, payload)
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
        message = body.get("message", resp.text)
        kind = body.get("kind", "")
    except Exception:
        message, kind = resp.text, ""
    click.echo(f"error: {message}", err=True)
    if resp.status_code == 409 or kind == "assumption-violation":
        sys.exit(EXIT_ASSUMPTION)
    if resp.status_code in (400, 422) or kind == "usage":
        sys.exit(EXIT_USAGE)
    sys.exit(EXIT_STRUCTURAL)


def _emit(data: dict, fmt: str, table_renderer):
    if fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        click.echo(table_renderer(data))


@click.group(cls=ExitCodeGroup)
@click.option("--server", default=None, metavar="URL",
              help="Base URL of a running service; default is in-process.")
@click.pass_context
def main(ctx, server):
    """Exact intersection-theoretic invariants of quiver moduli spaces."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


_format_option = click.option("--format", "fmt", type=click.Choice(["table", "json"]),
                              default="table", show_default=True, help="Output format.")


def _invariants_table(data: dict) -> str:
    rows = [
        ("case", data["label"]),
        ("dimension", str(data["dimension"])),
        ("index", str(data["index"])),
        ("degree", str(data["degree"])),
        ("chi(O)", str(data["chi_O"])),
        ("chi(T)", str(data["chi_T"])),
        ("chi_top", str(data["chi_top"])),
        ("betti-like dims", ", ".join(str(x) for x in data["quotient_dimensions"])),
        ("hilbert", ", ".join(str(x) for x in data["hilbert_values"])),
        ("numerator", _poly_in_t(data["hilbert_numerator"])),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _poly_in_t(coeffs) -> str:
    pieces = []
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        if j == 0:
            pieces.append(str(c))
        else:
            t = "t" if j == 1 else f"t^{j}"
            pieces.append(t if c == 1 else f"{c}{t}")
    return " + ".join(pieces) if pieces else "0"


@main.command()
@_job_options
@_format_option
@click.pass_context
def invariants(ctx, kronecker, file_, theta, polarization, series_length, threads, extended, fmt):
    """Dimension, index, degree, Euler characteristics and Hilbert values."""
    payload = _payload(kronecker, file_, theta, polarization, series_length, threads, extended)
    data = _call(ctx, "/api/invariants", payload)
    _emit(data, fmt, _invariants_table)


@main.command("point-class")
@_job_options
@_format_option
@click.pass_context
def point_class(ctx, kronecker, file_, theta, polarization, series_length, threads, extended, fmt):
    """The reduced top-degree point class; both defining expressions must agree."""
    payload = _payload(kronecker, file_, theta, polarization, series_length, threads, extended)
    data = _call(ctx, "/api/point-class", payload)

    def table(d):
        lines = [f"case       {d['label']}", f"dimension  {d['dimension']}",
                 f"integral   {d['integral']}", "reduced point class:"]
        for mon, c in sorted(d["reduced"].items()):
            lines.append(f"  {c} * {mon}")
        return "\n".join(lines)

    _emit(data, fmt, table)


@main.command()
@_job_options
@_format_option
@click.pass_context
def todd(ctx, kronecker, file_, theta, polarization, series_length, threads, extended, fmt):
    """Todd class on the Chern-class generators, degree by degree."""
    payload = _payload(kronecker, file_, theta, polarization, series_length, threads, extended)
    data = _call(ctx, "/api/todd", payload)

    def table(d):
        lines = [f"case       {d['label']}", f"dimension  {d['dimension']}"]
        for n in sorted(d["components"], key=int):
            lines.append(f"deg {n}: {d['components'][n]}")
        return "\n".join(lines)

    _emit(data, fmt, table)


@main.command()
@_job_options
@_format_option
@click.pass_context
def hilbert(ctx, kronecker, file_, theta, polarization, series_length, threads, extended, fmt):
    """Euler characteristics of the twists of the polarization."""
    payload = _payload(kronecker, file_, theta, polarization, series_length, threads, extended)
    data = _call(ctx, "/api/hilbert", payload)

    def table(d):
        return "\n".join([
            f"case       {d['label']}",
            f"dimension  {d['dimension']}",
            f"index      {d['index']}",
            "values     " + ", ".join(str(x) for x in d["values"]),
            "numerator  " + _poly_in_t(d["numerator"]),
        ])

    _emit(data, fmt, table)


@main.command()
@click.option("--level", type=click.Choice(["quick", "full"]), default="quick",
              show_default=True, help="Scope of the verification suite.")
@click.option("--extended", is_flag=True, help="Include the long extended census row.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.pass_context
def check(ctx, level, extended, threads):
    """Run the built-in verification suite; nonzero exit on any failure."""
    data = _call(ctx, "/api/check", {"level": level, "extended": extended, "threads": threads})
    for line in data["lines"]:
        click.echo(line)
    click.echo(f"{data['passed']} passed, {data['failed']} failed")
    if not data["ok"]:
        sys.exit(EXIT_STRUCTURAL)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
