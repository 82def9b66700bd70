"""Thin-client CLI for the simulation service.

Every subcommand builds a request, sends it to the FastAPI app (in-process by
default, or to a remote server via --server), and persists the returned
documents. A JSON config file can predefine any flag; explicit flags win.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from .engine import ALL_SCHEMES

_MODEL_CHOICES = ("ge-homogeneous", "ge-heterogeneous", "time-varying")
_SSI_CHOICES = ("perfect", "imperfect")


def _post_remote(server, path, payload):
    import httpx

    with httpx.Client(base_url=server, timeout=None) as client:
        return client.post(path, json=payload)


def _post_inprocess(path, payload):
    """Drive the FastAPI app over an in-process ASGI transport."""
    import asyncio

    import httpx

    from .service.app import app

    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://gcsim.local", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _post(server, path, payload):
    response = _post_remote(server, path, payload) if server else _post_inprocess(path, payload)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except Exception:
            detail = response.text
        raise click.ClickException(f"{path} failed ({response.status_code}): {detail}")
    return response.json()


def _load_config(path):
    if path is None:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise click.ClickException("config file must hold a JSON object")
    return cfg


def _merged(config: dict, flags: dict) -> dict:
    """Config-file values overridden by explicitly passed flags."""
    merged = dict(config)
    merged.update({k: v for k, v in flags.items() if v is not None})
    return merged


def _straggler_payload(opts: dict) -> dict:
    payload = {}
    mapping = {
        "model": "model",
        "switch_prob": "switch_prob",
        "mu_slow": "mu_slow",
        "mu_fast": "mu_fast",
        "tau": "tau",
        "initial_stragglers": "initial_stragglers",
        "ssi": "ssi",
    }
    for key, field in mapping.items():
        if key in opts:
            payload[field] = opts[key]
    return payload


def _write(path: Path, text: str):
    path.write_text(text)
    click.echo(f"wrote {path}")


def _out_dir(opts) -> Path:
    out = Path(opts.get("out", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


@click.group()
def main():
    """Gradient-coding straggler simulations (GC, GC-SC, GC-DC, LB)."""


_common_options = [
    click.option("--workers", type=int, default=None, help="number of workers K"),
    click.option("--clusters", type=int, default=None, help="number of clusters P"),
    click.option("--load", type=int, default=None, help="computation load r"),
    click.option("--replication", type=int, default=None, help="clusters per worker n"),
    click.option("--seed", type=int, default=None),
    click.option("--config", "config_path", type=click.Path(exists=True), default=None,
                 help="JSON config mirroring the flags; flags override it"),
    click.option("--server", default=None, help="remote service URL (default: in-process)"),
    click.option("--out", default=None, help="output directory"),
]


def common_options(fn):
    for opt in reversed(_common_options):
        fn = opt(fn)
    return fn


@main.command()
@common_options
@click.option("--iterations", type=int, default=None, help="GD iterations per run T")
@click.option("--runs", type=int, default=None, help="independent simulations")
@click.option("--schemes", default=None,
              help="comma-separated subset of " + ",".join(ALL_SCHEMES))
@click.option("--model", type=click.Choice(_MODEL_CHOICES), default=None)
@click.option("--switch-prob", type=float, default=None, help="state switch probability p")
@click.option("--mu-slow", type=float, default=None)
@click.option("--mu-fast", type=float, default=None)
@click.option("--alpha", type=float, default=None, help="latency shift per computation")
@click.option("--tau", type=float, default=None, help="straggling rate threshold")
@click.option("--ssi", type=click.Choice(_SSI_CHOICES), default=None)
@click.option("--initial-stragglers", type=int, default=None)
@click.option("--verify-gradients", is_flag=True, default=None,
              help="decode and check the full gradient every iteration")
@click.option("--jobs", type=int, default=None, help="parallel run workers")
@click.option("--dump-placements", is_flag=True, default=None,
              help="also write per-iteration GC-DC placements and the "
                   "straggler-per-cluster histogram")
def run(config_path, server, **flags):
    """Run an experiment and write data.csv / summary.csv."""
    opts = _merged(_load_config(config_path), flags)
    payload = {}
    for key in ("workers", "clusters", "load", "replication", "iterations", "runs",
                "seed", "alpha", "verify_gradients", "jobs", "dump_placements"):
        if key in opts and opts[key] is not None:
            payload[key] = opts[key]
    if opts.get("schemes"):
        schemes = opts["schemes"]
        payload["schemes"] = (
            [s.strip() for s in schemes.split(",")] if isinstance(schemes, str) else schemes
        )
    straggler = _straggler_payload(opts)
    if straggler:
        payload["straggler"] = straggler
    body = _post(server, "/experiments/run", payload)
    out = _out_dir(opts)
    _write(out / "data.csv", body["data_csv"])
    _write(out / "summary.csv", body["summary_csv"])
    if body.get("placements_csv"):
        _write(out / "placements.csv", body["placements_csv"])
    if body.get("histogram_csv"):
        _write(out / "placement_histogram.csv", body["histogram_csv"])
    if not body["feasible"]:
        click.echo("warning: replication below the swap-resolution bound "
                   f"(fallbacks: {body['fallbacks']})")
    click.echo(f"{'scheme':8s} {'mean':>12s} {'std':>12s} {'vs GC-SC':>9s}")
    for row in body["summary"]:
        imp = row.get("improvement_vs_gcsc")
        imp_s = f"{imp * 100:8.1f}%" if imp is not None else "      n/a"
        click.echo(f"{row['scheme']:8s} {row['mean']:12.4f} {row['std']:12.4f} {imp_s}")


@main.command("dump-assignment")
@common_options
def dump_assignment(config_path, server, **flags):
    """Write the assignment matrices, data assignment and codebook as JSON."""
    opts = _merged(_load_config(config_path), flags)
    payload = {
        key: opts[key]
        for key in ("workers", "clusters", "load", "replication", "seed")
        if key in opts and opts[key] is not None
    }
    body = _post(server, "/assignments/dump", payload)
    out = _out_dir(opts)
    _write(out / "assignment.json", json.dumps(body, indent=2, sort_keys=True) + "\n")


@main.command("dump-trace")
@common_options
@click.option("--iterations", type=int, default=None)
@click.option("--run", "run_index", type=int, default=None, help="run substream to export")
@click.option("--model", type=click.Choice(_MODEL_CHOICES), default=None)
@click.option("--switch-prob", type=float, default=None)
@click.option("--mu-slow", type=float, default=None)
@click.option("--mu-fast", type=float, default=None)
@click.option("--tau", type=float, default=None)
@click.option("--ssi", type=click.Choice(_SSI_CHOICES), default=None)
@click.option("--initial-stragglers", type=int, default=None)
def dump_trace(config_path, server, run_index, **flags):
    """Write one run's straggler trace (iteration x worker matrix) as CSV."""
    opts = _merged(_load_config(config_path), flags)
    payload = {
        key: opts[key]
        for key in ("workers", "iterations", "seed")
        if key in opts and opts[key] is not None
    }
    if run_index is not None:
        payload["run"] = run_index
    straggler = _straggler_payload(opts)
    if straggler:
        payload["straggler"] = straggler
    body = _post(server, "/traces/dump", payload)
    out = _out_dir(opts)
    _write(out / "trace.csv", body["trace_csv"])


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the simulation service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
