"""Command-line client for the phase-space service.

The CLI validates its config file locally (strict schema), then sends the
compute portion to the HTTP service and writes the returned artifacts to
the paths in the config's ``output`` section.  By default the service runs
in-process; pass ``--server URL`` to talk to a remote instance started with
``wigner-deco serve``.

Exit codes: 0 success, 1 validation error, 2 numerical-contract violation.
"""
from __future__ import annotations

import base64
import json
import sys

import click
import httpx
import pydantic

from .config import (
    EvolveConfig,
    ScalesConfig,
    ScanConfig,
    SmoothConfig,
    StateConfig,
    WignerConfig,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONTRACT = 2


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*httpx.*")
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _fail_validation(message: str) -> None:
    click.echo(message, err=True)
    sys.exit(EXIT_VALIDATION)


def _load_config(model, path: str | None, overrides: dict | None = None):
    doc = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            _fail_validation(f"cannot read config {path}: {exc}")
        if not isinstance(doc, dict):
            _fail_validation(f"config {path} must hold a JSON object")
    for key, value in (overrides or {}).items():
        if value is not None:
            parts = key.split(".")
            target = doc
            for part in parts[:-1]:
                target = target.setdefault(part, {})
            target[parts[-1]] = value
    try:
        return model.model_validate(doc)
    except pydantic.ValidationError as exc:
        lines = []
        for err in exc.errors():
            loc = ".".join(str(piece) for piece in err["loc"])
            lines.append(f"config error at '{loc}': {err['msg']}")
        _fail_validation("\n".join(lines))


def _post(server: str | None, path: str, payload: dict) -> dict:
    with _client(server) as client:
        resp = client.post(path, json=payload)
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
        detail = body.get("detail", resp.text)
    except ValueError:
        detail = resp.text
    if resp.status_code == 409:
        click.echo(f"numerical contract violated: {detail}", err=True)
        sys.exit(EXIT_CONTRACT)
    _fail_validation(f"request rejected: {detail}")


def _request_payload(cfg) -> dict:
    payload = cfg.model_dump(mode="json")
    payload.pop("output", None)
    return payload


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _write_field_artifacts(cfg, body: dict) -> None:
    if cfg.output.csv:
        _write_text(cfg.output.csv, body["csv"])
    if cfg.output.pgm:
        with open(cfg.output.pgm, "wb") as fh:
            fh.write(base64.b64decode(body["pgm_b64"]))
    s = body["summary"]
    click.echo(
        f"normalization={s['normalization']:.6f} min={s['min_value']:.6e} "
        f"relative_floor={s['relative_floor']:.6e}"
    )


@click.group()
def main() -> None:
    """Wigner functions under position decoherence."""


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--server", default=None, help="remote service URL (default: in-process)")
def scales(config_path, server):
    """Print the decoherence scales sigma0, t0 and tD."""
    cfg = _load_config(ScalesConfig, config_path)
    body = _post(server, "/v1/scales", cfg.model_dump(mode="json"))
    click.echo(f"sigma0={body['sigma0']:.6f} t0={body['t0']:.6f} tD={body['t_d']:.6f}")


@main.command()
@click.option("--config", "config_path", type=click.Path(), required=True)
@click.option("--server", default=None)
def state(config_path, server):
    """Build a state and emit its CSV."""
    cfg = _load_config(StateConfig, config_path)
    body = _post(server, "/v1/state", _request_payload(cfg))
    if cfg.output.csv:
        _write_text(cfg.output.csv, body["csv"])
    click.echo(f"state kind={body['kind']}")


def _field_command(name: str, endpoint: str, config_model, extra_options=()):
    @click.option("--config", "config_path", type=click.Path(), required=True)
    @click.option("--server", default=None)
    def command(config_path, server, **kwargs):
        overrides = {}
        for dotted, value in kwargs.items():
            overrides[dotted.replace("__", ".")] = value
        cfg = _load_config(config_model, config_path, overrides)
        body = _post(server, endpoint, _request_payload(cfg))
        _write_field_artifacts(cfg, body)

    for opt in extra_options:
        command = opt(command)
    command.__name__ = name
    return main.command(name=name)(command)


wigner_cmd = _field_command("wigner", "/v1/wigner", WignerConfig)
husimi_cmd = _field_command("husimi", "/v1/husimi", WignerConfig)
smooth_cmd = _field_command(
    "smooth",
    "/v1/smooth",
    SmoothConfig,
    extra_options=(
        click.option("--cxx", "covariance__cxx", type=float, default=None),
        click.option("--cxp", "covariance__cxp", type=float, default=None),
        click.option("--cpp", "covariance__cpp", type=float, default=None),
    ),
)
evolve_cmd = _field_command(
    "evolve",
    "/v1/evolve",
    EvolveConfig,
    extra_options=(
        click.option("--t", "time", type=float, default=None),
        click.option(
            "--engine", "engine", type=click.Choice(["exact", "fd", "trotter", "mc"]), default=None
        ),
    ),
)


@main.command()
@click.option("--config", "config_path", type=click.Path(), required=True)
@click.option("--tmax", "t_max", type=float, default=None)
@click.option("--steps", "n_steps", type=int, default=None)
@click.option("--server", default=None)
def scan(config_path, t_max, n_steps, server):
    """Scan the evolved field for its first non-negative time."""
    cfg = _load_config(ScanConfig, config_path, {"t_max": t_max, "n_steps": n_steps})
    body = _post(server, "/v1/scan", _request_payload(cfg))
    if cfg.output.csv:
        _write_text(cfg.output.csv, body["trace_csv"])
    flag = " multiple_crossings=1" if body["multiple_crossings"] else ""
    click.echo(f"first_nonneg_time={body['first_nonneg_time']:.6f} tD={body['t_d']:.6f}{flag}")


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8711, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
