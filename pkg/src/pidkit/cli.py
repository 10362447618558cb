"""Command-line client for the pidkit service.

Every subcommand builds a request, sends it to the HTTP service, and
renders the response.  Without ``--server`` the request is dispatched to
an in-process instance of the app over an ASGI transport, so no running
server is required; with ``--server URL`` the same request goes to a
remote instance.  All commands exit nonzero on any error.
"""

from __future__ import annotations

import asyncio
import json
import sys
from pathlib import Path

import click
import httpx

from . import __version__
from .config import ConfigError, RunConfig, apply_overrides, load_config

REQUEST_TIMEOUT = 3600.0


def _post(server: str | None, path: str, payload: dict) -> dict:
    try:
        if server:
            response = httpx.post(
                server.rstrip("/") + path, json=payload, timeout=REQUEST_TIMEOUT
            )
        else:
            response = asyncio.run(_post_in_process(path, payload))
    except httpx.HTTPError as exc:
        raise click.ClickException(f"request failed: {exc}") from exc
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise click.ClickException(f"{path} -> {response.status_code}: {detail}")
    return response.json()


async def _post_in_process(path: str, payload: dict) -> httpx.Response:
    from .service import app  # deferred so plain library use never imports FastAPI

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(
        transport=transport, base_url="http://pidkit.local", timeout=REQUEST_TIMEOUT
    ) as client:
        return await client.post(path, json=payload)


server_option = click.option("--server", default=None, help="URL of a running pidkit service; default runs in-process.")
units_option = click.option("--units", type=click.Choice(["nats", "bits"]), default="nats", show_default=True)
out_option = click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
                          help="Also write the response and a manifest to this directory.")


def _write_outputs(out_dir: str, command: str, seed: int | None, config: dict,
                   files: dict[str, str]) -> None:
    from .serialize import manifest_dict, manifest_to_json

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = manifest_dict(command, seed, config, __version__)
    files = dict(files)
    files["manifest.json"] = manifest_to_json(manifest)
    for name, content in sorted(files.items()):
        (out / name).write_text(content)
        click.echo(f"wrote {out / name}")


def _as_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


@click.group()
@click.version_option(version=__version__, prog_name="pidkit")
def main() -> None:
    """Partial information decompositions and interaction-network experiments."""


@main.command("pid")
@click.argument("joint_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--kind", type=click.Choice(["imin", "ipm", "both"]), default="both", show_default=True)
@units_option
@out_option
@server_option
def cmd_pid(joint_file: str, kind: str, units: str, out_dir, server: str | None) -> None:
    """Decompose a trivariate joint distribution read from JOINT_FILE."""
    payload = {
        "joint_text": Path(joint_file).read_text(),
        "kind": kind,
        "units": units,
    }
    data = _post(server, "/pid", payload)
    for result in data["results"]:
        click.echo(f"[{result['kind']}] ({data['units']})")
        for key in ("r", "u_x", "u_y", "s", "mi_x", "mi_y", "mi_xy"):
            click.echo(f"  {key:6s} = {result[key]}")
    if out_dir:
        config = {"joint_file": Path(joint_file).name, "kind": kind, "units": units}
        _write_outputs(out_dir, "pid", None, config, {"pid.json": _as_json(data)})


@main.command("analytic-linear")
@click.option("-a", "--a", "a", type=float, required=True, help="Small coefficient (0 < a < b).")
@click.option("-b", "--b", "b", type=float, required=True, help="Large coefficient.")
@click.option("--rho", type=float, default=0.0, show_default=True, help="Predictor correlation, |rho| < 1.")
@click.option("--a-seq", "a_seq", type=float, multiple=True,
              help="Optional decreasing a values for the limit table (repeatable).")
@units_option
@out_option
@server_option
def cmd_analytic_linear(a: float, b: float, rho: float, a_seq: tuple, units: str,
                        out_dir, server: str | None) -> None:
    """Closed-form PIDs of the linear interaction T = aX + bY."""
    payload: dict = {"a": a, "b": b, "rho": rho, "units": units}
    if a_seq:
        payload["a_sequence"] = list(a_seq)
    data = _post(server, "/analytic-linear", payload)
    if out_dir:
        _write_outputs(out_dir, "analytic-linear", None, payload,
                       {"analytic_linear.json": _as_json(data)})
    click.echo(f"I(X;Y)={data['i_xy']}  I(T;X)={data['i_tx']}  I(T;Y)={data['i_ty']}  ({data['units']})")
    for key in ("imin", "ipm"):
        atoms = data[key]
        click.echo(f"[{key}] R={atoms['r']}  U_X={atoms['u_x']}  U_Y={atoms['u_y']}  S={atoms['s']}")
    sub = data["sublattices"]
    click.echo(
        "[ipm sublattices] "
        f"R+={sub['r_plus']} U_X+={sub['u_x_plus']} U_Y+={sub['u_y_plus']} S+={sub['s_plus']} | "
        f"R-={sub['r_minus']} U_X-={sub['u_x_minus']} U_Y-={sub['u_y_minus']} S-={sub['s_minus']}"
    )
    if data.get("limits"):
        click.echo("a, U_Y^min/I(T;Y), R^min/I(T;Y), U_X^pm/I(T;Y), R^pm/I(T;Y), U_X^pm/U_Y^min")
        for row in data["limits"]:
            click.echo(
                f"{row['a']:.3g}, {row['uy_min_over_ity']:.6f}, {row['r_min_over_ity']:.6f}, "
                f"{row['ux_pm_over_ity']:.6f}, {row['r_pm_over_ity']:.6f}, {row['ux_pm_over_uy_min']:.6f}"
            )


@main.command("mc")
@click.option("--kernel", type=click.Choice(["linear", "sigmoidal", "symmetric-sum"]), required=True)
@click.option("-a", "--a", "a", type=float, default=None, help="Linear kernel coefficient a.")
@click.option("-b", "--b", "b", type=float, default=None, help="Linear kernel coefficient b.")
@click.option("--alpha", type=float, default=None, help="Sigmoidal switch parameter.")
@click.option("--rho", type=float, default=0.0, show_default=True)
@click.option("--samples", type=int, default=1_000_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bins", "t_bins", type=int, default=50, show_default=True, help="Response quantile bins.")
@click.option("--estimator", "estimators", multiple=True,
              type=click.Choice(["umin_x", "upm_x", "upm_ambiguity_x", "min_surprisal",
                                 "min_specific_info", "density_check"]),
              help="Repeatable; defaults to umin_x and upm_x.")
@units_option
@out_option
@server_option
def cmd_mc(kernel: str, a, b, alpha, rho: float, samples: int, seed: int, t_bins: int,
           estimators: tuple, units: str, out_dir, server: str | None) -> None:
    """Monte Carlo unique-information estimates for an interaction kernel."""
    payload = {
        "kernel": {"name": kernel, "a": a, "b": b, "alpha": alpha},
        "rho": rho,
        "n": samples,
        "seed": seed,
        "t_bins": t_bins,
        "units": units,
    }
    if estimators:
        payload["estimators"] = list(estimators)
    data = _post(server, "/mc", payload)
    for est in data["estimates"]:
        extra = f"  excluded={est['n_excluded']}"
        if est.get("t_bins_used") is not None:
            extra += f"  bins={est['t_bins_used']}"
        click.echo(
            f"{est['estimator']:18s} {est['value']: .6f} +/- {est['std_error']:.6f} "
            f"(n={est['n_samples']}, seed={est['seed']}{extra}, {data['units']})"
        )
    if out_dir:
        _write_outputs(out_dir, "mc", seed, payload, {"mc.json": _as_json(data)})


@main.command("experiment")
@click.argument("experiment_id", type=click.IntRange(1, 3))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="YAML config or a manifest.json from a previous run.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--seed", type=int, default=None)
@click.option("--batches", type=int, default=None)
@click.option("--samples", "n_per_batch", type=int, default=None, help="Realizations per batch.")
@click.option("--bins", "n_bins", type=int, default=None, help="Discretization bins per variable.")
@click.option("--rho", type=float, default=None)
@click.option("--alpha", "alphas", type=float, multiple=True,
              help="Kernel parameter (experiment 1/2) or grid override (experiment 3; repeatable).")
@click.option("--beta", "betas", type=float, multiple=True,
              help="Signal-strength grid override for experiment 2 (repeatable).")
@click.option("--k", type=int, default=None, help="True interactions in experiment 2.")
@click.option("--units", type=click.Choice(["nats", "bits"]), default=None)
@server_option
def cmd_experiment(experiment_id: int, config_path, out_dir, seed, batches, n_per_batch,
                   n_bins, rho, alphas, betas, k, units, server) -> None:
    """Run experiment 1, 2, or 3; write CSVs, summary.json, and manifest.json to --out."""
    try:
        cfg = load_config(config_path) if config_path else RunConfig()
        overrides: dict = dict(seed=seed, batches=batches, n_per_batch=n_per_batch,
                               n_bins=n_bins, rho=rho, k=k, units=units)
        if betas:
            overrides["beta_grid"] = tuple(betas)
        if alphas:
            if experiment_id == 3:
                overrides["alpha_grid"] = tuple(alphas)
            else:
                overrides["alpha"] = alphas[0]
        cfg = apply_overrides(cfg, **overrides)
    except ConfigError as exc:
        raise click.ClickException(str(exc)) from exc

    data = _post(server, "/experiment", {"experiment": experiment_id, "config": cfg.to_dict()})
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, content in sorted(data["files"].items()):
        (out / name).write_text(content)
        click.echo(f"wrote {out / name}")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def cmd_serve(host: str, port: int) -> None:
    """Run the pidkit HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
