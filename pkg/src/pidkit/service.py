"""HTTP surface over the library: one endpoint per CLI subcommand.

Request and response bodies are pydantic models.  Information values in
responses are rendered as strings ("0.693...", "inf", "-inf") so that
infinite atoms survive strict JSON.  Domain errors (invalid parameters,
malformed joint files, non-PD covariances) map to 400 with the library's
message; schema errors are FastAPI's usual 422.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .config import ConfigError, RunConfig, config_from_mapping
from .extreal import ExtReal
from .gaussian import (
    LinearInteraction,
    linear_imin_pid,
    linear_ipm_as_pid,
    linear_ipm_pid,
    linear_limits,
    linear_mi,
)
from .harness import ExperimentResult, run_experiment_1, run_experiment_2, run_experiment_3
from .kernels import NfbiKernel, linear_kernel, sigmoidal_kernel, symmetric_sum_kernel
from .montecarlo import (
    McEstimate,
    density_ratio_identity_check,
    mc_min_specific_info,
    mc_min_surprisal,
    mc_umin_x,
    mc_upm_ambiguity_x,
    mc_upm_x,
)
from .pid import BivariatePid, imin_pid, ipm_pid
from .serialize import (
    extreal_to_text,
    manifest_dict,
    manifest_to_json,
    parse_joint_file,
    rows_to_csv,
    summary_payload,
    summary_to_json,
    unit_scale,
)

app = FastAPI(title="pidkit", version=__version__)

Units = Literal["nats", "bits"]


class HealthResponse(BaseModel):
    status: str
    version: str


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


def _fail(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


# ---------------------------------------------------------------- /pid


class PidRequest(BaseModel):
    joint_text: str
    kind: Literal["imin", "ipm", "both"] = "both"
    units: Units = "nats"


class PidAtomsModel(BaseModel):
    kind: str
    r: str
    u_x: str
    u_y: str
    s: str
    mi_x: str
    mi_y: str
    mi_xy: str


class PidResponse(BaseModel):
    units: Units
    results: list[PidAtomsModel]


def _atoms_model(pid: BivariatePid, units: str) -> PidAtomsModel:
    def text(v: ExtReal) -> str:
        return extreal_to_text(v, units)

    return PidAtomsModel(
        kind=pid.kind.value,
        r=text(pid.r),
        u_x=text(pid.u_x),
        u_y=text(pid.u_y),
        s=text(pid.s),
        mi_x=text(pid.mi_x),
        mi_y=text(pid.mi_y),
        mi_xy=text(pid.mi_xy),
    )


@app.post("/pid", response_model=PidResponse)
def compute_pid(request: PidRequest) -> PidResponse:
    try:
        joint = parse_joint_file(request.joint_text)
    except ValueError as exc:
        raise _fail(exc) from exc
    kinds = {"imin": [imin_pid], "ipm": [ipm_pid], "both": [imin_pid, ipm_pid]}[request.kind]
    return PidResponse(
        units=request.units,
        results=[_atoms_model(fn(joint), request.units) for fn in kinds],
    )


# --------------------------------------------------- /analytic-linear


class AnalyticLinearRequest(BaseModel):
    a: float
    b: float
    rho: float
    a_sequence: list[float] | None = None
    units: Units = "nats"


class SublatticesModel(BaseModel):
    r_plus: str
    u_x_plus: str
    u_y_plus: str
    s_plus: str
    r_minus: str
    u_x_minus: str
    u_y_minus: str
    s_minus: str


class LimitRowModel(BaseModel):
    a: float
    uy_min_over_ity: float
    r_min_over_ity: float
    ux_pm_over_ity: float
    r_pm_over_ity: float
    ux_pm_over_uy_min: float


class AnalyticLinearResponse(BaseModel):
    units: Units
    i_xy: str
    i_tx: str
    i_ty: str
    imin: PidAtomsModel
    ipm: PidAtomsModel
    sublattices: SublatticesModel
    limits: list[LimitRowModel] | None = None


@app.post("/analytic-linear", response_model=AnalyticLinearResponse)
def analytic_linear(request: AnalyticLinearRequest) -> AnalyticLinearResponse:
    try:
        li = LinearInteraction(a=request.a, b=request.b, rho=request.rho)
        mi = linear_mi(li)
        lattice = linear_ipm_pid(li)
        rows = (
            linear_limits(request.b, request.rho, request.a_sequence)
            if request.a_sequence
            else None
        )
    except ValueError as exc:
        raise _fail(exc) from exc

    units = request.units
    scale = unit_scale(units)
    sub = lattice.sub

    def text(v: ExtReal) -> str:
        return extreal_to_text(v, units)

    return AnalyticLinearResponse(
        units=units,
        i_xy=repr(mi.ixy * scale),
        i_tx=repr(mi.itx * scale),
        i_ty=repr(mi.ity * scale),
        imin=_atoms_model(linear_imin_pid(li), units),
        ipm=_atoms_model(linear_ipm_as_pid(li), units),
        sublattices=SublatticesModel(
            r_plus=text(sub.r_plus),
            u_x_plus=text(sub.u_x_plus),
            u_y_plus=text(sub.u_y_plus),
            s_plus=text(sub.s_plus),
            r_minus=text(sub.r_minus),
            u_x_minus=text(sub.u_x_minus),
            u_y_minus=text(sub.u_y_minus),
            s_minus=text(sub.s_minus),
        ),
        limits=[
            LimitRowModel(
                a=row.a,
                uy_min_over_ity=row.uy_min_over_ity,
                r_min_over_ity=row.r_min_over_ity,
                ux_pm_over_ity=row.ux_pm_over_ity,
                r_pm_over_ity=row.r_pm_over_ity,
                ux_pm_over_uy_min=row.ux_pm_over_uy_min,
            )
            for row in rows
        ]
        if rows is not None
        else None,
    )


# ------------------------------------------------------------- /mc


class KernelSpec(BaseModel):
    name: Literal["linear", "sigmoidal", "symmetric-sum"]
    a: float | None = None
    b: float | None = None
    alpha: float | None = None

    def build(self) -> NfbiKernel:
        if self.name == "linear":
            if self.a is None or self.b is None:
                raise ValueError("linear kernel requires a and b")
            return linear_kernel(self.a, self.b)
        if self.name == "sigmoidal":
            if self.alpha is None:
                raise ValueError("sigmoidal kernel requires alpha")
            return sigmoidal_kernel(self.alpha)
        return symmetric_sum_kernel()


Estimator = Literal[
    "umin_x", "upm_x", "upm_ambiguity_x", "min_surprisal", "min_specific_info", "density_check"
]


class McRequest(BaseModel):
    kernel: KernelSpec
    rho: float = 0.0
    n: int = Field(default=1_000_000, ge=1)
    seed: int = 0
    t_bins: int = 50
    estimators: list[Estimator] = ["umin_x", "upm_x"]
    units: Units = "nats"


class McEstimateModel(BaseModel):
    estimator: str
    value: float
    std_error: float
    n_samples: int
    seed: int
    n_excluded: int = 0
    t_bins_used: int | None = None


class McResponse(BaseModel):
    units: Units
    estimates: list[McEstimateModel]


def _estimate_model(name: str, est: McEstimate, scale: float) -> McEstimateModel:
    return McEstimateModel(
        estimator=name,
        value=est.value * scale,
        std_error=est.std_error * scale,
        n_samples=est.n_samples,
        seed=est.seed,
        n_excluded=est.n_excluded,
        t_bins_used=est.t_bins_used,
    )


@app.post("/mc", response_model=McResponse)
def run_mc(request: McRequest) -> McResponse:
    scale = unit_scale(request.units)
    out = []
    try:
        kernel = request.kernel.build()
        for name in request.estimators:
            if name == "umin_x":
                est = mc_umin_x(kernel, request.rho, request.n, t_bins=request.t_bins, seed=request.seed)
            elif name == "upm_x":
                est = mc_upm_x(kernel, request.rho, request.n, seed=request.seed)
            elif name == "upm_ambiguity_x":
                est = mc_upm_ambiguity_x(kernel, request.rho, request.n, seed=request.seed)
            elif name == "min_surprisal":
                est = mc_min_surprisal(request.rho, request.n, seed=request.seed)
            elif name == "min_specific_info":
                if kernel.name != "linear":
                    raise ValueError("min_specific_info requires the linear kernel")
                a, b = kernel.params
                est = mc_min_specific_info(
                    LinearInteraction(a=a, b=b, rho=request.rho), request.n, request.seed
                )
            else:  # density_check
                report = density_ratio_identity_check(kernel, request.rho, request.n, request.seed)
                est = McEstimate(
                    value=report.max_abs_error,
                    std_error=0.0,
                    n_samples=report.n_samples,
                    seed=request.seed,
                )
            out.append(_estimate_model(name, est, scale if name != "density_check" else 1.0))
    except (ValueError, RuntimeError) as exc:
        raise _fail(exc) from exc
    return McResponse(units=request.units, estimates=out)


# ------------------------------------------------------ /experiment


class ExperimentRequest(BaseModel):
    experiment: Literal[1, 2, 3]
    config: dict = {}


class ExperimentResponse(BaseModel):
    experiment: int
    manifest: dict
    summary: dict
    files: dict[str, str]


@app.post("/experiment", response_model=ExperimentResponse)
def run_experiment(request: ExperimentRequest) -> ExperimentResponse:
    try:
        cfg = config_from_mapping(request.config)
        result = _dispatch_experiment(request.experiment, cfg)
    except (ConfigError, ValueError) as exc:
        raise _fail(exc) from exc

    manifest = manifest_dict(
        command=f"experiment {request.experiment}",
        seed=cfg.seed,
        config=cfg.to_dict(),
        version=__version__,
    )
    files = {
        f"{name}.csv": rows_to_csv(rows, units=cfg.units)
        for name, rows in result.tables.items()
    }
    files["summary.json"] = summary_to_json(result.summary, units=cfg.units)
    files["manifest.json"] = manifest_to_json(manifest)
    return ExperimentResponse(
        experiment=request.experiment,
        manifest=manifest,
        summary=summary_payload(result.summary, units=cfg.units),
        files=files,
    )


def _dispatch_experiment(experiment: int, cfg: RunConfig) -> ExperimentResult:
    common = dict(
        batches=cfg.batches,
        n_per_batch=cfg.n_per_batch,
        seed=cfg.seed,
        rho=cfg.rho,
        n_bins=cfg.n_bins,
    )
    if experiment == 1:
        return run_experiment_1(alpha=cfg.alpha, **common)
    if experiment == 2:
        return run_experiment_2(beta_grid=cfg.beta_grid, k=cfg.k, alpha=cfg.alpha, **common)
    return run_experiment_3(alpha_grid=cfg.alpha_grid, **common)
