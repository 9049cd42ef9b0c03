"""FastAPI service wrapping the solver package.

Sweep-style endpoints run the scenario synchronously, write the CSV/VTK
artifacts under the requested output directory, and return the rows as JSON.
Constant-validation failures surface as 422 responses naming the violated
inequality; numerical failures surface as 500.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..energy import CaseTag, ConstantsRejected, reduce_case, validate
from ..orbit1d import (
    build_truncated_orbit,
    connecting_energy,
    equipartition_defect,
    export_orbit_csv,
    solve_exact_orbit,
)
from ..experiments.reference import compute_reference_d
from ..experiments.scenarios import (
    SWEEP_COLUMNS,
    run_anchoring_selection,
    run_droplet,
    run_scenario,
)
from .schemas import (
    HealthResponse,
    OrbitRequest,
    OrbitResponse,
    ReferenceRequest,
    ReferenceResponse,
    RunRequest,
    RunResponse,
    TruncatedInfo,
    ValidateRequest,
    ValidateResponse,
)

app = FastAPI(title="ericksen", version=__version__)


@app.get("/health", response_model=HealthResponse)
def health():
    return HealthResponse(version=__version__)


@app.post("/validate-constants", response_model=ValidateResponse)
def validate_constants(req: ValidateRequest):
    c = req.constants.build()
    try:
        tag, reduced = reduce_case(c)
        if req.case is not None and CaseTag(req.case) != tag:
            return ValidateResponse(
                accepted=False, case=tag.value, violated="case:mismatch",
                message=f"declared case {req.case} but constants reduce to {tag.value}",
            )
        lam, Lam = validate(reduced, tag)
    except ConstantsRejected as e:
        return ValidateResponse(accepted=False, violated=e.inequality, message=str(e))
    from ..experiments.config import ConstantsConfig

    return ValidateResponse(
        accepted=True, case=tag.value,
        coercivity_lambda=lam, coercivity_Lambda=Lam,
        reduced_constants=ConstantsConfig(
            k1=reduced.k1, k2=reduced.k2, k3=reduced.k3, k4=reduced.k4,
            alpha=reduced.alpha, beta=reduced.beta,
            L1=reduced.L1, L2=reduced.L2, L3=reduced.L3, L4=reduced.L4,
        ),
    )


@app.post("/orbit", response_model=OrbitResponse)
def orbit(req: OrbitRequest):
    try:
        spec = req.potential.build()
        prof = solve_exact_orbit(spec, req.beta, req.window_halfwidth, req.n_samples)
        alpha0 = connecting_energy(spec, req.beta)
        resp = OrbitResponse(
            alpha0=alpha0,
            orbit_energy=prof.energy,
            equipartition_defect=equipartition_defect(prof),
        )
        if req.eps is not None:
            tr = build_truncated_orbit(prof, req.eps, req.gamma)
            resp.truncated = TruncatedInfo(
                eps=req.eps, gamma=req.gamma, energy=tr.profile.energy,
                excess=tr.profile.energy - alpha0, defect=tr.defect,
                decay_rate=tr.decay_rate,
            )
        if req.out_dir is not None:
            out = Path(req.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            path = out / "orbit.csv"
            export_orbit_csv(prof, path)
            resp.csv_path = str(path)
        return resp
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))


def _run(runner, req: RunRequest) -> RunResponse:
    try:
        rows = runner(req.config, req.out_dir, req.threads)
    except (ConstantsRejected, ValueError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    except FloatingPointError as e:
        raise HTTPException(status_code=500, detail=f"numerical failure: {e}")
    out = Path(req.out_dir)
    return RunResponse(
        rows=[dict(zip(SWEEP_COLUMNS, r.values())) for r in rows],
        csv_path=str(out / "sweep.csv"),
        summary_path=str(out / "summary.txt"),
    )


@app.post("/sweep", response_model=RunResponse)
def sweep(req: RunRequest):
    return _run(run_scenario, req)


@app.post("/anchoring", response_model=RunResponse)
def anchoring(req: RunRequest):
    return _run(run_anchoring_selection, req)


@app.post("/droplet", response_model=RunResponse)
def droplet(req: RunRequest):
    if req.config.scenario not in ("droplet_2d", "droplet_3d_coarse"):
        raise HTTPException(status_code=422, detail="droplet endpoint needs a droplet scenario")
    return _run(run_droplet, req)


@app.post("/reference-d", response_model=ReferenceResponse)
def reference_d(req: ReferenceRequest):
    try:
        res = compute_reference_d(req.config)
    except (ConstantsRejected, ValueError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    return ReferenceResponse(**res.as_dict())
