"""Experiment configuration schema (JSON) shared by the CLI, service, and scenarios."""

from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..energy import CaseTag, ElasticConstants
from ..potential import PotentialSpec


class PotentialConfig(BaseModel):
    s_plus: float = 1.0
    w0: float = 1.0
    barrier_enabled: bool = False

    def build(self) -> PotentialSpec:
        return PotentialSpec(s_plus=self.s_plus, w0=self.w0, barrier_enabled=self.barrier_enabled)


class ConstantsConfig(BaseModel):
    k1: float = 1.0
    k2: float = 1.0
    k3: float = 1.0
    k4: float = 0.0
    alpha: float = 1.0
    beta: float = 1.0
    L1: float = 0.0
    L2: float = 0.0
    L3: float = 0.0
    L4: float = 0.0

    def build(self) -> ElasticConstants:
        return ElasticConstants(**self.model_dump())


class GridConfig(BaseModel):
    box: List[float] = Field(default=[1.0, 1.0], description="domain lengths per axis")
    cells_per_eps: float = 8.0
    strip_cells: Optional[int] = None   # quasi-1D runs: fixed cell count across the strip axis

    @model_validator(mode="after")
    def _check(self):
        if len(self.box) not in (2, 3):
            raise ValueError("box must have 2 or 3 axes")
        if any(b <= 0 for b in self.box):
            raise ValueError("box lengths must be positive")
        if self.cells_per_eps < 4.0:
            raise ValueError("need at least 4 cells per eps")
        return self


class VolumeConfig(BaseModel):
    mode: Literal["rescale", "penalty"] = "rescale"
    mu_vol: float = 1e4
    h_smooth: float = 0.1


class SolveSection(BaseModel):
    gamma: float = 0.55
    step0: Optional[float] = None
    tol_grad: float = 1e-4
    max_iters: int = 3000
    backtrack_factor: float = 0.5
    backtrack_max: int = 40
    record_every: int = 25
    recenter_every: int = 100

    @model_validator(mode="after")
    def _check(self):
        if not 0.5 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (1/2, 1)")
        return self


class FlatSection(BaseModel):
    """Flat vertical interface at x = Lx/2 with Dirichlet side faces, periodic crosswise."""

    tilt_deg: float = 0.0          # boundary director tilt away from z toward the normal x
    twist_deg: float = 0.0         # amplitude of the y-dependent rotation of g about x
    twist_periods: int = 1


class DropletSection(BaseModel):
    radius: float = 0.15           # volume-matched target radius
    aspect: float = 2.0            # initial ellipse aspect ratio
    restarts: int = 1


class ReferenceSection(BaseModel):
    domain: Literal["half_square", "disk", "ball"] = "ball"
    anchoring: Literal["planar", "homeotropic", "free"] = "homeotropic"
    shape: int = 64                # cells per axis
    box_pad: float = 0.1           # margin around the unit disk/ball
    g_far: List[float] = Field(default=[0.0, 0.0, 1.0])
    restarts: int = 1
    max_iters: int = 500
    tilt_deg: float = 0.0          # half_square: boundary director tilt (from z toward x)


class AnchoringSection(BaseModel):
    tilt_deg: float = 20.0
    beta_b: float = 1.5            # case B needs beta strictly above L2
    l1: float = 1.0
    l2: float = 1.0
    drift_restarts: int = 3


class ExperimentConfig(BaseModel):
    scenario: Literal[
        "flat_interface", "droplet_2d", "droplet_3d_coarse", "column_1d", "reference_frank"
    ]
    constants: ConstantsConfig = ConstantsConfig()
    case: Optional[Literal["A", "B", "C"]] = None
    potential: PotentialConfig = PotentialConfig()
    grid: GridConfig = GridConfig()
    solve: SolveSection = SolveSection()
    volume: VolumeConfig = VolumeConfig()
    eps_list: List[float] = Field(default=[0.08, 0.04, 0.02])
    seed: int = 0
    flat: FlatSection = FlatSection()
    droplet: DropletSection = DropletSection()
    reference: ReferenceSection = ReferenceSection()
    anchoring: AnchoringSection = AnchoringSection()
    write_fields: bool = True

    @model_validator(mode="after")
    def _scenario_consistency(self):
        if not self.eps_list or any(e <= 0 for e in self.eps_list):
            raise ValueError("eps_list must contain positive values")
        if self.scenario != "droplet_3d_coarse" and self.grid.cells_per_eps < 8.0:
            raise ValueError("need at least 8 cells per eps (coarse 3D droplets may go to 4)")
        if self.scenario in ("droplet_2d", "droplet_3d_coarse"):
            req = 3 if self.scenario == "droplet_3d_coarse" else 2
            if len(self.grid.box) != req:
                raise ValueError(f"{self.scenario} needs a {req}-axis box")
            if self.droplet.radius <= 0:
                raise ValueError("droplet radius must be positive")
        if self.scenario in ("flat_interface", "column_1d") and len(self.grid.box) != 2:
            raise ValueError(f"{self.scenario} runs on a 2-axis box")
        return self

    def case_tag(self) -> Optional[CaseTag]:
        return None if self.case is None else CaseTag(self.case)
