"""Experiment configuration schema and state building.

Config documents are JSON-compatible and validated strictly: unknown keys
are rejected (with the offending key named) and every numeric field must be
finite.  The same models back the service request bodies; the ``output``
section is client-side only and never crosses the wire.
"""
from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import AliasChoices, BaseModel, ConfigDict, Field

from . import states
from .errors import ConfigError
from .states import DensityMatrix, PhysicalParams, PositionGrid, WaveFunction

Finite = Annotated[float, Field(allow_inf_nan=False)]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ParamsSpec(StrictModel):
    """Physical constants; ``m`` and ``D`` are accepted as short keys."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    hbar: Annotated[float, Field(gt=0, allow_inf_nan=False)] = 1.0
    mass: Annotated[
        float, Field(gt=0, allow_inf_nan=False, validation_alias=AliasChoices("mass", "m"))
    ] = 1.0
    diffusion_d: Annotated[
        float,
        Field(gt=0, allow_inf_nan=False, validation_alias=AliasChoices("diffusion_d", "D")),
    ] = 1.0

    def build(self) -> PhysicalParams:
        return PhysicalParams(self.hbar, self.mass, self.diffusion_d)


class GridSpec(StrictModel):
    x_min: Finite = -16.0
    x_max: Finite = 16.0
    n_points: int = 256

    def build(self) -> PositionGrid:
        return PositionGrid(self.x_min, self.x_max, self.n_points)


class GaussianSpec(StrictModel):
    type: Literal["gaussian"]
    x0: Finite = 0.0
    p0: Finite = 0.0
    sigma: Annotated[float, Field(gt=0, allow_inf_nan=False)] = 1.0


class CatSpec(StrictModel):
    type: Literal["cat"]
    x0: Finite
    sigma: Annotated[float, Field(gt=0, allow_inf_nan=False)] = 0.7071067811865476
    phase: Finite = 0.0


class EigenstateSpec(StrictModel):
    type: Literal["eigenstate"]
    n: Annotated[int, Field(ge=0, le=10)]
    sigma: Annotated[float, Field(gt=0, allow_inf_nan=False)] = 1.0


PureSpec = Annotated[Union[GaussianSpec, CatSpec, EigenstateSpec], Field(discriminator="type")]


class MixtureComponent(StrictModel):
    weight: Annotated[float, Field(ge=0, allow_inf_nan=False)]
    state: PureSpec


class MixtureSpec(StrictModel):
    type: Literal["mixture"]
    components: list[MixtureComponent] = Field(min_length=1)


StateSpec = Annotated[
    Union[GaussianSpec, CatSpec, EigenstateSpec, MixtureSpec], Field(discriminator="type")
]


def build_pure(spec, grid: PositionGrid, params: PhysicalParams) -> WaveFunction:
    if isinstance(spec, GaussianSpec):
        return states.gaussian_packet(grid, spec.x0, spec.p0, spec.sigma, params)
    if isinstance(spec, CatSpec):
        return states.cat_state(grid, spec.x0, spec.sigma, spec.phase, params)
    if isinstance(spec, EigenstateSpec):
        return states.oscillator_eigenstate(grid, spec.n, spec.sigma)
    raise ConfigError(f"not a pure-state spec: {spec!r}")


def build_density(spec, grid: PositionGrid, params: PhysicalParams) -> DensityMatrix:
    if isinstance(spec, MixtureSpec):
        return states.mix(
            [
                (c.weight, states.density_from_pure(build_pure(c.state, grid, params)))
                for c in spec.components
            ]
        )
    return states.density_from_pure(build_pure(spec, grid, params))


class CovarianceSpec(StrictModel):
    cxx: Annotated[float, Field(ge=0, allow_inf_nan=False)]
    cxp: Finite
    cpp: Annotated[float, Field(ge=0, allow_inf_nan=False)]


Engine = Literal["exact", "fd", "trotter", "mc"]


# -- service request bodies --------------------------------------------------

class ScalesRequest(StrictModel):
    params: ParamsSpec = ParamsSpec()


class StateRequest(StrictModel):
    state: StateSpec
    grid: GridSpec = GridSpec()
    params: ParamsSpec = ParamsSpec()


class WignerRequest(StateRequest):
    pass


class SmoothRequest(StateRequest):
    covariance: CovarianceSpec


class EvolveRequest(StateRequest):
    time: Annotated[float, Field(ge=0, allow_inf_nan=False)]
    engine: Engine = "exact"
    dt: Annotated[float, Field(gt=0, allow_inf_nan=False)] | None = None
    n_samples: Annotated[int, Field(ge=100)] = 4096
    seed: int = 0


class ScanRequest(StateRequest):
    t_max: Annotated[float, Field(gt=0, allow_inf_nan=False)]
    n_steps: Annotated[int, Field(ge=2)] = 33


# -- full CLI configs (request fields plus client-side output paths) ---------

class OutputSpec(StrictModel):
    csv: str | None = None
    pgm: str | None = None


class _WithOutput(StrictModel):
    output: OutputSpec = OutputSpec()


class ScalesConfig(ScalesRequest):
    pass


class StateConfig(StateRequest, _WithOutput):
    pass


class WignerConfig(WignerRequest, _WithOutput):
    pass


class SmoothConfig(SmoothRequest, _WithOutput):
    pass


class EvolveConfig(EvolveRequest, _WithOutput):
    pass


class ScanConfig(ScanRequest, _WithOutput):
    pass
