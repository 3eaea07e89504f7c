"""Tolerances, quadrature defaults and size guards, optionally read from YAML."""
from __future__ import annotations

from pathlib import Path
from typing import Any, Literal

import yaml
from attrs import field, frozen

from zonalcycle.exception import ConfigSchemaError, GuardError
from zonalcycle.hyperint import QuadratureSpec, Scheme

OutputFormat = Literal["json", "csv", "text"]


def _section(obj: dict[str, Any], key: str) -> dict[str, Any]:
    section = obj.get(key) or {}
    if not isinstance(section, dict):
        raise ConfigSchemaError(f"'{key}' must be a mapping, got {section!r}")
    return section


@frozen(kw_only=True)
class Tolerances:
    """One tolerance per check; relative for the numerical ones."""

    constant: float = 1e-6
    constant_monte_carlo: float = 2e-2
    refinement: float = 1e-8
    z_independence: float = 2e-6
    tau_pointwise: float = 1e-9
    beta: float = 1e-8
    asymptotic: float = 1e-6

    @classmethod
    def from_python_object(cls, obj: dict[str, Any]) -> Tolerances:
        return cls(**{key: float(value) for key, value in obj.items()})


@frozen(kw_only=True)
class QuadratureDefaults:
    nodes: int = 32
    samples: int = 200_000
    seed: int = 0
    max_points: int = 5_000_000

    @classmethod
    def from_python_object(cls, obj: dict[str, Any]) -> QuadratureDefaults:
        return cls(**{key: int(value) for key, value in obj.items()})


@frozen(kw_only=True)
class Guards:
    """Largest inputs each family of subcommands accepts without `--unsafe-large`."""

    symbolic_n: int = 3
    diagrams_n: int = 8
    asymptotic_s: int = 3

    @classmethod
    def from_python_object(cls, obj: dict[str, Any]) -> Guards:
        return cls(**{key: int(value) for key, value in obj.items()})

    @staticmethod
    def check(name: str, value: int, limit: int, unsafe_large: bool) -> None:
        if value > limit and not unsafe_large:
            raise GuardError(
                f"{name}={value} exceeds the limit {limit}; pass --unsafe-large to run"
            )


@frozen(kw_only=True)
class Config:
    tolerances: Tolerances = field(factory=Tolerances)
    quadrature: QuadratureDefaults = field(factory=QuadratureDefaults)
    guards: Guards = field(factory=Guards)

    @classmethod
    def from_python_object(cls, obj: dict[str, Any] | None) -> Config:
        obj = obj or {}
        return cls(
            tolerances=Tolerances.from_python_object(_section(obj, "tolerances")),
            quadrature=QuadratureDefaults.from_python_object(
                _section(obj, "quadrature")
            ),
            guards=Guards.from_python_object(_section(obj, "guards")),
        )


def get_config(
    config_path: Path | None,
) -> Config:
    """
    Load tolerances, quadrature defaults and guards from the YAML file at config_path.
    Missing keys keep their defaults; without a path every default is kept.
    """
    if config_path is None:
        return Config()

    with config_path.open("r", encoding="utf-8") as config_file:
        config_obj = yaml.safe_load(config_file)

    if config_obj is not None and not isinstance(config_obj, dict):
        raise ConfigSchemaError(f"{config_path} does not hold a mapping")

    try:
        config = Config.from_python_object(config_obj)
    except (KeyError, TypeError, ValueError) as error:
        raise ConfigSchemaError(str(error)) from error

    return config


@frozen(kw_only=True)
class RunConfig:
    """The validated options of one invocation."""

    subcommand: str
    n: int = 1
    k: float = 0.5
    z: tuple[float, ...] | None = None
    scheme: Scheme | None = None
    nodes: int | None = None
    samples: int | None = None
    seed: int | None = None
    output_format: OutputFormat = "json"
    out: Path | None = None
    slot: int | None = None
    s: int = 2
    unsafe_large: bool = False

    def quadrature(self, defaults: QuadratureDefaults) -> QuadratureSpec:
        kwargs: dict[str, Any] = {
            "nodes": self.nodes or defaults.nodes,
            "samples": self.samples or defaults.samples,
            "seed": defaults.seed if self.seed is None else self.seed,
            "max_points": defaults.max_points,
        }
        if self.unsafe_large:
            kwargs["max_points"] = 2**62
        if self.scheme is None:
            return QuadratureSpec.for_rank(self.n, **kwargs)
        return QuadratureSpec(scheme=self.scheme, **kwargs)

    def to_json(self) -> dict[str, Any]:
        return {
            "subcommand": self.subcommand,
            "n": self.n,
            "k": self.k,
            "z": None if self.z is None else list(self.z),
            "seed": self.seed,
            "slot": self.slot,
            "s": self.s,
        }
