"""Numerical tolerances and discretisation defaults shared across modules."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    # argument principle
    winding_window: float = 0.2
    min_nodes: int = 256
    max_nodes: int = 4096
    clearance: float = 1e-8
    # root refinement and clustering
    cluster_radius: float = 1e-5
    residual: float = 1e-7
    noise_floor: float = 1e-11
    max_roots: int = 64
    # classification
    geometric: float = 1e-6
    reality: float = 1e-7
    match: float = 1e-6
    # gradients
    gram: float = 1e-10
    # transfer integration
    min_steps: int = 256
    steps_per_unit: int = 32
    max_steps: int = 1 << 16
    path_points: int = 1024

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"tolerance {f.name} must be positive")

    def with_overrides(self, **kw) -> "Tolerances":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT = Tolerances()
