"""Pipeline configuration: a dataclass plus a flat ``key=value`` file format."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParameterError, ValidationError

_PATH_KEYS = ("citations", "studies", "publications", "taxonomy", "out")


@dataclass
class PipelineConfig:
    citations: Path | None = None
    studies: Path | None = None
    publications: Path | None = None
    taxonomy: Path | None = None      # None -> bundled taxonomy
    out: Path = Path("cocite-out")
    min_year: int = 1962
    s_min_weight: float = 2
    f_min_weight: float = 5
    k: int = 3
    louvain_seed: int = 0
    louvain_runs: int = 1
    resolution: float = 1.0
    jenks_classes: int = 4
    layout_iterations: int = 500
    layout_seed: int = 0
    compare_reference: bool = False
    extra: dict = field(default_factory=dict, repr=False)

    def validate(self):
        for name in ("min_year", "s_min_weight", "f_min_weight"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0")
        if self.k < 2:
            raise ParameterError("k must be >= 2")
        if self.jenks_classes < 1:
            raise ParameterError("jenks_classes must be >= 1")
        if self.louvain_runs < 1:
            raise ParameterError("louvain_runs must be >= 1")
        if self.resolution <= 0:
            raise ParameterError("resolution must be > 0")
        if self.layout_iterations < 1:
            raise ParameterError("layout_iterations must be >= 1")
        for name in ("citations", "studies", "publications"):
            if getattr(self, name) is None:
                raise ValidationError(f"config is missing the {name!r} input path")
        return self

    def as_dict(self) -> dict:
        """Plain, JSON-ready view (paths as strings, ``extra`` dropped)."""
        out = {}
        for f in dataclasses.fields(self):
            if f.name == "extra":
                continue
            v = getattr(self, f.name)
            out[f.name] = str(v) if isinstance(v, Path) else v
        return out

    def replace(self, **changes) -> "PipelineConfig":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **_coerce(changes, Path.cwd()))


def _coerce(raw: dict, base: Path) -> dict:
    types = {f.name: f.type for f in dataclasses.fields(PipelineConfig)}
    out = {}
    for key, value in raw.items():
        if key in _PATH_KEYS:
            p = Path(value)
            out[key] = p if p.is_absolute() else base / p
        elif key == "compare_reference":
            out[key] = value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes", "on")
        elif types.get(key) == "int":
            out[key] = int(value)
        elif types.get(key) == "float":
            out[key] = float(value)
        else:
            out[key] = value
    return out


def load_config(path) -> PipelineConfig:
    """Read ``key=value`` lines; ``#`` starts a comment. Relative paths resolve
    against the config file's directory."""
    path = Path(path)
    known = {f.name for f in dataclasses.fields(PipelineConfig)} - {"extra"}
    raw, extra = {}, {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in known:
            raw[key] = value
        else:
            extra[key] = value
    try:
        cfg = PipelineConfig(**_coerce(raw, path.parent.resolve()))
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from None
    cfg.extra = extra
    return cfg
