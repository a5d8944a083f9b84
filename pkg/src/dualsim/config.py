"""Experiment configuration: flat key=value files with CLI-flag overrides.

Flags win over file values. The canonical form of the resolved config is
hashed and embedded in output metadata for reproducibility.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields

from .als import ChunkPolicy
from .bls import BlsPolicy
from .cluster import ClusterSpec


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    workload_path: str | None = None
    synthetic_jobs: int | None = None
    window_hours: float | None = None
    hosts: int = 4
    cores_per_host: int = 64
    host_peak_gflops: float = 3000.0
    link_gbps: float = 50.0
    link_latency_ns: float = 500.0
    bls_list: list[str] = field(default_factory=lambda: ["fcfs"])
    als_list: list[str] = field(default_factory=lambda: ["static"])
    upsilon_list: list[float] = field(default_factory=lambda: [0.0])
    seed: int = 1
    chunk_overhead_seconds: float = 0.0
    edf_deadline_factor: float = 2.0
    output_dir: str = "out"
    parallel: bool = False
    plots: bool = True

    def platform(self) -> ClusterSpec:
        return ClusterSpec(
            hosts=self.hosts,
            cores_per_host=self.cores_per_host,
            host_peak_gflops=self.host_peak_gflops,
            link_gbps=self.link_gbps,
            link_latency_ns=self.link_latency_ns,
        )

    def bls_policies(self) -> list[BlsPolicy]:
        try:
            return [BlsPolicy(v) for v in self.bls_list]
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def als_policies(self) -> list[ChunkPolicy]:
        try:
            return [ChunkPolicy(v) for v in self.als_list]
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def validate(self) -> None:
        if not self.bls_list or not self.als_list or not self.upsilon_list:
            raise ConfigError("bls, als and upsilon lists must be non-empty")
        self.bls_policies()
        self.als_policies()
        for u in self.upsilon_list:
            if not 0 <= u < 1:
                raise ConfigError(f"upsilon must be in [0, 1), got {u}")
        if self.workload_path is None and self.synthetic_jobs is None:
            raise ConfigError("either a workload file or a synthetic job count is needed")

    def canonical(self) -> str:
        parts = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, list):
                value = ",".join(str(v) for v in value)
            parts.append(f"{f.name}={value}")
        return "\n".join(parts)

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]


_LIST_KEYS = {"bls": "bls_list", "als": "als_list", "upsilon": "upsilon_list"}
_KEY_ALIASES = {
    "workload": "workload_path",
    "jobs": "synthetic_jobs",
    **_LIST_KEYS,
}


def apply_kv(cfg: ExperimentConfig, key: str, value: str) -> None:
    """Set one key=value pair, coercing to the field's type."""
    name = _KEY_ALIASES.get(key, key)
    valid = {f.name: f for f in fields(ExperimentConfig)}
    if name not in valid:
        raise ConfigError(f"unknown config key {key!r}")
    if name == "bls_list" or name == "als_list":
        setattr(cfg, name, [v.strip().lower() for v in value.split(",") if v.strip()])
        return
    if name == "upsilon_list":
        setattr(cfg, name, [float(v) for v in value.split(",") if v.strip()])
        return
    current = getattr(cfg, name)
    try:
        if name in ("workload_path", "output_dir"):
            setattr(cfg, name, value)
        elif name in ("parallel", "plots"):
            setattr(cfg, name, value.strip().lower() in ("1", "true", "yes", "on"))
        elif isinstance(current, int) or name in ("synthetic_jobs",):
            setattr(cfg, name, int(value))
        else:
            setattr(cfg, name, float(value))
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {exc}") from None


def load_config_file(path: str, cfg: ExperimentConfig | None = None) -> ExperimentConfig:
    """Read a flat key=value file ('#' comments, blank lines ignored)."""
    cfg = cfg or ExperimentConfig()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            apply_kv(cfg, key.strip(), value.strip())
    return cfg
