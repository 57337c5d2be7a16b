"""
Module: config
Purpose: Effective configuration of one CLI run.
"""

from dataclasses import asdict, dataclass, field

from ..exceptions import ConfigError

OUTPUT_FORMATS = ("json", "csv")


@dataclass
class RunConfig:
    """
    Model spec, numerical controls and output settings of a single command.

    Values come from flags, then the optional YAML config file, then defaults.
    """

    command: str
    kind: str = "ideal"
    n_sites: int = 10
    theta: float = 0.7853981633974483
    phi: float = 0.0
    epsilon: float = 0.0
    seed: int | None = None
    kappa: float = 1.0
    dt: float = 0.01
    duration: float = 10.0
    grid: int = 1024
    tol: float | None = None
    zero_tol: float | None = None
    output_dir: str | None = None
    output_format: str = "json"
    extras: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        for name in ("n_sites", "kappa", "dt", "duration", "grid"):
            value = getattr(self, name)
            if value is None or not value > 0:
                raise ConfigError(f"{name} must be positive, got {value}.")
        if self.epsilon < 0:
            raise ConfigError(f"epsilon must be non-negative, got {self.epsilon}.")
        if self.epsilon > 0 and self.kind in ("canonical", "noncanonical") and self.seed is None:
            raise ConfigError("A seed is required whenever disorder epsilon > 0.")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"Unknown format '{self.output_format}'. Expected json or csv.")
        return self

    def to_dict(self) -> dict:
        """Flat mapping echoed into every output file."""
        values = asdict(self)
        extras = values.pop("extras")
        values.update(extras)
        return values
