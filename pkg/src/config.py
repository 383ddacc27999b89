"""Default configuration for verification, design and simulation runs."""
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

SEP_RULES = ("sep1", "sep2")
CADENCES = ("simultaneous", "roundrobin", "random")
INFORMATION_MODES = ("global", "local")


@dataclass
class AnalysisConfig:
    """Run parameters. Values from a definition file override these; CLI flags override both."""

    epsilon: Fraction = Fraction(1, 10)  # inertia of better reply
    sep: str = "sep2"
    cadence: str = "roundrobin"
    information: str = "global"
    max_steps: int = 100
    runs: int = 1
    seed: Optional[int] = None
    strict: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if self.sep not in SEP_RULES:
            raise ValueError(f"sep must be one of {SEP_RULES}, got {self.sep!r}")
        if self.cadence not in CADENCES:
            raise ValueError(f"cadence must be one of {CADENCES}, got {self.cadence!r}")
        if self.information not in INFORMATION_MODES:
            raise ValueError(f"information must be one of {INFORMATION_MODES}, got {self.information!r}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.max_steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.max_steps}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    def merged(self, **overrides) -> "AnalysisConfig":
        """Copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


DEFAULT_CONFIG = AnalysisConfig()
