"""Physical coefficients of the coupled system."""
from dataclasses import dataclass


@dataclass(frozen=True)
class Parameters:
    """SOC strength nu and the three focusing coefficients (all > 0)."""

    nu: float = 1.0
    lambda_plus: float = 1.0
    lambda_minus: float = 1.0
    lambda_zero: float = 1.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        for name in ("lambda_plus", "lambda_minus", "lambda_zero"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def equal_lambdas(self):
        return self.lambda_plus == self.lambda_minus == self.lambda_zero
