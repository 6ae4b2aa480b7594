"""Bundled model files for the three identification case studies.

rlc_series        4-term quadratic model of a series RLC circuit
motor_generator   9-term quadratic model of a coupled DC motor/generator
duffing_ueda      18-term cubic output-only model of the forced oscillator

Coefficients are the published interval estimates; the raw measurement
records behind the first two are not reproducible here, so these files are
loaded as-is for validation and round-trip checks.
"""

from importlib import resources

FIXTURE_NAMES = ("rlc_series", "motor_generator", "duffing_ueda")


def fixture_path(name: str) -> str:
    """Absolute path of a bundled model file ("rlc_series", ...)."""
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURE_NAMES}")
    return str(resources.files(__package__).joinpath(f"{name}.model"))
