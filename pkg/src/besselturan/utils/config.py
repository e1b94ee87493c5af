'''
Read-only configuration record for besselturan.

Defaults live in `Settings`. A `.env` file in the working directory is loaded first (python-dotenv),
then any `BESSELTURAN_*` variable in the process environment overrides the matching field.
'''
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv

ENV_PREFIX = "BESSELTURAN_"


@dataclass(frozen=True)
class Settings:
    '''
    Precision constants and runtime defaults.

    Attributes:
        rel_tol (float): Convergence tolerance of the double-precision series and continued fractions,
            floored at machine epsilon.
        claimed_rel_err (float): Relative error claimed inside the validated window; I and K values whose
            estimate exceeds it carry a warning.
        series_switch (float): Arguments at or below max(series_switch, nu) use the power series for I.
        temme_switch (float): Arguments below this use Temme's series for K, above it the second
            continued fraction.
        max_cf_iterations (int): Iteration cap for every continued fraction.
        nu_min (float): Smallest order accepted by any evaluation.
        nu_max (float): Largest order accepted by any evaluation.
        window_nu_min (float): Lower edge of the validated order window for I.
        u_max_unscaled (float): Largest argument for which unscaled values are validated.
        deadband_factor (float): Multiple of the error budget inside which a verdict is indeterminate.
        oracle_dps (int): Working precision of the oracle in decimal digits.
        oracle_min_digits (int): Certified digits below which the oracle raises.
        oracle_max_terms (int): Series term cap of the oracle.
        quad_tol (float): Default quadrature tolerance.
        quad_max_evaluations (int): Evaluation cap of the quadrature engine.
        threads (int): Default worker count for scans (0 means hardware parallelism).
        log_level (str): Default logging level used by the CLI.
    '''
    rel_tol: float = 1e-16
    claimed_rel_err: float = 1e-14
    series_switch: float = 10.0
    temme_switch: float = 2.0
    max_cf_iterations: int = 100_000
    nu_min: float = -20.0
    nu_max: float = 100.0
    window_nu_min: float = -1.0
    u_max_unscaled: float = 700.0
    deadband_factor: float = 10.0
    oracle_dps: int = 64
    oracle_min_digits: int = 30
    oracle_max_terms: int = 100_000
    quad_tol: float = 1e-10
    quad_max_evaluations: int = 2 ** 20
    threads: int = 0
    log_level: str = "INFO"

    @property
    def workers(self) -> int:
        '''Resolved worker count.'''
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)


def _coerce(raw: str, template):
    if isinstance(template, bool):
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(template, int):
        return int(raw)
    if isinstance(template, float):
        return float(raw)
    return raw


def load_settings(dotenv_path: Optional[str] = None) -> Settings:
    '''
    Builds a Settings record from defaults, an optional .env file and the environment.

    Args:
        dotenv_path (str, optional): Explicit .env file. Defaults to searching the working directory.

    Returns:
        Settings: The resolved configuration.

    Raises:
        ValueError: If an environment override cannot be converted to the field's type.
    '''
    load_dotenv(dotenv_path, override=False)
    defaults = Settings()
    overrides = {}
    for f in fields(Settings):
        raw = os.environ.get(ENV_PREFIX + f.name.upper())
        if raw is None:
            continue
        try:
            overrides[f.name] = _coerce(raw, getattr(defaults, f.name))
        except ValueError as exc:
            raise ValueError(f"{ENV_PREFIX}{f.name.upper()}={raw!r} is not a valid {f.name}") from exc
    return replace(defaults, **overrides)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    '''Returns the process-wide Settings, loading it on first use.'''
    return load_settings()
