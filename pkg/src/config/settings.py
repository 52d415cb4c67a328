"""Centralized Settings Management using Pydantic"""
from contextlib import contextmanager
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical defaults loaded from environment variables (prefix ORBITS_)"""

    model_config = SettingsConfigDict(
        env_prefix="ORBITS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    # Linear algebra
    rank_cutoff: float = Field(default=1e-10, gt=0)
    exact_series_terms: int = Field(default=20, ge=2)

    # Residual gates
    residual_gate: float = Field(default=1e-6, gt=0)
    strict_gate: float = Field(default=1e-8, gt=0)
    skew_gate: float = Field(default=1e-7, gt=0)
    transport_gate: float = Field(default=1e-7, gt=0)
    negative_control_gate: float = Field(default=1e-2, gt=0)

    # Finite differences
    fd_step: float = Field(default=1e-5, gt=0)
    richardson_step: float = Field(default=1e-4, gt=0)
    oracle_rtol: float = Field(default=1e-6, gt=0)

    # ODE integration (embedded Runge-Kutta)
    ode_atol: float = Field(default=1e-10, gt=0)
    ode_rtol: float = Field(default=1e-9, gt=0)

    # Charts
    chart_margin: float = Field(default=0.1, ge=0)

    # Sampling
    curve_seed: int = 0
    ray_count: int = Field(default=6, ge=1)
    piecewise_count: int = Field(default=4, ge=0)
    sample_points: int = Field(default=20, ge=1)
    group_samples: int = Field(default=3, ge=0)
    gram_cache_size: int = Field(default=256, ge=1)

    # Logging
    log_format: str = "pretty"  # pretty, json
    debug: bool = False


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


# Global settings instance
settings = get_settings()


def reload_settings():
    """Reload settings (clears cache)"""
    get_settings.cache_clear()
    return get_settings()


@contextmanager
def override_settings(**values):
    """Temporarily replace fields of the shared settings instance"""
    unknown = [k for k in values if k not in Settings.model_fields]
    if unknown:
        raise KeyError(f"unknown settings: {', '.join(sorted(unknown))}")
    saved = {k: getattr(settings, k) for k in values}
    try:
        for key, value in values.items():
            setattr(settings, key, value)
        yield settings
    finally:
        for key, value in saved.items():
            setattr(settings, key, value)
