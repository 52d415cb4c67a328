"""Configuration"""
from src.config.settings import Settings, get_settings, override_settings, reload_settings, settings

__all__ = ["Settings", "get_settings", "override_settings", "reload_settings", "settings"]
