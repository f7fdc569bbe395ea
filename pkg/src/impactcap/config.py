"""Service configuration loaded from a JSON file."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .engine import AdminSettings, SettingsError


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    data_dir: str = "./impactcap-data"
    static_dir: str = ""
    moderator_token: str = ""
    default_settings: AdminSettings = field(default_factory=AdminSettings)
    emotion_endpoint: str = ""
    chat_endpoint: str = ""
    chat_auth_token: str = ""
    image_endpoint: str = ""
    lexicon_path: str = ""
    phrases_path: str = ""
    banned_terms_path: str = ""
    rate_limit_per_s: float = 5.0
    heartbeat_interval_s: float = 15.0
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.port < 65536:
            raise ConfigError(f"port out of range: {self.port}")
        if self.rate_limit_per_s <= 0:
            raise ConfigError("rate_limit_per_s must be > 0")
        if self.heartbeat_interval_s <= 0:
            raise ConfigError("heartbeat_interval_s must be > 0")

    def to_dict(self) -> dict:
        doc = {
            "host": self.host,
            "port": self.port,
            "data_dir": self.data_dir,
            "static_dir": self.static_dir,
            "moderator_token": self.moderator_token,
            "default_settings": self.default_settings.to_dict(),
            "emotion_endpoint": self.emotion_endpoint,
            "chat_endpoint": self.chat_endpoint,
            "chat_auth_token": self.chat_auth_token,
            "image_endpoint": self.image_endpoint,
            "lexicon_path": self.lexicon_path,
            "phrases_path": self.phrases_path,
            "banned_terms_path": self.banned_terms_path,
            "rate_limit_per_s": self.rate_limit_per_s,
            "heartbeat_interval_s": self.heartbeat_interval_s,
            "seed": self.seed,
        }
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "ServiceConfig":
        known = cls().to_dict().keys()
        unknown = set(doc) - set(known)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(doc)
        if "default_settings" in kwargs:
            try:
                kwargs["default_settings"] = AdminSettings.from_dict(
                    kwargs["default_settings"]
                )
            except SettingsError as exc:
                raise ConfigError(f"default_settings: {exc}") from None
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


def load_config(path) -> ServiceConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return ServiceConfig.from_dict(doc)
