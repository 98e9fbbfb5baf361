"""Alternating-training configuration, resolved from settings, config files and flags."""
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Mapping, Tuple

from decouple import Csv
from django.conf import settings

from custom_tools.exceptions import InputError

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class ConfigError(InputError):
    pass


def parse_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ConfigError(f"expected on/off, got '{value}'")


def parse_widths(value: Any) -> Tuple[int, ...]:
    if isinstance(value, (tuple, list)):
        return tuple(int(v) for v in value)
    try:
        return tuple(Csv(cast=int)(str(value)))
    except ValueError:
        raise ConfigError(f"hidden widths must be a comma list of integers, got '{value}'") from None


@dataclass(frozen=True)
class TrainConfig:
    passes: int = 2
    linear_epochs: int = 40
    wnll_epochs: int = 5
    lr: float = 0.05
    lr_half_every: int = 10
    wnll_lr: float = 0.0005
    second_pass_lr_factor: float = 0.2
    momentum: float = 0.9
    weight_decay: float = 1e-4
    batch_linear: int = 128
    batch_wnll: int = 2000
    knn_k: int = 15
    sigma_rank: int = 8
    seed: int = 0
    template_fraction: float = 0.5
    proxy_scaling: bool = True
    track_wnll: bool = True
    hidden: Tuple[int, ...] = (64,)
    buffer_width: int = 32

    def __post_init__(self):
        problems = []
        if self.passes < 1:
            problems.append("passes must be at least 1")
        if self.linear_epochs < 0 or self.wnll_epochs < 0:
            problems.append("stage epochs cannot be negative")
        if self.lr <= 0 or self.wnll_lr <= 0:
            problems.append("learning rates must be positive")
        if self.lr_half_every < 1:
            problems.append("lr_half_every must be at least 1")
        if not 0 < self.second_pass_lr_factor <= 1:
            problems.append("second_pass_lr_factor must lie in (0, 1]")
        if not 0 <= self.momentum < 1:
            problems.append("momentum must lie in [0, 1)")
        if self.weight_decay < 0:
            problems.append("weight_decay cannot be negative")
        if self.batch_linear < 1 or self.batch_wnll < 1:
            problems.append("batch sizes must be positive")
        if self.knn_k < 1 or not 1 <= self.sigma_rank <= self.knn_k:
            problems.append("need knn_k >= 1 and 1 <= sigma_rank <= knn_k")
        if not 0 < self.template_fraction < 1:
            problems.append("template_fraction must lie in (0, 1)")
        if not self.hidden or any(width < 1 for width in self.hidden) or self.buffer_width < 1:
            problems.append("hidden and buffer widths must be positive")
        if problems:
            raise ConfigError("invalid training config: " + "; ".join(problems))

    @classmethod
    def coerce(cls, values: Mapping[str, Any]) -> Dict[str, Any]:
        """Cast raw (usually string) values to field types; unknown keys are an error."""
        types = {f.name: f.type for f in fields(cls)}
        out = {}
        for key, value in values.items():
            if key not in types:
                raise ConfigError(f"unknown training config key '{key}'")
            kind = types[key]
            try:
                if kind in (bool, "bool"):
                    out[key] = parse_bool(value)
                elif key == "hidden":
                    out[key] = parse_widths(value)
                elif kind in (int, "int"):
                    out[key] = int(value)
                else:
                    out[key] = float(value)
            except ValueError:
                raise ConfigError(f"bad value '{value}' for '{key}'") from None
        return out

    @classmethod
    def from_settings(cls, **overrides) -> "TrainConfig":
        """Defaults from settings.WNLL_TRAIN with `overrides` on top."""
        merged = dict(getattr(settings, "WNLL_TRAIN", {}))
        merged.update(overrides)
        return cls(**cls.coerce(merged))

    def with_overrides(self, **overrides) -> "TrainConfig":
        return replace(self, **self.coerce(overrides))

    def validate_for(self, n_classes: int) -> None:
        if self.batch_wnll < n_classes:
            raise ConfigError(f"batch_wnll={self.batch_wnll} cannot hold one point of each of {n_classes} classes")

    def layer_spec(self, input_dim: int, n_classes: int) -> Tuple[int, ...]:
        return (int(input_dim), *self.hidden, self.buffer_width, int(n_classes))

    def lr_at(self, epoch: int, pass_index: int) -> float:
        """Linear-stage rate: base, scaled per pass, halved every `lr_half_every` epochs."""
        return self.lr * self.second_pass_lr_factor ** pass_index * 0.5 ** (epoch // self.lr_half_every)

    def wnll_lr_at(self, pass_index: int) -> float:
        return self.wnll_lr * self.second_pass_lr_factor ** pass_index

    def as_strings(self) -> Dict[str, str]:
        out = {}
        for key, value in asdict(self).items():
            if isinstance(value, bool):
                out[key] = "on" if value else "off"
            elif key == "hidden":
                out[key] = ",".join(str(width) for width in value)
            else:
                out[key] = repr(value) if isinstance(value, float) else str(value)
        return out
