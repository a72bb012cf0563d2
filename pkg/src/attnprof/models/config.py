"""Architecture configurations for the seven encoder archetypes.

Each family pairs a modality with an attention pattern.  Two dimension
presets exist per family: ``paper-dims`` (Base scale, used for exact
parameter accounting) and ``desk-dims`` (small, used for fast sweeps).
Configs serialize to a human-editable ``key = value`` text format;
canonical files for all archetypes ship under ``attnprof/configs``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from ..errors import ConfigError


class Family(enum.Enum):
    TEXT_FULL = "text-full"
    TEXT_SLIDING_WINDOW = "text-sliding-window"
    TEXT_NYSTROM = "text-nystrom"
    SPEECH_FULL = "speech-full"
    SPEECH_SLIDING_WINDOW = "speech-sliding-window"
    VISION_FULL = "vision-full"
    VISION_SHIFTED_WINDOW = "vision-shifted-window"

    def __str__(self) -> str:
        return self.value


FAMILIES = tuple(Family)
PRESETS = ("paper-dims", "desk-dims")

#: (out_channels, kernel, stride) per featurizer conv; total stride 320
#: gives the nominal 20 ms frame at 16 kHz.
SPEECH_CONV_GEOMETRY = ((10, 5), (3, 2), (3, 2), (3, 2), (3, 2), (2, 2), (2, 2))

SAMPLE_RATE_HZ = 16000


@dataclass(frozen=True)
class ModelConfig:
    family: Family
    preset: str
    d_model: int
    n_layers: int
    n_heads: int
    d_ff: int = 0  # 0 -> 4 * d_model
    vocab_size: int = 0
    type_vocab_size: int = 0
    max_positions: int = 0
    attention_window: int = 0  # total context width; window/2 per side
    n_landmarks: int = 0
    pinv_iterations: int = 0
    patch_size: int = 0
    swin_depths: tuple[int, ...] = ()
    swin_heads: tuple[int, ...] = ()
    swin_window: int = 0
    pad_multiple: int | None = None
    featurizer_channels: int = 0
    featurizer_geometry: tuple[tuple[int, int], ...] = ()
    pos_conv_kernel: int = 0
    pos_conv_groups: int = 0
    framerate_hz: int = 0

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}")
        if not self.is_hierarchical and self.d_model % max(self.n_heads, 1):
            raise ConfigError("d_model must be divisible by n_heads")
        if self.attention_window:
            if self.attention_window % 2 or self.attention_window < 2:
                raise ConfigError("attention window must be even and >= 2")
        if self.is_hierarchical and len(self.swin_depths) != len(self.swin_heads):
            raise ConfigError("stage depth and head lists must align")

    @property
    def modality(self) -> str:
        name = self.family.value
        return name.split("-", 1)[0]

    @property
    def is_hierarchical(self) -> bool:
        return self.family is Family.VISION_SHIFTED_WINDOW

    @property
    def has_dual_projections(self) -> bool:
        """Sliding-window text keeps separate local and global Q,K,V sets."""
        return self.family is Family.TEXT_SLIDING_WINDOW

    @property
    def has_pooler(self) -> bool:
        return self.family in (
            Family.TEXT_FULL,
            Family.TEXT_SLIDING_WINDOW,
            Family.TEXT_NYSTROM,
            Family.VISION_FULL,
        )

    @property
    def ff_dim(self) -> int:
        return self.d_ff or 4 * self.d_model

    @property
    def name(self) -> str:
        return self.family.value

    def stage_dims(self) -> tuple[int, ...]:
        """Channel width per hierarchical stage (doubles at each merge)."""
        return tuple(self.d_model * (2 ** s) for s in range(len(self.swin_depths)))

    def total_blocks(self) -> int:
        if self.is_hierarchical:
            return sum(self.swin_depths)
        return self.n_layers


def pad_input(size: int, pad_multiple: int | None) -> int:
    """Smallest multiple of pad_multiple that is >= size (identity if None)."""
    if not pad_multiple:
        return size
    if pad_multiple < 1:
        raise ConfigError("pad_multiple must be >= 1")
    return -(-size // pad_multiple) * pad_multiple


def _text(family, preset, d, layers, heads, ff, vocab, types, pos, **kw):
    return ModelConfig(
        family=family, preset=preset, d_model=d, n_layers=layers,
        n_heads=heads, d_ff=ff, vocab_size=vocab, type_vocab_size=types,
        max_positions=pos, **kw,
    )


def _speech(family, preset, d, layers, heads, ff, channels, window=0):
    return ModelConfig(
        family=family, preset=preset, d_model=d, n_layers=layers,
        n_heads=heads, d_ff=ff, attention_window=window,
        featurizer_channels=channels,
        featurizer_geometry=SPEECH_CONV_GEOMETRY,
        pos_conv_kernel=128, pos_conv_groups=16, framerate_hz=50,
    )


def _build_preset(family: Family, preset: str) -> ModelConfig:
    paper = preset == "paper-dims"
    d, layers, heads = (768, 12, 12) if paper else (256, 4, 4)
    ff = 4 * d
    if family is Family.TEXT_FULL:
        return _text(family, preset, d, layers, heads, ff,
                     30522 if paper else 8192, 2, 512)
    if family is Family.TEXT_SLIDING_WINDOW:
        return _text(family, preset, d, layers, heads, ff,
                     50265 if paper else 8192, 1, 4098,
                     attention_window=512, pad_multiple=512)
    if family is Family.TEXT_NYSTROM:
        return _text(family, preset, d, layers, heads, ff,
                     30000 if paper else 8192, 2, 4098,
                     n_landmarks=64, pinv_iterations=6)
    if family is Family.SPEECH_FULL:
        return _speech(family, preset, d, layers, heads, ff,
                       512 if paper else 128)
    if family is Family.SPEECH_SLIDING_WINDOW:
        return _speech(family, preset, d, layers, heads, ff,
                       512 if paper else 128, window=100)
    if family is Family.VISION_FULL:
        return _text(family, preset, d, layers, heads, ff, 0, 0, 197,
                     patch_size=16)
    if family is Family.VISION_SHIFTED_WINDOW:
        if paper:
            return ModelConfig(
                family=family, preset=preset, d_model=96, n_layers=0,
                n_heads=0, swin_depths=(2, 2, 6, 2), swin_heads=(3, 6, 12, 24),
                swin_window=7, patch_size=4, pad_multiple=224,
            )
        return ModelConfig(
            family=family, preset=preset, d_model=32, n_layers=0, n_heads=0,
            swin_depths=(1, 1, 1, 1), swin_heads=(1, 2, 4, 8),
            swin_window=7, patch_size=4, pad_multiple=224,
        )
    raise ConfigError(f"unknown family {family}")


def config_for(family: Family | str, preset: str = "paper-dims") -> ModelConfig:
    if isinstance(family, str):
        try:
            family = Family(family)
        except ValueError:
            names = ", ".join(f.value for f in FAMILIES)
            raise ConfigError(
                f"unknown model {family!r}; choose one of: {names}"
            ) from None
    return _build_preset(family, preset)


def all_configs(preset: str = "paper-dims") -> list[ModelConfig]:
    return [config_for(f, preset) for f in FAMILIES]


# --- key/value text serialization -----------------------------------------

_INT_FIELDS = (
    "d_model", "n_layers", "n_heads", "d_ff", "vocab_size", "type_vocab_size",
    "max_positions", "attention_window", "n_landmarks", "pinv_iterations",
    "patch_size", "swin_window", "featurizer_channels", "pos_conv_kernel",
    "pos_conv_groups", "framerate_hz",
)


def to_kv_text(cfg: ModelConfig) -> str:
    lines = [f"family = {cfg.family.value}", f"preset = {cfg.preset}"]
    for name in _INT_FIELDS:
        v = getattr(cfg, name)
        if v:
            lines.append(f"{name} = {v}")
    if cfg.pad_multiple:
        lines.append(f"pad_multiple = {cfg.pad_multiple}")
    if cfg.swin_depths:
        lines.append("swin_depths = " + ",".join(map(str, cfg.swin_depths)))
        lines.append("swin_heads = " + ",".join(map(str, cfg.swin_heads)))
    if cfg.featurizer_geometry:
        lines.append(
            "featurizer_geometry = "
            + ",".join(f"{k}:{s}" for k, s in cfg.featurizer_geometry)
        )
    return "\n".join(lines) + "\n"


def from_kv_text(text: str) -> ModelConfig:
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        k, v = (part.strip() for part in line.split("=", 1))
        kv[k] = v
    try:
        family = Family(kv.pop("family"))
    except (KeyError, ValueError) as e:
        raise ConfigError(f"missing or invalid family: {e}") from None
    args: dict = {"family": family, "preset": kv.pop("preset", "paper-dims")}
    for name in _INT_FIELDS:
        if name in kv:
            args[name] = int(kv.pop(name))
    if "pad_multiple" in kv:
        args["pad_multiple"] = int(kv.pop("pad_multiple"))
    if "swin_depths" in kv:
        args["swin_depths"] = tuple(int(x) for x in kv.pop("swin_depths").split(","))
        args["swin_heads"] = tuple(int(x) for x in kv.pop("swin_heads").split(","))
    if "featurizer_geometry" in kv:
        args["featurizer_geometry"] = tuple(
            tuple(int(p) for p in item.split(":"))
            for item in kv.pop("featurizer_geometry").split(",")
        )
    if kv:
        raise ConfigError(f"unknown config keys: {sorted(kv)}")
    for name in ("d_model", "n_layers", "n_heads"):
        args.setdefault(name, 0)
    return ModelConfig(**args)


def without_padding(cfg: ModelConfig) -> ModelConfig:
    return replace(cfg, pad_multiple=None)
