"""Synthetic plate rendering: brushed texture, ring illumination, water
stains, and pixel-precise annotation masks.

The stain model perturbs a disk of radius r by scaled gradient noise and
darkens reflectance towards the rim with a power-law falloff:

    r' = r + noise(p, f) * A
    inside iff d <= r', where d is the distance to the nearest stain center
    R_o = R_i + (d / r')**gamma * alpha

Stain centers come from jittered grid sampling (one per cell of size G),
or a single explicit center for unit-scale work. The constraint
r + A <= G guarantees a stain never outgrows one cell, which keeps the
3x3 nearest-center search exact.
"""

import dataclasses
import json
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.ndimage as ndi

from . import imgio
from .classes import WATER_STAIN
from .errors import ConfigError, IoError
from .hashing import derive_seed, hash_unit, stable_digest
from .noise import GridSampling, nearest_center_many, perlin

_SALT_TEXTURE = 0x7E
_SALT_STAIN = 0x57
_SALT_VARIANT = 0xD7


@dataclass(frozen=True)
class StainField:
    """Water-stain process parameters (all lengths in texture units)."""

    radius: float
    frequency: float
    amplitude: float
    gamma: float
    alpha: float
    cell_size: float
    seed: int = 0
    center: tuple | None = None  # explicit single stain; bypasses the grid

    def __post_init__(self):
        if self.radius <= 0:
            raise ConfigError(f"stain radius must be > 0, got {self.radius}")
        if self.amplitude < 0:
            raise ConfigError(f"stain amplitude must be >= 0, got {self.amplitude}")
        if self.gamma <= 0:
            raise ConfigError(f"stain gamma must be > 0, got {self.gamma}")
        if self.frequency <= 0:
            raise ConfigError(f"stain frequency must be > 0, got {self.frequency}")
        if self.center is None and self.radius + self.amplitude > self.cell_size:
            raise ConfigError(
                f"r + A = {self.radius + self.amplitude} exceeds cell size "
                f"{self.cell_size}; a stain may not outgrow one grid cell"
            )


def stain_field_many(px, py, r_in, fld: StainField, region=None):
    """Vectorized stain evaluation over point arrays.

    Returns (r_out, inside). Points farther than the perturbed radius from
    every stain center keep their input reflectance.
    """
    px = np.asarray(px, dtype=np.float64)
    py = np.asarray(py, dtype=np.float64)
    r_in = np.asarray(r_in, dtype=np.float64)

    if fld.center is not None:
        cx, cy = fld.center
        d = np.hypot(px - cx, py - cy)
    else:
        if region is None:
            raise ConfigError("grid-mode stain field needs a sampling region")
        sampling = GridSampling(cell_size=fld.cell_size, region=region, seed=fld.seed)
        _, _, d = nearest_center_many(
            px, py, sampling, search_radius=fld.radius + fld.amplitude
        )

    r_perturbed = fld.radius + perlin(px, py, fld.frequency, fld.seed) * fld.amplitude
    inside = (d <= r_perturbed) & (r_perturbed > 0)
    d_hat = np.where(inside, d / np.where(inside, r_perturbed, 1.0), 0.0)
    r_out = np.where(inside, r_in + d_hat**fld.gamma * fld.alpha, r_in)
    return r_out, inside


def stain_reflectance(p, r_in, fld: StainField, region=None):
    """Single-point stain evaluation. Returns (R_o, inside)."""
    r_out, inside = stain_field_many(
        np.atleast_1d(p[0]), np.atleast_1d(p[1]), np.atleast_1d(r_in), fld, region
    )
    return float(r_out[0]), bool(inside[0])


@dataclass(frozen=True)
class TextureParams:
    """Brushed-metal base texture: anisotropic noise streaks."""

    direction_deg: float = 0.0
    streak_frequency: float = 6.0  # cycles per texture unit across the streaks
    contrast: float = 0.15
    base_level: float = 0.55
    elongation: float = 12.0  # how much longer streaks are than they are wide


@dataclass(frozen=True)
class LightParams:
    """Ring-light illumination profile with optional hexagonal outline."""

    pattern: str = "hex_ring"  # uniform | ring | hex_ring
    rotation_deg: float = 0.0
    scale: float = 1.0
    intensity: float = 1.35
    clamp: float = 1.0  # saturation ceiling; products above it overexpose
    ring_radius: float = 0.55
    ring_width: float = 0.4
    floor_level: float = 0.62

    def __post_init__(self):
        if self.pattern not in ("uniform", "ring", "hex_ring"):
            raise ConfigError(f"unknown light pattern {self.pattern!r}")
        if not (0.0 < self.clamp <= 1.0):
            raise ConfigError(f"clamp must be in (0, 1], got {self.clamp}")


@dataclass(frozen=True)
class PlateSpec:
    width: int = 256
    height: int = 256
    texel_scale: float = 1.0 / 64.0  # texture units per pixel
    texture: TextureParams = field(default_factory=TextureParams)
    light: LightParams = field(default_factory=LightParams)
    stains: StainField | None = None
    border_margin: int = 0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ConfigError("plate dimensions must be positive")
        if self.texel_scale <= 0:
            raise ConfigError("texel_scale must be > 0")
        if self.border_margin < 0 or 2 * self.border_margin >= min(self.width, self.height):
            raise ConfigError(f"border_margin {self.border_margin} leaves no interior")

    def region(self):
        """Plate extent in texture units, half-open."""
        return (0.0, 0.0, self.width * self.texel_scale, self.height * self.texel_scale)


def spec_hash(spec: PlateSpec, render_seed: int) -> str:
    """Digest of everything but the stain block, so clean/stained twins
    rendered from one seed share the hash."""
    d = dataclasses.asdict(spec)
    d.pop("stains")
    d["render_seed"] = render_seed
    return stable_digest(d)


def brushed_texture(px, py, params: TextureParams, seed):
    """Directional streaky reflectance field, deterministic per seed."""
    th = np.deg2rad(params.direction_deg)
    u = px * np.cos(th) + py * np.sin(th)  # along the brushing direction
    v = -px * np.sin(th) + py * np.cos(th)
    f_across = params.streak_frequency
    f_along = f_across / params.elongation
    n1 = perlin(u * f_along, v * f_across, 1.0, derive_seed(seed, _SALT_TEXTURE, 0))
    n2 = perlin(u * f_along * 2.7, v * f_across * 2.3, 1.0, derive_seed(seed, _SALT_TEXTURE, 1))
    return params.base_level + params.contrast * (0.75 * n1 + 0.25 * n2)


def illumination(height, width, params: LightParams):
    """Per-pixel light multiplier on the image grid."""
    if params.pattern == "uniform":
        return np.full((height, width), params.intensity)
    ys = (np.arange(height) + 0.5 - height / 2.0) / (min(height, width) / 2.0)
    xs = (np.arange(width) + 0.5 - width / 2.0) / (min(height, width) / 2.0)
    ny, nx = np.meshgrid(ys, xs, indexing="ij")
    rho = np.hypot(nx, ny) / params.scale
    if params.pattern == "hex_ring":
        phi = np.arctan2(ny, nx) - np.deg2rad(params.rotation_deg)
        # radius of a unit hexagon outline in direction phi
        hex_r = 1.0 / np.cos(np.mod(phi, np.pi / 3.0) - np.pi / 6.0)
        rho = rho / hex_r
    peak = 1.0 - params.floor_level
    profile = params.floor_level + peak * np.exp(
        -(((rho - params.ring_radius) / params.ring_width) ** 2)
    )
    return params.intensity * profile


def render_sample(spec: PlateSpec, seed):
    """Render one plate.

    Returns (image, class_mask): image is float64 in [0, 1] (quantized to
    8 bits only on disk), class_mask holds WATER_STAIN where the stain
    inside-test fires. The brushed texture follows the render seed; stain
    placement follows the stain field's own seed, so a clean render and a
    stained render from one seed agree everywhere outside the stains.
    """
    h, w = spec.height, spec.width
    cols, rows = np.meshgrid(np.arange(w), np.arange(h), indexing="xy")
    px = (cols + 0.5) * spec.texel_scale
    py = (rows + 0.5) * spec.texel_scale

    reflectance = brushed_texture(px, py, spec.texture, seed)
    inside = np.zeros((h, w), dtype=bool)
    if spec.stains is not None:
        reflectance, inside = stain_field_many(
            px, py, reflectance, spec.stains, region=spec.region()
        )

    img = np.clip(reflectance * illumination(h, w, spec.light), 0.0, spec.light.clamp)
    mask = np.where(inside, WATER_STAIN, 0).astype(np.uint8)

    m = spec.border_margin
    if m > 0:
        border = np.ones((h, w), dtype=bool)
        border[m : h - m, m : w - m] = False
        img[border] = 0.0
        mask[border] = 0
    return img, mask


def label_instances(class_mask):
    """Connected components of each nonzero class, 8-connected, labeled
    with unique 16-bit ids starting at 1 (0 = no instance)."""
    class_mask = np.asarray(class_mask)
    out = np.zeros(class_mask.shape, dtype=np.uint16)
    structure = np.ones((3, 3), dtype=bool)
    next_id = 1
    for cid in np.unique(class_mask):
        if cid == 0:
            continue
        labels, n = ndi.label(class_mask == cid, structure=structure)
        if next_id + n > 0xFFFF:
            raise ConfigError("more than 65535 instances in one mask")
        out[labels > 0] = labels[labels > 0] + (next_id - 1)
        next_id += n
    return out


@dataclass(frozen=True)
class VariationRanges:
    """Per-sample texture randomization bounds."""

    direction_deg: tuple = (-90.0, 90.0)
    streak_frequency: tuple = (4.0, 9.0)
    contrast: tuple = (0.08, 0.2)
    base_level: tuple = (0.5, 0.62)


@dataclass(frozen=True)
class DatasetConfig:
    count: int = 8
    width: int = 256
    height: int = 256
    texel_scale: float = 1.0 / 64.0
    seed: int = 0
    paired: bool = False  # emit clean/stained twins sharing texture params
    stains: bool = True
    domain_randomization: bool = False  # 3 light variants per sample
    splits: dict | None = None  # {"train": n1, "val": n2, ...} in sample order
    variation: VariationRanges = field(default_factory=VariationRanges)
    light: LightParams = field(default_factory=LightParams)
    stain: StainField = field(
        default_factory=lambda: StainField(
            radius=0.25, frequency=8.0, amplitude=0.12, gamma=1.5, alpha=-0.25, cell_size=1.0
        )
    )
    border_margin: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise ConfigError("dataset count must be >= 1")
        if self.splits is not None and sum(self.splits.values()) != self.count:
            raise ConfigError(
                f"split counts {self.splits} do not sum to count {self.count}"
            )


def _split_of(index, cfg: DatasetConfig):
    if cfg.splits is None:
        return "train"
    acc = 0
    for name, n in cfg.splits.items():
        acc += n
        if index < acc:
            return name
    return "train"


def _draw(lo_hi, *parts):
    lo, hi = lo_hi
    return lo + (hi - lo) * hash_unit(*parts)


def _sample_texture(sample_seed, var: VariationRanges):
    return TextureParams(
        direction_deg=_draw(var.direction_deg, sample_seed, 0),
        streak_frequency=_draw(var.streak_frequency, sample_seed, 1),
        contrast=_draw(var.contrast, sample_seed, 2),
        base_level=_draw(var.base_level, sample_seed, 3),
    )


def _light_variant(base: LightParams, variant):
    if variant == 1:
        return dataclasses.replace(base, rotation_deg=base.rotation_deg + 90.0)
    if variant == 2:
        return dataclasses.replace(base, scale=base.scale * 2.0)
    return base


def generate_dataset(cfg: DatasetConfig, out_dir):
    """Render a dataset tree and its manifest.

    Emits image, class mask and instance mask per sample. Paired mode
    writes clean/stained twins sharing all texture parameters; domain
    randomization re-renders each sample under three light sources (base,
    rotated 90 degrees, scaled x2) with fresh texture/stain realizations
    per variant. Rerunning with the same config reproduces every byte.
    """
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as e:
        raise IoError(f"cannot create {out_dir}: {e}") from e

    variants = (0, 1, 2) if cfg.domain_randomization else (0,)
    stain_modes = (False, True) if cfg.paired else (cfg.stains,)

    samples = []
    for i in range(cfg.count):
        split = _split_of(i, cfg)
        base_seed = derive_seed(cfg.seed, i)
        for v in variants:
            render_seed = base_seed if v == 0 else derive_seed(base_seed, _SALT_VARIANT, v)
            texture = _sample_texture(render_seed, cfg.variation)
            light = _light_variant(cfg.light, v)
            for stained in stain_modes:
                stains = None
                if stained:
                    stains = dataclasses.replace(
                        cfg.stain, seed=derive_seed(render_seed, _SALT_STAIN), center=None
                    )
                spec = PlateSpec(
                    width=cfg.width,
                    height=cfg.height,
                    texel_scale=cfg.texel_scale,
                    texture=texture,
                    light=light,
                    stains=stains,
                    border_margin=cfg.border_margin,
                )
                img, cmask = render_sample(spec, render_seed)
                imask = label_instances(cmask)

                sid = f"s{i:04d}"
                if cfg.domain_randomization:
                    sid += f"_l{v}"
                if stained:
                    sid += "_ws"
                rel_img = f"images/{sid}.png"
                rel_cm = f"masks_class/{sid}.png"
                rel_im = f"masks_instance/{sid}.png"
                imgio.save_image(os.path.join(out_dir, rel_img), img)
                imgio.save_class_mask(os.path.join(out_dir, rel_cm), cmask)
                imgio.save_instance_mask(os.path.join(out_dir, rel_im), imask)
                samples.append(
                    {
                        "id": sid,
                        "split": split,
                        "image_path": rel_img,
                        "class_mask_path": rel_cm,
                        "instance_mask_path": rel_im,
                        "light_variant": v,
                        "has_stains": bool(stained),
                        "spec_hash": spec_hash(spec, render_seed),
                    }
                )

    manifest = {"version": 1, "seed": cfg.seed, "samples": samples}
    path = os.path.join(out_dir, "manifest.json")
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e
    return manifest


def load_manifest(dataset_dir):
    path = os.path.join(dataset_dir, "manifest.json")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as e:
        raise IoError(f"no manifest at {path}") from e
    except json.JSONDecodeError as e:
        raise IoError(f"unreadable manifest {path}: {e}") from e
