"""Frozen DinoV2/CLIP embedding extraction for the irispad toolkit."""

__version__ = "0.1.0"

from .augment import AugmentConfig, augment, draw_params, sample_seed
from .backbones import REGISTRY, Backbone, BackboneSpec, get_spec, load_backbone
from .extract import ExtractConfig, run_extraction
from .preprocess import load_image, preprocess, to_three_channels

__all__ = [
    "AugmentConfig",
    "Backbone",
    "BackboneSpec",
    "ExtractConfig",
    "REGISTRY",
    "augment",
    "draw_params",
    "get_spec",
    "load_backbone",
    "load_image",
    "preprocess",
    "run_extraction",
    "sample_seed",
    "to_three_channels",
]
