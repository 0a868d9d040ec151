"""Thickness, pattern search and potential games on Cantor sets of the line."""

from .sets import AffineMap, IntervalUnion, MonotoneSmooth, SetDescriptor, refine
from .thickness import ThicknessValue, thickness, thickness_chunk
from .bounds import ap_capacity, bilip_capacity, hausdorff_lower
from .patterns import Certificate, ap_search, gap_lemma_check, longest_ap, translate_search
from .game import GameParams, GameTranscript, alice_cantor_strategy, play
from .appendix import ConstructionParams, build_fractal, dimension_estimate

__all__ = [
    "AffineMap", "IntervalUnion", "MonotoneSmooth", "SetDescriptor", "refine",
    "ThicknessValue", "thickness", "thickness_chunk",
    "ap_capacity", "bilip_capacity", "hausdorff_lower",
    "Certificate", "ap_search", "gap_lemma_check", "longest_ap", "translate_search",
    "GameParams", "GameTranscript", "alice_cantor_strategy", "play",
    "ConstructionParams", "build_fractal", "dimension_estimate",
]
