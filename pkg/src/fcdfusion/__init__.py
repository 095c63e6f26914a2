"""Visible/infrared image fusion toolkit.

A fast per-pixel fusion kernel that scales the visible color vector by a
single infrared-driven factor (preserving chromaticity), three classic
averaging baselines (RGB, YIQ luma, HSV value), a quality-metric suite built
around a color-deviation angle, an analytical FLOP cost model with an
instrumented audit, and a batch CLI for dataset-scale fusion and evaluation.
"""

from .baselines import (
    FcdFusion,
    FusionMethod,
    HsvAvg,
    METHOD_TOKENS,
    RgbAvg,
    YiqAvg,
    fuse_hsv_avg,
    fuse_image_with,
    fuse_rgb_avg,
    fuse_yiq_avg,
    method_name,
    parse_method,
    parse_methods,
)
from .colorspace import (
    HsvColor,
    YiqColor,
    hsv_to_rgb,
    rgb_to_hsv,
    rgb_to_yiq,
    yiq_to_rgb,
)
from .core import (
    ColorVec3,
    DimensionMismatchError,
    Gray8Pixel,
    ImageBuffer,
    ImagePair,
    ImageTooSmallError,
    Rgb8Pixel,
    make_pair,
    to_gray,
    vec_of,
)
from .flops import (
    FlopCount,
    FlopStages,
    UnsupportedMethodError,
    measured_flop_audit,
    per_pixel_flops,
    total_flops,
)
from .kernel import (
    FcdParams,
    fuse_image,
    fuse_pixel,
    max_component,
    scale_factor,
    scaling_ratio,
)
from .metrics import (
    METRIC_DIRECTIONS,
    METRIC_NAMES,
    MetricReport,
    average_gradient,
    color_deviation,
    cross_entropy,
    edge_intensity,
    entropy,
    evaluate_all,
    mutual_information,
    psnr,
    rmse,
    spatial_frequency,
    ssim,
    std_deviation,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "Rgb8Pixel",
    "Gray8Pixel",
    "ColorVec3",
    "ImageBuffer",
    "ImagePair",
    "DimensionMismatchError",
    "ImageTooSmallError",
    "make_pair",
    "to_gray",
    "vec_of",
    # kernel
    "FcdParams",
    "scaling_ratio",
    "max_component",
    "scale_factor",
    "fuse_pixel",
    "fuse_image",
    # colorspace
    "YiqColor",
    "HsvColor",
    "rgb_to_yiq",
    "yiq_to_rgb",
    "rgb_to_hsv",
    "hsv_to_rgb",
    # baselines and dispatch
    "FcdFusion",
    "RgbAvg",
    "YiqAvg",
    "HsvAvg",
    "FusionMethod",
    "METHOD_TOKENS",
    "method_name",
    "parse_method",
    "parse_methods",
    "fuse_rgb_avg",
    "fuse_yiq_avg",
    "fuse_hsv_avg",
    "fuse_image_with",
    # metrics
    "METRIC_NAMES",
    "METRIC_DIRECTIONS",
    "MetricReport",
    "color_deviation",
    "cross_entropy",
    "entropy",
    "mutual_information",
    "average_gradient",
    "edge_intensity",
    "std_deviation",
    "spatial_frequency",
    "psnr",
    "ssim",
    "rmse",
    "evaluate_all",
    # cost model
    "FlopStages",
    "FlopCount",
    "UnsupportedMethodError",
    "per_pixel_flops",
    "total_flops",
    "measured_flop_audit",
]
