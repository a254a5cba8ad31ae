"""Glomerular TEM morphometry: GBM thickness, foot-process effacement and
electron-dense deposit quantification over segmentation/classification/
detection model outputs."""

from glomorph._core import (
    __version__,
    bland_altman,
    default_config,
    extract_centerline,
    generate_phantom,
    ks_two_sample,
    pearson,
    process_case,
    roc_auc,
    skeletonize,
    to_physical_area,
)

__all__ = [
    "__version__",
    "bland_altman",
    "default_config",
    "extract_centerline",
    "generate_phantom",
    "ks_two_sample",
    "pearson",
    "process_case",
    "roc_auc",
    "skeletonize",
    "to_physical_area",
]
