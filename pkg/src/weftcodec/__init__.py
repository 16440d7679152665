"""weftcodec: synthetic woven-fabric rendering and weave-pattern decoding.

Encode a binary weave pattern as a fabric image with exact crossing
ground truth, and decode fabric images back to their pattern through a
classical image-analysis pipeline or an externally supplied likelihood
map.  Includes evaluation metrics, dataset generation, a CLI, and an
HTTP annotation service.
"""

from .errors import (
    AxisEstimationError,
    CollisionError,
    ContractViolationError,
    DecodeStageError,
    DegenerateColorsError,
    EmptyObjectError,
    InvalidInputError,
    InvalidStateError,
    LayoutError,
    StaleRevisionError,
    WeftError,
)
from .geometry import CrossPointSet, YarnGrid
from .imgproc import ccl, distance_transform, log_filter, morph_open
from .formats import (
    read_annotation,
    read_manifest,
    read_pbm,
    read_png_gray,
    write_annotation,
    write_manifest,
    write_pbm,
    write_png_gray,
)
from .weavesim import (
    GroundTruth,
    RenderParams,
    augment_sample,
    gen_dataset,
    random_pattern,
    render,
)
from .pipeline_pre import (
    RepColors,
    estimate_rep_colors,
    estimate_yarn_axes,
    initial_crossings,
    preprocess,
)
from .midrep import (
    MidRepKind,
    build_box,
    build_gaussian,
    build_impulse,
    classical_likelihood,
    load_likelihood,
)
from .postproc import (
    DecodeConfig,
    assign_grid,
    decode,
    extract_representatives,
    merge_regions,
    reestimate_axes,
    trivalue,
)
from .metrics import (
    MatchReport,
    PatternReport,
    kfold_split,
    match_points,
    pattern_metrics,
    roc_curve,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "WeftError",
    "InvalidInputError",
    "LayoutError",
    "EmptyObjectError",
    "CollisionError",
    "AxisEstimationError",
    "DegenerateColorsError",
    "ContractViolationError",
    "StaleRevisionError",
    "InvalidStateError",
    "DecodeStageError",
    # geometry
    "CrossPointSet",
    "YarnGrid",
    # imgproc
    "morph_open",
    "log_filter",
    "distance_transform",
    "ccl",
    # formats
    "read_png_gray",
    "write_png_gray",
    "read_pbm",
    "write_pbm",
    "read_annotation",
    "write_annotation",
    "read_manifest",
    "write_manifest",
    # weavesim
    "RenderParams",
    "GroundTruth",
    "random_pattern",
    "render",
    "augment_sample",
    "gen_dataset",
    # pipeline front
    "RepColors",
    "preprocess",
    "estimate_yarn_axes",
    "estimate_rep_colors",
    "initial_crossings",
    # mid-level representations
    "MidRepKind",
    "build_impulse",
    "build_gaussian",
    "build_box",
    "classical_likelihood",
    "load_likelihood",
    # decode back end
    "DecodeConfig",
    "trivalue",
    "merge_regions",
    "extract_representatives",
    "reestimate_axes",
    "assign_grid",
    "decode",
    # metrics
    "MatchReport",
    "PatternReport",
    "match_points",
    "roc_curve",
    "pattern_metrics",
    "kfold_split",
]
