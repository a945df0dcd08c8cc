"""
Artifact output with provenance.

Every command output is written atomically together with a
``<output>.manifest.json`` holding the configuration, the input digests, the
seed and the package version.
"""

from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

from nowcast_core.__version__ import __version__
from nowcast_core.evaluation.metrics import evaluate_trace
from nowcast_core.models.results import EstimationTrace, RunManifest
from nowcast_core.utils.atomic import atomic_write_text, file_digest
from nowcast_core.utils.logging import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]

MANIFEST_SUFFIX = ".manifest.json"


def manifest_path(output: PathLike) -> Path:
    """
    Manifest location for an output file.

    Example:
        >>> manifest_path("trace.csv")
        PosixPath('trace.csv.manifest.json')
    """
    out = Path(output)
    return out.with_name(out.name + MANIFEST_SUFFIX)


def build_manifest(
    command: str,
    inputs: Iterable[PathLike] = (),
    config: Optional[Dict[str, Any]] = None,
    seed: Optional[int] = None,
    summary: Optional[Dict[str, Any]] = None,
) -> RunManifest:
    """Manifest for a command; input files are recorded by SHA-256 digest."""
    return RunManifest(
        command=command,
        version=__version__,
        seed=seed,
        config=config or {},
        inputs={str(p): file_digest(p) for p in inputs},
        summary=summary or {},
    )


def write_artifact(path: PathLike, text: str, manifest: RunManifest) -> Path:
    """
    Write ``text`` and its manifest atomically.

    The manifest lists the output path; an existing ``outputs`` list is
    extended so one manifest can describe several files.

    Returns:
        The manifest path
    """
    target = atomic_write_text(path, text)
    outputs = list(dict.fromkeys([*manifest.outputs, str(target)]))
    record = manifest.model_copy(update={"outputs": outputs})
    written = atomic_write_text(manifest_path(target), record.to_json())
    logger.info("artifact_written", path=str(target), manifest=str(written))
    return written


def trace_summary(trace: EstimationTrace) -> Dict[str, Any]:
    """Scores recorded in a run manifest (empty traces score as null)."""
    if not trace.steps:
        return {"rmse": None, "mae": None, "n_predictions": 0, "first_step": None}
    scores = evaluate_trace(trace)
    return {
        "rmse": scores["rmse"],
        "mae": scores["mae"],
        "n_predictions": len(trace),
        "first_step": trace.first_step,
    }
