"""
Model documents for the TRK toolkit.
Serializes a FittedModel to self-describing JSON and restores it exactly.
"""

import json
import logging
from typing import Any, Dict

import numpy as np

import config
from .errors import InvalidArgumentError, ModelFormatError, ModelVersionError
from .kriging import AffineTransform, FittedModel, RegressionBasis, Theta, _frozen

logger = logging.getLogger(__name__)

_MATRICES = ("corr_factor", "regression_factor", "whitened_design", "inputs")
_VECTORS = ("beta", "gamma_star", "outputs")


def _matrix(values: Any, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 2:
        raise ModelFormatError(f"'{name}' must be a row-major matrix")
    return _frozen(array)


def _vector(values: Any, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 1:
        raise ModelFormatError(f"'{name}' must be a vector")
    return _frozen(array)


def model_to_dict(model: FittedModel) -> Dict[str, Any]:
    """Plain-data view of a model; matrices are nested row-major lists."""
    return {
        "format": config.MODEL_FORMAT,
        "version": config.MODEL_FORMAT_VERSION,
        "basis": {"kind": model.basis.kind, "dimension": model.basis.dimension},
        "theta": {
            "values": model.theta.values.tolist(),
            "lower": model.theta.lower,
            "upper": model.theta.upper,
        },
        "sigma2": model.sigma2,
        "nugget": model.nugget,
        "input_transform": {
            "shift": model.input_transform.shift.tolist(),
            "scale": model.input_transform.scale.tolist(),
        },
        "output_transform": {
            "shift": model.output_transform.shift.tolist(),
            "scale": model.output_transform.scale.tolist(),
        },
        **{name: getattr(model, name).tolist() for name in _VECTORS + _MATRICES},
    }


def save_model(model: FittedModel) -> str:
    """
    Serialize a fitted model.

    Floats are written with their shortest round-trip representation, so a
    loaded model predicts bit-for-bit like the original.

    Returns:
        str: JSON document
    """
    return json.dumps(model_to_dict(model), indent=1)


def load_model(document: str) -> FittedModel:
    """
    Restore a model written by save_model.

    Raises:
        ModelFormatError: If the document is truncated, malformed or inconsistent
        ModelVersionError: If the document has another format version
    """
    try:
        payload = json.loads(document)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"Model document is not valid JSON: {e}") from None
    if not isinstance(payload, dict) or payload.get("format") != config.MODEL_FORMAT:
        raise ModelFormatError(f"Not a {config.MODEL_FORMAT} document")
    if payload.get("version") != config.MODEL_FORMAT_VERSION:
        raise ModelVersionError(
            f"Model document version {payload.get('version')!r} is not supported "
            f"(expected {config.MODEL_FORMAT_VERSION})"
        )

    try:
        basis = RegressionBasis(payload["basis"]["kind"], int(payload["basis"]["dimension"]))
        theta_doc = payload["theta"]
        theta = Theta(np.asarray(theta_doc["values"], dtype=float), float(theta_doc["lower"]), float(theta_doc["upper"]))
        arrays = {name: _vector(payload[name], name) for name in _VECTORS}
        arrays.update({name: _matrix(payload[name], name) for name in _MATRICES})
        transforms = {
            name: AffineTransform(
                shift=_vector(payload[name]["shift"], f"{name}.shift"),
                scale=_vector(payload[name]["scale"], f"{name}.scale"),
            )
            for name in ("input_transform", "output_transform")
        }
        model = FittedModel(
            theta=theta,
            sigma2=float(payload["sigma2"]),
            basis=basis,
            nugget=float(payload["nugget"]),
            **arrays,
            **transforms,
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ModelFormatError):
            raise
        detail = "invalid value" if isinstance(e, InvalidArgumentError) else "missing or malformed field"
        raise ModelFormatError(f"Model document has a {detail}: {e}") from None

    _check_shapes(model)
    logger.debug(f"Loaded model: n={model.n}, D={model.dimension}, basis={basis.kind}")
    return model


def _check_shapes(model: FittedModel) -> None:
    n, dimension, p = model.n, model.dimension, model.basis.p
    expected = {
        "corr_factor": (n, n),
        "whitened_design": (n, p),
        "regression_factor": (p, p),
        "beta": (p,),
        "gamma_star": (n,),
        "outputs": (n,),
    }
    for name, shape in expected.items():
        if getattr(model, name).shape != shape:
            raise ModelFormatError(f"'{name}' has shape {getattr(model, name).shape}, expected {shape}")
    if model.theta.dimension != dimension or model.basis.dimension != dimension:
        raise ModelFormatError("theta, basis and inputs disagree on the dimension")
    for transform, width in ((model.input_transform, dimension), (model.output_transform, 1)):
        if transform.shift.shape != (width,) or transform.scale.shape != (width,):
            raise ModelFormatError("normalization records do not match the model dimension")
        if np.any(transform.scale <= 0):
            raise ModelFormatError("normalization scales must be positive")
    if model.sigma2 <= 0:
        raise ModelFormatError("sigma2 must be positive")
