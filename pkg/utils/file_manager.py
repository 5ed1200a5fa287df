"""
File management utilities for the TRK toolkit.
Handles dataset, design and model files and the output directory layout.
"""

import logging
import os
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

import config
from .errors import InvalidArgumentError
from .kriging import Dataset, FittedModel
from .persistence import load_model, save_model

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class FileManager:
    """Reads and writes the CSV and JSON files used by the CLI."""

    def __init__(self, output_dir: Path = config.OUTPUT_DIR):
        """Initialize file manager with the default output directory."""
        self.output_dir = Path(output_dir)

    def ensure_dir(self, directory: Optional[PathLike] = None) -> Path:
        """
        Create a directory (and parents) if missing.

        Args:
            directory: Target directory; the configured output directory if omitted

        Returns:
            Path: The directory path
        """
        path = Path(directory) if directory is not None else self.output_dir
        path.mkdir(parents=True, exist_ok=True)
        return path

    def read_dataset(self, path: PathLike) -> Dataset:
        """
        Load a training dataset from CSV.

        The file has a header row; the column named `y` (or the last column)
        holds the responses and every other column is an input.

        Raises:
            InvalidArgumentError: If the file has fewer than two columns or non-numeric cells
            OSError: If the file cannot be read
        """
        frame = pd.read_csv(path)
        if frame.shape[1] < 2:
            raise InvalidArgumentError(f"{path}: need at least one input column and a response column")
        response_column = "y" if "y" in frame.columns else frame.columns[-1]
        inputs = frame.drop(columns=[response_column])
        try:
            points = inputs.to_numpy(dtype=float)
            responses = frame[response_column].to_numpy(dtype=float)
        except ValueError as e:
            raise InvalidArgumentError(f"{path}: non-numeric value ({e})") from None
        logger.info(f"Read dataset {path}: n={points.shape[0]}, D={points.shape[1]}")
        return Dataset.from_arrays(points, responses)

    def read_points(self, path: PathLike) -> np.ndarray:
        """Load an m x D matrix of query points from CSV (header row, no response column)."""
        frame = pd.read_csv(path)
        try:
            return frame.to_numpy(dtype=float)
        except ValueError as e:
            raise InvalidArgumentError(f"{path}: non-numeric value ({e})") from None

    def points_frame(self, points: np.ndarray, responses: Optional[np.ndarray] = None) -> pd.DataFrame:
        points = np.atleast_2d(points)
        frame = pd.DataFrame(points, columns=[f"x{k + 1}" for k in range(points.shape[1])])
        if responses is not None:
            frame["y"] = np.asarray(responses, dtype=float)
        return frame

    def write_points(self, path: PathLike, points: np.ndarray, responses: Optional[np.ndarray] = None) -> Path:
        """Write a design (x1..xD[, y]) in the dataset CSV format."""
        return self.write_table(path, self.points_frame(points, responses))

    def write_table(self, path: PathLike, frame: pd.DataFrame) -> Path:
        """Write a table as CSV with fixed line endings so reruns are byte-identical."""
        path = Path(path)
        if path.parent != Path("."):
            self.ensure_dir(path.parent)
        frame.to_csv(path, index=False, lineterminator="\n")
        logger.info(f"Wrote {path}")
        return path

    def write_model(self, path: PathLike, model: FittedModel) -> Path:
        path = Path(path)
        if path.parent != Path("."):
            self.ensure_dir(path.parent)
        path.write_text(save_model(model), encoding="utf-8")
        logger.info(f"Saved model to {path}")
        return path

    def read_model(self, path: PathLike) -> FittedModel:
        return load_model(Path(path).read_text(encoding="utf-8"))

    def sanitize_filename(self, filename: str) -> str:
        """
        Sanitize a filename to remove potentially dangerous characters.

        Args:
            filename: Original filename (e.g. a model name from a config file)

        Returns:
            str: Sanitized filename
        """
        dangerous_chars = ['/', '\\', '..', '\x00', '\n', '\r', ' ']
        sanitized = filename
        for char in dangerous_chars:
            sanitized = sanitized.replace(char, '_')

        if len(sanitized) > 200:
            name, ext = os.path.splitext(sanitized)
            sanitized = name[:200 - len(ext)] + ext

        return sanitized


# Global file manager instance
file_manager = FileManager()
