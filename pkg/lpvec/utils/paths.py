"""Path helpers for CLI inputs and benchmark artifacts."""

from __future__ import annotations

import os

from lpvec.config import DEFAULT_OUTPUT_ROOT


def resolve_output_path(
    raw_path: str,
    output_root: str = DEFAULT_OUTPUT_ROOT,
    kind: str = "output path",
) -> str:
    """Resolve an output path; relative paths land under ``output_root``.

    The parent directory is created when missing.
    """
    if not raw_path or not raw_path.strip():
        raise ValueError(f"{kind} cannot be empty")
    candidate = raw_path.strip()
    if not os.path.isabs(candidate):
        candidate = os.path.join(output_root, candidate)
    candidate = os.path.normpath(candidate)
    if os.path.isdir(candidate):
        raise IsADirectoryError(
            f"{kind} '{candidate}' is a directory; pass a file name instead."
        )
    parent = os.path.dirname(candidate)
    if parent:
        os.makedirs(parent, exist_ok=True)
    return candidate


def resolve_output_dir(
    raw_path: str,
    output_root: str = DEFAULT_OUTPUT_ROOT,
    kind: str = "output directory",
) -> str:
    """Resolve and create an output directory."""
    if not raw_path or not raw_path.strip():
        raise ValueError(f"{kind} cannot be empty")
    candidate = raw_path.strip()
    if not os.path.isabs(candidate):
        candidate = os.path.join(output_root, candidate)
    candidate = os.path.normpath(candidate)
    if os.path.exists(candidate) and not os.path.isdir(candidate):
        raise NotADirectoryError(
            f"{kind} '{candidate}' exists and is not a directory."
        )
    os.makedirs(candidate, exist_ok=True)
    return candidate


def read_input_file(raw_path: str, kind: str = "program file") -> str:
    """Read a UTF-8 input file, with a hint when it is missing."""
    if not raw_path or not raw_path.strip():
        raise ValueError(f"{kind} cannot be empty")
    path = os.path.normpath(raw_path.strip())
    if not os.path.exists(path):
        raise FileNotFoundError(
            f"{kind} not found: '{path}'. Paths are resolved against the current "
            f"directory ({os.getcwd()})."
        )
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except UnicodeDecodeError as exc:
        raise ValueError(
            f"{kind} '{path}' is not valid UTF-8 (byte {exc.start}: {exc.reason})"
        ) from exc
