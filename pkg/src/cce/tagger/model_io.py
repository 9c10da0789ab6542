"""Versioned binary model files.

Layout (documented here and in the README):

  1. header line: the ASCII bytes ``cce-model v1\\n``
  2. manifest line: one JSON object terminated by ``\\n`` with keys
     ``dimension`` (embedding width d), ``hidden`` (LSTM size h), ``tags``
     (always 3) and ``tensors``, a list of ``{"name", "shape", "dtype"}``
     records in payload order; dtype is always ``<f8``
  3. payload: each tensor's raw bytes, little-endian float64, row-major,
     concatenated in manifest order with no padding

The stored ``dimension`` is the embedding width the model requires, used
to reject incompatible vector files at load time.
"""

from __future__ import annotations

import json

import numpy as np

from cce.errors import CceError
from cce.tagger.crf import K
from cce.tagger.network import TaggerParams

MAGIC = b"cce-model v1\n"


class ModelFormatError(CceError):
    """A model file that does not follow the documented layout."""


def _expected_shapes(dimension: int, hidden: int) -> dict[str, tuple[int, ...]]:
    return {
        "fwd_wx": (dimension, 4 * hidden),
        "fwd_wh": (hidden, 4 * hidden),
        "fwd_b": (4 * hidden,),
        "bwd_wx": (dimension, 4 * hidden),
        "bwd_wh": (hidden, 4 * hidden),
        "bwd_b": (4 * hidden,),
        "out_w": (2 * hidden, K),
        "out_b": (K,),
        "transitions": (K + 2, K + 2),
    }


def save_model(params: TaggerParams, path) -> None:
    tensors = params.tensors()
    manifest = {
        "dimension": params.dimension,
        "hidden": params.hidden,
        "tags": K,
        "tensors": [
            {"name": name, "shape": list(tensor.shape), "dtype": "<f8"}
            for name, tensor in tensors.items()
        ],
    }
    with open(path, "wb") as handle:
        handle.write(MAGIC)
        handle.write(json.dumps(manifest, sort_keys=True).encode("utf-8"))
        handle.write(b"\n")
        for tensor in tensors.values():
            handle.write(np.ascontiguousarray(tensor, dtype="<f8").tobytes())


def load_model(path) -> TaggerParams:
    with open(path, "rb") as handle:
        blob = handle.read()
    if not blob.startswith(MAGIC):
        raise ModelFormatError(f"{path}: missing '{MAGIC.decode().strip()}' header")
    body = blob[len(MAGIC):]
    newline = body.find(b"\n")
    if newline < 0:
        raise ModelFormatError(f"{path}: missing manifest line")
    try:
        manifest = json.loads(body[:newline].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"{path}: bad manifest: {exc}") from None
    try:
        dimension = int(manifest["dimension"])
        hidden = int(manifest["hidden"])
        tags = int(manifest["tags"])
        records = manifest["tensors"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"{path}: manifest missing field: {exc}") from None
    if tags != K:
        raise ModelFormatError(f"{path}: unsupported tag count {tags}")

    expected = _expected_shapes(dimension, hidden)
    if [r.get("name") for r in records] != list(expected):
        raise ModelFormatError(f"{path}: unexpected tensor list")

    payload = body[newline + 1:]
    offset = 0
    tensors: dict[str, np.ndarray] = {}
    for record in records:
        name = record["name"]
        shape = tuple(record["shape"])
        if record.get("dtype") != "<f8":
            raise ModelFormatError(f"{path}: tensor {name} has dtype {record.get('dtype')!r}")
        if shape != expected[name]:
            raise ModelFormatError(
                f"{path}: tensor {name} has shape {shape}, expected {expected[name]}"
            )
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * 8
        if offset + nbytes > len(payload):
            raise ModelFormatError(f"{path}: payload truncated at tensor {name}")
        tensors[name] = (
            np.frombuffer(payload, dtype="<f8", count=count, offset=offset)
            .reshape(shape)
            .astype(float)
        )
        offset += nbytes
    if offset != len(payload):
        raise ModelFormatError(f"{path}: {len(payload) - offset} trailing bytes")
    return TaggerParams(dimension=dimension, hidden=hidden, **tensors)
