"""Trained-model serialization.

Layout: magic "MDL1", little-endian u64 JSON-header length, the UTF-8 JSON
header (family, params, labels, tensor shapes in order), then the float64
little-endian tensor payloads concatenated in header order.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from ..errors import FormatError
from .model import TrainedModel

_MAGIC = b"MDL1"


def save_model(model: TrainedModel, path: str | Path) -> None:
    tensor_names = list(model.weights)
    header = {
        "family": model.family,
        "params": model.params,
        "n_classes": model.n_classes,
        "labels": list(model.labels),
        "best_epoch": model.best_epoch,
        "epochs_trained": model.epochs_trained,
        "val_history": list(model.val_history),
        "tensors": [
            {"name": k, "shape": list(model.weights[k].shape)} for k in tensor_names
        ],
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        for k in tensor_names:
            fh.write(np.ascontiguousarray(model.weights[k], dtype="<f8").tobytes())


def load_model(path: str | Path) -> TrainedModel:
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise FormatError(f"{path}: not a model file (bad magic)")
        (hlen,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(hlen).decode("utf-8"))
        weights = {}
        for spec in header["tensors"]:
            shape = tuple(spec["shape"])
            count = int(np.prod(shape)) if shape else 1
            raw = fh.read(8 * count)
            if len(raw) != 8 * count:
                raise FormatError(f"{path}: truncated tensor {spec['name']!r}")
            weights[spec["name"]] = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
    return TrainedModel(
        family=header["family"],
        params=header["params"],
        n_classes=header["n_classes"],
        weights=weights,
        labels=tuple(header["labels"]),
        best_epoch=header["best_epoch"],
        epochs_trained=header["epochs_trained"],
        val_history=tuple(header["val_history"]),
    )
