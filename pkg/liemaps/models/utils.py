"""Utility classes for models."""
from abc import ABC
from dataclasses import field

import numpy as np


new_list = lambda: field(default_factory=list)
new_dict = lambda: field(default_factory=dict)


def plain(value):
    """Converts numpy values and nested containers to json types."""
    if isinstance(value, JsonSerializable):
        return value.to_dict()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if isinstance(value, dict):
        return {key: plain(item) for key, item in value.items()}
    return value


def frozen_array(values, dtype=float) -> np.ndarray:
    """Read-only copy of `values`."""
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


class JsonSerializable(ABC):
    """Classes that can be serialized as json."""

    @classmethod
    def from_dict(cls, dictionary: dict):
        """Converts dict to object.

        Args:
            dictionary: dict to convert
        """

    def to_dict(self) -> dict:
        """Converts model to dict."""
        result = {}
        for key, val in self.__dict__.items():
            if key.startswith("_"):
                continue
            if val is None:
                continue
            result[key] = plain(val)
        return result
