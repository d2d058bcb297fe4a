"""Run configuration model."""
from __future__ import annotations

from dataclasses import dataclass

from .utils import JsonSerializable, new_dict


@dataclass
class RunConfig(JsonSerializable):
    """Subcommand, paths and numeric parameters of one CLI run.

    Echoed as metadata into every json output.
    """

    command: str
    inputs: dict = new_dict()
    outputs: dict = new_dict()
    parameters: dict = new_dict()
    seed: int | None = None

    @classmethod
    def from_dict(cls, dictionary: dict):
        """Transform dictionary to RunConfig.

        Args:
            dictionary: dict object

        Return: RunConfig
        """
        return RunConfig(**dictionary)
