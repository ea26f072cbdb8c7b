from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Prediction:
    """Class probabilities for one instance, in schema label order."""

    probabilities: tuple[float, ...]

    @property
    def label_index(self) -> int:
        # np.argmax picks the first maximum, i.e. the lowest label index on ties
        return int(np.argmax(self.probabilities))

    def label(self, labels) -> str:
        return labels[self.label_index]
