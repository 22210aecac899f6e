"""Base class that all multiplier schemes inherit from."""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..types import SchemeKind


@dataclass(frozen=True, eq=False)
class SlotMoments:
    """Conditional moments of the weights of the active slots, given the data.

    All arrays are aligned with ``slot`` (ascending slot index). ``fourth``
    is E[D^4 | data], which is also the central fourth moment because every
    scheme here is exactly centred.
    """

    slot: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    fourth: np.ndarray


class MultiplierScheme(ABC):
    """Abstract base class for DDMB weight generators.

    A scheme sees, for every active slot, the number at risk Y(T_i) at the
    jump time of that slot. Data-independent schemes ignore it.

    All schemes must implement:
    - sample(): draw one weight per active slot from a random stream
    - moments(): closed-form conditional moments per active slot
    """

    kind: SchemeKind

    @abstractmethod
    def sample(self, at_risk: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Draw one weight per active slot.

        Args:
            at_risk: Y(T_i) per active slot, in ascending slot order
            rng: Random stream, consumed in slot order

        Returns:
            Weights aligned with ``at_risk``
        """
        pass

    @abstractmethod
    def moments(self, at_risk: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Conditional (mean, variance, fourth moment) per active slot."""
        pass

    @classmethod
    def get_name(cls) -> str:
        """Get the name of this scheme."""
        return cls.__name__.lower()

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} kind={self.kind.value}>"
