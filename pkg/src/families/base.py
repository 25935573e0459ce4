import abc
from typing import Any, Optional

from src.quiverrep.presentation import AlgebraPresentation
from src.quiverrep.representation import Representation


class CoalgebraFamily(abc.ABC):
    """Abstract interface of a coalgebra family with symbolic objects."""

    @abc.abstractmethod
    def presentation(self) -> AlgebraPresentation:
        ...

    @abc.abstractmethod
    def realize(self, obj: Any) -> Representation:
        ...

    @abc.abstractmethod
    def identify(self, rep: Representation) -> Optional[Any]:
        ...

    @property
    @abc.abstractmethod
    def family_name(self) -> str:
        ...
