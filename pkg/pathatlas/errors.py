from typing import Optional

from .log import Logger

logger = Logger.ROOT


class PathAtlasError(Exception):
    """
    Base class of every error raised by pathatlas; `exit_code` is what the CLI exits with
    """

    exit_code: int = 3


class DomainError(PathAtlasError):
    ...


class OrderError(PathAtlasError):
    ...


class DimensionError(PathAtlasError):
    ...


class BudgetError(PathAtlasError):
    def __init__(self, needed: int | float, budget: int, what: str = "cells") -> None:
        self.needed = needed
        self.budget = budget
        super().__init__(f"Resource budget exceeded: {needed} {what} needed, budget is {budget}")


class CertificateError(PathAtlasError):
    ...


class ChartEscapeError(PathAtlasError):
    def __init__(self, piece: int, time: float, chart: str, margin: Optional[float] = None) -> None:
        self.piece = piece
        self.time = time
        self.chart = chart
        self.margin = margin

        detail = f" (margin {margin:.3e})" if margin is not None else ""
        super().__init__(f"Piece {piece} leaves chart '{chart}' at t={time:.12g}{detail}")


class CoverError(PathAtlasError):
    def __init__(self, message: str, time: Optional[float] = None) -> None:
        self.time = time

        if time is not None:
            message = f"{message} [t={time:.12g}]"

        super().__init__(message)


class NotInteriorError(PathAtlasError):
    def __init__(self, what: str, value: float) -> None:
        self.value = value
        super().__init__(f"Path is not interior: {what} has nonpositive margin {value:.3e}")


class UnknownBuiltinError(PathAtlasError):
    exit_code = 2

    def __init__(self, name: str, known: list[str]) -> None:
        self.name = name
        super().__init__(f"Unknown builtin '{name}', expected one of: {', '.join(known)}")


class UnknownSuiteError(PathAtlasError):
    exit_code = 2

    def __init__(self, name: str, known: list[str]) -> None:
        self.name = name
        logger.warning(f"Someone asked for suite '{name}' which is not registered")
        super().__init__(f"Unknown suite '{name}', expected 'all' or one of: {', '.join(known)}")


class ScenarioError(PathAtlasError):
    exit_code = 2
