from typing import Optional, Sequence


class P5ColorError(Exception):
    pass


class InputError(P5ColorError):
    """Malformed graph, list file or argument."""


class PreconditionViolated(P5ColorError):
    """The input breaks an assumption the algorithm relies on, e.g. it is not P5-free.

    `witness` carries the evidence when there is one (the vertices of an induced P5).
    """

    def __init__(self, message: str, witness: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.witness = tuple(witness) if witness is not None else None


class ContractError(P5ColorError):
    pass


class SolveTimeout(P5ColorError):
    pass


class OracleRefused(P5ColorError):
    pass


class GenerationError(P5ColorError):
    def __init__(self, message: str, seed: int):
        super().__init__(f"{message} (seed={seed})")
        self.seed = seed


class RecursionInvariantError(P5ColorError):
    """A recursive solve did not shrink the colour universe."""
