class DimensionMismatchError(ValueError):
    pass


class InvalidProbabilityError(ValueError):
    pass


class IndexOutOfRangeError(IndexError):
    pass


class SizeLimitError(ValueError):
    """An exhaustive enumeration or dense simulation would exceed its guard."""


class DegenerateCodeError(ValueError):
    """The code (or punctured code) has no nonzero words."""


class PhaseEscapeError(ValueError):
    """An odd power of i would leave the real exact-amplitude representation."""


class NotRecoverableError(ValueError):
    pass


class InconsistentInputError(ValueError):
    pass


class DecoderDisagreementError(AssertionError):
    """Rank predicate and explicit decoder disagree; indicates an implementation bug."""


def check_probability(q: float, name: str = "q") -> float:
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise InvalidProbabilityError(f"{name} must lie in [0, 1], got {q}")
    return q
