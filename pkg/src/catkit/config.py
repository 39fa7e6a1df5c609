"""Search bounds shared by the brute-force routines."""

import os
from dataclasses import dataclass

DEFAULT_MAX_CANDIDATES = 10**8
ENV_VAR = "CATKIT_MAX_CANDIDATES"


@dataclass(frozen=True)
class Limits:
    max_candidates: int = DEFAULT_MAX_CANDIDATES
    workers: int = 1

    @classmethod
    def from_env(cls, workers=1):
        raw = os.environ.get(ENV_VAR)
        if raw is None:
            return cls(workers=workers)
        return cls(max_candidates=int(raw), workers=workers)


def resolve(limits):
    """Return ``limits`` or the environment-derived default."""
    return limits if limits is not None else Limits.from_env()


def check_space(size, limits, what):
    from .errors import SizeLimit

    limits = resolve(limits)
    if size > limits.max_candidates:
        raise SizeLimit(
            f"{what}: {size} candidates exceeds bound {limits.max_candidates}"
        )
