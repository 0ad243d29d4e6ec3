"""Size guards for brute-force searches."""
import os

from .errors import SearchSpaceTooLarge

OVERRIDE_ENV = "DEEPFRI_GUARD_OVERRIDE"


def overridden() -> bool:
    return os.environ.get(OVERRIDE_ENV, "") == "1"


def check(name: str, value, limit) -> None:
    if value > limit and not overridden():
        raise SearchSpaceTooLarge(name, value, limit)
