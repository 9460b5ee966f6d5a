from flask import request

from utils.errors import DomainError

_REQUIRED = object()
_TRUE = {"1", "true", "yes", "on"}


def float_arg(name, default=_REQUIRED):
    """Reads a float query parameter; a missing required one is a DomainError (400)."""
    raw = request.args.get(name)
    if raw is None or raw == "":
        if default is _REQUIRED:
            raise DomainError(f"{name} parameter is required")
        return default
    try:
        return float(raw)
    except ValueError:
        raise DomainError(f"{name} must be a number, got {raw!r}") from None


def int_arg(name, default=None):
    raw = request.args.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"{name} must be an integer, got {raw!r}") from None


def flag_arg(name):
    return request.args.get(name, "").lower() in _TRUE
