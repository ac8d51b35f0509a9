"""Error taxonomy shared by the CLI and the HTTP service."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class GeocodeError(Exception):
    """Base class; ``code`` is drawn from the fixed ApiError catalog."""

    code = "bad_request"


class BadRequestError(GeocodeError):
    code = "bad_request"


class UnknownProgramError(GeocodeError):
    code = "unknown_program"


class InvalidParamsError(GeocodeError):
    code = "invalid_params"


class EvalFailedError(GeocodeError):
    code = "eval_failed"


class NotFoundError(GeocodeError):
    code = "not_found"


_CATALOG = {"bad_request", "unknown_program", "invalid_params", "eval_failed", "not_found"}


@dataclass(frozen=True)
class ApiError:
    code: str
    message: str
    detail: Any = field(default=None)

    def __post_init__(self):
        if self.code not in _CATALOG:
            raise ValueError(f"unknown error code {self.code!r}")

    def to_json(self) -> dict:
        d = {"code": self.code, "message": self.message}
        if self.detail is not None:
            d["detail"] = self.detail
        return d

    @staticmethod
    def from_exception(e: Exception) -> "ApiError":
        code = getattr(e, "code", None)
        if code not in _CATALOG:
            code = "bad_request"
        return ApiError(code, str(e))
