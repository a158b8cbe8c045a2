"""
Validated settings models.

Domain specs and CLI configurations derive from ``SettingsModel`` so that
invalid values surface as the toolkit's ValidationError (VAL_ERR) instead of
pydantic's exception type.
"""

from typing import Any, Dict

from pydantic import BaseModel, ConfigDict
from pydantic import ValidationError as PydanticValidationError

from ..error import ValidationError


def _describe(exc: PydanticValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(item) for item in error.get("loc", ())) or exc.title
        parts.append(f"{location}: {error.get('msg', 'invalid value')}")
    return f"Invalid {exc.title}: " + "; ".join(parts)


class SettingsModel(BaseModel):
    """Immutable pydantic model raising ValidationError on invalid input."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    def __init__(self, **data: Any) -> None:
        try:
            super().__init__(**data)
        except PydanticValidationError as e:
            raise ValidationError(_describe(e)) from e

    @classmethod
    def model_validate(cls, obj: Any, *args: Any, **kwargs: Any):
        try:
            return super().model_validate(obj, *args, **kwargs)
        except PydanticValidationError as e:
            raise ValidationError(_describe(e)) from e

    def to_record(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")
