"""max_affine JSON documents: {"dim": n, "pieces": [{"c": [...], "b": ...}]}."""
import json
import logging
from pathlib import Path
from typing import List, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from setgrad.exceptions import ConfigValidationError, InputError
from setgrad.oracles.base import MaxAffineSpec

logger = logging.getLogger(__name__)


class PieceDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    c: List[float] = Field(min_length=1)
    b: float = 0.0


class MaxAffineDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=1)
    pieces: List[PieceDocument] = Field(min_length=1)

    @model_validator(mode="after")
    def _dims_agree(self) -> "MaxAffineDocument":
        if any(len(piece.c) != self.dim for piece in self.pieces):
            raise ValueError(f"every piece needs {self.dim} slope entries")
        return self


def spec_from_document(document: dict) -> MaxAffineSpec:
    try:
        parsed = MaxAffineDocument.model_validate(document)
    except ValidationError as exc:
        fields = [
            {"field": ".".join(str(part) for part in error["loc"]) or "spec", "message": error["msg"]}
            for error in exc.errors()
        ]
        raise ConfigValidationError(fields) from exc
    return MaxAffineSpec(tuple((tuple(piece.c), piece.b) for piece in parsed.pieces))


def spec_to_document(spec: MaxAffineSpec) -> dict:
    return {"dim": spec.dim, **spec.to_dict()}


def load_max_affine_spec(path: Union[str, Path]) -> MaxAffineSpec:
    try:
        with open(path) as handle:
            document = json.load(handle)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    spec = spec_from_document(document)
    logger.debug("loaded max-affine spec with %s pieces from %s", len(spec.pieces), path)
    return spec


def save_max_affine_spec(spec: MaxAffineSpec, path: Union[str, Path]) -> None:
    with open(path, "w") as handle:
        json.dump(spec_to_document(spec), handle, indent=2)
