"""Request and response models for the HTTP service (and the in-process CLI)."""

from __future__ import annotations

from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

Entry = Union[str, int]


class MatrixIn(BaseModel):
    size: Optional[int] = None
    entries: list[list[Entry]]

    def as_json(self) -> dict:
        out: dict = {"entries": [[str(x) for x in row] for row in self.entries]}
        out["size"] = len(self.entries) if self.size is None else self.size
        return out


class MatrixRequest(BaseModel):
    matrix: MatrixIn


class KernelRequest(BaseModel):
    weights: Optional[list[int]] = None
    matrix: Optional[MatrixIn] = None
    max_degree: Optional[int] = None


class ModuleRequest(KernelRequest):
    z_weights: list[int]


class RelfreeRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    nil_class: int = Field(alias="class")
    vars: int
    delta: MatrixIn
    max_degree: int = 6


class TraceRequest(BaseModel):
    n: int = 2
    vars: int
    delta: MatrixIn
    max_degree: int = 4
    word_length: Optional[int] = None


class VerifyRequest(BaseModel):
    report: dict[str, Any]


class ReportResponse(BaseModel):
    command: str
    certified: bool
    exit_code: int
    report: dict[str, Any]
    text: str


REQUESTS: dict[str, type[BaseModel]] = {
    "jordan": MatrixRequest,
    "log": MatrixRequest,
    "exp": MatrixRequest,
    "kernel": KernelRequest,
    "module-constants": ModuleRequest,
    "relfree": RelfreeRequest,
    "trace": TraceRequest,
    "verify": VerifyRequest,
}
