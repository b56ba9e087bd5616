"""Pydantic request/response models for the analysis service."""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class ExpressionSource(BaseModel):
    source: str


class FieldSource(BaseModel):
    source: str
    n: int = Field(ge=1)
    m: int = Field(default=0, ge=0)


class CheckSpec(BaseModel):
    model_config = ConfigDict(extra="allow")

    check: str


class ScenarioModel(BaseModel):
    schema_version: int = 1
    name: str
    field: FieldSource
    feedback: Optional[ExpressionSource] = None
    lyapunov: Optional[ExpressionSource] = None
    seed: int = 0
    checks: list[CheckSpec]


class AnalyzeRequest(BaseModel):
    """Run a built-in scenario by name or an inline scenario document."""

    name: Optional[str] = None
    scenario: Optional[ScenarioModel] = None
    seed: Optional[int] = None
    refinement: Optional[int] = None


class EvidenceRecord(BaseModel):
    label: str
    values: list[float]


class ConditionReportModel(BaseModel):
    condition: str
    verdict: Literal["pass", "violated", "degenerate", "undecided"]
    expected: Any = None
    observed: Any = None
    tolerance: dict[str, Any]
    seed: Optional[int] = None
    evidence: list[EvidenceRecord]
    runtime_ms: float


class RunReportModel(BaseModel):
    scenario: str
    version: str
    aggregate: Literal["pass", "violated"]
    reports: list[ConditionReportModel]


class ScenarioSummary(BaseModel):
    name: str
    description: str


class RenderRequest(BaseModel):
    report: RunReportModel
    format: Literal["svg", "csv"] = "csv"


class RenderResponse(BaseModel):
    files: dict[str, str]


class HealthResponse(BaseModel):
    status: str
    version: str
