"""FastAPI front end around the scenario runner.

Verdicts ride inside the report body: a violated check is still HTTP 200.
Only malformed scenarios map to HTTP 400.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import ScenarioError
from ..render import render_report
from ..scenarios import BUILTIN_SCENARIOS, list_scenarios, run_scenario
from .models import (
    AnalyzeRequest,
    HealthResponse,
    RenderRequest,
    RenderResponse,
    RunReportModel,
    ScenarioModel,
    ScenarioSummary,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="fieldtopo",
        version=__version__,
        description="Topological necessary-condition checks for vector fields "
        "and control systems",
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/scenarios", response_model=list[ScenarioSummary])
    def scenarios() -> list[ScenarioSummary]:
        return [ScenarioSummary(**row) for row in list_scenarios()]

    @app.get("/scenarios/{name}", response_model=ScenarioModel)
    def scenario_detail(name: str) -> dict:
        if name not in BUILTIN_SCENARIOS:
            raise HTTPException(status_code=404, detail=f"unknown scenario {name!r}")
        return BUILTIN_SCENARIOS[name]

    @app.post("/analyze", response_model=RunReportModel)
    def analyze(request: AnalyzeRequest) -> dict:
        if (request.name is None) == (request.scenario is None):
            raise HTTPException(
                status_code=400,
                detail="provide exactly one of 'name' or 'scenario'",
            )
        target = (
            request.name
            if request.name is not None
            else request.scenario.model_dump(exclude_none=True)
        )
        try:
            report = run_scenario(
                target, seed=request.seed, refinement=request.refinement
            )
        except ScenarioError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return report.to_dict()

    @app.post("/render", response_model=RenderResponse)
    def render(request: RenderRequest) -> RenderResponse:
        files = render_report(request.report.model_dump(), request.format)
        return RenderResponse(files=files)

    return app


app = create_app()
