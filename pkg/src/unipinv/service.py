"""HTTP service: one POST endpoint per command, same reports as the CLI."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import ValidationError

from . import reports
from .nilpotent import NotNilpotentError, NotUnipotentError, parse_matrix_json
from .reports import Report, UsageError
from .schemas import REQUESTS, ReportResponse


def _matrix(m):
    return None if m is None else parse_matrix_json(m.as_json())


def handle(command: str, payload: dict, threads: int | None = None) -> Report:
    """Validate a request payload and build the report.

    Input problems raise UsageError; certification failures come back as a
    report with ``certified`` false.
    """
    if command not in REQUESTS:
        raise UsageError(f"unknown command {command!r}")
    try:
        req = REQUESTS[command].model_validate(payload)
    except ValidationError as exc:
        raise UsageError(f"bad {command} request: {exc.errors()[0]['msg']} at {exc.errors()[0]['loc']}") from None
    try:
        if command in ("jordan", "log", "exp"):
            builder = {"jordan": reports.jordan_report, "log": reports.log_report, "exp": reports.exp_report}[command]
            return builder(_matrix(req.matrix))
        if command == "kernel":
            return reports.kernel_report(req.weights, _matrix(req.matrix), req.max_degree, threads)
        if command == "module-constants":
            return reports.module_report(req.weights, _matrix(req.matrix), req.z_weights, req.max_degree, threads)
        if command == "relfree":
            return reports.relfree_report(req.nil_class, req.vars, _matrix(req.delta), req.max_degree, threads)
        if command == "trace":
            return reports.trace_report(req.n, req.vars, _matrix(req.delta), req.max_degree, req.word_length, threads)
        return reports.verify_report(req.report)
    except (UsageError, NotNilpotentError, NotUnipotentError):
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def create_app() -> FastAPI:
    app = FastAPI(title="unipinv", version="1.0")

    def endpoint(command: str):
        def run(payload: dict) -> ReportResponse:
            try:
                rep = handle(command, payload)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            return ReportResponse(
                command=command, certified=rep.certified, exit_code=rep.exit_code, report=rep.data, text=rep.text
            )

        run.__name__ = f"run_{command.replace('-', '_')}"
        return run

    for command in REQUESTS:
        app.post(f"/{command}", response_model=ReportResponse)(endpoint(command))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    return app


app = create_app()
