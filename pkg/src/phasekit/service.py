"""HTTP face of the package: one POST route per report type.

Run with ``uvicorn phasekit.service:app`` (or ``phasekit serve``).  Input
validation errors surface as 422 (model shape) or 400 (domain rules);
recovery failures are normal responses with ``success: false``.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .errors import (
    ConfigurationError,
    PrecisionError,
    ResourceLimitError,
)
from .models import (
    CompareReport,
    CompareRequest,
    CountReport,
    CountRequest,
    EstimateRequest,
    RunReport,
    ShorReport,
    ShorRequest,
    SweepReport,
    SweepRequest,
)
from .reports import (
    handle_compare,
    handle_count,
    handle_estimate,
    handle_shor,
    handle_sweep,
)

app = FastAPI(title="phasekit", version=__version__)

_CLIENT_ERRORS = (ValueError, PrecisionError, ConfigurationError, ResourceLimitError)


@app.exception_handler(ValueError)
@app.exception_handler(PrecisionError)
@app.exception_handler(ConfigurationError)
@app.exception_handler(ResourceLimitError)
async def _client_error(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/health")
async def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/estimate", response_model=RunReport)
async def estimate(req: EstimateRequest) -> RunReport:
    return handle_estimate(req)


@app.post("/count", response_model=CountReport)
async def count(req: CountRequest) -> CountReport:
    return handle_count(req)


@app.post("/shor", response_model=ShorReport)
async def shor(req: ShorRequest) -> ShorReport:
    return handle_shor(req)


@app.post("/sweep", response_model=SweepReport)
async def sweep(req: SweepRequest) -> SweepReport:
    return handle_sweep(req)


@app.post("/compare-cases", response_model=CompareReport)
async def compare_cases(req: CompareRequest) -> CompareReport:
    return handle_compare(req)
