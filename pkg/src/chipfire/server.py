"""chipfire HTTP service - the engine behind a small JSON API"""

import asyncio
import logging
import time
from collections.abc import Callable
from contextlib import asynccontextmanager
from typing import Any, Dict, Literal, TypeVar

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from chipfire import __version__
from chipfire.certificates import (
    BrambleCertificate,
    CertificateFile,
    ScrambleCertificate,
    scramble_order,
    verify_bramble,
    verify_scramble,
)
from chipfire.config import Config
from chipfire.divisors import Divisor, find_unwinnable_debt, rank
from chipfire.errors import BudgetExceededError, ChipfireError
from chipfire.gonality import alpha_r, gonality, mf_gonality
from chipfire.graph import parse_text
from chipfire.health import HealthMonitor
from chipfire.reports import (
    RankResult,
    alpha_result,
    certificate_result,
    envelope,
    input_hash,
    search_result,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")


class RankRequest(BaseModel):
    graph: str
    divisor: list[int]
    rank_target: int | None = Field(default=None, ge=0)


class GonalityRequest(BaseModel):
    graph: str
    r: int = Field(ge=1)
    multiplicity_free: bool = False
    budget: float | None = Field(default=None, gt=0)
    strategy: Literal["ascending", "descending"] | None = None


class AlphaRequest(BaseModel):
    graph: str
    r: int = Field(ge=1)


class CertificateRequest(BaseModel):
    graph: str
    certificate: CertificateFile


class ChipfireService:
    """Holds configuration and the health monitor for the running app."""

    def __init__(self, config: Config):
        self.config = config
        self.health_monitor = HealthMonitor()

        logger.info("chipfire service initialized:")
        logger.info(f"  Search threads: {config.search.threads}")
        logger.info(f"  Search budget: {config.search.budget_seconds}s")
        logger.info(f"  Strategy: {config.search.strategy}")

    def rank(self, body: RankRequest) -> Dict[str, Any]:
        G = parse_text(body.graph)
        D = Divisor(tuple(body.divisor))
        if len(D) != G.n:
            raise HTTPException(status_code=422, detail=f"divisor has {len(D)} entries for {G.n} vertices")
        started = time.monotonic()
        result = RankResult(divisor=list(D), degree=D.degree, rank=rank(G, D))
        if body.rank_target is not None:
            result.rank_target = body.rank_target
            result.meets_target = result.rank >= body.rank_target
            if not result.meets_target and D.degree >= body.rank_target:
                refuted = find_unwinnable_debt(G, D, body.rank_target)
                result.refuted_by = list(refuted) if refuted is not None else None
        digest = input_hash(G, str(D))
        return _payload("rank", result, digest, started)

    def gonality(self, body: GonalityRequest) -> Dict[str, Any]:
        G = parse_text(body.graph)
        search = self.config.search
        started = time.monotonic()
        engine = mf_gonality if body.multiplicity_free else gonality
        report = engine(
            G,
            body.r,
            body.budget or search.budget_seconds,
            threads=search.threads,
            strategy=body.strategy or search.strategy,
            chunk_size=search.chunk_size,
        )
        if report.budget_exceeded:
            raise BudgetExceededError(f"search exceeded its budget after {report.elapsed:.1f}s")
        command = "mfgon" if body.multiplicity_free else "gon"
        return _payload(command, search_result(report), input_hash(G), started)

    def alpha(self, body: AlphaRequest) -> Dict[str, Any]:
        G = parse_text(body.graph)
        started = time.monotonic()
        return _payload("alpha", alpha_result(alpha_r(G, body.r)), input_hash(G), started)

    def certificate(self, body: CertificateRequest) -> Dict[str, Any]:
        G = parse_text(body.graph)
        raw = body.certificate
        sets = tuple(tuple(s) for s in raw.sets)
        started = time.monotonic()
        cert: ScrambleCertificate | BrambleCertificate
        if raw.kind == "bramble":
            cert = BrambleCertificate(sets, raw.r)
            verification = verify_bramble(G, cert)
            as_scramble = cert.as_scramble()
        else:
            cert = as_scramble = ScrambleCertificate(sets, raw.r)
            verification = verify_scramble(G, cert)
        order = scramble_order(G, as_scramble) if verification.valid else None
        digest = input_hash(G, raw.model_dump_json())
        return _payload("cert", certificate_result(cert, verification, order), digest, started)


def _payload(command: str, result: BaseModel, digest: str, started: float) -> Dict[str, Any]:
    body = envelope(command, result, digest, time.monotonic() - started)
    return body.model_dump(mode="json", by_alias=True)


async def _run(work: Callable[..., T], *args: Any) -> T:
    """Run engine work off the event loop and map engine errors to HTTP errors."""
    if service_instance is None:
        raise HTTPException(status_code=503, detail="Service not initialized")
    try:
        return await asyncio.to_thread(work, *args)
    except HTTPException:
        raise
    except BudgetExceededError as e:
        logger.warning(f"Request over budget: {e}")
        raise HTTPException(status_code=504, detail=str(e))
    except ChipfireError as e:
        logger.error(f"Rejected request: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Computation error: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=str(e))


# FastAPI app
service_instance: ChipfireService | None = None


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Manage service lifecycle."""
    global service_instance

    config = Config.from_env()
    config.validate()
    logging.basicConfig(
        level=config.logging.level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    service_instance = ChipfireService(config)
    logger.info(f"chipfire {__version__} service started")

    yield

    logger.info("chipfire service stopped")


app = FastAPI(
    title="chipfire",
    description="Exact divisor theory on multigraphs: rank, higher gonality, certificates",
    version=__version__,
    lifespan=lifespan,
)


@app.post("/v1/rank")
async def rank_endpoint(body: RankRequest):
    """Baker-Norine rank of a divisor, with the refuting debt when a target is missed."""
    return await _run(lambda: service_instance.rank(body))  # type: ignore[union-attr]


@app.post("/v1/gonality")
async def gonality_endpoint(body: GonalityRequest):
    """Exact gon_r or multiplicity-free gon_r by exhaustive search."""
    return await _run(lambda: service_instance.gonality(body))  # type: ignore[union-attr]


@app.post("/v1/alpha")
async def alpha_endpoint(body: AlphaRequest):
    return await _run(lambda: service_instance.alpha(body))  # type: ignore[union-attr]


@app.post("/v1/certificate")
async def certificate_endpoint(body: CertificateRequest):
    """Verify a scramble or bramble certificate and compute its order."""
    return await _run(lambda: service_instance.certificate(body))  # type: ignore[union-attr]


@app.get("/health")
async def health():
    """Health check endpoint."""
    try:
        health_status = await service_instance.health_monitor.check_all()  # type: ignore[union-attr]

        if health_status["status"] == "unhealthy":
            return JSONResponse(content=health_status, status_code=503)

        return health_status
    except Exception as e:
        logger.error(f"Health check error: {e}")
        return JSONResponse(content={"status": "error", "error": str(e)}, status_code=500)


@app.get("/api/info")
async def info():
    """API info endpoint."""
    if service_instance is None:
        raise HTTPException(status_code=503, detail="Service not initialized")
    return {
        "name": "chipfire",
        "version": __version__,
        "endpoints": {
            "rank": "/v1/rank",
            "gonality": "/v1/gonality",
            "alpha": "/v1/alpha",
            "certificate": "/v1/certificate",
            "health": "/health",
        },
        "config": {
            "threads": service_instance.config.search.threads,
            "budget_seconds": service_instance.config.search.budget_seconds,
            "strategy": service_instance.config.search.strategy,
        },
    }


def serve(config: Config) -> None:
    import uvicorn

    uvicorn.run(
        "chipfire.server:app",
        host=config.server.host,
        port=config.server.port,
        reload=False,
        log_level=config.logging.level.lower(),
    )
