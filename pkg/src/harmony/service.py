"""Read-only HTTP facade over a count-table snapshot.

Every handler captures the current snapshot exactly once, so a concurrent
reload can never produce a torn read; the X-Content-Hash header on each
response names the snapshot that answered it. Reloading swaps the whole
immutable bundle in a single attribute assignment.
"""

from __future__ import annotations

import hashlib
import io
import time
from dataclasses import dataclass, replace

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from .composer import DraftState, recommend_next
from .counts import CountTable, pair_rates, read_snapshot
from .errors import (
    HarmonyError,
    InsufficientDataError,
    TeamDataError,
    UndefinedIndexError,
)
from .graph import GRAPH_FORMATS, graph_export
from .index import AnalysisConfig, assess_all_pairs, classify_pair, harmony_index_team
from .records import DEFAULT_TEAM_SIZE

HASH_HEADER = "X-Content-Hash"


@dataclass(frozen=True)
class Snapshot:
    counts: CountTable
    cfg: AnalysisConfig
    loaded_at: float
    content_hash: str


def load_service_snapshot(path: str, cfg: AnalysisConfig) -> Snapshot:
    with open(path, "rb") as fh:
        raw = fh.read()
    table = read_snapshot(io.StringIO(raw.decode("utf-8")))
    return Snapshot(
        counts=table,
        cfg=cfg,
        loaded_at=time.time(),
        content_hash=hashlib.sha256(raw).hexdigest(),
    )


class TeamRequest(BaseModel):
    members: list[str]
    partial: bool = False
    min_shared: int | None = Field(default=None, ge=1)


class DraftRequest(BaseModel):
    picked: list[str]
    pool: list[str] = []
    banned: list[str] = []
    team_size: int = Field(default=DEFAULT_TEAM_SIZE, ge=1)
    min_shared: int | None = Field(default=None, ge=1)


def _cfg_with(snapshot: Snapshot, min_shared: int | None) -> AnalysisConfig:
    if min_shared is None:
        return snapshot.cfg
    return replace(snapshot.cfg, min_shared_games=min_shared)


def create_app(snapshot_path: str, cfg: AnalysisConfig | None = None) -> FastAPI:
    cfg = cfg or AnalysisConfig()
    app = FastAPI(title="harmony service", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=[HASH_HEADER],
    )
    app.state.snapshot_path = snapshot_path
    app.state.snapshot = load_service_snapshot(snapshot_path, cfg)

    def current(request: Request) -> Snapshot:
        return request.app.state.snapshot

    def ok(snapshot: Snapshot, payload: dict | list) -> JSONResponse:
        return JSONResponse(payload, headers={HASH_HEADER: snapshot.content_hash})

    def not_found(snapshot: Snapshot, payload: dict) -> HTTPException:
        return HTTPException(
            status_code=404, detail=payload, headers={HASH_HEADER: snapshot.content_hash}
        )

    def unprocessable(snapshot: Snapshot, exc: HarmonyError) -> HTTPException:
        payload = exc.to_dict() if hasattr(exc, "to_dict") else {"error": str(exc)}
        return HTTPException(
            status_code=422, detail=payload, headers={HASH_HEADER: snapshot.content_hash}
        )

    def require_agent(snapshot: Snapshot, agent: str) -> None:
        if agent not in snapshot.counts.agent_games:
            raise not_found(snapshot, {"error": "unknown_agent", "agent": agent})

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        snapshot = request.app.state.snapshot
        return JSONResponse(
            {"error": "malformed_request", "detail": exc.errors()},
            status_code=400,
            headers={HASH_HEADER: snapshot.content_hash},
        )

    @app.exception_handler(ValueError)
    async def invalid_value(request: Request, exc: ValueError):
        snapshot = request.app.state.snapshot
        return JSONResponse(
            {"error": "invalid_request", "message": str(exc)},
            status_code=400,
            headers={HASH_HEADER: snapshot.content_hash},
        )

    @app.get("/health")
    def health(request: Request) -> JSONResponse:
        snapshot = current(request)
        return ok(
            snapshot,
            {
                "status": "ok",
                "agents": len(snapshot.counts.agent_games),
                "pairs": len(snapshot.counts.pair_games),
                "loaded_at": snapshot.loaded_at,
                "content_hash": snapshot.content_hash,
            },
        )

    @app.get("/agents")
    def agents(request: Request) -> JSONResponse:
        snapshot = current(request)
        t = snapshot.counts
        rows = [
            {
                "id": a,
                "solo_rate": t.agent_wins.get(a, 0) / t.agent_games[a],
                "games": t.agent_games[a],
                "wins": t.agent_wins.get(a, 0),
            }
            for a in sorted(t.agent_games)
        ]
        return ok(snapshot, {"agents": rows})

    @app.get("/pairs")
    def pairs(request: Request, min_shared: int | None = Query(default=None, ge=1)) -> JSONResponse:
        snapshot = current(request)
        use_cfg = _cfg_with(snapshot, min_shared)
        assessments, summary = assess_all_pairs(snapshot.counts, use_cfg)
        return ok(
            snapshot,
            {
                "pairs": [a.to_dict() for a in assessments],
                "summary": summary.to_dict(),
                "min_shared_games": use_cfg.min_shared_games,
            },
        )

    @app.get("/pair/{agent_a}/{agent_b}")
    def pair(request: Request, agent_a: str, agent_b: str) -> JSONResponse:
        snapshot = current(request)
        require_agent(snapshot, agent_a)
        require_agent(snapshot, agent_b)
        use_cfg = snapshot.cfg
        try:
            probs = pair_rates(
                snapshot.counts, agent_a, agent_b, alpha=use_cfg.smoothing_alpha
            )
        except InsufficientDataError as exc:
            if exc.denominator == "joint":
                raise not_found(
                    snapshot,
                    {"error": "unknown_pair", "pair": sorted((agent_a, agent_b)), **exc.to_dict()},
                )
            raise unprocessable(snapshot, exc)
        try:
            assessment = classify_pair(probs, use_cfg, enforce_min_shared=False)
        except (UndefinedIndexError, InsufficientDataError) as exc:
            raise unprocessable(snapshot, exc)
        doc = assessment.to_dict()
        doc["below_min_shared"] = probs.n_joint < use_cfg.min_shared_games
        return ok(snapshot, doc)

    @app.post("/team")
    def team(request: Request, body: TeamRequest) -> JSONResponse:
        snapshot = current(request)
        if len(set(body.members)) < 2:
            raise HTTPException(
                status_code=400,
                detail={"error": "invalid_request", "message": "team needs at least 2 distinct members"},
                headers={HASH_HEADER: snapshot.content_hash},
            )
        for member in body.members:
            require_agent(snapshot, member)
        use_cfg = _cfg_with(snapshot, body.min_shared)
        try:
            assessment = harmony_index_team(
                snapshot.counts, body.members, use_cfg, partial=body.partial
            )
        except TeamDataError as exc:
            raise unprocessable(snapshot, exc)
        return ok(snapshot, assessment.to_dict())

    @app.post("/draft/recommend")
    def draft_recommend(request: Request, body: DraftRequest) -> JSONResponse:
        snapshot = current(request)
        use_cfg = _cfg_with(snapshot, body.min_shared)
        state = DraftState(
            picked=tuple(body.picked),
            pool=frozenset(body.pool)
            if body.pool
            else frozenset(snapshot.counts.agent_games)
            - set(body.picked)
            - set(body.banned),
            banned=frozenset(body.banned),
            team_size=body.team_size,
        )
        result = recommend_next(snapshot.counts, state, use_cfg)
        return ok(snapshot, result.to_dict())

    @app.get("/graph")
    def graph(
        request: Request,
        format: str = Query(default="graph_json"),
        min_shared: int | None = Query(default=None, ge=1),
    ) -> Response:
        snapshot = current(request)
        if format not in GRAPH_FORMATS:
            raise HTTPException(
                status_code=400,
                detail={"error": "invalid_request", "message": f"unknown graph format {format!r}"},
                headers={HASH_HEADER: snapshot.content_hash},
            )
        use_cfg = _cfg_with(snapshot, min_shared)
        assessments, _ = assess_all_pairs(snapshot.counts, use_cfg)
        doc = graph_export(assessments, use_cfg, format=format)
        media = "application/json" if format == "graph_json" else "text/plain"
        # raw Response keeps the 6-decimal serialization byte-exact
        return Response(
            content=doc, media_type=media, headers={HASH_HEADER: snapshot.content_hash}
        )

    @app.post("/reload")
    def reload(request: Request) -> JSONResponse:
        fresh = load_service_snapshot(
            request.app.state.snapshot_path, request.app.state.snapshot.cfg
        )
        request.app.state.snapshot = fresh
        return ok(
            fresh,
            {
                "status": "reloaded",
                "agents": len(fresh.counts.agent_games),
                "content_hash": fresh.content_hash,
            },
        )

    return app
