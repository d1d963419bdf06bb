"""HTTP session API for the live hidden-box game.

One session per hidden box: the server may hold a secret composition
(chosen, or drawn uniformly) while a human reports each observed draw.
Every observation returns the full public state: posterior over boxes,
predictive probability of White, the frequency and succession-rule
baselines, and betting odds against the current favorite.  The secret
never appears in any payload until the session is revealed; reveal
freezes the session.

Sessions live in memory, serialized per session; an optional append-only
journal (one JSON object per line) lets a classroom session survive a
restart.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from sixbox.analysis import jsonable
from sixbox.model import (
    BoxModel,
    Color,
    LogPosterior,
    SequenceSummary,
    frequency_estimate,
    laplace_rule,
    posterior_update,
    predictive_white,
    uniform_prior,
)

__all__ = [
    "ApiError",
    "GameSession",
    "SessionStore",
    "MODES",
    "create_app",
]

MODES = ("random-secret", "chosen-secret", "no-secret")


class ApiError(Exception):
    """Service-level failure with an HTTP status and a stable error code."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _not_found(session_id: str) -> ApiError:
    return ApiError(404, "not_found", f"no session with id {session_id!r}")


@dataclass
class GameSession:
    """Server-side state of one game; mutate only under ``lock``."""

    id: str
    mode: str
    secret_box: int | None
    beliefs: LogPosterior
    history: list[Color] = field(default_factory=list)
    revealed: bool = False
    created_at: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def summary(self) -> SequenceSummary:
        return SequenceSummary(
            n=len(self.history), x=sum(int(c) for c in self.history)
        )


class SessionStore:
    """In-memory session registry with optional journal persistence."""

    def __init__(self, model: BoxModel, journal_path: str | Path | None = None):
        self.model = model
        self._sessions: dict[str, GameSession] = {}
        self._registry_lock = threading.Lock()
        self._journal_path = Path(journal_path) if journal_path else None
        self._journal_lock = threading.Lock()
        self._replaying = False
        if self._journal_path and self._journal_path.exists():
            self._replaying = True
            try:
                self._replay_journal()
            finally:
                self._replaying = False

    # -- core operations ----------------------------------------------------

    def create(
        self, mode: str, box: int | None = None, seed: int | None = None
    ) -> GameSession:
        if mode not in MODES:
            raise ApiError(400, "bad_request", f"unknown mode {mode!r}")
        if mode == "chosen-secret":
            if box is None:
                raise ApiError(400, "bad_request", "chosen-secret requires a box")
            if not isinstance(box, int) or not 0 <= box <= self.model.m:
                raise ApiError(
                    400, "bad_request", f"box must be an integer in 0..{self.model.m}"
                )
            secret: int | None = box
        elif mode == "random-secret":
            if seed is not None and not isinstance(seed, int):
                raise ApiError(400, "bad_request", "seed must be an integer")
            secret = self._draw_secret(seed)
        else:
            secret = None
        session = self._install(secrets.token_urlsafe(16), mode, secret)
        self._journal(
            {
                "event": "create",
                "id": session.id,
                "m": self.model.m,
                "mode": mode,
                "secretBox": secret,
                "createdAt": session.created_at,
            }
        )
        return session

    def _install(
        self, session_id: str, mode: str, secret: int | None
    ) -> GameSession:
        session = GameSession(
            id=session_id,
            mode=mode,
            secret_box=secret,
            beliefs=uniform_prior(self.model),
        )
        with self._registry_lock:
            self._sessions[session.id] = session
        return session

    def observe(self, session_id: str, color: Color) -> dict[str, Any]:
        session = self._get(session_id)
        with session.lock:
            if session.revealed:
                raise ApiError(
                    409, "conflict", "session is revealed; no further observations"
                )
            session.beliefs = posterior_update(session.beliefs, color)
            session.history.append(color)
            view = self._state_view(session)
        self._journal(
            {"event": "observe", "id": session_id, "color": "W" if color else "B"}
        )
        return view

    def undo(self, session_id: str) -> dict[str, Any]:
        session = self._get(session_id)
        with session.lock:
            if session.revealed:
                raise ApiError(409, "conflict", "session is revealed; cannot undo")
            if not session.history:
                raise ApiError(409, "conflict", "no observations to undo")
            session.history.pop()
            # re-fold from the prior: keeps beliefs exactly equal to the
            # fold over the surviving history
            beliefs = uniform_prior(self.model)
            for obs in session.history:
                beliefs = posterior_update(beliefs, obs)
            session.beliefs = beliefs
            view = self._state_view(session)
        self._journal({"event": "undo", "id": session_id})
        return view

    def reveal(self, session_id: str) -> dict[str, Any]:
        session = self._get(session_id)
        with session.lock:
            session.revealed = True
            view = self._state_view(session)
        self._journal({"event": "reveal", "id": session_id})
        return view

    def state(self, session_id: str) -> dict[str, Any]:
        session = self._get(session_id)
        with session.lock:
            return self._state_view(session)

    # -- helpers ------------------------------------------------------------

    def _get(self, session_id: str) -> GameSession:
        with self._registry_lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise _not_found(session_id)
        return session

    def _draw_secret(self, seed: int | None) -> int:
        if seed is None:
            return secrets.randbelow(self.model.num_boxes)
        rng = np.random.Generator(np.random.PCG64(seed))
        return int(rng.integers(0, self.model.num_boxes))

    def _state_view(self, session: GameSession) -> dict[str, Any]:
        summary = session.summary()
        probs = session.beliefs.probabilities
        mode_box = session.beliefs.mode()
        # odds of each box against the favorite, in [0, 1]: excluded
        # boxes give exactly 0, the favorite itself 1
        lw = session.beliefs.log_weights
        odds = np.exp(lw - lw[mode_box])
        view: dict[str, Any] = {
            "posterior": [float(p) for p in probs],
            "predictiveWhite": predictive_white(session.beliefs),
            "frequencyWhite": frequency_estimate(summary),
            "laplaceWhite": laplace_rule(summary),
            "oddsVsMostProbable": [float(o) for o in odds],
            "historyLength": summary.n,
            "historySummary": {"n": summary.n, "x": summary.x},
            "revealed": session.revealed,
        }
        if session.revealed:
            view["secretBox"] = session.secret_box
        return view

    def _journal(self, event: dict[str, Any]) -> None:
        if self._journal_path is None or self._replaying:
            return
        line = json.dumps(event, separators=(",", ":"))
        with self._journal_lock:
            with self._journal_path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()

    def _replay_journal(self) -> None:
        assert self._journal_path is not None
        with self._journal_path.open(encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                    kind = event["event"]
                    if kind == "create":
                        if event["m"] != self.model.m:
                            raise ValueError(
                                f"journal written for m={event['m']}, server runs m={self.model.m}"
                            )
                        session = self._install(
                            event["id"], event["mode"], event["secretBox"]
                        )
                        session.created_at = event["createdAt"]
                    elif kind == "observe":
                        self.observe(
                            event["id"],
                            Color.WHITE if event["color"] == "W" else Color.BLACK,
                        )
                    elif kind == "undo":
                        self.undo(event["id"])
                    elif kind == "reveal":
                        self.reveal(event["id"])
                    else:
                        raise ValueError(f"unknown event {kind!r}")
                except (KeyError, ValueError, ApiError) as exc:
                    raise ValueError(
                        f"{self._journal_path}:{line_no}: corrupt journal entry: {exc}"
                    ) from exc


def _json(payload: Any, status: int = 200) -> JSONResponse:
    return JSONResponse(content=jsonable(payload), status_code=status)


def _error_response(exc: ApiError) -> JSONResponse:
    return JSONResponse(
        content={"error": exc.code, "message": exc.message}, status_code=exc.status
    )


def _parse_color(payload: Any) -> Color:
    if not isinstance(payload, dict) or "color" not in payload:
        raise ApiError(400, "bad_request", 'body must be JSON {"color": "B"|"W"}')
    token = payload["color"]
    if token == "B":
        return Color.BLACK
    if token == "W":
        return Color.WHITE
    raise ApiError(400, "bad_request", f'color must be "B" or "W", got {token!r}')


def create_app(
    model: BoxModel | None = None,
    journal_path: str | Path | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Build the game service, optionally also serving the web client's files."""
    store = SessionStore(model or BoxModel(), journal_path=journal_path)
    app = FastAPI(title="sixbox live game", version="0.1.0")
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError) -> JSONResponse:
        return _error_response(exc)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(
        request: Request, exc: RequestValidationError
    ) -> JSONResponse:
        return _error_response(ApiError(400, "bad_request", str(exc.errors())))

    @app.get("/healthz")
    def healthz() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "bad_request", "body must be a JSON object")
        if not isinstance(body, dict):
            raise ApiError(400, "bad_request", "body must be a JSON object")
        mode = body.get("mode", "random-secret")
        session = store.create(mode, box=body.get("box"), seed=body.get("seed"))
        return _json({"id": session.id}, status=201)

    @app.get("/sessions/{session_id}/state")
    def session_state(session_id: str) -> JSONResponse:
        return _json(store.state(session_id))

    @app.post("/sessions/{session_id}/observe")
    async def session_observe(session_id: str, request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "bad_request", 'body must be JSON {"color": "B"|"W"}')
        return _json(store.observe(session_id, _parse_color(body)))

    @app.post("/sessions/{session_id}/undo")
    def session_undo(session_id: str) -> JSONResponse:
        return _json(store.undo(session_id))

    @app.post("/sessions/{session_id}/reveal")
    def session_reveal(session_id: str) -> JSONResponse:
        return _json(store.reveal(session_id))

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
