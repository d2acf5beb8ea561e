"""HTTP admin plane plus the WebSocket chat endpoint.

All admin routes require ``Authorization: Bearer <token>``.  The
WebSocket endpoint speaks the exact same line protocol as the TCP
plane: one frame per text message, starting with a login frame.
"""

from __future__ import annotations

import logging

from fastapi import Depends, FastAPI, Header, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import BaseModel

from .lexicon import InvalidWord, LexiconError, UnknownCategory
from .server import AuthorBlocked, ChatServer, ConnectionDriver, Transport
from .store import UnknownUser
from .timefmt import to_rfc3339

logger = logging.getLogger(__name__)


class AddWordRequest(BaseModel):
    word: str
    category: str = "offensive"


class ModerateRequest(BaseModel):
    author: str
    text: str


class WebSocketTransport(Transport):
    def __init__(self, websocket: WebSocket) -> None:
        self._websocket = websocket

    async def send_line(self, line: str) -> None:
        await self._websocket.send_text(line)

    async def close(self) -> None:
        try:
            await self._websocket.close()
        except RuntimeError:
            pass  # already closed


def build_app(core: ChatServer) -> FastAPI:
    app = FastAPI(title="flameguard admin", docs_url=None, redoc_url=None)

    def require_admin(authorization: str | None = Header(default=None)) -> None:
        token = core.config.admin_token
        if not token:
            raise HTTPException(status_code=401, detail="admin token not configured")
        if authorization != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="unauthorized")

    admin = [Depends(require_admin)]

    @app.get("/lexicon", dependencies=admin)
    async def get_lexicon() -> dict:
        entries = [
            {"word": e.word, "category": e.category.value}
            for e in core.lexicon.entries()
        ]
        return {"count": len(entries), "entries": entries}

    @app.post("/lexicon", dependencies=admin)
    async def post_lexicon(request: AddWordRequest) -> dict:
        try:
            return await core.admin_add_word(request.word, request.category)
        except (InvalidWord, UnknownCategory, LexiconError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

    @app.get("/users", dependencies=admin)
    async def get_users() -> dict:
        return {"users": core.list_users()}

    @app.post("/users/{name}/unblock", dependencies=admin)
    async def post_unblock(name: str) -> dict:
        try:
            state = core.store.unblock(name)
        except UnknownUser:
            raise HTTPException(status_code=404, detail=f"unknown user {name!r}") from None
        return {"name": state.name, "count": state.count, "blocked_until": None}

    @app.post("/users/{name}/reset", dependencies=admin)
    async def post_reset(name: str) -> dict:
        try:
            state = core.store.admin_reset(name)
        except UnknownUser:
            raise HTTPException(status_code=404, detail=f"unknown user {name!r}") from None
        return {"name": state.name, "count": state.count, "blocked_until": None}

    @app.post("/moderate", dependencies=admin)
    async def post_moderate(request: ModerateRequest) -> dict:
        try:
            verdict = await core.moderate_post(request.author, request.text)
        except AuthorBlocked as exc:
            raise HTTPException(
                status_code=403,
                detail={
                    "error": "author blocked",
                    "blocked_until": to_rfc3339(exc.until),
                },
            ) from None
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return {
            "action": verdict.action.value,
            "masked_text": verdict.masked_text,
            "new_count": verdict.new_count,
            "intensity": verdict.intensity,
            "matched": verdict.matched.words(),
        }

    @app.websocket("/ws")
    async def websocket_chat(websocket: WebSocket) -> None:
        await websocket.accept()
        transport = WebSocketTransport(websocket)
        driver = ConnectionDriver(core, transport)
        try:
            while True:
                line = await websocket.receive_text()
                if not await driver.feed_line(line.rstrip("\r\n")):
                    break
        except WebSocketDisconnect:
            await driver.connection_lost()
        finally:
            await transport.close()

    static_dir = core.config.static_dir
    if static_dir is not None and static_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        # mounted last so the API routes above take precedence
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")

    return app
