"""HTTP + websocket service: registration, ingestion, broadcast, recovery.

Per video there is exactly one writer: every mutation (danmaku submit,
settings change, heartbeat) runs under the video's lock, appends to the
event log, and only then fans out to subscribers. Startup replays the logs
to restore engines and seq counters.
"""

from __future__ import annotations

import asyncio
import secrets
import time
from collections import deque
from contextlib import asynccontextmanager
from dataclasses import dataclass, field

from fastapi import FastAPI, Query, Request, WebSocket
from fastapi.responses import JSONResponse
from starlette.staticfiles import StaticFiles

from . import generate, topics
from .config import ServiceConfig
from .emotion import HttpClassifier, LexiconClassifier, load_lexicon
from .engine import AdminSettings, SettingsError, VideoEngine, template_generator
from .generate import GenerationConstraints, HttpChatClient, generate_caption
from .ingest import (
    DisplayMode,
    EmptyText,
    IngestError,
    MalformedXml,
    normalize,
    parse_bilibili_xml,
)
from .store import DuplicateVideoId, EventStore, InvalidVideoId, VideoRecord
from .wire import (
    EventType,
    StreamEvent,
    caption_payload,
    danmaku_payload,
    encode_event,
    heartbeat_payload,
    make_event,
    message_from_payload,
    settings_payload,
)


def now_ms() -> int:
    return int(time.time() * 1000)


class RateLimiter:
    """Rolling 1-second window per client key."""

    def __init__(self, per_second: float):
        self.limit = per_second
        self._hits: dict[str, deque] = {}

    def allow(self, key: str, now: float | None = None) -> bool:
        if now is None:
            now = time.monotonic()
        dq = self._hits.setdefault(key, deque())
        while dq and now - dq[0] >= 1.0:
            dq.popleft()
        if len(dq) >= self.limit:
            return False
        dq.append(now)
        return True


@dataclass
class VideoState:
    record: VideoRecord
    engine: VideoEngine
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    next_seq: int = 1
    danmaku_count: int = 0
    subscribers: set = field(default_factory=set)
    last_emit: float = 0.0
    heartbeat_task: asyncio.Task | None = None


class Service:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = EventStore(config.data_dir)
        lexicon = load_lexicon(config.lexicon_path or None)
        base = LexiconClassifier(lexicon)
        if config.emotion_endpoint:
            self.classifier = HttpClassifier(config.emotion_endpoint, fallback=base)
        else:
            self.classifier = base
        self.chat_client = (
            HttpChatClient(config.chat_endpoint, config.chat_auth_token)
            if config.chat_endpoint else None
        )
        self.rate_limiter = RateLimiter(config.rate_limit_per_s)
        self.videos: dict[str, VideoState] = {}
        self.reload_wordlists()

    def reload_wordlists(self) -> None:
        self.banned_terms = generate.load_banned_terms(
            self.config.banned_terms_path or None
        )
        if self.config.phrases_path:
            self.phrases = generate.load_phrases(self.config.phrases_path)
        else:
            self.phrases = None

    def make_generator(self, vstate: VideoState):
        def gen(request):
            client = None
            if vstate.engine.settings.caption_backend == "llm":
                client = self.chat_client
            constraints = GenerationConstraints.for_style(
                request.style, request.theme, banned_terms=self.banned_terms
            )
            if client is not None:
                return generate_caption(request, client, constraints)
            return generate.fallback_caption(
                request.style, request.pov, request.theme,
                request.dominant_label, seed=request.seed,
                constraints=constraints, phrases=self.phrases,
            )
        return gen

    def load_model(self, record: VideoRecord):
        if record.model_ref:
            try:
                return topics.load_model(record.model_ref)
            except (OSError, ValueError):
                return None
        return None

    def add_video(self, record: VideoRecord) -> VideoState:
        engine = VideoEngine(
            record.video_id, record.settings, self.load_model(record),
            self.classifier, seed=self.config.seed,
        )
        vstate = VideoState(record=record, engine=engine)
        engine.generator = self.make_generator(vstate)
        self.videos[record.video_id] = vstate
        return vstate

    def recover(self) -> None:
        """Rebuild every video's engine and seq counter from its log."""
        for video_id, record in self.store.videos().items():
            vstate = self.add_video(record)
            # Replay with the pure template generator: already-logged captions
            # are not re-emitted, and startup must not call endpoints.
            live_generator = vstate.engine.generator
            vstate.engine.generator = template_generator
            events, _discarded = self.store.read_events(video_id)
            for _wall, event in events:
                if event.type is EventType.DANMAKU:
                    vstate.engine.feed(message_from_payload(event.payload))
                    vstate.danmaku_count += 1
                elif event.type is EventType.SETTINGS:
                    vstate.engine.update_settings(
                        AdminSettings.from_dict(event.payload)
                    )
            vstate.engine.generator = live_generator
            if events:
                vstate.next_seq = events[-1][1].seq + 1

    async def emit(self, vstate: VideoState, type_: EventType,
                   payload: dict) -> StreamEvent:
        """Append one event durably, then broadcast. Caller holds the lock."""
        event = make_event(type_, vstate.next_seq, payload)
        await asyncio.to_thread(
            self.store.append_event, vstate.record.video_id, now_ms(), event
        )
        vstate.next_seq += 1
        vstate.last_emit = asyncio.get_running_loop().time()
        line = encode_event(event)
        for queue in vstate.subscribers:
            queue.put_nowait(line)
        return event

    async def heartbeat_loop(self, vstate: VideoState) -> None:
        interval = self.config.heartbeat_interval_s
        if vstate.last_emit == 0.0:
            vstate.last_emit = asyncio.get_running_loop().time()
        while True:
            await asyncio.sleep(interval / 2)
            async with vstate.lock:
                idle = asyncio.get_running_loop().time() - vstate.last_emit
                if vstate.subscribers and idle >= interval:
                    await self.emit(vstate, EventType.HEARTBEAT, heartbeat_payload())

    def start_heartbeat(self, vstate: VideoState) -> None:
        if vstate.heartbeat_task is None:
            vstate.heartbeat_task = asyncio.create_task(self.heartbeat_loop(vstate))

    async def shutdown(self) -> None:
        for vstate in self.videos.values():
            if vstate.heartbeat_task is not None:
                vstate.heartbeat_task.cancel()
        self.store.close()


def _error(status: int, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def create_app(config: ServiceConfig) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        svc = Service(config)
        svc.recover()
        app.state.svc = svc
        for vstate in svc.videos.values():
            svc.start_heartbeat(vstate)
        try:
            yield
        finally:
            await svc.shutdown()

    app = FastAPI(title="impactcap", lifespan=lifespan)

    def svc(request) -> Service:
        return request.app.state.svc

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/api/videos")
    async def register_video(request: Request):
        service = svc(request)
        try:
            body = await request.json()
        except Exception:
            return _error(400, "body must be JSON")
        if not isinstance(body, dict):
            return _error(400, "body must be a JSON object")
        video_id = str(body.get("video_id") or f"video-{secrets.token_hex(6)}")
        try:
            settings = AdminSettings.from_dict(
                body.get("settings") or {}, base=config.default_settings
            )
        except SettingsError as exc:
            return _error(422, f"settings: {exc}")
        try:
            record = VideoRecord(
                video_id=video_id,
                title=str(body.get("title", "")),
                duration_ms=int(body.get("duration_ms", 0)),
                settings=settings,
            )
        except (TypeError, ValueError) as exc:
            return _error(400, f"bad metadata: {exc}")
        message_count = 0
        xml = body.get("preloaded_log_xml")
        log = None
        if xml:
            try:
                log = parse_bilibili_xml(str(xml).encode("utf-8"), video_id=video_id)
            except MalformedXml as exc:
                return _error(400, f"preloaded log: {exc}")
            message_count = len(log.messages)
        try:
            service.store.register(record)
        except DuplicateVideoId:
            return _error(409, f"duplicate video_id: {video_id}")
        except InvalidVideoId as exc:
            return _error(400, str(exc))
        if log is not None:
            log_path = service.store.root / f"{video_id}.preloaded.xml"
            log_path.write_bytes(str(xml).encode("utf-8"))
            model_path = service.store.model_path(video_id)
            try:
                corpus = topics.corpus_from_messages(log.messages)
                model = await asyncio.to_thread(
                    topics.fit_lda, corpus, seed=config.seed
                )
                topics.save_model(model, model_path)
                record = VideoRecord(
                    video_id=video_id, title=record.title,
                    duration_ms=record.duration_ms, settings=settings,
                    model_ref=str(model_path),
                    preloaded_log_ref=str(log_path),
                )
                service.store.update_record(record)
            except topics.EmptyCorpus:
                pass
        vstate = service.add_video(record)
        service.start_heartbeat(vstate)
        return {"video": record.to_dict(), "message_count": message_count}

    @app.get("/api/videos")
    async def list_videos(request: Request):
        service = svc(request)
        return {
            "videos": [
                {
                    "video_id": v.record.video_id,
                    "title": v.record.title,
                    "duration_ms": v.record.duration_ms,
                    "danmaku_count": v.danmaku_count,
                }
                for v in service.videos.values()
            ]
        }

    @app.get("/api/videos/{video_id}")
    async def get_video(video_id: str, request: Request):
        service = svc(request)
        vstate = service.videos.get(video_id)
        if vstate is None:
            return _error(404, f"unknown video: {video_id}")
        doc = vstate.record.to_dict()
        doc["settings"] = settings_payload(vstate.engine.settings)
        doc["danmaku_count"] = vstate.danmaku_count
        doc["next_seq"] = vstate.next_seq
        return doc

    @app.post("/api/videos/{video_id}/danmaku")
    async def submit_danmaku(video_id: str, request: Request):
        service = svc(request)
        vstate = service.videos.get(video_id)
        if vstate is None:
            return _error(404, f"unknown video: {video_id}")
        client_key = request.headers.get("x-client-id") or (
            request.client.host if request.client else "unknown"
        )
        if not service.rate_limiter.allow(client_key):
            return _error(429, "rate limited: too many messages in one second")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "body must be JSON")
        if not isinstance(body, dict):
            return _error(400, "body must be a JSON object")
        async with vstate.lock:
            seq = vstate.next_seq
            try:
                mode = DisplayMode(body.get("display_mode", "scroll"))
            except ValueError:
                return _error(400, f"bad display_mode: {body.get('display_mode')!r}")
            try:
                message = normalize(
                    str(body.get("text", "")),
                    id=seq,
                    video_id=video_id,
                    video_time_ms=int(body.get("video_time_ms", 0)),
                    wall_time_ms=now_ms(),
                    user_hash=str(body.get("user_hash", "")),
                    display_color=int(body.get("display_color", 0xFFFFFF)),
                    display_mode=mode,
                )
            except (EmptyText, IngestError, TypeError, ValueError) as exc:
                return _error(400, f"bad danmaku: {exc}")
            await service.emit(vstate, EventType.DANMAKU, danmaku_payload(message))
            vstate.danmaku_count += 1
            results = await asyncio.to_thread(vstate.engine.feed, message)
            for result in results:
                if result.entry is not None:
                    await service.emit(
                        vstate, EventType.CAPTION,
                        caption_payload(result.entry.caption),
                    )
        return {"id": message.id, "seq": seq}

    @app.get("/api/videos/{video_id}/settings")
    async def get_settings(video_id: str, request: Request):
        service = svc(request)
        vstate = service.videos.get(video_id)
        if vstate is None:
            return _error(404, f"unknown video: {video_id}")
        return settings_payload(vstate.engine.target_settings)

    @app.put("/api/videos/{video_id}/settings")
    async def put_settings(video_id: str, request: Request):
        service = svc(request)
        vstate = service.videos.get(video_id)
        if vstate is None:
            return _error(404, f"unknown video: {video_id}")
        token = service.config.moderator_token
        if token:
            header = request.headers.get("authorization", "")
            if not header.startswith("Bearer "):
                return _error(401, "moderator token required")
            if header.removeprefix("Bearer ").strip() != token:
                return _error(403, "bad moderator token")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "body must be JSON")
        if not isinstance(body, dict):
            return _error(400, "body must be a JSON object")
        async with vstate.lock:
            try:
                settings = AdminSettings.from_dict(
                    body, base=vstate.engine.target_settings
                )
            except SettingsError as exc:
                return _error(422, f"invalid settings: {exc}")
            vstate.engine.update_settings(settings)
            service.reload_wordlists()
            await service.emit(
                vstate, EventType.SETTINGS, settings_payload(settings)
            )
        return settings_payload(settings)

    @app.get("/api/videos/{video_id}/captions")
    async def get_captions(video_id: str, request: Request,
                           from_ms: int | None = Query(default=None),
                           to_ms: int | None = Query(default=None)):
        service = svc(request)
        vstate = service.videos.get(video_id)
        if vstate is None:
            return _error(404, f"unknown video: {video_id}")
        async with vstate.lock:
            events, _ = await asyncio.to_thread(
                service.store.read_events, video_id
            )
        captions = []
        for _wall, event in events:
            if event.type is not EventType.CAPTION:
                continue
            render = event.payload["render"]
            if to_ms is not None and render["display_start_ms"] >= to_ms:
                continue
            if from_ms is not None and render["display_end_ms"] <= from_ms:
                continue
            captions.append(event.payload)
        return {"captions": captions}

    @app.websocket("/ws/videos/{video_id}")
    async def stream(websocket: WebSocket, video_id: str,
                     from_seq: int | None = Query(default=None)):
        service: Service = websocket.app.state.svc
        vstate = service.videos.get(video_id)
        await websocket.accept()
        if vstate is None:
            await websocket.close(code=4404, reason=f"unknown video: {video_id}")
            return
        queue: asyncio.Queue = asyncio.Queue()
        async with vstate.lock:
            if from_seq is not None:
                events, _ = await asyncio.to_thread(
                    service.store.read_events, video_id
                )
                for _wall, event in events:
                    if event.seq >= from_seq:
                        queue.put_nowait(encode_event(event))
            vstate.subscribers.add(queue)

        async def sender():
            while True:
                line = await queue.get()
                await websocket.send_text(line)

        send_task = asyncio.create_task(sender())
        try:
            while True:
                message = await websocket.receive()
                if message["type"] == "websocket.disconnect":
                    break
        finally:
            send_task.cancel()
            vstate.subscribers.discard(queue)

    # Mounted last so /api, /ws, and /healthz keep precedence.
    if config.static_dir:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True),
                  name="static")

    return app
