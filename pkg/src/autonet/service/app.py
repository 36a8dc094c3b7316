"""FastAPI application exposing the human-agent interaction contract.

Endpoints: GET /snapshot, POST /intent, /goal, /action, /feedback,
/takeover, /solve; WebSocket /events streams trace records.
"""

from __future__ import annotations

import asyncio
import queue

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from ..hai.intents import IntentParseError
from ..hai.solver import SolverRequest
from ..reactive.goals import Goal
from ..simnet.model import Action, ActionKind, RouteRole
from .schemas import (
    ActionRequest,
    API_SCHEMA_VERSION,
    ErrorResponse,
    FeedbackRequest,
    GoalRequest,
    IntentRequest,
    ReceiptResponse,
    SnapshotResponse,
    SolveRequest,
    SolveResponse,
    TakeoverRequest,
)
from .serve import ServeRuntime


def create_app(serve: ServeRuntime) -> FastAPI:
    app = FastAPI(title="autonet HAI service", version=str(API_SCHEMA_VERSION))
    app.state.serve = serve

    def hai():
        agent = serve.runtime.hai_agent()
        if agent is None or agent.hai is None:
            raise RuntimeError("no agent exposes HAI in this phase")
        return agent.hai

    def receipt_response(receipt) -> ReceiptResponse:
        return ReceiptResponse(destination=receipt.destination,
                               trace_id=receipt.trace_id,
                               accepted=receipt.accepted, detail=receipt.detail)

    @app.exception_handler(IntentParseError)
    async def _parse_error(request, exc: IntentParseError):
        body = ErrorResponse(error="UNPARSEABLE", detail=exc.reason,
                             span=list(exc.span))
        return JSONResponse(status_code=422, content=body.model_dump())

    @app.get("/snapshot", response_model=SnapshotResponse)
    def snapshot() -> SnapshotResponse:
        snap = serve.call(lambda: hai().snapshot())
        return SnapshotResponse(t=snap.t, services=snap.services, alarms=snap.alarms,
                                resources=snap.resources, goals=snap.goals,
                                rta=snap.rta, pending_human=snap.pending_human,
                                takeover=snap.takeover)

    @app.post("/intent", response_model=ReceiptResponse)
    def post_intent(body: IntentRequest) -> ReceiptResponse:
        intent = hai().parse_intent(body.text)
        return receipt_response(serve.call(lambda: hai().submit(intent)))

    @app.post("/goal", response_model=ReceiptResponse)
    def post_goal(body: GoalRequest) -> ReceiptResponse:
        goal = Goal(id=body.id, kind=body.kind, service=body.service,
                    weight=body.weight, claims=body.claims,
                    deadline_class=body.deadline_class, params=body.params,
                    origin="HUMAN")
        return receipt_response(serve.call(lambda: hai().submit(goal)))

    @app.post("/action", response_model=ReceiptResponse)
    def post_action(body: ActionRequest) -> ReceiptResponse:
        action = Action(kind=ActionKind(body.kind), service=body.service,
                        ne=body.ne, in_port=body.in_port, out_port=body.out_port,
                        role=RouteRole(body.role) if body.role else None,
                        nodes=tuple(body.nodes))
        return receipt_response(serve.call(lambda: hai().submit(action)))

    @app.post("/feedback", response_model=ReceiptResponse)
    def post_feedback(body: FeedbackRequest) -> ReceiptResponse:
        item = {"feedback": body.feedback, "subject": body.subject}
        return receipt_response(serve.call(lambda: hai().submit(item)))

    @app.post("/takeover", response_model=ReceiptResponse)
    def post_takeover(body: TakeoverRequest) -> ReceiptResponse:
        return receipt_response(serve.call(lambda: hai().takeover(body.enabled)))

    @app.post("/solve", response_model=SolveResponse)
    def post_solve(body: SolveRequest) -> SolveResponse:
        request = SolverRequest(text=body.text, context=body.context)
        response = serve.call(lambda: hai().solve(request))
        return SolveResponse(answer=response.answer, backend=response.backend.value,
                             confidence=response.confidence, detail=response.detail)

    @app.websocket("/events")
    async def events(ws: WebSocket) -> None:
        await ws.accept()
        q = serve.subscribe()
        try:
            while True:
                try:
                    record = q.get_nowait()
                except queue.Empty:
                    await asyncio.sleep(0.02)
                    continue
                await ws.send_json({"seq": record.seq, "t": record.t,
                                    "agent": record.agent, "stage": record.stage,
                                    "payload": record.payload})
        except WebSocketDisconnect:
            pass
        finally:
            serve.unsubscribe(q)

    return app
