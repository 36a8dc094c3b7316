"""Pydantic request/response models for the HTTP surface. Schemas versioned."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field

API_SCHEMA_VERSION = 1


class IntentRequest(BaseModel):
    text: str


class GoalRequest(BaseModel):
    id: str
    kind: str
    service: Optional[str] = None
    weight: float = 1.0
    claims: dict[str, float] = Field(default_factory=dict)
    deadline_class: str = "S"
    params: dict[str, Any] = Field(default_factory=dict)


class ActionRequest(BaseModel):
    kind: str
    service: Optional[str] = None
    ne: Optional[str] = None
    in_port: Optional[str] = None
    out_port: Optional[str] = None
    role: Optional[str] = None
    nodes: list[str] = Field(default_factory=list)


class FeedbackRequest(BaseModel):
    feedback: str
    subject: Optional[str] = None


class TakeoverRequest(BaseModel):
    enabled: bool


class SolveRequest(BaseModel):
    text: str
    context: dict[str, Any] = Field(default_factory=dict)


class ReceiptResponse(BaseModel):
    schema_version: int = API_SCHEMA_VERSION
    destination: str
    trace_id: str
    accepted: bool
    detail: dict[str, Any] = Field(default_factory=dict)


class SolveResponse(BaseModel):
    schema_version: int = API_SCHEMA_VERSION
    answer: Optional[str]
    backend: str
    confidence: float
    detail: dict[str, Any] = Field(default_factory=dict)


class SnapshotResponse(BaseModel):
    schema_version: int = API_SCHEMA_VERSION
    t: int
    services: dict[str, Any]
    alarms: list[dict[str, Any]]
    resources: dict[str, Any]
    goals: list[dict[str, Any]]
    rta: dict[str, Any]
    pending_human: list[dict[str, Any]]
    takeover: bool


class ErrorResponse(BaseModel):
    schema_version: int = API_SCHEMA_VERSION
    error: str
    detail: Optional[str] = None
    span: Optional[list[int]] = None
