"""Controlled intent grammar.

    intent      = verb [article] metric "of" target [change | comparison] [constraint]
    verb        = "reduce" | "increase" | "ensure" | "report"
    metric      = "latency" | "utilization" | "loss" | "kpis"
    target      = "region" NAME | ["service"] NAME
    change      = "by" NUMBER unit
    comparison  = ("<" | "<=" | "under" | "below") NUMBER ["ms"]
    unit        = "ms" | "%" | "percent"
    constraint  = "without affecting other kpis"

Rejects carry the offending token span as character offsets.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class IntentVerb(str, Enum):
    REDUCE = "REDUCE"
    INCREASE = "INCREASE"
    ENSURE = "ENSURE"
    REPORT = "REPORT"


_METRIC_UNITS = {
    "latency": {"ms", "percent"},
    "utilization": {"percent"},
    "loss": {"ms", "percent"},
    "kpis": set(),
}


class IntentParseError(Exception):
    def __init__(self, message: str, span: tuple[int, int]):
        super().__init__(f"{message} (chars {span[0]}..{span[1]})")
        self.reason = message
        self.span = span


@dataclass
class Intent:
    verb: IntentVerb
    metric: str
    target_kind: str                 # "service" | "region"
    target: str
    amount: Optional[float] = None
    unit: Optional[str] = None
    comparator: Optional[str] = None
    side_constraints: list[str] = field(default_factory=list)
    text: str = ""

    def describe(self) -> dict:
        return {"verb": self.verb.value, "metric": self.metric,
                "target_kind": self.target_kind, "target": self.target,
                "amount": self.amount, "unit": self.unit,
                "comparator": self.comparator,
                "side_constraints": list(self.side_constraints)}


@dataclass
class _Token:
    text: str
    start: int
    end: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    for match in re.finditer(r"<=|<|[%]|[\w.+-]+", text):
        tokens.append(_Token(match.group(0).lower(), match.start(), match.end()))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[_Token], text: str):
        self.tokens = tokens
        self.text = text
        self.i = 0

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> _Token:
        token = self.peek()
        if token is None:
            raise IntentParseError("unexpected end of input",
                                   (len(self.text), len(self.text)))
        self.i += 1
        return token

    def skip(self, *words: str) -> None:
        while (token := self.peek()) is not None and token.text in words:
            self.i += 1

    def error(self, message: str) -> IntentParseError:
        token = self.peek()
        span = (token.start, token.end) if token else (len(self.text), len(self.text))
        return IntentParseError(message, span)


def parse_intent(text: str) -> Intent:
    tokens = _tokenize(text)
    if not tokens:
        raise IntentParseError("UNPARSEABLE: empty input", (0, 0))
    cur = _Cursor(tokens, text)

    verb_token = cur.take()
    try:
        verb = IntentVerb(verb_token.text.upper())
    except ValueError:
        raise IntentParseError(f"UNPARSEABLE: unknown verb {verb_token.text!r}",
                               (verb_token.start, verb_token.end)) from None

    cur.skip("the")
    metric_token = cur.take()
    if metric_token.text not in _METRIC_UNITS:
        raise IntentParseError(f"UNPARSEABLE: unknown metric {metric_token.text!r}",
                               (metric_token.start, metric_token.end))
    metric = metric_token.text

    of = cur.take()
    if of.text != "of":
        raise IntentParseError("UNPARSEABLE: expected 'of'", (of.start, of.end))

    target_kind = "service"
    head = cur.take()
    if head.text == "region":
        target_kind = "region"
        head = cur.take()
    elif head.text == "service":
        head = cur.take()
    target = head.text.upper()

    amount: Optional[float] = None
    unit: Optional[str] = None
    comparator: Optional[str] = None
    constraints: list[str] = []

    while (token := cur.peek()) is not None:
        if token.text == "by":
            cur.take()
            amount, unit = _amount(cur)
        elif token.text in ("<", "<=", "under", "below"):
            cur.take()
            comparator = "<" if token.text in ("<", "under", "below") else "<="
            amount, unit = _amount(cur)
            unit = unit or "ms"
        elif token.text == "without":
            rest_start = token.start
            rest = text[token.start:].lower()
            if "without affecting other kpis" not in rest:
                raise IntentParseError("UNPARSEABLE: unsupported constraint",
                                       (rest_start, len(text)))
            constraints.append("without affecting other KPIs")
            break
        else:
            raise cur.error(f"UNPARSEABLE: unexpected token {token.text!r}")

    if amount is not None and (math.isnan(amount) or math.isinf(amount)):
        raise IntentParseError("amount must be finite", (0, len(text)))
    if unit is not None and unit not in _METRIC_UNITS[metric]:
        raise IntentParseError(f"unit {unit!r} does not match metric {metric!r}",
                               (0, len(text)))
    if verb in (IntentVerb.REDUCE, IntentVerb.INCREASE) and amount is None:
        raise cur.error("UNPARSEABLE: expected 'by <amount> <unit>'")
    if verb is IntentVerb.ENSURE and comparator is None:
        raise cur.error("UNPARSEABLE: expected a bound such as '< 10 ms'")

    return Intent(verb=verb, metric=metric, target_kind=target_kind, target=target,
                  amount=amount, unit=unit, comparator=comparator,
                  side_constraints=constraints, text=text)


def _amount(cur: _Cursor) -> tuple[float, Optional[str]]:
    token = cur.take()
    number_text = token.text
    unit: Optional[str] = None
    if number_text.endswith("%"):
        number_text = number_text[:-1]
        unit = "percent"
    try:
        value = float(number_text)
    except ValueError:
        raise IntentParseError(f"UNPARSEABLE: expected a number, got {token.text!r}",
                               (token.start, token.end)) from None
    if unit is None:
        nxt = cur.peek()
        if nxt is not None and nxt.text in ("ms", "%", "percent"):
            cur.take()
            unit = "percent" if nxt.text in ("%", "percent") else "ms"
    return value, unit
