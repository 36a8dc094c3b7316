"""Serve-mode runtime: a loop thread owns the scheduler; HTTP handlers talk to
it through a serialized command queue. Snapshot reads happen at
loop-quiescent points between ticks."""

from __future__ import annotations

import queue
import threading
from typing import Any, Callable, Optional

from ..host.runtime import ScenarioRuntime
from ..trace import TraceRecord

DEFAULT_PACE_SIM_MS = 100
DEFAULT_LOOP_SLEEP_S = 0.02


class _Command:
    def __init__(self, fn: Callable[[], Any]):
        self.fn = fn
        self.done = threading.Event()
        self.result: Any = None
        self.error: Optional[BaseException] = None


class ServeRuntime:
    """Wraps a ScenarioRuntime for concurrent callers."""

    def __init__(self, runtime: ScenarioRuntime, until: int,
                 pace_sim_ms: int = DEFAULT_PACE_SIM_MS,
                 loop_sleep_s: float = DEFAULT_LOOP_SLEEP_S):
        self.runtime = runtime
        self.until = until
        self.pace_sim_ms = pace_sim_ms
        self.loop_sleep_s = loop_sleep_s
        self._commands: "queue.Queue[_Command]" = queue.Queue()
        self._subscribers: list["queue.Queue[TraceRecord]"] = []
        self._subscribers_lock = threading.Lock()
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None
        runtime.trace.subscribe(self._fanout)
        self._started = False

    # ------------------------------------------------------------------
    def _fanout(self, record: TraceRecord) -> None:
        with self._subscribers_lock:
            for q in self._subscribers:
                q.put(record)

    def subscribe(self) -> "queue.Queue[TraceRecord]":
        q: "queue.Queue[TraceRecord]" = queue.Queue()
        with self._subscribers_lock:
            for record in self.runtime.trace.records:
                q.put(record)
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q) -> None:
        with self._subscribers_lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    # ------------------------------------------------------------------
    def start(self) -> None:
        if self._started:
            return
        self._started = True
        self._thread = threading.Thread(target=self._loop, name="autonet-loop",
                                        daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5.0)

    def _loop(self) -> None:
        self.runtime.step(0)
        while not self._stop.is_set():
            self._drain_commands()
            now = self.runtime.now
            if now < self.until:
                target = min(self.until, now + self.pace_sim_ms)
                nxt = self.runtime.next_time()
                if nxt is not None and nxt <= target:
                    self.runtime.step(max(nxt, now))
                else:
                    self.runtime.step(target)
            else:
                # horizon reached: the clock idles, but operator submissions
                # still drive agent work
                nxt = self.runtime.next_time()
                pending = any(agent.has_pending_work()
                              for agent in self.runtime.agents.values())
                if nxt is not None or pending:
                    self.runtime.step(max(self.runtime.now + 1, nxt or 0))
            self._stop.wait(self.loop_sleep_s)
        self._drain_commands()

    def _drain_commands(self) -> None:
        while True:
            try:
                command = self._commands.get_nowait()
            except queue.Empty:
                return
            try:
                command.result = command.fn()
            except BaseException as exc:   # surfaced to the calling thread
                command.error = exc
            command.done.set()

    # ------------------------------------------------------------------
    def call(self, fn: Callable[[], Any], timeout: float = 10.0) -> Any:
        """Run ``fn`` on the loop thread and return its result."""
        if not self._started:
            self.start()
        command = _Command(fn)
        self._commands.put(command)
        if not command.done.wait(timeout):
            raise TimeoutError("runtime loop did not answer in time")
        if command.error is not None:
            raise command.error
        return command.result
