"""Discrete-event core: logical clock, action queue, and the Simulation shell.

The clock fires queued actions in (fire_time, tie_seq) order, so a run is
fully determined by the order in which actions are scheduled. Randomness
enters only through named generator streams derived from the scenario seed;
negotiation logic never touches them.
"""

from __future__ import annotations

import heapq
import itertools
import random
import threading
from collections import deque
from typing import Any, Callable, Mapping

from .events import Event, EventKind, EventLog
from .model import InventoryLedger
from .state import WorldState
from .telemetry import named_rng


class ScheduleError(Exception):
    pass


class SimClock:
    """Priority queue of pending actions plus the current simulated time."""

    def __init__(self) -> None:
        self.now = 0.0
        self._heap: list[tuple[float, int, Callable[[], None]]] = []
        self._tie = itertools.count(1)

    @property
    def pending(self) -> int:
        return len(self._heap)

    def peek_time(self) -> float | None:
        return self._heap[0][0] if self._heap else None

    def schedule(self, fire_time: float, action: Callable[[], None]) -> None:
        fire_time = float(fire_time)
        if fire_time < self.now:
            raise ScheduleError(f"cannot schedule at {fire_time}, clock is at {self.now}")
        heapq.heappush(self._heap, (fire_time, next(self._tie), action))

    def advance(self, until: float) -> None:
        """Fire every action due at or before ``until``; clock ends at ``until``.

        Actions may schedule further actions, including at the current
        instant; those fire within the same call when still due.
        """
        until = float(until)
        if until < self.now:
            raise ScheduleError(f"cannot advance to {until}, clock is at {self.now}")
        while self._heap and self._heap[0][0] <= until:
            fire_time, _, action = heapq.heappop(self._heap)
            self.now = fire_time
            action()
        self.now = until


class Simulation:
    """Clock + event log + folded state + deterministic id/rng sources.

    Not thread-safe by itself: the service layer funnels all mutation through
    ``submit`` and drains commands between advances under its own lock.
    """

    def __init__(self, seed: int, initial_ledgers: Mapping[str, InventoryLedger]):
        self.seed = seed
        self.clock = SimClock()
        self.log = EventLog()
        self.state = WorldState(initial_ledgers)
        self.log.subscribe(self.state.apply)
        self._rngs: dict[str, random.Random] = {}
        self._counters: dict[str, itertools.count] = {}
        self._commands: deque[Callable[["Simulation"], None]] = deque()
        self._command_lock = threading.Lock()

    # -- deterministic sources ------------------------------------------------

    def rng(self, name: str) -> random.Random:
        """The named random stream; created on first use, stable thereafter."""
        stream = self._rngs.get(name)
        if stream is None:
            stream = self._rngs[name] = named_rng(self.seed, name)
        return stream

    def next_id(self, prefix: str, width: int = 4) -> str:
        counter = self._counters.get(prefix)
        if counter is None:
            counter = self._counters[prefix] = itertools.count(1)
        return f"{prefix}-{next(counter):0{width}d}"

    # -- event emission ---------------------------------------------------------

    def emit(self, kind: EventKind, actor: str, payload: Mapping[str, Any]) -> Event:
        return self.log.append(self.clock.now, kind, actor, payload)

    def schedule(self, at: float, action: Callable[[], None]) -> None:
        self.clock.schedule(at, action)

    def schedule_in(self, delay: float, action: Callable[[], None]) -> None:
        self.clock.schedule(self.clock.now + delay, action)

    # -- external commands -------------------------------------------------------

    def submit(self, command: Callable[["Simulation"], None]) -> None:
        """Queue a mutation from outside the loop (thread-safe, FIFO)."""
        with self._command_lock:
            self._commands.append(command)

    def drain_commands(self) -> int:
        """Apply queued commands in arrival order; returns how many ran."""
        ran = 0
        while True:
            with self._command_lock:
                if not self._commands:
                    return ran
                command = self._commands.popleft()
            command(self)
            ran += 1

    # -- driving ------------------------------------------------------------------

    def advance(self, until: float) -> list[Event]:
        """Advance the clock, returning the events emitted along the way."""
        before = self.log.last_seq
        self.clock.advance(until)
        return self.log.since(before)

    def run_until_quiet(self, until: float | None = None) -> list[Event]:
        """Fire everything due (optionally capped at ``until``); return new events."""
        before = self.log.last_seq
        while True:
            next_time = self.clock.peek_time()
            if next_time is None:
                break
            if until is not None and next_time > until:
                break
            self.clock.advance(next_time)
        if until is not None and until > self.clock.now:
            self.clock.advance(until)
        return self.log.since(before)
