"""Append-only event log and canonical serialization.

Every observable fact of a simulation run is an Event. The log is the system
of record: world state is a pure fold over it, and two runs are considered
identical exactly when their serialized logs are byte-identical. Canonical
JSON (sorted keys, no whitespace, raw unicode) is what makes that comparison
meaningful.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, Iterator, Mapping


class EventKind(str, Enum):
    ORDER_PLACED = "OrderPlaced"
    CFP_ISSUED = "CfpIssued"
    PROPOSAL_SUBMITTED = "ProposalSubmitted"
    PROPOSAL_REFUSED = "ProposalRefused"
    PROPOSAL_ACCEPTED = "ProposalAccepted"
    PROPOSAL_REJECTED = "ProposalRejected"
    SHIPMENT_DISPATCHED = "ShipmentDispatched"
    VEHICLE_MOVED = "VehicleMoved"
    SENSOR_READING = "SensorReading"
    AMBIENT_ALERT = "AmbientAlert"
    SHIPMENT_DELIVERED = "ShipmentDelivered"
    INVENTORY_UPDATED = "InventoryUpdated"
    DELIVERY_ASSESSED = "DeliveryAssessed"
    CHAT_MESSAGE = "ChatMessage"
    PROCESS_FAILED = "ProcessFailed"


class EventLogError(Exception):
    pass


class SequenceGap(EventLogError):
    pass


def canonical_json(obj: Any) -> str:
    """Serialize with sorted keys, compact separators, and raw unicode."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _round_floats(value: Any) -> Any:
    # Floats pass through json.dumps with repr-shortest form, which is
    # already deterministic; nothing to normalize beyond rejecting NaN/inf.
    if isinstance(value, float) and (value != value or value in (float("inf"), float("-inf"))):
        raise ValueError("event payloads must not contain NaN or infinity")
    if isinstance(value, Mapping):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(v) for v in value]
    return value


@dataclass(frozen=True)
class Event:
    """One immutable fact: sequence number, simulated time, kind, actor, payload."""

    seq: int
    sim_time: float
    kind: EventKind
    actor: str
    payload: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "sim_time": self.sim_time,
            "kind": self.kind.value,
            "actor": self.actor,
            "payload": _round_floats(dict(self.payload)),
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @staticmethod
    def from_dict(raw: Mapping[str, Any]) -> "Event":
        return Event(
            seq=int(raw["seq"]),
            sim_time=float(raw["sim_time"]),
            kind=EventKind(raw["kind"]),
            actor=str(raw["actor"]),
            payload=dict(raw.get("payload", {})),
        )


class EventLog:
    """In-memory append-only log with gapless sequence numbers from 1."""

    def __init__(self) -> None:
        self._events: list[Event] = []
        self._listeners: list[Callable[[Event], None]] = []

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self._events)

    @property
    def last_seq(self) -> int:
        return len(self._events)

    def append(self, sim_time: float, kind: EventKind, actor: str, payload: Mapping[str, Any]) -> Event:
        if self._events and sim_time < self._events[-1].sim_time:
            raise EventLogError(
                f"sim_time went backwards: {sim_time} after {self._events[-1].sim_time}"
            )
        event = Event(
            seq=len(self._events) + 1,
            sim_time=_round_floats(float(sim_time)),
            kind=kind,
            actor=actor,
            payload=_round_floats(dict(payload)),
        )
        self._events.append(event)
        for listener in self._listeners:
            listener(event)
        return event

    def subscribe(self, listener: Callable[[Event], None]) -> None:
        """Register a callback invoked synchronously on every append."""
        self._listeners.append(listener)

    def since(self, seq: int) -> list[Event]:
        """Events with sequence number strictly greater than ``seq``."""
        if seq < 0:
            seq = 0
        return self._events[seq:]

    def to_ndjson(self) -> str:
        buf = io.StringIO()
        for event in self._events:
            buf.write(event.to_json())
            buf.write("\n")
        return buf.getvalue()


def verify_sequence(events: Iterable[Event]) -> None:
    """Raise SequenceGap unless seq runs 1, 2, 3, ... without holes."""
    expected = 1
    for event in events:
        if event.seq != expected:
            raise SequenceGap(f"expected seq {expected}, got {event.seq}")
        expected += 1


def write_ndjson(path, events: Iterable[Event]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for event in events:
            fh.write(event.to_json())
            fh.write("\n")


def read_ndjson(path) -> list[Event]:
    events: list[Event] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            events.append(Event.from_dict(json.loads(line)))
    verify_sequence(events)
    return events
