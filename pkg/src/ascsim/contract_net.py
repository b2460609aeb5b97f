"""Contract Net negotiation: announce, bid, award, report.

One conversation negotiates one task. The initiator broadcasts a call for
proposals, participants answer with a priced proposal or a refusal before
the deadline, the initiator awards to the cheapest bid (ties broken by
lexicographically smallest entity id), and the winner reports completion
or failure. One-shot: there are no counter-proposal rounds.

Everything here is pure; conversations are immutable values advanced by
the simulation loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from types import MappingProxyType
from typing import Any, Mapping


class Phase(str, Enum):
    ISSUED = "Issued"
    COLLECTING = "Collecting"
    AWARDED = "Awarded"
    COMPLETED = "Completed"
    FAILED = "Failed"


class Performative(str, Enum):
    CFP = "CFP"
    PROPOSE = "PROPOSE"
    REFUSE = "REFUSE"
    ACCEPT = "ACCEPT"
    REJECT = "REJECT"
    INFORM_DONE = "INFORM_DONE"
    FAILURE = "FAILURE"


class SlotState(str, Enum):
    PENDING = "Pending"
    PROPOSED = "Proposed"
    REFUSED = "Refused"
    EXPIRED = "Expired"


class ProtocolError(Exception):
    pass


class NoParticipants(ProtocolError):
    pass


class DuplicateParticipant(ProtocolError):
    pass


class DeadlineInPast(ProtocolError):
    pass


class UnknownParticipant(ProtocolError):
    pass


class DuplicateResponse(ProtocolError):
    pass


class WrongPhase(ProtocolError):
    pass


class NotWinner(ProtocolError):
    pass


@dataclass(frozen=True)
class Slot:
    """One participant's response slot."""

    state: SlotState = SlotState.PENDING
    bid: float | None = None  # total price, set only when state is Proposed


@dataclass(frozen=True)
class ProtocolMessage:
    conv_id: str
    performative: Performative
    sender: str
    receiver: str
    body: Mapping[str, Any]
    sim_time: float

    def to_payload(self) -> dict:
        """Shape shared by ChatMessage events and the chat API."""
        return {
            "conv_id": self.conv_id,
            "performative": self.performative.value,
            "sender": self.sender,
            "receiver": self.receiver,
            "body": dict(self.body),
        }


@dataclass(frozen=True)
class AwardPolicy:
    criterion: str = "lowest_total_price"
    tie_break: str = "lexicographic_entity_id"

    def __post_init__(self) -> None:
        if self.criterion != "lowest_total_price":
            raise ValueError(f"unsupported criterion: {self.criterion}")
        if self.tie_break != "lexicographic_entity_id":
            raise ValueError(f"unsupported tie_break: {self.tie_break}")


@dataclass(frozen=True)
class Conversation:
    conv_id: str
    initiator: str
    task: Mapping[str, Any]
    participants: tuple[str, ...]
    deadline: float
    phase: Phase = Phase.ISSUED
    responses: Mapping[str, Slot] = field(default_factory=dict)
    winner: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "task", MappingProxyType(dict(self.task)))
        object.__setattr__(self, "responses", MappingProxyType(dict(self.responses)))

    def slot(self, participant: str) -> Slot:
        return self.responses[participant]

    def proposed(self) -> dict[str, float]:
        """Participant -> bid for every Proposed slot."""
        return {
            pid: slot.bid
            for pid, slot in self.responses.items()
            if slot.state is SlotState.PROPOSED
        }

    def unresolved(self) -> list[str]:
        return [p for p in self.participants if self.responses[p].state is SlotState.PENDING]


def issue_cfp(
    conv_id: str,
    initiator: str,
    task: Mapping[str, Any],
    participants: list[str],
    deadline: float,
    now: float = 0.0,
) -> tuple[Conversation, list[ProtocolMessage]]:
    """Open a conversation and address one CFP to every participant."""
    if not participants:
        raise NoParticipants(conv_id)
    if len(set(participants)) != len(participants):
        raise DuplicateParticipant(conv_id)
    if deadline <= now:
        raise DeadlineInPast(f"{conv_id}: deadline {deadline} not after {now}")
    conv = Conversation(
        conv_id=conv_id,
        initiator=initiator,
        task=task,
        participants=tuple(participants),
        deadline=deadline,
        phase=Phase.COLLECTING,
        responses={p: Slot() for p in participants},
    )
    messages = [
        ProtocolMessage(conv_id, Performative.CFP, initiator, p, dict(task), now)
        for p in participants
    ]
    return conv, messages


def receive_response(conv: Conversation, msg: ProtocolMessage) -> Conversation:
    """Record a PROPOSE or REFUSE.

    A response after the deadline marks the slot Expired and drops the bid;
    that is a normal outcome, not an error.
    """
    if conv.phase is not Phase.COLLECTING:
        raise WrongPhase(f"{conv.conv_id}: cannot receive responses in {conv.phase.value}")
    if msg.performative not in (Performative.PROPOSE, Performative.REFUSE):
        raise ProtocolError(f"{conv.conv_id}: unexpected performative {msg.performative.value}")
    if msg.sender not in conv.responses:
        raise UnknownParticipant(f"{conv.conv_id}: {msg.sender}")
    if conv.responses[msg.sender].state is not SlotState.PENDING:
        raise DuplicateResponse(f"{conv.conv_id}: {msg.sender} already responded")

    responses = dict(conv.responses)
    if msg.sim_time > conv.deadline:
        responses[msg.sender] = Slot(SlotState.EXPIRED)
    elif msg.performative is Performative.PROPOSE:
        bid = float(msg.body["total_price"])
        responses[msg.sender] = Slot(SlotState.PROPOSED, bid)
    else:
        responses[msg.sender] = Slot(SlotState.REFUSED)
    return replace(conv, responses=responses)


def select_winner(bids: Mapping[str, float]) -> str:
    """Lowest total price; equal prices go to the smallest entity id."""
    return min(bids, key=lambda pid: (bids[pid], pid))


def award(
    conv: Conversation,
    policy: AwardPolicy,
    now: float | None = None,
) -> tuple[Conversation, list[ProtocolMessage]]:
    """Close collecting and pick a winner.

    Legal once every slot is resolved, or once the deadline has passed
    (``now`` supplies the clock for the deadline check; remaining Pending
    slots are then marked Expired). With at least one proposal the cheapest
    wins and everyone else who proposed gets a REJECT; with none the
    conversation fails and no messages are sent.
    """
    if conv.phase is not Phase.COLLECTING:
        raise WrongPhase(f"{conv.conv_id}: cannot award in {conv.phase.value}")
    pending = conv.unresolved()
    if pending:
        if now is None or now < conv.deadline:
            raise WrongPhase(
                f"{conv.conv_id}: {len(pending)} responses still pending before deadline"
            )
        responses = dict(conv.responses)
        for pid in pending:
            responses[pid] = Slot(SlotState.EXPIRED)
        conv = replace(conv, responses=responses)

    when = conv.deadline if now is None else now
    bids = conv.proposed()
    if not bids:
        return replace(conv, phase=Phase.FAILED), []

    winner = select_winner(bids)
    messages = [
        ProtocolMessage(
            conv.conv_id, Performative.ACCEPT, conv.initiator, winner,
            {"total_price": bids[winner]}, when,
        )
    ]
    for pid in sorted(bids):
        if pid != winner:
            messages.append(
                ProtocolMessage(
                    conv.conv_id, Performative.REJECT, conv.initiator, pid,
                    {"total_price": bids[pid]}, when,
                )
            )
    return replace(conv, phase=Phase.AWARDED, winner=winner), messages


def complete(conv: Conversation, msg: ProtocolMessage) -> Conversation:
    """Record the winner's INFORM_DONE or FAILURE report."""
    if conv.phase is not Phase.AWARDED:
        raise WrongPhase(f"{conv.conv_id}: cannot complete in {conv.phase.value}")
    if msg.sender != conv.winner:
        raise NotWinner(f"{conv.conv_id}: report from {msg.sender}, winner is {conv.winner}")
    if msg.performative is Performative.INFORM_DONE:
        return replace(conv, phase=Phase.COMPLETED)
    if msg.performative is Performative.FAILURE:
        # A failed conversation carries no winner, whoever reported.
        return replace(conv, phase=Phase.FAILED, winner=None)
    raise ProtocolError(f"{conv.conv_id}: unexpected performative {msg.performative.value}")
