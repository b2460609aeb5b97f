"""World state as a pure fold over the event log.

The log is authoritative; this module only projects it. Folding the same
events over the same initial ledgers always yields the same snapshot, which
is what makes replay verification byte-exact.
"""

from __future__ import annotations

from typing import Mapping

from .events import Event, EventKind, canonical_json
from .model import (
    InventoryLedger,
    OrderStatus,
    ORDER_TRANSITIONS,
    apply_inventory_delta,
)


class FoldError(Exception):
    """An event stream inconsistent with the fold's invariants."""


def _advance_status(order: dict, new: OrderStatus) -> None:
    current = OrderStatus(order["status"])
    if new not in ORDER_TRANSITIONS[current]:
        raise FoldError(
            f"{order['order_id']}: illegal status change {current.value} -> {new.value}"
        )
    order["status"] = new.value


class WorldState:
    """Mutable projection of the log; one instance per simulation or replay."""

    def __init__(self, initial_ledgers: Mapping[str, InventoryLedger]):
        self.ledgers: dict[str, InventoryLedger] = dict(initial_ledgers)
        self.orders: dict[str, dict] = {}
        self.conversations: dict[str, dict] = {}
        self.vehicles: dict[str, dict] = {}
        self.sensors: dict[str, dict] = {}
        self.assessments: dict[str, dict] = {}
        self.chat_count = 0
        self.sim_time = 0.0
        self.last_seq = 0

    # -- fold ---------------------------------------------------------------

    def apply(self, event: Event) -> None:
        if event.seq != self.last_seq + 1:
            raise FoldError(f"expected seq {self.last_seq + 1}, got {event.seq}")
        handler = getattr(self, "_on_" + event.kind.name.lower(), None)
        if handler is not None:
            handler(event.payload)
        self.last_seq = event.seq
        self.sim_time = event.sim_time

    def _on_order_placed(self, p: Mapping) -> None:
        self.orders[p["order_id"]] = {
            "order_id": p["order_id"],
            "buyer": p["buyer"],
            "seller": None,
            "lines_kg": dict(p["lines_kg"]),
            "status": OrderStatus.DRAFT.value,
            "created_at": p["created_at"],
            "process": p["process"],
            "trigger": p["trigger"],
        }

    def _on_cfp_issued(self, p: Mapping) -> None:
        self.conversations[p["conv_id"]] = {
            "conv_id": p["conv_id"],
            "initiator": p["initiator"],
            "purpose": p["purpose"],
            "participants": list(p["participants"]),
            "deadline": p["deadline"],
            "phase": "Collecting",
            "responses": {pid: {"state": "Pending"} for pid in p["participants"]},
            "winner": None,
        }
        if "order_id" in p:
            _advance_status(self.orders[p["order_id"]], OrderStatus.NEGOTIATING)

    def _on_proposal_submitted(self, p: Mapping) -> None:
        conv = self.conversations[p["conv_id"]]
        conv["responses"][p["participant"]] = {
            "state": "Proposed",
            "bid": p["total_price"],
        }

    def _on_proposal_refused(self, p: Mapping) -> None:
        conv = self.conversations[p["conv_id"]]
        conv["responses"][p["participant"]] = {"state": "Refused"}

    def _on_proposal_accepted(self, p: Mapping) -> None:
        conv = self.conversations[p["conv_id"]]
        conv["phase"] = "Awarded"
        conv["winner"] = p["winner"]
        for slot in conv["responses"].values():
            if slot["state"] == "Pending":
                slot["state"] = "Expired"
        if "order_id" in p:
            order = self.orders[p["order_id"]]
            _advance_status(order, OrderStatus.AWARDED)
            order["seller"] = p["winner"]

    def _on_proposal_rejected(self, p: Mapping) -> None:
        pass  # the losing slot keeps its Proposed record

    def _on_shipment_dispatched(self, p: Mapping) -> None:
        seller = p["seller"]
        ledger = self.ledgers[seller]
        for product, kg in p["lines_kg"].items():
            ledger, _ = apply_inventory_delta(ledger, product, -kg)
        self.ledgers[seller] = ledger
        self.vehicles[p["shipment_id"]] = {
            "shipment_id": p["shipment_id"],
            "order_id": p["order_id"],
            "tracking_number": p["tracking_number"],
            "carrier": p["carrier"],
            "logistics": p["logistics"],
            "seller": seller,
            "buyer": p["buyer"],
            "lines_kg": dict(p["lines_kg"]),
            "route": {
                "waypoints": [list(w) for w in p["route"]["waypoints"]],
                "speed_kmh": p["route"]["speed_kmh"],
            },
            "quoted_eta_s": p["quoted_eta_s"],
            "position": list(p["route"]["waypoints"][0]),
            "progress": 0.0,
            "status": "EnRoute",
            "alerts": 0,
        }
        _advance_status(self.orders[p["order_id"]], OrderStatus.IN_TRANSIT)

    def _on_vehicle_moved(self, p: Mapping) -> None:
        vehicle = self.vehicles[p["shipment_id"]]
        if p["progress"] < vehicle["progress"]:
            raise FoldError(f"{p['shipment_id']}: progress went backwards")
        vehicle["position"] = list(p["position"])
        vehicle["progress"] = p["progress"]

    def _on_sensor_reading(self, p: Mapping) -> None:
        per_shipment = self.sensors.setdefault(p["shipment_id"], {})
        per_shipment[p["kind"]] = {"value": p["value"], "unit": p["unit"]}

    def _on_ambient_alert(self, p: Mapping) -> None:
        self.vehicles[p["shipment_id"]]["alerts"] += 1

    def _on_shipment_delivered(self, p: Mapping) -> None:
        vehicle = self.vehicles[p["shipment_id"]]
        vehicle["status"] = "Arrived"
        vehicle["progress"] = 1.0
        vehicle["position"] = list(vehicle["route"]["waypoints"][-1])
        _advance_status(self.orders[p["order_id"]], OrderStatus.DELIVERED)

    def _on_inventory_updated(self, p: Mapping) -> None:
        ledger = self.ledgers[p["owner"]]
        for product, delta_kg in p["changes"].items():
            ledger, _ = apply_inventory_delta(ledger, product, delta_kg)
        self.ledgers[p["owner"]] = ledger
        for product, expected_kg in p["balances"].items():
            actual = ledger.on_hand_kg(product)
            if abs(actual - expected_kg) > 1e-9:
                raise FoldError(
                    f"{p['owner']}: folded balance {actual} kg for {product} "
                    f"disagrees with event balance {expected_kg} kg"
                )

    def _on_delivery_assessed(self, p: Mapping) -> None:
        self.assessments[p["shipment_id"]] = {
            "shipment_id": p["shipment_id"],
            "order_id": p["order_id"],
            "carrier": p["carrier"],
            "on_time": p["on_time"],
            "violation_fraction": p["violation_fraction"],
            "score": p["score"],
        }

    def _on_chat_message(self, p: Mapping) -> None:
        self.chat_count += 1
        conv = self.conversations.get(p["conv_id"])
        if conv is None:
            return
        if p["performative"] == "INFORM_DONE" and conv["phase"] == "Awarded":
            conv["phase"] = "Completed"
        elif p["performative"] == "FAILURE" and conv["phase"] == "Awarded":
            conv["phase"] = "Failed"
            conv["winner"] = None

    def _on_process_failed(self, p: Mapping) -> None:
        order = self.orders.get(p["order_id"])
        if order is not None:
            _advance_status(order, OrderStatus.FAILED)
        conv_id = p.get("conv_id")
        if conv_id and conv_id in self.conversations:
            conv = self.conversations[conv_id]
            if conv["phase"] in ("Collecting", "Awarded"):
                conv["phase"] = "Failed"
                conv["winner"] = None
                for slot in conv["responses"].values():
                    if slot["state"] == "Pending":
                        slot["state"] = "Expired"

    # -- projections ----------------------------------------------------------

    def snapshot(self) -> dict:
        """The full queryable state; equal folds give equal snapshots."""
        return {
            "sim_time": self.sim_time,
            "last_seq": self.last_seq,
            "ledgers": {
                owner: ledger.balances_kg() for owner, ledger in self.ledgers.items()
            },
            "orders": {oid: dict(o) for oid, o in self.orders.items()},
            "conversations": {
                cid: {
                    **c,
                    "participants": list(c["participants"]),
                    "responses": {pid: dict(s) for pid, s in c["responses"].items()},
                }
                for cid, c in self.conversations.items()
            },
            "vehicles": {sid: dict(v) for sid, v in self.vehicles.items()},
            "sensors": {
                sid: {kind: dict(r) for kind, r in per.items()}
                for sid, per in self.sensors.items()
            },
            "assessments": {sid: dict(a) for sid, a in self.assessments.items()},
        }

    def snapshot_json(self) -> str:
        return canonical_json(self.snapshot())


def fold(initial_ledgers: Mapping[str, InventoryLedger], events) -> WorldState:
    state = WorldState(initial_ledgers)
    for event in events:
        state.apply(event)
    return state
