"""Role behaviors and the two case-study processes.

A Coordinator drives replenishment (wholesaler restocks from suppliers) and
wholesale (retailer buys from the wholesaler) over a Simulation. Each process
chains five automated functions: supplier selection (Contract Net over the
sellers), inventory updating, logistics arrangement (a nested Contract Net —
seller auctions to logistics companies, the winner auctions to its 3PL
providers), transportation monitoring, and delivery service assessment.

After the initial order placement no human input is consumed; everything
below runs off scheduled actions and recorded events.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from . import contract_net as cn
from .engine import Simulation
from .events import EventKind
from .model import (
    InventoryLedger,
    Role,
    StructuralEntity,
    apply_inventory_delta,
    kg_to_g,
    reorder_check,
)
from .scenario import Scenario
from .telemetry import (
    Route,
    detect_violation,
    next_sensor_reading,
    vehicle_position,
)


class NoProposals(Exception):
    pass


def money(amount: float) -> float:
    return round(amount, 2)


# -- pure decision functions ----------------------------------------------------


def supplier_handle_cfp(
    entity: StructuralEntity, ledger: InventoryLedger, lines_kg: Mapping[str, float]
) -> tuple[str, float | str]:
    """A seller's answer to a call for proposals.

    Returns ("propose", total_price) when the catalog offers every line and
    current stock covers it; otherwise ("refuse", reason). Refusal is the
    error channel, never an exception.
    """
    total = 0.0
    lines_g = {}
    for product, kg in lines_kg.items():
        offer = entity.offer_for(product)
        if offer is None:
            return ("refuse", "not-offered")
        total += money(offer.unit_price * kg)
        lines_g[product] = kg_to_g(kg)
    if not ledger.covers(lines_g):
        return ("refuse", "insufficient-stock")
    return ("propose", money(total))


def buyer_select_supplier(proposals: Mapping[str, float]) -> str:
    """Cheapest bid wins; ties go to the smallest entity id."""
    if not proposals:
        raise NoProposals("no proposals to select from")
    return cn.select_winner(proposals)


def logistics_quote(entity: StructuralEntity, distance_km: float) -> float:
    base = entity.params.get("base_fee", 0.0)
    rate = entity.params.get("rate_per_km", 1.0)
    return money(base + rate * distance_km)


def carrier_quote(entity: StructuralEntity, distance_km: float) -> float:
    rate = entity.params.get("rate_per_km", 1.0)
    return money(rate * distance_km)


def carrier_speed_kmh(entity: StructuralEntity) -> float:
    return entity.params.get("speed_kmh", 50.0)


@dataclass(frozen=True)
class DeliveryAssessment:
    shipment_id: str
    on_time: bool
    violation_fraction: float
    score: float
    flags: tuple[str, ...] = ()


def assess_delivery(
    shipment_id: str,
    *,
    on_time: bool,
    violations: int,
    readings: int,
    weights: tuple[float, float],
) -> DeliveryAssessment:
    """Score = clamp(1 − w_late·late − w_viol·violation_fraction, 0, 1).

    Zero recorded readings is not an error: the fraction is taken as 0 and
    the assessment carries a no_telemetry flag instead.
    """
    w_late, w_viol = weights
    flags: tuple[str, ...] = ()
    if readings <= 0:
        fraction = 0.0
        flags = ("no_telemetry",)
    else:
        fraction = violations / readings
    late = 0.0 if on_time else 1.0
    score = 1.0 - w_late * late - w_viol * fraction
    score = min(1.0, max(0.0, score))
    return DeliveryAssessment(shipment_id, on_time, fraction, score, flags)


# -- orchestration ---------------------------------------------------------------


@dataclass
class _ConvCtx:
    conv: cn.Conversation
    purpose: str
    order_id: str
    tag_order: bool  # whether this conversation's events carry the order id
    bidder: Callable[[str], tuple[str, float | str]]
    on_award: Callable[[str, float], None]
    on_fail: Callable[[str], None]


@dataclass
class _OrderCtx:
    order_id: str
    buyer: str
    lines_kg: dict[str, float]
    process: str
    trigger: str
    seller: str | None = None
    logistics: str | None = None
    carrier: str | None = None
    shipment_id: str | None = None
    tracking_number: str | None = None
    route: Route | None = None
    dispatched_at: float | None = None
    quoted_eta_s: float | None = None
    readings: int = 0
    violations: int = 0
    done: bool = False
    conv_ids: dict[str, str] = field(default_factory=dict)  # purpose -> conv_id
    sensor_values: dict[str, float] = field(default_factory=dict)


class Coordinator:
    """Schedules and reacts; holds the live protocol objects per conversation."""

    def __init__(self, sim: Simulation, scenario: Scenario, install_initial: bool = True):
        self.sim = sim
        self.scenario = scenario
        self.network = scenario.network
        self.policy = cn.AwardPolicy()
        self.orders: dict[str, _OrderCtx] = {}
        self._convs: dict[str, _ConvCtx] = {}
        # products already being replenished per buyer, to stop duplicate
        # auto-reorders while one is in flight
        self._covered: dict[str, set[str]] = {}
        # products whose last automatic attempt failed; retried only after
        # stock for them changes again
        self._blocked: dict[str, set[str]] = {}
        sim.log.subscribe(self._after_event)
        if install_initial:
            for initial in scenario.initial_orders:
                lines = dict(initial.lines_kg) if initial.lines_kg else scenario.default_lines_kg()
                sim.schedule(
                    initial.at,
                    lambda b=initial.buyer, l=lines, t=initial.trigger: self.place_order(b, l, t),
                )

    # -- order entry -------------------------------------------------------------

    def place_order(self, buyer: str, lines_kg: Mapping[str, float], trigger: str = "manual-launch") -> str:
        entity = self.network.entity(buyer)
        if entity.role not in (Role.WHOLESALER, Role.RETAILER):
            raise ValueError(f"{buyer}: role {entity.role.value} cannot place purchase orders")
        lines = {p: float(kg) for p, kg in lines_kg.items()}
        if not lines or any(kg <= 0 for kg in lines.values()):
            raise ValueError("order lines must be positive quantities")
        unknown = [p for p in lines if p not in self.scenario.products]
        if unknown:
            raise ValueError(f"unknown products: {', '.join(sorted(unknown))}")
        seller_role = Role.SUPPLIER if entity.role is Role.WHOLESALER else Role.WHOLESALER
        if not self.network.neighbors(buyer, seller_role):
            raise ValueError(f"{buyer}: no connected {seller_role.value} to buy from")

        process = "replenishment" if entity.role is Role.WHOLESALER else "wholesale"
        order_id = self.sim.next_id("ORD")
        octx = _OrderCtx(order_id, buyer, lines, process, trigger)
        self.orders[order_id] = octx
        self._covered.setdefault(buyer, set()).update(lines)
        self.sim.emit(
            EventKind.ORDER_PLACED,
            buyer,
            {
                "order_id": order_id,
                "buyer": buyer,
                "lines_kg": lines,
                "trigger": trigger,
                "process": process,
                "created_at": self.sim.clock.now,
            },
        )
        self.sim.schedule_in(self.scenario.timing.stage_delay_s, lambda: self._select_seller(octx))
        return order_id

    # -- stage 1: supplier selection ------------------------------------------------

    def _select_seller(self, octx: _OrderCtx) -> None:
        # place_order guarantees at least one connected counterparty
        buyer_entity = self.network.entity(octx.buyer)
        seller_role = Role.SUPPLIER if buyer_entity.role is Role.WHOLESALER else Role.WHOLESALER
        sellers = [e.id for e in self.network.neighbors(octx.buyer, seller_role)]

        def bidder(pid: str) -> tuple[str, float | str]:
            return supplier_handle_cfp(
                self.network.entity(pid), self.sim.state.ledgers[pid], octx.lines_kg
            )

        self._start_conversation(
            octx,
            purpose="supplier-selection",
            initiator=octx.buyer,
            participants=sellers,
            task={"order_id": octx.order_id, "lines_kg": dict(octx.lines_kg)},
            tag_order=True,
            bidder=bidder,
            on_award=lambda winner, price: self._seller_awarded(octx, winner, price),
            on_fail=lambda reason: self._fail(octx, reason, conv_id=octx.conv_ids.get("supplier-selection")),
        )

    def _seller_awarded(self, octx: _OrderCtx, winner: str, price: float) -> None:
        octx.seller = winner
        self.sim.schedule_in(
            self.scenario.timing.stage_delay_s, lambda: self._arrange_logistics(octx)
        )

    # -- stage 2: delivery arrangement (nested Contract Net) --------------------------

    def _arrange_logistics(self, octx: _OrderCtx) -> None:
        companies = [e.id for e in self.network.neighbors(octx.seller, Role.LOGISTICS)]
        if not companies:
            self._fail(octx, "no logistics company reachable from seller")
            return
        route = self.scenario.route_between(octx.seller, octx.buyer)
        distance = route.length_km
        task = {
            "order_id": octx.order_id,
            "from": octx.seller,
            "to": octx.buyer,
            "lines_kg": dict(octx.lines_kg),
            "distance_km": distance,
        }

        self._start_conversation(
            octx,
            purpose="logistics",
            initiator=octx.seller,
            participants=companies,
            task=task,
            tag_order=False,
            bidder=lambda pid: ("propose", logistics_quote(self.network.entity(pid), distance)),
            on_award=lambda winner, price: self._arrange_carrier(octx, winner, route, task),
            on_fail=lambda reason: self._fail(octx, reason, conv_id=octx.conv_ids.get("logistics")),
        )

    def _arrange_carrier(self, octx: _OrderCtx, logistics_id: str, route: Route, task: dict) -> None:
        octx.logistics = logistics_id

        def start() -> None:
            carriers = [
                e.id for e in self.network.neighbors(logistics_id, Role.THIRD_PARTY_LOGISTICS)
            ]
            if not carriers:
                self._fail(octx, "no 3PL provider reachable from logistics company")
                return
            self._start_conversation(
                octx,
                purpose="third-party-logistics",
                initiator=logistics_id,
                participants=carriers,
                task={**task, "logistics": logistics_id},
                tag_order=False,
                bidder=lambda pid: (
                    "propose",
                    carrier_quote(self.network.entity(pid), route.length_km),
                ),
                on_award=lambda winner, price: self._carrier_awarded(octx, winner, route),
                on_fail=lambda reason: self._fail(
                    octx, reason, conv_id=octx.conv_ids.get("third-party-logistics")
                ),
            )

        self.sim.schedule_in(self.scenario.timing.stage_delay_s, start)

    def _carrier_awarded(self, octx: _OrderCtx, carrier: str, route: Route) -> None:
        octx.carrier = carrier
        self.sim.schedule_in(
            self.scenario.timing.stage_delay_s, lambda: self._dispatch(octx, route)
        )

    # -- stage 3: transport with telemetry ----------------------------------------------

    def _dispatch(self, octx: _OrderCtx, route: Route) -> None:
        now = self.sim.clock.now
        octx.shipment_id = self.sim.next_id("SHP")
        octx.tracking_number = self.sim.next_id("TRK", width=8)
        octx.route = route
        octx.dispatched_at = now
        quoted_speed = carrier_speed_kmh(self.network.entity(octx.carrier))
        octx.quoted_eta_s = route.length_km / quoted_speed * 3600.0
        for profile in self.scenario.sensor_profiles:
            octx.sensor_values[profile.kind] = profile.start_value

        self.sim.emit(
            EventKind.SHIPMENT_DISPATCHED,
            octx.carrier,
            {
                "shipment_id": octx.shipment_id,
                "order_id": octx.order_id,
                "tracking_number": octx.tracking_number,
                "seller": octx.seller,
                "buyer": octx.buyer,
                "carrier": octx.carrier,
                "logistics": octx.logistics,
                "lines_kg": dict(octx.lines_kg),
                "route": {
                    "waypoints": [list(w) for w in route.waypoints],
                    "speed_kmh": route.speed_kmh,
                },
                "quoted_eta_s": octx.quoted_eta_s,
            },
        )
        arrival_at = now + route.duration_s()
        period = self.scenario.timing.telemetry_period_s
        first_tick = now + period
        if first_tick < arrival_at:
            self.sim.schedule(first_tick, lambda: self._tick(octx, arrival_at))
        self.sim.schedule(arrival_at, lambda: self._deliver(octx))

    def _tick(self, octx: _OrderCtx, arrival_at: float) -> None:
        now = self.sim.clock.now
        position, progress = vehicle_position(octx.route, now - octx.dispatched_at)
        self.sim.emit(
            EventKind.VEHICLE_MOVED,
            octx.carrier,
            {
                "shipment_id": octx.shipment_id,
                "order_id": octx.order_id,
                "tracking_number": octx.tracking_number,
                "position": list(position),
                "progress": progress,
            },
        )
        for profile in self.scenario.sensor_profiles:
            rng = self.sim.rng(f"sensor:{octx.shipment_id}:{profile.kind}")
            value = next_sensor_reading(profile, octx.sensor_values[profile.kind], rng)
            octx.sensor_values[profile.kind] = value
            octx.readings += 1
            self.sim.emit(
                EventKind.SENSOR_READING,
                octx.carrier,
                {
                    "shipment_id": octx.shipment_id,
                    "order_id": octx.order_id,
                    "kind": profile.kind,
                    "value": value,
                    "unit": profile.unit,
                },
            )
            violation = detect_violation(profile.kind, value, profile.safe_range)
            if violation is not None:
                octx.violations += 1
                self.sim.emit(
                    EventKind.AMBIENT_ALERT,
                    octx.carrier,
                    {
                        "shipment_id": octx.shipment_id,
                        "order_id": octx.order_id,
                        "unit": profile.unit,
                        "safe_range": list(profile.safe_range),
                        **violation.to_payload(),
                    },
                )
        next_tick = now + self.scenario.timing.telemetry_period_s
        if next_tick < arrival_at:
            self.sim.schedule(next_tick, lambda: self._tick(octx, arrival_at))

    # -- stage 4: delivery, inventory update, assessment ---------------------------------

    def _deliver(self, octx: _OrderCtx) -> None:
        now = self.sim.clock.now
        destination = octx.route.waypoints[-1]
        self.sim.emit(
            EventKind.VEHICLE_MOVED,
            octx.carrier,
            {
                "shipment_id": octx.shipment_id,
                "order_id": octx.order_id,
                "tracking_number": octx.tracking_number,
                "position": list(destination),
                "progress": 1.0,
            },
        )
        self.sim.emit(
            EventKind.SHIPMENT_DELIVERED,
            octx.carrier,
            {
                "shipment_id": octx.shipment_id,
                "order_id": octx.order_id,
                "tracking_number": octx.tracking_number,
            },
        )

        # completion reports close the three conversations innermost-first
        self._report_done(octx, "third-party-logistics")
        self._report_done(octx, "logistics")
        self._report_done(octx, "supplier-selection")

        ledger = self.sim.state.ledgers[octx.buyer]
        changes: dict[str, float] = {}
        for product in sorted(octx.lines_kg):
            ledger, record = apply_inventory_delta(ledger, product, octx.lines_kg[product])
            changes[product] = record["delta_kg"]
        balances = {product: ledger.on_hand_kg(product) for product in sorted(octx.lines_kg)}
        self.sim.emit(
            EventKind.INVENTORY_UPDATED,
            octx.buyer,
            {
                "owner": octx.buyer,
                "order_id": octx.order_id,
                "changes": changes,
                "balances": balances,
            },
        )

        on_time = (now - octx.dispatched_at) <= octx.quoted_eta_s
        assessment = assess_delivery(
            octx.shipment_id,
            on_time=on_time,
            violations=octx.violations,
            readings=octx.readings,
            weights=self.scenario.assessment_weights,
        )
        w_late, w_viol = self.scenario.assessment_weights
        self.sim.emit(
            EventKind.DELIVERY_ASSESSED,
            octx.buyer,
            {
                "shipment_id": octx.shipment_id,
                "order_id": octx.order_id,
                "carrier": octx.carrier,
                "on_time": assessment.on_time,
                "violation_fraction": assessment.violation_fraction,
                "score": assessment.score,
                "weights": {"late": w_late, "violation": w_viol},
                "reading_count": octx.readings,
                "flags": list(assessment.flags),
            },
        )
        octx.done = True
        covered = self._covered.get(octx.buyer, set())
        covered.difference_update(octx.lines_kg)
        for owner in (octx.buyer, octx.seller):
            self._blocked.get(owner, set()).difference_update(octx.lines_kg)

    def _report_done(self, octx: _OrderCtx, purpose: str) -> None:
        conv_id = octx.conv_ids.get(purpose)
        if conv_id is None:
            return
        ctx = self._convs[conv_id]
        if ctx.conv.phase is not cn.Phase.AWARDED:
            return
        msg = cn.ProtocolMessage(
            conv_id,
            cn.Performative.INFORM_DONE,
            ctx.conv.winner,
            ctx.conv.initiator,
            {"order_id": octx.order_id, "shipment_id": octx.shipment_id},
            self.sim.clock.now,
        )
        ctx.conv = cn.complete(ctx.conv, msg)
        self._chat(msg)

    # -- negotiation machinery ------------------------------------------------------------

    def _start_conversation(
        self,
        octx: _OrderCtx,
        *,
        purpose: str,
        initiator: str,
        participants: list[str],
        task: dict,
        tag_order: bool,
        bidder: Callable[[str], tuple[str, float | str]],
        on_award: Callable[[str, float], None],
        on_fail: Callable[[str], None],
    ) -> None:
        now = self.sim.clock.now
        conv_id = self.sim.next_id("CONV")
        deadline = now + self.scenario.timing.cfp_timeout_s
        conv, messages = cn.issue_cfp(conv_id, initiator, task, participants, deadline, now)
        ctx = _ConvCtx(conv, purpose, octx.order_id, tag_order, bidder, on_award, on_fail)
        self._convs[conv_id] = ctx
        octx.conv_ids[purpose] = conv_id

        payload = {
            "conv_id": conv_id,
            "initiator": initiator,
            "participants": list(participants),
            "deadline": deadline,
            "task": dict(task),
            "purpose": purpose,
        }
        if tag_order:
            payload["order_id"] = octx.order_id
        self.sim.emit(EventKind.CFP_ISSUED, initiator, payload)
        for msg in messages:
            self._chat(msg)

        reply_at = now + self.scenario.timing.reply_delay_s
        for pid in participants:
            self.sim.schedule(reply_at, lambda p=pid: self._participant_reply(conv_id, p))
        self.sim.schedule(deadline, lambda: self._try_award(conv_id))

    def _participant_reply(self, conv_id: str, pid: str) -> None:
        ctx = self._convs[conv_id]
        if ctx.conv.phase is not cn.Phase.COLLECTING:
            return
        decision, detail = ctx.bidder(pid)
        now = self.sim.clock.now
        if decision == "propose":
            msg = cn.ProtocolMessage(
                conv_id, cn.Performative.PROPOSE, pid, ctx.conv.initiator,
                {"total_price": detail}, now,
            )
        else:
            msg = cn.ProtocolMessage(
                conv_id, cn.Performative.REFUSE, pid, ctx.conv.initiator,
                {"reason": detail}, now,
            )
        ctx.conv = cn.receive_response(ctx.conv, msg)

        slot = ctx.conv.slot(pid)
        if slot.state is cn.SlotState.PROPOSED:
            payload = {"conv_id": conv_id, "participant": pid, "total_price": slot.bid}
            if ctx.tag_order:
                payload["order_id"] = ctx.order_id
            self.sim.emit(EventKind.PROPOSAL_SUBMITTED, pid, payload)
        elif slot.state is cn.SlotState.REFUSED:
            payload = {"conv_id": conv_id, "participant": pid, "reason": detail}
            if ctx.tag_order:
                payload["order_id"] = ctx.order_id
            self.sim.emit(EventKind.PROPOSAL_REFUSED, pid, payload)
        self._chat(msg)

        if not ctx.conv.unresolved():
            self.sim.schedule(now, lambda: self._try_award(conv_id))

    def _try_award(self, conv_id: str) -> None:
        ctx = self._convs[conv_id]
        if ctx.conv.phase is not cn.Phase.COLLECTING:
            return
        conv, messages = cn.award(ctx.conv, self.policy, now=self.sim.clock.now)
        ctx.conv = conv
        if conv.phase is cn.Phase.FAILED:
            ctx.on_fail("no acceptable proposals")
            return
        bids = conv.proposed()
        accept_payload = {
            "conv_id": conv_id,
            "winner": conv.winner,
            "total_price": bids[conv.winner],
        }
        if ctx.tag_order:
            accept_payload["order_id"] = ctx.order_id
        self.sim.emit(EventKind.PROPOSAL_ACCEPTED, conv.initiator, accept_payload)
        for pid in sorted(bids):
            if pid == conv.winner:
                continue
            self.sim.emit(
                EventKind.PROPOSAL_REJECTED,
                conv.initiator,
                {"conv_id": conv_id, "participant": pid, "total_price": bids[pid]},
            )
        for msg in messages:
            self._chat(msg)
        ctx.on_award(conv.winner, bids[conv.winner])

    def _chat(self, msg: cn.ProtocolMessage) -> None:
        self.sim.emit(EventKind.CHAT_MESSAGE, msg.sender, msg.to_payload())

    # -- failure and auto-reorder -----------------------------------------------------------

    def _fail(self, octx: _OrderCtx, reason: str, conv_id: str | None = None) -> None:
        octx.done = True
        payload = {"order_id": octx.order_id, "process": octx.process, "reason": reason}
        if conv_id:
            payload["conv_id"] = conv_id
        self.sim.emit(EventKind.PROCESS_FAILED, octx.buyer, payload)
        covered = self._covered.get(octx.buyer, set())
        covered.difference_update(octx.lines_kg)
        if octx.trigger == "reorder_check":
            self._blocked.setdefault(octx.buyer, set()).update(octx.lines_kg)

    def _after_event(self, event) -> None:
        # runs after the fold; ledgers already reflect the event
        if not self.scenario.reorder.auto_replenish:
            return
        if event.kind is EventKind.SHIPMENT_DISPATCHED:
            self._maybe_reorder(event.payload["seller"])
        elif event.kind is EventKind.INVENTORY_UPDATED:
            self._maybe_reorder(event.payload["owner"])

    def _maybe_reorder(self, owner: str) -> None:
        ledger = self.sim.state.ledgers.get(owner)
        if ledger is None:
            return
        entity = self.network.entity(owner)
        if entity.role not in (Role.WHOLESALER, Role.RETAILER):
            return
        deficits = reorder_check(ledger)
        covered = self._covered.get(owner, set())
        blocked = self._blocked.get(owner, set())
        wanted = [p for p in deficits if p not in covered and p not in blocked]
        if not wanted:
            return
        lines = {p: self.scenario.reorder.order_kg for p in wanted}
        self._covered.setdefault(owner, set()).update(wanted)
        self.sim.schedule_in(
            self.scenario.timing.stage_delay_s,
            lambda: self._place_auto_order(owner, lines),
        )

    def _place_auto_order(self, owner: str, lines: dict[str, float]) -> None:
        # the covered-set entry was reserved when the trigger fired; hand the
        # reservation to place_order, which re-adds it
        self._covered.get(owner, set()).difference_update(lines)
        self.place_order(owner, lines, trigger="reorder_check")


# -- entry points --------------------------------------------------------------------


def build_simulation(scenario: Scenario, install_initial: bool = True) -> tuple[Simulation, Coordinator]:
    sim = Simulation(scenario.seed, scenario.initial_ledgers())
    coordinator = Coordinator(sim, scenario, install_initial=install_initial)
    return sim, coordinator


def run_scenario(scenario: Scenario, until: float | None = None) -> tuple[Simulation, Coordinator]:
    """Run the scenario's initial orders to quiescence (or to ``until``)."""
    sim, coordinator = build_simulation(scenario)
    sim.run_until_quiet(until)
    return sim, coordinator


def run_replenishment(
    scenario: Scenario, lines_kg: Mapping[str, float] | None = None
) -> tuple[Simulation, Coordinator, str]:
    """One wholesaler restock order, run to completion; returns the order id."""
    sim, coordinator = build_simulation(scenario, install_initial=False)
    buyer = scenario.network.the_wholesaler().id
    order_id = coordinator.place_order(buyer, lines_kg or scenario.default_lines_kg())
    sim.run_until_quiet()
    return sim, coordinator, order_id


def run_wholesale(
    scenario: Scenario, buyer: str, lines_kg: Mapping[str, float]
) -> tuple[Simulation, Coordinator, str]:
    """One retailer order against the wholesaler, run to completion."""
    sim, coordinator = build_simulation(scenario, install_initial=False)
    order_id = coordinator.place_order(buyer, lines_kg)
    sim.run_until_quiet()
    return sim, coordinator, order_id
