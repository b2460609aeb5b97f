"""Domain model for the supply chain network.

Entities, connections, product offers, orders, and inventory ledgers are
plain immutable values. All quantities are held internally as integer grams
so that conservation checks are exact; the public surface speaks kilograms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping


class Role(str, Enum):
    SUPPLIER = "supplier"
    WHOLESALER = "wholesaler"
    RETAILER = "retailer"
    LOGISTICS = "logistics"
    THIRD_PARTY_LOGISTICS = "third-party-logistics"


#: Roles that publish a catalog and hold sellable stock.
SELLING_ROLES = frozenset({Role.SUPPLIER, Role.WHOLESALER})

#: Roles that own an inventory ledger (selling roles plus retailers,
#: who accumulate delivered goods).
STOCK_HOLDING_ROLES = frozenset({Role.SUPPLIER, Role.WHOLESALER, Role.RETAILER})


class ConnectionKind(str, Enum):
    TIGHT_EXTERNAL = "tight-external"
    LOOSE_EXTERNAL = "loose-external"
    INTERNAL = "internal"


class ConnectionLifecycle(str, Enum):
    AD_HOC = "ad-hoc"
    TEMPORARY = "temporary"
    ESTABLISHED = "established"


class OrderStatus(str, Enum):
    DRAFT = "draft"
    NEGOTIATING = "negotiating"
    AWARDED = "awarded"
    IN_TRANSIT = "in-transit"
    DELIVERED = "delivered"
    FAILED = "failed"


#: Legal order status transitions. `failed` is reachable only from the
#: three live in-process states.
ORDER_TRANSITIONS: Mapping[OrderStatus, frozenset[OrderStatus]] = MappingProxyType({
    OrderStatus.DRAFT: frozenset({OrderStatus.NEGOTIATING}),
    OrderStatus.NEGOTIATING: frozenset({OrderStatus.AWARDED, OrderStatus.FAILED}),
    OrderStatus.AWARDED: frozenset({OrderStatus.IN_TRANSIT, OrderStatus.FAILED}),
    OrderStatus.IN_TRANSIT: frozenset({OrderStatus.DELIVERED, OrderStatus.FAILED}),
    OrderStatus.DELIVERED: frozenset(),
    OrderStatus.FAILED: frozenset(),
})


class ModelError(Exception):
    """Base class for domain rule violations."""


class InsufficientStock(ModelError):
    pass


class UnknownProduct(ModelError):
    pass


class DuplicateEntityId(ModelError):
    pass


class DanglingConnection(ModelError):
    pass


class MissingRole(ModelError):
    pass


class InvalidConnection(ModelError):
    pass


class IllegalTransition(ModelError):
    pass


def kg_to_g(kg: float | int) -> int:
    """Convert kilograms to integer grams (the internal unit)."""
    if not math.isfinite(kg):
        raise ValueError(f"quantity must be finite, got {kg!r}")
    return int(round(float(kg) * 1000))


def g_to_kg(g: int) -> float:
    return g / 1000


@dataclass(frozen=True)
class ProductOffer:
    """A catalog line: price per kilogram and available stock."""

    product: str
    unit_price: float
    stock_kg: float

    def __post_init__(self) -> None:
        if not self.product:
            raise ValueError("offer product name must be non-empty")
        if self.unit_price <= 0:
            raise ValueError(f"unit_price must be > 0, got {self.unit_price}")
        if self.stock_kg < 0:
            raise ValueError(f"stock_kg must be >= 0, got {self.stock_kg}")


@dataclass(frozen=True)
class StructuralEntity:
    """A node of the supply chain network.

    Selling roles carry a catalog; every entity has a geographic location
    used for routing. ``units`` names internal divisions, referenced by
    internal connections as ``"<entity_id>.<unit>"``.
    """

    id: str
    role: Role
    name: str
    location: tuple[float, float]
    catalog: tuple[ProductOffer, ...] = ()
    units: tuple[str, ...] = ()
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("entity id must be non-empty")
        lat, lng = self.location
        if not (-90 <= lat <= 90 and -180 <= lng <= 180):
            raise ValueError(f"{self.id}: location out of range: {self.location}")
        sells = self.role in SELLING_ROLES
        if sells and not self.catalog:
            raise ValueError(f"{self.id}: role {self.role.value} requires a catalog")
        if not sells and self.catalog:
            raise ValueError(f"{self.id}: role {self.role.value} must not have a catalog")

    def offer_for(self, product: str) -> ProductOffer | None:
        for offer in self.catalog:
            if offer.product == product:
                return offer
        return None


@dataclass(frozen=True)
class Connection:
    """A typed edge between two entities, or between units of one entity."""

    from_id: str
    to_id: str
    kind: ConnectionKind
    lifecycle: ConnectionLifecycle | None = None

    def __post_init__(self) -> None:
        if self.kind is ConnectionKind.INTERNAL:
            if self.lifecycle is not None:
                raise InvalidConnection(
                    f"{self.from_id}->{self.to_id}: lifecycle applies to external connections only"
                )
            owner_a, _, unit_a = self.from_id.partition(".")
            owner_b, _, unit_b = self.to_id.partition(".")
            if not unit_a or not unit_b:
                raise InvalidConnection(
                    f"{self.from_id}->{self.to_id}: internal endpoints must name units as '<entity>.<unit>'"
                )
            if owner_a != owner_b:
                raise InvalidConnection(
                    f"{self.from_id}->{self.to_id}: internal connections must stay inside one entity"
                )
        else:
            if self.from_id == self.to_id:
                raise InvalidConnection(f"{self.from_id}: external connection endpoints must differ")
            if self.lifecycle is None:
                raise InvalidConnection(
                    f"{self.from_id}->{self.to_id}: external connections need a lifecycle"
                )


@dataclass(frozen=True)
class InventoryLedger:
    """Per-entity stock balances and reorder thresholds, in grams."""

    owner: str
    balances_g: Mapping[str, int]
    reorder_points_g: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "balances_g", MappingProxyType(dict(self.balances_g)))
        object.__setattr__(self, "reorder_points_g", MappingProxyType(dict(self.reorder_points_g)))
        for product, g in self.balances_g.items():
            if g < 0:
                raise InsufficientStock(f"{self.owner}: {product} balance {g} g is negative")

    def on_hand_kg(self, product: str) -> float:
        return g_to_kg(self.balances_g[product])

    def balances_kg(self) -> dict[str, float]:
        return {p: g_to_kg(g) for p, g in sorted(self.balances_g.items())}

    def covers(self, lines_g: Mapping[str, int]) -> bool:
        return all(self.balances_g.get(p, 0) >= q for p, q in lines_g.items())


def apply_inventory_delta(
    ledger: InventoryLedger, product: str, delta_kg: float
) -> tuple[InventoryLedger, dict]:
    """Adjust one product balance, returning the new ledger and the change record.

    The record is the payload fragment recorded in InventoryUpdated events.
    Raises UnknownProduct for absent products and InsufficientStock when the
    result would go negative; the ledger is unchanged on error.
    """
    if product not in ledger.balances_g:
        raise UnknownProduct(f"{ledger.owner}: no such product {product!r}")
    delta_g = kg_to_g(delta_kg)
    new_g = ledger.balances_g[product] + delta_g
    if new_g < 0:
        raise InsufficientStock(
            f"{ledger.owner}: {product} has {g_to_kg(ledger.balances_g[product])} kg, "
            f"cannot apply {delta_kg} kg"
        )
    balances = dict(ledger.balances_g)
    balances[product] = new_g
    updated = replace(ledger, balances_g=balances)
    record = {
        "owner": ledger.owner,
        "product": product,
        "delta_kg": g_to_kg(delta_g),
        "on_hand_kg": g_to_kg(new_g),
    }
    return updated, record


def reorder_check(ledger: InventoryLedger) -> list[str]:
    """Products whose on-hand balance is strictly below the reorder point.

    Strict comparison avoids replenishment ping-pong when a delivery lands
    exactly on the threshold. Result is in lexicographic product order.
    """
    return sorted(
        product
        for product, point_g in ledger.reorder_points_g.items()
        if ledger.balances_g.get(product, 0) < point_g
    )


@dataclass(frozen=True)
class Order:
    """A purchase order; ``lines_g`` maps product name to grams."""

    order_id: str
    buyer: str
    lines_g: Mapping[str, int]
    seller: str | None = None
    status: OrderStatus = OrderStatus.DRAFT
    created_at: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "lines_g", MappingProxyType(dict(self.lines_g)))
        if not self.lines_g:
            raise ValueError(f"{self.order_id}: order needs at least one line")
        for product, g in self.lines_g.items():
            if g <= 0:
                raise ValueError(f"{self.order_id}: quantity for {product} must be positive")

    def lines_kg(self) -> dict[str, float]:
        return {p: g_to_kg(g) for p, g in sorted(self.lines_g.items())}

    def advance_to(self, status: OrderStatus, **changes) -> "Order":
        if status not in ORDER_TRANSITIONS[self.status]:
            raise IllegalTransition(
                f"{self.order_id}: {self.status.value} -> {status.value} is not allowed"
            )
        return replace(self, status=status, **changes)


class Network:
    """A validated view of the entity/connection graph."""

    def __init__(self, entities: Iterable[StructuralEntity], connections: Iterable[Connection]):
        self.entities: dict[str, StructuralEntity] = {e.id: e for e in entities}
        self.connections: tuple[Connection, ...] = tuple(connections)
        self._adjacency: dict[str, set[str]] = {eid: set() for eid in self.entities}
        for conn in self.connections:
            if conn.kind is ConnectionKind.INTERNAL:
                continue
            self._adjacency[conn.from_id].add(conn.to_id)
            self._adjacency[conn.to_id].add(conn.from_id)

    def entity(self, entity_id: str) -> StructuralEntity:
        return self.entities[entity_id]

    def neighbors(self, entity_id: str, role: Role | None = None) -> list[StructuralEntity]:
        """Entities externally connected to ``entity_id``, optionally filtered by role, in id order."""
        found = (self.entities[other] for other in sorted(self._adjacency.get(entity_id, ())))
        if role is None:
            return list(found)
        return [e for e in found if e.role is role]

    def by_role(self, role: Role) -> list[StructuralEntity]:
        return sorted((e for e in self.entities.values() if e.role is role), key=lambda e: e.id)

    def the_wholesaler(self) -> StructuralEntity:
        wholesalers = self.by_role(Role.WHOLESALER)
        if len(wholesalers) != 1:
            raise MissingRole(f"expected exactly one wholesaler, found {len(wholesalers)}")
        return wholesalers[0]


#: Roles every case-study scenario needs before its processes can run.
CASE_STUDY_ROLES = (
    Role.SUPPLIER,
    Role.WHOLESALER,
    Role.RETAILER,
    Role.LOGISTICS,
    Role.THIRD_PARTY_LOGISTICS,
)


def validate_network(
    entities: Iterable[StructuralEntity],
    connections: Iterable[Connection],
    required_roles: Iterable[Role] = CASE_STUDY_ROLES,
) -> Network:
    """Check graph invariants and role coverage, returning the usable network.

    Raises DuplicateEntityId, DanglingConnection, InvalidConnection, or
    MissingRole (a required role absent, or present but not reachable via
    any external connection).
    """
    entities = list(entities)
    connections = list(connections)

    seen: set[str] = set()
    for entity in entities:
        if entity.id in seen:
            raise DuplicateEntityId(entity.id)
        seen.add(entity.id)
    units = {e.id: set(e.units) for e in entities}

    for conn in connections:
        if conn.kind is ConnectionKind.INTERNAL:
            for endpoint in (conn.from_id, conn.to_id):
                owner, _, unit = endpoint.partition(".")
                if owner not in units or unit not in units[owner]:
                    raise DanglingConnection(endpoint)
        else:
            for endpoint in (conn.from_id, conn.to_id):
                if endpoint not in units:
                    raise DanglingConnection(endpoint)

    roles_present = {e.role for e in entities}
    for role in required_roles:
        if role not in roles_present:
            raise MissingRole(role.value)

    network = Network(entities, connections)
    for role in required_roles:
        reachable = any(
            network._adjacency[e.id] for e in entities if e.role is role
        )
        if not reachable:
            raise MissingRole(f"{role.value}: no external connection reaches this role")
    return network
