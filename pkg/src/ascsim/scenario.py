"""Scenario documents: loading, validation, defaults.

A scenario is a JSON document describing the network, routes, sensor
profiles, process timing, and the automation declaration used by the
assessment rubric. Validation errors carry the path of the offending field
("entities[2].catalog[0].unit_price") so a bad file points at itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .autonomy import ManifoldConfig
from .model import (
    Connection,
    ConnectionKind,
    ConnectionLifecycle,
    InventoryLedger,
    Network,
    ProductOffer,
    Role,
    SELLING_ROLES,
    STOCK_HOLDING_ROLES,
    StructuralEntity,
    kg_to_g,
    validate_network,
)
from .telemetry import Route, SensorProfile

DEFAULT_PRODUCTS = ("chicken", "beef", "lamb")
DEFAULT_ORDER_KG = 50.0
DEFAULT_TIME_SCALE = 60.0
DEFAULT_ROUTE_SPEED_KMH = 70.0


class ParseError(Exception):
    pass


class ValidationError(Exception):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _require(doc: Mapping, key: str, path: str) -> Any:
    if not isinstance(doc, Mapping) or key not in doc:
        raise ValidationError(path, "missing required field")
    return doc[key]


def _number(value: Any, path: str, *, minimum: float | None = None, positive: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(path, f"expected a number, got {type(value).__name__}")
    value = float(value)
    if positive and value <= 0:
        raise ValidationError(path, f"must be > 0, got {value}")
    if minimum is not None and value < minimum:
        raise ValidationError(path, f"must be >= {minimum}, got {value}")
    return value


def _boolean(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ValidationError(path, f"expected a boolean, got {type(value).__name__}")
    return value


def _string(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise ValidationError(path, "expected a non-empty string")
    return value


def _coordinate(value: Any, path: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ValidationError(path, "expected [latitude, longitude]")
    lat = _number(value[0], f"{path}[0]")
    lng = _number(value[1], f"{path}[1]")
    if not (-90 <= lat <= 90):
        raise ValidationError(f"{path}[0]", f"latitude out of range: {lat}")
    if not (-180 <= lng <= 180):
        raise ValidationError(f"{path}[1]", f"longitude out of range: {lng}")
    return (lat, lng)


@dataclass(frozen=True)
class FunctionDecl:
    name: str
    automated: bool
    self_deciding: bool


@dataclass(frozen=True)
class ProcessDecl:
    name: str
    member_functions: tuple[str, ...]
    major: bool


@dataclass(frozen=True)
class AutomationDecl:
    functions: tuple[FunctionDecl, ...]
    processes: tuple[ProcessDecl, ...]
    all_conditions_autonomous: bool
    handles_unanticipated: bool
    self_learning: bool
    characteristics: Mapping[str, bool]


@dataclass(frozen=True)
class Timing:
    cfp_timeout_s: float = 600.0
    reply_delay_s: float = 2.0
    stage_delay_s: float = 1.0
    telemetry_period_s: float = 5.0


@dataclass(frozen=True)
class ReorderPolicy:
    auto_replenish: bool = True
    order_kg: float = DEFAULT_ORDER_KG


@dataclass(frozen=True)
class InitialOrder:
    at: float
    buyer: str
    lines_kg: Mapping[str, float] | None  # None means the scenario default quantity
    trigger: str = "manual-launch"


@dataclass(frozen=True)
class Scenario:
    seed: int
    time_scale: float
    products: tuple[str, ...]
    network: Network
    routes: Mapping[tuple[str, str], Route]
    default_route_speed_kmh: float
    sensor_profiles: tuple[SensorProfile, ...]
    reorder: ReorderPolicy
    assessment_weights: tuple[float, float]  # (late, violation)
    timing: Timing
    automation: AutomationDecl
    manifold: ManifoldConfig
    initial_orders: tuple[InitialOrder, ...]
    initial_stock: Mapping[str, Mapping[str, float]] = field(default_factory=dict)
    reorder_points: Mapping[str, Mapping[str, float]] = field(default_factory=dict)
    document: Mapping[str, Any] = field(default_factory=dict)

    def default_lines_kg(self) -> dict[str, float]:
        return {product: self.reorder.order_kg for product in self.products}

    def initial_ledgers(self) -> dict[str, InventoryLedger]:
        """Ledgers at simulation start: sellers from catalog stock, others from initial_stock."""
        ledgers: dict[str, InventoryLedger] = {}
        for entity in self.network.entities.values():
            if entity.role not in STOCK_HOLDING_ROLES:
                continue
            if entity.role in SELLING_ROLES:
                balances = {offer.product: kg_to_g(offer.stock_kg) for offer in entity.catalog}
            else:
                declared = self.initial_stock.get(entity.id, {})
                balances = {product: kg_to_g(declared.get(product, 0.0)) for product in self.products}
            points = {
                product: kg_to_g(kg)
                for product, kg in self.reorder_points.get(entity.id, {}).items()
            }
            ledgers[entity.id] = InventoryLedger(entity.id, balances, points)
        return ledgers

    def route_between(self, from_id: str, to_id: str) -> Route:
        """The declared route, or a straight two-point fallback at the default speed."""
        route = self.routes.get((from_id, to_id))
        if route is not None:
            return route
        reverse = self.routes.get((to_id, from_id))
        if reverse is not None:
            return Route(tuple(reversed(reverse.waypoints)), reverse.speed_kmh)
        origin = self.network.entity(from_id).location
        destination = self.network.entity(to_id).location
        return Route((origin, destination), self.default_route_speed_kmh)

    def entities_payload(self) -> list[dict]:
        """Static entity descriptions served by the entity listing endpoint."""
        out = []
        for entity in sorted(self.network.entities.values(), key=lambda e: e.id):
            out.append(
                {
                    "id": entity.id,
                    "role": entity.role.value,
                    "name": entity.name,
                    "location": list(entity.location),
                    "catalog": [
                        {
                            "product": offer.product,
                            "unit_price": offer.unit_price,
                            "stock_kg": offer.stock_kg,
                        }
                        for offer in entity.catalog
                    ],
                    "units": list(entity.units),
                }
            )
        return out

    def resolved_document(self) -> dict:
        """The fully defaulted document, as written next to run artifacts."""
        return json.loads(json.dumps(self.document))


def _parse_entity(doc: Mapping, path: str, products: tuple[str, ...]) -> StructuralEntity:
    if not isinstance(doc, Mapping):
        raise ValidationError(path, "expected an object")
    entity_id = _string(_require(doc, "id", f"{path}.id"), f"{path}.id")
    role_raw = _string(_require(doc, "role", f"{path}.role"), f"{path}.role")
    try:
        role = Role(role_raw)
    except ValueError:
        raise ValidationError(f"{path}.role", f"unknown role {role_raw!r}") from None
    location = _coordinate(_require(doc, "location", f"{path}.location"), f"{path}.location")
    name = doc.get("name", entity_id)

    catalog: list[ProductOffer] = []
    raw_catalog = doc.get("catalog", [])
    if role in SELLING_ROLES and not raw_catalog:
        raise ValidationError(f"{path}.catalog", f"role {role.value} requires a catalog")
    if role not in SELLING_ROLES and raw_catalog:
        raise ValidationError(f"{path}.catalog", f"role {role.value} must not sell products")
    for i, offer in enumerate(raw_catalog):
        offer_path = f"{path}.catalog[{i}]"
        product = _string(_require(offer, "product", f"{offer_path}.product"), f"{offer_path}.product")
        if product not in products:
            raise ValidationError(f"{offer_path}.product", f"{product!r} is not a scenario product")
        price = _number(_require(offer, "unit_price", f"{offer_path}.unit_price"), f"{offer_path}.unit_price", positive=True)
        stock = _number(_require(offer, "stock_kg", f"{offer_path}.stock_kg"), f"{offer_path}.stock_kg", minimum=0.0)
        catalog.append(ProductOffer(product, price, stock))

    units = tuple(_string(u, f"{path}.units[{i}]") for i, u in enumerate(doc.get("units", [])))
    params = {}
    for key, value in doc.get("params", {}).items():
        params[key] = _number(value, f"{path}.params.{key}")
    try:
        return StructuralEntity(
            id=entity_id, role=role, name=name, location=location,
            catalog=tuple(catalog), units=units, params=params,
        )
    except ValueError as exc:
        raise ValidationError(path, str(exc)) from None


def _parse_connection(doc: Mapping, path: str) -> Connection:
    if not isinstance(doc, Mapping):
        raise ValidationError(path, "expected an object")
    kind_raw = _string(_require(doc, "kind", f"{path}.kind"), f"{path}.kind")
    try:
        kind = ConnectionKind(kind_raw)
    except ValueError:
        raise ValidationError(f"{path}.kind", f"unknown kind {kind_raw!r}") from None
    lifecycle = None
    if "lifecycle" in doc and doc["lifecycle"] is not None:
        try:
            lifecycle = ConnectionLifecycle(doc["lifecycle"])
        except ValueError:
            raise ValidationError(f"{path}.lifecycle", f"unknown lifecycle {doc['lifecycle']!r}") from None
    try:
        return Connection(
            from_id=_string(_require(doc, "from", f"{path}.from"), f"{path}.from"),
            to_id=_string(_require(doc, "to", f"{path}.to"), f"{path}.to"),
            kind=kind,
            lifecycle=lifecycle,
        )
    except Exception as exc:
        raise ValidationError(path, str(exc)) from None


def _parse_sensor_profile(doc: Mapping, path: str) -> SensorProfile:
    kind = _string(_require(doc, "kind", f"{path}.kind"), f"{path}.kind")
    safe = _require(doc, "safe_range", f"{path}.safe_range")
    if not isinstance(safe, (list, tuple)) or len(safe) != 2:
        raise ValidationError(f"{path}.safe_range", "expected [lo, hi]")
    lo = _number(safe[0], f"{path}.safe_range[0]")
    hi = _number(safe[1], f"{path}.safe_range[1]")
    if lo >= hi:
        raise ValidationError(f"{path}.safe_range", f"empty range [{lo}, {hi}]")
    reversion = _number(_require(doc, "reversion", f"{path}.reversion"), f"{path}.reversion", minimum=0.0)
    if reversion > 1.0:
        raise ValidationError(f"{path}.reversion", f"must be <= 1, got {reversion}")
    initial = None
    if doc.get("initial") is not None:
        initial = _number(doc["initial"], f"{path}.initial")
    try:
        return SensorProfile(
            kind=kind,
            unit=_string(_require(doc, "unit", f"{path}.unit"), f"{path}.unit"),
            target=_number(_require(doc, "target", f"{path}.target"), f"{path}.target"),
            reversion=reversion,
            noise=_number(_require(doc, "noise", f"{path}.noise"), f"{path}.noise", minimum=0.0),
            safe_range=(lo, hi),
            sample_period_s=_number(doc.get("sample_period_s", 5.0), f"{path}.sample_period_s", positive=True),
            initial=initial,
        )
    except ValueError as exc:
        raise ValidationError(path, str(exc)) from None


DEFAULT_FUNCTIONS = (
    "supplier-selection",
    "inventory-updating",
    "logistics-arrangement",
    "transportation-monitoring",
    "delivery-service-assessment",
)

DEFAULT_CHARACTERISTICS = {
    "instrumented": True,
    "standardised": True,
    "interconnected": True,
    "integrated": True,
    "automated": True,
    "intelligent": False,
}


def _default_automation() -> dict:
    return {
        "functions": [
            {"name": name, "automated": True, "self_deciding": False}
            for name in DEFAULT_FUNCTIONS
        ],
        "processes": [
            {"name": "replenishment", "member_functions": list(DEFAULT_FUNCTIONS), "major": True},
            {"name": "wholesale", "member_functions": list(DEFAULT_FUNCTIONS), "major": True},
        ],
        "all_conditions_autonomous": False,
        "handles_unanticipated": False,
        "self_learning": False,
        "characteristics": dict(DEFAULT_CHARACTERISTICS),
    }


def _parse_automation(doc: Mapping, path: str) -> AutomationDecl:
    functions = []
    declared_functions = doc.get("functions", [])
    for i, f in enumerate(declared_functions):
        fpath = f"{path}.functions[{i}]"
        functions.append(
            FunctionDecl(
                name=_string(_require(f, "name", f"{fpath}.name"), f"{fpath}.name"),
                automated=_boolean(f.get("automated", False), f"{fpath}.automated"),
                self_deciding=_boolean(f.get("self_deciding", False), f"{fpath}.self_deciding"),
            )
        )
    names = {f.name for f in functions}
    processes = []
    for i, pr in enumerate(doc.get("processes", [])):
        ppath = f"{path}.processes[{i}]"
        members = tuple(
            _string(m, f"{ppath}.member_functions[{j}]")
            for j, m in enumerate(_require(pr, "member_functions", f"{ppath}.member_functions"))
        )
        for j, member in enumerate(members):
            if member not in names:
                raise ValidationError(f"{ppath}.member_functions[{j}]", f"unknown function {member!r}")
        processes.append(
            ProcessDecl(
                name=_string(_require(pr, "name", f"{ppath}.name"), f"{ppath}.name"),
                member_functions=members,
                major=_boolean(pr.get("major", False), f"{ppath}.major"),
            )
        )
    characteristics = dict(DEFAULT_CHARACTERISTICS)
    for key, value in doc.get("characteristics", {}).items():
        if key not in DEFAULT_CHARACTERISTICS:
            raise ValidationError(f"{path}.characteristics.{key}", "unknown characteristic")
        characteristics[key] = _boolean(value, f"{path}.characteristics.{key}")
    return AutomationDecl(
        functions=tuple(functions),
        processes=tuple(processes),
        all_conditions_autonomous=_boolean(doc.get("all_conditions_autonomous", False), f"{path}.all_conditions_autonomous"),
        handles_unanticipated=_boolean(doc.get("handles_unanticipated", False), f"{path}.handles_unanticipated"),
        self_learning=_boolean(doc.get("self_learning", False), f"{path}.self_learning"),
        characteristics=characteristics,
    )


def load_scenario(document: Mapping[str, Any]) -> Scenario:
    """Validate a parsed document and fill defaults; raises ValidationError."""
    if not isinstance(document, Mapping):
        raise ValidationError("$", "scenario must be a JSON object")
    try:
        doc = json.loads(json.dumps(document))  # deep copy; also proves JSON-shaped
    except (TypeError, ValueError) as exc:
        raise ValidationError("$", f"scenario is not JSON-serializable: {exc}") from None

    seed = doc.setdefault("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValidationError("seed", f"expected an integer, got {type(seed).__name__}")
    if not (0 <= seed < 2**64):
        raise ValidationError("seed", f"must fit in 64 unsigned bits, got {seed}")

    time_scale = _number(doc.setdefault("time_scale", DEFAULT_TIME_SCALE), "time_scale", positive=True)

    raw_products = doc.setdefault("products", list(DEFAULT_PRODUCTS))
    if not isinstance(raw_products, list) or not raw_products:
        raise ValidationError("products", "expected a non-empty list")
    products = tuple(_string(p, f"products[{i}]") for i, p in enumerate(raw_products))
    if len(set(products)) != len(products):
        raise ValidationError("products", "duplicate product names")

    if "entities" not in doc:
        raise ValidationError("entities", "missing required section")
    if not isinstance(doc["entities"], list) or not doc["entities"]:
        raise ValidationError("entities", "expected a non-empty list")
    entities = [
        _parse_entity(e, f"entities[{i}]", products) for i, e in enumerate(doc["entities"])
    ]

    raw_connections = doc.setdefault("connections", [])
    connections = [
        _parse_connection(c, f"connections[{i}]") for i, c in enumerate(raw_connections)
    ]

    try:
        network = validate_network(entities, connections)
    except Exception as exc:
        raise ValidationError("entities", str(exc)) from None
    wholesalers = network.by_role(Role.WHOLESALER)
    if len(wholesalers) != 1:
        raise ValidationError("entities", f"expected exactly one wholesaler, found {len(wholesalers)}")

    default_speed = _number(
        doc.setdefault("default_route_speed_kmh", DEFAULT_ROUTE_SPEED_KMH),
        "default_route_speed_kmh", positive=True,
    )

    routes: dict[tuple[str, str], Route] = {}
    for i, r in enumerate(doc.setdefault("routes", [])):
        rpath = f"routes[{i}]"
        from_id = _string(_require(r, "from", f"{rpath}.from"), f"{rpath}.from")
        to_id = _string(_require(r, "to", f"{rpath}.to"), f"{rpath}.to")
        for endpoint, label in ((from_id, "from"), (to_id, "to")):
            if endpoint not in network.entities:
                raise ValidationError(f"{rpath}.{label}", f"unknown entity {endpoint!r}")
        waypoints = tuple(
            _coordinate(w, f"{rpath}.waypoints[{j}]")
            for j, w in enumerate(_require(r, "waypoints", f"{rpath}.waypoints"))
        )
        if len(waypoints) < 2:
            raise ValidationError(f"{rpath}.waypoints", "route needs at least two waypoints")
        if waypoints[0] != network.entity(from_id).location:
            raise ValidationError(f"{rpath}.waypoints[0]", "first waypoint must equal the origin entity location")
        if waypoints[-1] != network.entity(to_id).location:
            raise ValidationError(f"{rpath}.waypoints[-1]", "last waypoint must equal the destination entity location")
        speed = _number(r.get("speed_kmh", default_speed), f"{rpath}.speed_kmh", positive=True)
        try:
            routes[(from_id, to_id)] = Route(waypoints, speed)
        except ValueError as exc:
            raise ValidationError(rpath, str(exc)) from None

    profiles_doc = doc.setdefault("sensor_profiles", _default_sensor_profiles())
    sensor_profiles = tuple(
        _parse_sensor_profile(p, f"sensor_profiles[{i}]") for i, p in enumerate(profiles_doc)
    )
    kinds = [p.kind for p in sensor_profiles]
    if len(set(kinds)) != len(kinds):
        raise ValidationError("sensor_profiles", "duplicate sensor kind")

    reorder_doc = doc.setdefault("reorder", {})
    reorder = ReorderPolicy(
        auto_replenish=_boolean(reorder_doc.setdefault("auto_replenish", True), "reorder.auto_replenish"),
        order_kg=_number(reorder_doc.setdefault("order_kg", DEFAULT_ORDER_KG), "reorder.order_kg", positive=True),
    )

    weights_doc = doc.setdefault("assessment_weights", {"late": 0.5, "violation": 0.5})
    w_late = _number(weights_doc.setdefault("late", 0.5), "assessment_weights.late", minimum=0.0)
    w_viol = _number(weights_doc.setdefault("violation", 0.5), "assessment_weights.violation", minimum=0.0)
    if abs(w_late + w_viol - 1.0) > 1e-9:
        raise ValidationError("assessment_weights", f"weights must sum to 1, got {w_late + w_viol}")

    timing_doc = doc.setdefault("timing", {})
    timing = Timing(
        cfp_timeout_s=_number(timing_doc.setdefault("cfp_timeout_s", 600.0), "timing.cfp_timeout_s", positive=True),
        reply_delay_s=_number(timing_doc.setdefault("reply_delay_s", 2.0), "timing.reply_delay_s", positive=True),
        stage_delay_s=_number(timing_doc.setdefault("stage_delay_s", 1.0), "timing.stage_delay_s", positive=True),
        telemetry_period_s=_number(timing_doc.setdefault("telemetry_period_s", 5.0), "timing.telemetry_period_s", positive=True),
    )

    automation = _parse_automation(doc.setdefault("automation", _default_automation()), "automation")

    manifold_doc = doc.setdefault("manifold", {})
    manifold_values = {}
    for label, fallback in (("tau_i", 0.5), ("tau_a", 0.5), ("delta", 0.2)):
        value = _number(manifold_doc.setdefault(label, fallback), f"manifold.{label}", minimum=0.0)
        if value > 1.0:
            raise ValidationError(f"manifold.{label}", f"must be <= 1, got {value}")
        manifold_values[label] = value
    manifold = ManifoldConfig(**manifold_values)

    initial_stock: dict[str, dict[str, float]] = {}
    reorder_points: dict[str, dict[str, float]] = {}
    for i, raw in enumerate(document.get("entities", [])):
        path = f"entities[{i}]"
        entity = entities[i]
        if "initial_stock" in raw:
            if entity.role in SELLING_ROLES:
                raise ValidationError(
                    f"{path}.initial_stock",
                    "selling roles stock via the catalog; initial_stock is for non-selling holders",
                )
            if entity.role not in STOCK_HOLDING_ROLES:
                raise ValidationError(f"{path}.initial_stock", f"role {entity.role.value} holds no stock")
            stock = {}
            for product, kg in raw["initial_stock"].items():
                if product not in products:
                    raise ValidationError(f"{path}.initial_stock.{product}", "not a scenario product")
                stock[product] = _number(kg, f"{path}.initial_stock.{product}", minimum=0.0)
            initial_stock[entity.id] = stock
        if "reorder_points" in raw:
            if entity.role not in STOCK_HOLDING_ROLES:
                raise ValidationError(f"{path}.reorder_points", f"role {entity.role.value} holds no stock")
            points = {}
            for product, kg in raw["reorder_points"].items():
                if product not in products:
                    raise ValidationError(f"{path}.reorder_points.{product}", "not a scenario product")
                points[product] = _number(kg, f"{path}.reorder_points.{product}", minimum=0.0)
            reorder_points[entity.id] = points

    initial_orders: list[InitialOrder] = []
    for i, raw in enumerate(doc.setdefault("initial_orders", [])):
        opath = f"initial_orders[{i}]"
        buyer = _string(_require(raw, "buyer", f"{opath}.buyer"), f"{opath}.buyer")
        if buyer not in network.entities:
            raise ValidationError(f"{opath}.buyer", f"unknown entity {buyer!r}")
        if network.entity(buyer).role not in (Role.WHOLESALER, Role.RETAILER):
            raise ValidationError(f"{opath}.buyer", f"{buyer} cannot place purchase orders")
        lines: dict[str, float] | None = None
        if raw.get("lines") is not None:
            lines = {}
            for product, kg in raw["lines"].items():
                if product not in products:
                    raise ValidationError(f"{opath}.lines.{product}", "not a scenario product")
                lines[product] = _number(kg, f"{opath}.lines.{product}", positive=True)
        initial_orders.append(
            InitialOrder(
                at=_number(raw.get("at", 0.0), f"{opath}.at", minimum=0.0),
                buyer=buyer,
                lines_kg=lines,
                trigger=raw.get("trigger", "manual-launch"),
            )
        )

    return Scenario(
        seed=seed,
        time_scale=time_scale,
        products=products,
        network=network,
        routes=routes,
        default_route_speed_kmh=default_speed,
        sensor_profiles=sensor_profiles,
        reorder=reorder,
        assessment_weights=(w_late, w_viol),
        timing=timing,
        automation=automation,
        manifold=manifold,
        initial_orders=tuple(initial_orders),
        initial_stock=initial_stock,
        reorder_points=reorder_points,
        document=doc,
    )


def _default_sensor_profiles() -> list[dict]:
    # Chilled-meat transport: cold, humid, dark. Safe ranges are design
    # defaults; every number can be overridden per scenario.
    return [
        {
            "kind": "temperature", "unit": "°C", "target": 2.0,
            "reversion": 0.5, "noise": 0.3, "safe_range": [0.0, 4.0],
            "sample_period_s": 5.0,
        },
        {
            "kind": "humidity", "unit": "%RH", "target": 85.0,
            "reversion": 0.4, "noise": 2.0, "safe_range": [60.0, 95.0],
            "sample_period_s": 5.0,
        },
        {
            "kind": "illumination", "unit": "lux", "target": 50.0,
            "reversion": 0.6, "noise": 30.0, "safe_range": [0.0, 500.0],
            "sample_period_s": 5.0,
        },
    ]


def packaged_scenario_path(name: str = "default.json") -> Path:
    """Path of a scenario shipped inside the package."""
    return Path(str(resources.files("ascsim").joinpath("data", name)))


def load_scenario_file(
    path: str | Path, *, seed: int | None = None, time_scale: float | None = None
) -> Scenario:
    """Load a scenario from disk; bare names fall back to packaged data.

    ``seed`` and ``time_scale`` are command-line overrides and take
    precedence over the document's values.
    """
    candidate = Path(path)
    if not candidate.exists() and candidate.parent == Path("."):
        packaged = packaged_scenario_path(candidate.name)
        if packaged.exists():
            candidate = packaged
    if not candidate.exists():
        raise ParseError(f"scenario file not found: {path}")
    try:
        document = json.loads(candidate.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    if isinstance(document, dict):
        if seed is not None:
            document["seed"] = seed
        if time_scale is not None:
            document["time_scale"] = time_scale
    return load_scenario(document)
