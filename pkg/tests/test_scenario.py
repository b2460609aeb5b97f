"""Scenario documents: defaults, validation paths, route resolution."""

import copy

import pytest

from ascsim.model import Role
from ascsim.scenario import (
    DEFAULT_ORDER_KG,
    DEFAULT_PRODUCTS,
    ValidationError,
    load_scenario,
    load_scenario_file,
    packaged_scenario_path,
)
from tests.conftest import tiny_document


def expect_invalid(document, path_prefix):
    with pytest.raises(ValidationError) as err:
        load_scenario(document)
    assert err.value.path.startswith(path_prefix), err.value.path


# -- packaged default ---------------------------------------------------------------


def test_default_scenario_loads(default_scenario):
    s = default_scenario
    assert s.seed == 42
    assert s.time_scale == 60.0
    assert s.products == DEFAULT_PRODUCTS
    assert len(s.network.entities) == 9
    assert s.network.the_wholesaler().id == "CMC"
    assert {p.kind for p in s.sensor_profiles} == {"temperature", "humidity", "illumination"}
    assert s.reorder.auto_replenish is True
    assert s.reorder.order_kg == DEFAULT_ORDER_KG
    assert s.assessment_weights == (0.5, 0.5)
    assert [f.name for f in s.automation.functions] == [
        "supplier-selection",
        "inventory-updating",
        "logistics-arrangement",
        "transportation-monitoring",
        "delivery-service-assessment",
    ]
    assert [p.name for p in s.automation.processes] == ["replenishment", "wholesale"]
    assert all(p.major for p in s.automation.processes)
    assert len(s.initial_orders) == 1
    assert s.initial_orders[0].buyer == "CMC"


def test_default_initial_ledgers(default_scenario):
    ledgers = default_scenario.initial_ledgers()
    assert ledgers["CMC"].balances_kg() == {"beef": 100.0, "chicken": 100.0, "lamb": 100.0}
    assert ledgers["S2"].balances_kg() == {"beef": 400.0, "chicken": 400.0, "lamb": 400.0}
    assert ledgers["R1"].balances_kg() == {"beef": 0.0, "chicken": 0.0, "lamb": 0.0}
    assert ledgers["CMC"].reorder_points_g == {"beef": 40_000, "chicken": 40_000, "lamb": 40_000}
    assert "L1" not in ledgers  # logistics holds no stock
    assert "P1" not in ledgers


def test_default_lines_default_to_reorder_quantity(default_scenario):
    assert default_scenario.default_lines_kg() == {"chicken": 50.0, "beef": 50.0, "lamb": 50.0}


def test_packaged_path_exists():
    assert packaged_scenario_path("default.json").is_file()


# -- tiny document and overrides ----------------------------------------------------------


def test_tiny_document_loads_with_defaults(tiny_scenario):
    s = tiny_scenario
    assert s.seed == 7
    assert s.products == DEFAULT_PRODUCTS  # defaulted
    assert s.timing.cfp_timeout_s == 600.0
    assert s.timing.reply_delay_s == 2.0
    assert s.timing.stage_delay_s == 1.0
    assert s.timing.telemetry_period_s == 5.0
    assert s.manifold.tau_i == 0.5 and s.manifold.tau_a == 0.5 and s.manifold.delta == 0.2
    assert s.initial_orders == ()


def test_seed_and_time_scale_overrides():
    s = load_scenario_file("default.json", seed=7, time_scale=500.0)
    assert s.seed == 7
    assert s.time_scale == 500.0
    assert s.resolved_document()["seed"] == 7


def test_load_scenario_does_not_mutate_caller_document():
    doc = tiny_document()
    before = copy.deepcopy(doc)
    load_scenario(doc)
    assert doc == before


def test_resolved_document_reloads_identically(tiny_scenario):
    resolved = tiny_scenario.resolved_document()
    again = load_scenario(resolved)
    assert again.resolved_document() == resolved


# -- route resolution ------------------------------------------------------------------


def test_declared_route_is_used(default_scenario):
    route = default_scenario.route_between("S2", "CMC")
    assert len(route.waypoints) == 3  # S2 - Birmingham - CMC
    assert route.speed_kmh == 72.0


def test_reverse_route_is_reversed_declared(default_scenario):
    forward = default_scenario.route_between("S2", "CMC")
    back = default_scenario.route_between("CMC", "S2")
    assert back.waypoints == tuple(reversed(forward.waypoints))
    assert back.speed_kmh == forward.speed_kmh


def test_fallback_route_is_straight_line(tiny_scenario):
    route = tiny_scenario.route_between("S", "W")
    assert route.waypoints == ((52.5, -1.9), (51.5, -0.1))
    assert route.speed_kmh == 70.0  # scenario default


# -- validation errors with field paths ---------------------------------------------------


def test_missing_entities_section():
    expect_invalid({"seed": 1}, "entities")


def test_unknown_role():
    doc = tiny_document()
    doc["entities"][0]["role"] = "warehouse"
    expect_invalid(doc, "entities[0].role")


def test_bad_coordinate():
    doc = tiny_document()
    doc["entities"][0]["location"] = [91.0, 0.0]
    expect_invalid(doc, "entities[0].location")


def test_duplicate_entity_ids():
    doc = tiny_document()
    doc["entities"].append(dict(doc["entities"][1], id="S"))
    expect_invalid(doc, "entities")


def test_two_wholesalers_rejected():
    doc = tiny_document()
    extra = copy.deepcopy(doc["entities"][0])
    extra["id"] = "W2"
    doc["entities"].append(extra)
    doc["connections"].append(
        {"from": "W2", "to": "S", "kind": "loose-external", "lifecycle": "established"}
    )
    expect_invalid(doc, "entities")


def test_seller_requires_catalog():
    doc = tiny_document()
    del doc["entities"][1]["catalog"]
    expect_invalid(doc, "entities[1].catalog")


def test_retailer_must_not_carry_catalog():
    doc = tiny_document()
    doc["entities"][2]["catalog"] = [{"product": "beef", "unit_price": 1.0, "stock_kg": 1.0}]
    expect_invalid(doc, "entities[2].catalog")


def test_catalog_product_must_be_declared():
    doc = tiny_document()
    doc["entities"][1]["catalog"][0]["product"] = "tofu"
    expect_invalid(doc, "entities[1].catalog[0].product")


def test_nonpositive_price_rejected():
    doc = tiny_document()
    doc["entities"][1]["catalog"][0]["unit_price"] = 0
    expect_invalid(doc, "entities[1].catalog[0].unit_price")


def test_initial_stock_forbidden_for_sellers():
    doc = tiny_document()
    doc["entities"][1]["initial_stock"] = {"beef": 10.0}
    expect_invalid(doc, "entities[1].initial_stock")


def test_initial_stock_allowed_for_retailer():
    doc = tiny_document()
    doc["entities"][2]["initial_stock"] = {"beef": 10.0}
    scenario = load_scenario(doc)
    assert scenario.initial_ledgers()["R"].on_hand_kg("beef") == 10.0


def test_seed_range_checked():
    doc = tiny_document()
    doc["seed"] = 2**64
    expect_invalid(doc, "seed")
    doc["seed"] = -1
    expect_invalid(doc, "seed")
    doc["seed"] = "42"
    expect_invalid(doc, "seed")


def test_route_endpoints_must_match_entity_locations():
    doc = tiny_document()
    doc["routes"] = [
        {"from": "S", "to": "W", "waypoints": [[52.5, -1.9], [51.0, -0.5]], "speed_kmh": 60.0}
    ]
    expect_invalid(doc, "routes[0].waypoints[-1]")


def test_route_unknown_entity():
    doc = tiny_document()
    doc["routes"] = [
        {"from": "S9", "to": "W", "waypoints": [[52.5, -1.9], [51.5, -0.1]]}
    ]
    expect_invalid(doc, "routes[0].from")


def test_initial_order_buyer_must_be_buyer_role():
    doc = tiny_document()
    doc["initial_orders"] = [{"at": 0, "buyer": "S"}]
    expect_invalid(doc, "initial_orders[0].buyer")


def test_initial_order_unknown_product():
    doc = tiny_document()
    doc["initial_orders"] = [{"at": 0, "buyer": "W", "lines": {"tofu": 5.0}}]
    expect_invalid(doc, "initial_orders[0].lines.tofu")


def test_assessment_weights_must_sum_to_one():
    doc = tiny_document()
    doc["assessment_weights"] = {"late": 0.9, "violation": 0.3}
    expect_invalid(doc, "assessment_weights")


def test_manifold_threshold_range():
    doc = tiny_document()
    doc["manifold"] = {"tau_i": 1.5}
    expect_invalid(doc, "manifold.tau_i")


def test_duplicate_sensor_kind():
    doc = tiny_document()
    doc["sensor_profiles"] = [
        {"kind": "temperature", "unit": "C", "target": 2.0, "reversion": 0.5,
         "noise": 0.0, "safe_range": [0, 4]},
        {"kind": "temperature", "unit": "C", "target": 3.0, "reversion": 0.5,
         "noise": 0.0, "safe_range": [0, 4]},
    ]
    expect_invalid(doc, "sensor_profiles")


def test_network_missing_role_is_a_validation_error():
    doc = tiny_document()
    doc["entities"] = [e for e in doc["entities"] if e["id"] != "P"]
    doc["connections"] = [c for c in doc["connections"] if "P" not in (c["from"], c["to"])]
    expect_invalid(doc, "entities")


def test_scenario_must_be_json_shaped():
    doc = tiny_document()
    doc["entities"][0]["location"] = (51.5, -0.1)  # tuples are fine: JSON arrays
    load_scenario(doc)
    doc["junk"] = {1, 2}
    with pytest.raises(ValidationError):
        load_scenario(doc)


def test_entities_payload_is_sorted_and_complete(default_scenario):
    payload = default_scenario.entities_payload()
    assert [e["id"] for e in payload] == sorted(e["id"] for e in payload)
    cmc = next(e for e in payload if e["id"] == "CMC")
    assert cmc["role"] == "wholesaler"
    assert {o["product"] for o in cmc["catalog"]} == {"chicken", "beef", "lamb"}
    assert cmc["units"] == ["ordering", "warehouse"]
