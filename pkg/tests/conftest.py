"""Shared fixtures: the packaged default scenario and a minimal network."""

import pytest

from ascsim.scenario import Scenario, load_scenario, load_scenario_file


def tiny_document() -> dict:
    """Smallest useful network: one entity per role, straight-line fallback routes."""
    return {
        "seed": 7,
        "entities": [
            {
                "id": "W",
                "role": "wholesaler",
                "name": "Tiny Wholesale",
                "location": [51.5, -0.1],
                "catalog": [
                    {"product": "chicken", "unit_price": 10.0, "stock_kg": 80.0},
                    {"product": "beef", "unit_price": 12.0, "stock_kg": 80.0},
                    {"product": "lamb", "unit_price": 14.0, "stock_kg": 80.0},
                ],
                "units": ["ordering", "warehouse"],
                "reorder_points": {"chicken": 40.0, "beef": 40.0, "lamb": 40.0},
            },
            {
                "id": "S",
                "role": "supplier",
                "name": "Tiny Farm",
                "location": [52.5, -1.9],
                "catalog": [
                    {"product": "chicken", "unit_price": 3.0, "stock_kg": 200.0},
                    {"product": "beef", "unit_price": 4.0, "stock_kg": 200.0},
                    {"product": "lamb", "unit_price": 5.0, "stock_kg": 200.0},
                ],
            },
            {"id": "R", "role": "retailer", "name": "Tiny Shop", "location": [51.8, -1.3]},
            {
                "id": "L",
                "role": "logistics",
                "name": "Tiny Freight",
                "location": [51.6, -0.5],
                "params": {"base_fee": 10.0, "rate_per_km": 0.5},
            },
            {
                "id": "P",
                "role": "third-party-logistics",
                "name": "Tiny Trucks",
                "location": [51.7, -0.4],
                "params": {"rate_per_km": 0.3, "speed_kmh": 60.0},
            },
        ],
        "connections": [
            {"from": "W", "to": "S", "kind": "loose-external", "lifecycle": "established"},
            {"from": "W", "to": "R", "kind": "tight-external", "lifecycle": "established"},
            {"from": "S", "to": "L", "kind": "loose-external", "lifecycle": "established"},
            {"from": "W", "to": "L", "kind": "loose-external", "lifecycle": "established"},
            {"from": "L", "to": "P", "kind": "loose-external", "lifecycle": "established"},
        ],
    }


@pytest.fixture(scope="session")
def default_scenario() -> Scenario:
    return load_scenario_file("default.json")


@pytest.fixture()
def tiny_scenario() -> Scenario:
    return load_scenario(tiny_document())
