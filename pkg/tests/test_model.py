"""Domain types: inventory arithmetic, orders, network validation."""

import pytest
from hypothesis import given, strategies as st

from ascsim.model import (
    CASE_STUDY_ROLES,
    ORDER_TRANSITIONS,
    Connection,
    ConnectionKind,
    ConnectionLifecycle,
    DanglingConnection,
    DuplicateEntityId,
    IllegalTransition,
    InsufficientStock,
    InvalidConnection,
    InventoryLedger,
    MissingRole,
    Order,
    OrderStatus,
    ProductOffer,
    Role,
    StructuralEntity,
    UnknownProduct,
    apply_inventory_delta,
    g_to_kg,
    kg_to_g,
    reorder_check,
    validate_network,
)


def make_entity(eid="S1", role=Role.SUPPLIER, **kwargs):
    defaults = dict(
        id=eid,
        role=role,
        name=eid,
        location=(51.5, -0.1),
        catalog=(ProductOffer("beef", 4.0, 100.0),) if role in (Role.SUPPLIER, Role.WHOLESALER) else (),
    )
    defaults.update(kwargs)
    return StructuralEntity(**defaults)


# -- unit conversion -----------------------------------------------------------------


def test_kg_gram_conversion_round_trip():
    assert kg_to_g(50.0) == 50_000
    assert kg_to_g(0.001) == 1
    assert g_to_kg(50_000) == 50.0


@given(st.integers(min_value=0, max_value=10**9))
def test_gram_kg_gram_round_trip_is_exact(grams):
    assert kg_to_g(g_to_kg(grams)) == grams


# -- offers and entities ---------------------------------------------------------------


def test_product_offer_rejects_nonpositive_price():
    with pytest.raises(ValueError):
        ProductOffer("beef", 0.0, 10.0)
    with pytest.raises(ValueError):
        ProductOffer("beef", -1.0, 10.0)


def test_product_offer_rejects_negative_stock():
    with pytest.raises(ValueError):
        ProductOffer("beef", 4.0, -0.1)
    ProductOffer("beef", 4.0, 0.0)  # zero stock is legal


def test_selling_roles_require_catalog():
    with pytest.raises(ValueError):
        make_entity(role=Role.SUPPLIER, catalog=())
    with pytest.raises(ValueError):
        make_entity(role=Role.RETAILER, catalog=(ProductOffer("beef", 4.0, 1.0),))


def test_offer_for_unknown_product_is_none():
    entity = make_entity()
    assert entity.offer_for("beef").unit_price == 4.0
    assert entity.offer_for("tofu") is None


def test_entity_id_must_be_nonempty():
    with pytest.raises(ValueError):
        make_entity(eid="")


# -- connections ------------------------------------------------------------------------


def test_external_connection_requires_distinct_endpoints_and_lifecycle():
    good = Connection("A", "B", ConnectionKind.LOOSE_EXTERNAL, ConnectionLifecycle.ESTABLISHED)
    assert good.from_id == "A"
    with pytest.raises(InvalidConnection):
        Connection("A", "A", ConnectionKind.LOOSE_EXTERNAL, ConnectionLifecycle.ESTABLISHED)
    with pytest.raises(InvalidConnection):
        Connection("A", "B", ConnectionKind.TIGHT_EXTERNAL, None)


def test_internal_connection_links_units_of_one_entity_without_lifecycle():
    good = Connection("W.ordering", "W.warehouse", ConnectionKind.INTERNAL, None)
    assert good.kind is ConnectionKind.INTERNAL
    with pytest.raises(InvalidConnection):
        Connection("W.ordering", "X.warehouse", ConnectionKind.INTERNAL, None)
    with pytest.raises(InvalidConnection):
        Connection("W.ordering", "W.warehouse", ConnectionKind.INTERNAL, ConnectionLifecycle.AD_HOC)


# -- inventory ledger ---------------------------------------------------------------------


def test_ledger_rejects_negative_balance():
    with pytest.raises(InsufficientStock):
        InventoryLedger("W", {"beef": -1})


def test_ledger_covers():
    ledger = InventoryLedger("W", {"beef": 50_000, "lamb": 10_000})
    assert ledger.covers({"beef": 50_000})
    assert not ledger.covers({"beef": 50_001})
    assert not ledger.covers({"pork": 1})


def test_apply_delta_addition():
    ledger = InventoryLedger("W", {"beef": kg_to_g(100.0)})
    after, record = apply_inventory_delta(ledger, "beef", 50.0)
    assert after.on_hand_kg("beef") == 150.0
    assert record == {"owner": "W", "product": "beef", "delta_kg": 50.0, "on_hand_kg": 150.0}


def test_apply_delta_boundary_to_zero():
    ledger = InventoryLedger("W", {"beef": kg_to_g(100.0)})
    after, _ = apply_inventory_delta(ledger, "beef", -100.0)
    assert after.on_hand_kg("beef") == 0.0


def test_apply_delta_insufficient_stock_leaves_ledger_unchanged():
    ledger = InventoryLedger("W", {"beef": kg_to_g(50.0)})
    with pytest.raises(InsufficientStock):
        apply_inventory_delta(ledger, "beef", -60.0)
    assert ledger.on_hand_kg("beef") == 50.0


def test_apply_delta_unknown_product():
    ledger = InventoryLedger("W", {"beef": 1000})
    with pytest.raises(UnknownProduct):
        apply_inventory_delta(ledger, "tofu", 1.0)


@given(st.lists(st.integers(min_value=-50_000, max_value=50_000), max_size=40))
def test_delta_walk_conserves_grams_and_stays_nonnegative(deltas_g):
    ledger = InventoryLedger("W", {"beef": 100_000})
    applied = 0
    for grams in deltas_g:
        try:
            ledger, record = apply_inventory_delta(ledger, "beef", g_to_kg(grams))
        except InsufficientStock:
            assert 100_000 + applied + grams < 0
            continue
        applied += grams
        assert ledger.balances_g["beef"] >= 0
        assert record["on_hand_kg"] == g_to_kg(100_000 + applied)
    assert ledger.balances_g["beef"] == 100_000 + applied


# -- reorder check ---------------------------------------------------------------------


def test_reorder_check_flags_only_strictly_below():
    ledger = InventoryLedger(
        "W",
        {"chicken": kg_to_g(30.0), "beef": kg_to_g(50.0), "lamb": kg_to_g(40.0)},
        {"chicken": kg_to_g(40.0), "beef": kg_to_g(40.0), "lamb": kg_to_g(40.0)},
    )
    assert reorder_check(ledger) == ["chicken"]


def test_reorder_check_no_deficit():
    ledger = InventoryLedger("W", {"beef": 40_000}, {"beef": 40_000})
    assert reorder_check(ledger) == []


def test_reorder_check_lexicographic_order():
    ledger = InventoryLedger(
        "W",
        {"chicken": 0, "beef": 0, "lamb": 0},
        {"chicken": 40_000, "beef": 40_000, "lamb": 40_000},
    )
    assert reorder_check(ledger) == ["beef", "chicken", "lamb"]


@given(
    st.dictionaries(
        st.sampled_from(["apple", "beef", "chicken", "durian", "eel"]),
        st.tuples(st.integers(0, 100_000), st.integers(0, 100_000)),
        max_size=5,
    )
)
def test_reorder_check_matches_bruteforce(spec):
    balances = {p: onhand for p, (onhand, _) in spec.items()}
    points = {p: point for p, (_, point) in spec.items()}
    ledger = InventoryLedger("X", balances, points)
    expected = sorted(p for p in points if balances.get(p, 0) < points[p])
    assert reorder_check(ledger) == expected


# -- orders ---------------------------------------------------------------------------


def test_order_requires_positive_lines():
    with pytest.raises(ValueError):
        Order("ORD-1", "W", {})
    with pytest.raises(ValueError):
        Order("ORD-1", "W", {"beef": 0})


def test_order_lines_kg_view():
    order = Order("ORD-1", "W", {"beef": 50_000, "chicken": 1})
    assert order.lines_kg() == {"beef": 50.0, "chicken": 0.001}


# frozen oracle for the legal status graph
LEGAL_TRANSITIONS = {
    ("draft", "negotiating"),
    ("negotiating", "awarded"),
    ("negotiating", "failed"),
    ("awarded", "in-transit"),
    ("awarded", "failed"),
    ("in-transit", "delivered"),
    ("in-transit", "failed"),
}


def test_order_status_transition_table_matches_oracle():
    table = {
        (src.value, dst.value)
        for src, dsts in ORDER_TRANSITIONS.items()
        for dst in dsts
    }
    assert table == LEGAL_TRANSITIONS


@pytest.mark.parametrize("src", list(OrderStatus))
@pytest.mark.parametrize("dst", list(OrderStatus))
def test_order_advance_never_skips_or_reverses(src, dst):
    order = Order("ORD-1", "W", {"beef": 1000}, status=src)
    if (src.value, dst.value) in LEGAL_TRANSITIONS:
        assert order.advance_to(dst).status is dst
    else:
        with pytest.raises(IllegalTransition):
            order.advance_to(dst)


# -- network validation ----------------------------------------------------------------


def case_study_entities():
    return [
        make_entity("CMC", Role.WHOLESALER, units=("ordering", "warehouse")),
        make_entity("S1"),
        make_entity("S2"),
        make_entity("S3"),
        make_entity("R1", Role.RETAILER),
        make_entity("R2", Role.RETAILER),
        make_entity("L1", Role.LOGISTICS),
        make_entity("P1", Role.THIRD_PARTY_LOGISTICS),
        make_entity("P2", Role.THIRD_PARTY_LOGISTICS),
    ]


def loose(a, b):
    return Connection(a, b, ConnectionKind.LOOSE_EXTERNAL, ConnectionLifecycle.ESTABLISHED)


def case_study_connections():
    return [
        loose("CMC", "S1"),
        loose("CMC", "S2"),
        loose("CMC", "S3"),
        loose("CMC", "R1"),
        loose("CMC", "R2"),
        loose("S1", "L1"),
        loose("S2", "L1"),
        loose("S3", "L1"),
        loose("CMC", "L1"),
        loose("L1", "P1"),
        loose("L1", "P2"),
        Connection("CMC.ordering", "CMC.warehouse", ConnectionKind.INTERNAL, None),
    ]


def test_case_study_network_is_valid():
    network = validate_network(case_study_entities(), case_study_connections())
    assert set(network.entities) == {"CMC", "S1", "S2", "S3", "R1", "R2", "L1", "P1", "P2"}
    assert [e.id for e in network.neighbors("CMC", Role.SUPPLIER)] == ["S1", "S2", "S3"]
    assert network.the_wholesaler().id == "CMC"


def test_dangling_connection_detected():
    with pytest.raises(DanglingConnection):
        validate_network(case_study_entities(), case_study_connections() + [loose("CMC", "S9")])


def test_dangling_internal_unit_detected():
    bad = Connection("CMC.ordering", "CMC.garage", ConnectionKind.INTERNAL, None)
    with pytest.raises(DanglingConnection):
        validate_network(case_study_entities(), case_study_connections() + [bad])


def test_duplicate_entity_id_detected():
    with pytest.raises(DuplicateEntityId):
        validate_network(case_study_entities() + [make_entity("S1")], case_study_connections())


def test_missing_role_detected():
    entities = [e for e in case_study_entities() if e.role is not Role.SUPPLIER]
    connections = [
        c for c in case_study_connections() if not (c.from_id.startswith("S") or c.to_id.startswith("S"))
    ]
    with pytest.raises(MissingRole):
        validate_network(entities, connections)


def test_unreachable_role_detected():
    # role present but no external connection touches it
    entities = case_study_entities()
    connections = [c for c in case_study_connections() if "R1" not in (c.from_id, c.to_id)]
    connections = [c for c in connections if "R2" not in (c.from_id, c.to_id)]
    with pytest.raises(MissingRole):
        validate_network(entities, connections)


def test_case_study_roles_cover_all_five():
    assert [r.value for r in CASE_STUDY_ROLES] == [
        "supplier",
        "wholesaler",
        "retailer",
        "logistics",
        "third-party-logistics",
    ]
