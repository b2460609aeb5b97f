/**
 * Pure client-side state fold.
 *
 * The console holds one `ConsoleState`, seeded from a state snapshot and
 * advanced by applying stream events strictly in sequence order.  Rendering
 * reads this state; nothing here touches the DOM or the network.
 */

import type {
  EventRecord,
  LatLng,
  RouteInfo,
  Snapshot,
} from "./types.js";

/** Readings kept per sensor kind (sliding window). */
export const SENSOR_WINDOW = 200;

export interface ChatLine {
  seq: number;
  simTime: number;
  sender: string;
  receiver: string;
  performative: string;
  text: string;
}

export interface Reading {
  simTime: number;
  value: number;
  alerted: boolean;
}

export interface SensorSeries {
  unit: string;
  readings: Reading[];
}

export interface VehicleView {
  shipmentId: string;
  orderId: string;
  trackingNumber: string;
  carrier: string;
  route: RouteInfo;
  position: LatLng;
  progress: number;
  status: "EnRoute" | "Arrived";
  alerts: number;
}

export interface OrderView {
  orderId: string;
  buyer: string;
  seller: string | null;
  linesKg: Record<string, number>;
  status: string;
  score: number | null;
  onTime: boolean | null;
}

export interface ConsoleState {
  /** Highest event sequence number folded in so far. */
  lastSeq: number;
  /** Simulated clock, taken from the latest snapshot or event. */
  simTime: number;
  /** Set when a gap was observed; the owner must re-sync from lastSeq. */
  needsResync: boolean;
  chat: ChatLine[];
  vehicles: Map<string, VehicleView>;
  sensors: Map<string, SensorSeries>;
  alertCount: number;
  orders: Map<string, OrderView>;
}

export function initialState(): ConsoleState {
  return {
    lastSeq: 0,
    simTime: 0,
    needsResync: false,
    chat: [],
    vehicles: new Map(),
    sensors: new Map(),
    alertCount: 0,
    orders: new Map(),
  };
}

/** Build console state from a snapshot, so a mid-run attach paints instantly. */
export function applySnapshot(snapshot: Snapshot): ConsoleState {
  const state = initialState();
  state.lastSeq = snapshot.last_seq;
  state.simTime = snapshot.sim_time;
  for (const order of Object.values(snapshot.orders)) {
    state.orders.set(order.order_id, {
      orderId: order.order_id,
      buyer: order.buyer,
      seller: order.seller,
      linesKg: { ...order.lines_kg },
      status: order.status,
      score: null,
      onTime: null,
    });
  }
  for (const assessment of Object.values(snapshot.assessments)) {
    const order = state.orders.get(assessment.order_id);
    if (order) {
      order.score = assessment.score;
      order.onTime = assessment.on_time;
    }
  }
  for (const vehicle of Object.values(snapshot.vehicles)) {
    state.vehicles.set(vehicle.shipment_id, {
      shipmentId: vehicle.shipment_id,
      orderId: vehicle.order_id,
      trackingNumber: vehicle.tracking_number,
      carrier: vehicle.carrier,
      route: { waypoints: vehicle.route.waypoints.map((w) => [...w] as LatLng), speed_kmh: vehicle.route.speed_kmh },
      position: [...vehicle.position] as LatLng,
      progress: vehicle.progress,
      status: vehicle.status === "Arrived" ? "Arrived" : "EnRoute",
      alerts: vehicle.alerts,
    });
    state.alertCount += vehicle.alerts;
  }
  // Seed each chart with the latest known value so panels are not blank.
  for (const perShipment of Object.values(snapshot.sensors)) {
    for (const [kind, reading] of Object.entries(perShipment)) {
      const series = ensureSeries(state, kind, reading.unit);
      series.readings.push({ simTime: snapshot.sim_time, value: reading.value, alerted: false });
    }
  }
  return state;
}

/**
 * Fold historical chat records (from `/api/chat`) into the state.  These
 * predate `lastSeq`, so they bypass the gap check applied to live events.
 */
export function applyChatHistory(state: ConsoleState, records: EventRecord[]): void {
  const known = new Set(state.chat.map((line) => line.seq));
  for (const record of records) {
    if (record.kind !== "ChatMessage" || known.has(record.seq)) continue;
    state.chat.push(chatLine(record));
  }
  state.chat.sort((a, b) => a.seq - b.seq);
}

/**
 * Apply one live event.  Duplicates (seq already folded) are dropped; a gap
 * sets `needsResync` and leaves the state untouched so the owner can fetch
 * the missed range from `/api/events?since=lastSeq`.
 */
export function applyEvent(state: ConsoleState, event: EventRecord): void {
  if (event.seq <= state.lastSeq) return;
  if (event.seq !== state.lastSeq + 1) {
    state.needsResync = true;
    return;
  }
  state.lastSeq = event.seq;
  state.simTime = event.sim_time;
  const p = event.payload;
  switch (event.kind) {
    case "OrderPlaced": {
      const orderId = str(p.order_id);
      state.orders.set(orderId, {
        orderId,
        buyer: str(p.buyer),
        seller: null,
        linesKg: { ...(p.lines_kg as Record<string, number>) },
        status: "negotiating",
        score: null,
        onTime: null,
      });
      break;
    }
    case "ProposalAccepted": {
      const order = state.orders.get(str(p.order_id));
      if (order) {
        order.seller = str(p.winner);
        order.status = "awarded";
      }
      break;
    }
    case "ShipmentDispatched": {
      const shipmentId = str(p.shipment_id);
      const route = p.route as RouteInfo;
      state.vehicles.set(shipmentId, {
        shipmentId,
        orderId: str(p.order_id),
        trackingNumber: str(p.tracking_number),
        carrier: str(p.carrier),
        route: { waypoints: route.waypoints.map((w) => [...w] as LatLng), speed_kmh: route.speed_kmh },
        position: [...route.waypoints[0]] as LatLng,
        progress: 0,
        status: "EnRoute",
        alerts: 0,
      });
      const order = state.orders.get(str(p.order_id));
      if (order) order.status = "in-transit";
      break;
    }
    case "VehicleMoved": {
      const vehicle = state.vehicles.get(str(p.shipment_id));
      if (vehicle) {
        // Render exactly what the event reports; no extrapolation.
        vehicle.position = [...(p.position as LatLng)] as LatLng;
        vehicle.progress = p.progress as number;
      }
      break;
    }
    case "SensorReading": {
      const series = ensureSeries(state, str(p.kind), str(p.unit));
      series.readings.push({ simTime: event.sim_time, value: p.value as number, alerted: false });
      if (series.readings.length > SENSOR_WINDOW) {
        series.readings.splice(0, series.readings.length - SENSOR_WINDOW);
      }
      break;
    }
    case "AmbientAlert": {
      const series = state.sensors.get(str(p.kind));
      const last = series?.readings[series.readings.length - 1];
      if (last) last.alerted = true;
      state.alertCount += 1;
      const vehicle = state.vehicles.get(str(p.shipment_id));
      if (vehicle) vehicle.alerts += 1;
      break;
    }
    case "ShipmentDelivered": {
      const vehicle = state.vehicles.get(str(p.shipment_id));
      if (vehicle) {
        vehicle.status = "Arrived";
        vehicle.progress = 1;
      }
      const order = state.orders.get(str(p.order_id));
      if (order) order.status = "delivered";
      break;
    }
    case "DeliveryAssessed": {
      const order = state.orders.get(str(p.order_id));
      if (order) {
        order.score = p.score as number;
        order.onTime = p.on_time as boolean;
      }
      break;
    }
    case "ProcessFailed": {
      const order = state.orders.get(str(p.order_id));
      if (order) order.status = "failed";
      break;
    }
    case "ChatMessage": {
      state.chat.push(chatLine(event));
      break;
    }
    default:
      break; // other kinds carry no console-visible state
  }
}

function ensureSeries(state: ConsoleState, kind: string, unit: string): SensorSeries {
  let series = state.sensors.get(kind);
  if (!series) {
    series = { unit, readings: [] };
    state.sensors.set(kind, series);
  }
  if (!series.unit && unit) series.unit = unit;
  return series;
}

function chatLine(record: EventRecord): ChatLine {
  const p = record.payload;
  const sender = str(p.sender);
  const receiver = str(p.receiver);
  const performative = str(p.performative);
  const body = summarizeBody(p.body);
  return {
    seq: record.seq,
    simTime: record.sim_time,
    sender,
    receiver,
    performative,
    text: `${sender} → ${receiver}: ${performative}${body ? " " + body : ""}`,
  };
}

function summarizeBody(body: unknown): string {
  if (body === null || body === undefined) return "";
  if (typeof body === "object" && Object.keys(body as object).length === 0) return "";
  const text = JSON.stringify(body);
  return text.length > 160 ? text.slice(0, 157) + "..." : text;
}

function str(value: unknown): string {
  return typeof value === "string" ? value : String(value);
}
