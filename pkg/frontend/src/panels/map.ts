/**
 * Transport map: a schematic 2D canvas projection of entity sites, route
 * polylines, and vehicle markers.  Positions come verbatim from the latest
 * movement events — the map never extrapolates between them.
 */

import type { ConsoleState, VehicleView } from "../store.js";
import type { EntityInfo, LatLng } from "../types.js";
import type { PanelRefs } from "./layout.js";

export interface MarkerHit {
  x: number;
  y: number;
  trackingNumber: string;
  carrier: string;
  progress: number;
}

export interface Projection {
  toCanvas(point: LatLng): [number, number];
}

/** Uniform-scale projection of lat/lng onto the canvas, padded and centred. */
export function fitProjection(points: LatLng[], width: number, height: number, pad = 28): Projection {
  if (points.length === 0) {
    return { toCanvas: () => [width / 2, height / 2] };
  }
  let minLat = Infinity;
  let maxLat = -Infinity;
  let minLng = Infinity;
  let maxLng = -Infinity;
  for (const [lat, lng] of points) {
    minLat = Math.min(minLat, lat);
    maxLat = Math.max(maxLat, lat);
    minLng = Math.min(minLng, lng);
    maxLng = Math.max(maxLng, lng);
  }
  const spanLat = Math.max(maxLat - minLat, 1e-6);
  const spanLng = Math.max(maxLng - minLng, 1e-6);
  const scale = Math.min((width - 2 * pad) / spanLng, (height - 2 * pad) / spanLat);
  const offsetX = (width - spanLng * scale) / 2;
  const offsetY = (height - spanLat * scale) / 2;
  return {
    toCanvas([lat, lng]: LatLng): [number, number] {
      const x = offsetX + (lng - minLng) * scale;
      const y = offsetY + (maxLat - lat) * scale; // north at the top
      return [x, y];
    },
  };
}

/** Redraw the map; returns marker screen positions for tooltip hit-testing. */
export function drawMap(refs: PanelRefs, state: ConsoleState, entities: EntityInfo[]): MarkerHit[] {
  const canvas = refs.mapCanvas;
  const ctx = canvas.getContext ? canvas.getContext("2d") : null;
  const points: LatLng[] = entities.map((e) => e.location);
  for (const vehicle of state.vehicles.values()) {
    points.push(...vehicle.route.waypoints);
  }
  const projection = fitProjection(points, canvas.width, canvas.height);
  const hits: MarkerHit[] = [];
  if (ctx) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#f1f5f9";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    for (const vehicle of state.vehicles.values()) {
      drawRoute(ctx, projection, vehicle);
    }
    for (const entity of entities) {
      drawSite(ctx, projection, entity);
    }
  }
  for (const vehicle of state.vehicles.values()) {
    const [x, y] = projection.toCanvas(vehicle.position);
    hits.push({
      x,
      y,
      trackingNumber: vehicle.trackingNumber,
      carrier: vehicle.carrier,
      progress: vehicle.progress,
    });
    if (ctx) drawVehicle(ctx, x, y, vehicle);
  }
  return hits;
}

function drawRoute(ctx: CanvasRenderingContext2D, projection: Projection, vehicle: VehicleView): void {
  ctx.strokeStyle = vehicle.status === "Arrived" ? "#93c5fd" : "#2563eb";
  ctx.lineWidth = 2;
  ctx.beginPath();
  vehicle.route.waypoints.forEach((waypoint, index) => {
    const [x, y] = projection.toCanvas(waypoint);
    if (index === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
}

function drawSite(ctx: CanvasRenderingContext2D, projection: Projection, entity: EntityInfo): void {
  const [x, y] = projection.toCanvas(entity.location);
  ctx.fillStyle = "#475569";
  ctx.fillRect(x - 4, y - 4, 8, 8);
  ctx.fillStyle = "#1e293b";
  ctx.font = "11px sans-serif";
  ctx.fillText(entity.id, x + 6, y - 6);
}

function drawVehicle(ctx: CanvasRenderingContext2D, x: number, y: number, vehicle: VehicleView): void {
  ctx.fillStyle = vehicle.status === "Arrived" ? "#16a34a" : "#dc2626";
  ctx.beginPath();
  ctx.arc(x, y, 6, 0, Math.PI * 2);
  ctx.fill();
  if (vehicle.alerts > 0) {
    ctx.strokeStyle = "#f59e0b";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(x, y, 9, 0, Math.PI * 2);
    ctx.stroke();
  }
}

/** Find the marker under the pointer, if any. */
export function hitMarker(hits: MarkerHit[], x: number, y: number, radius = 10): MarkerHit | null {
  for (const hit of hits) {
    const dx = hit.x - x;
    const dy = hit.y - y;
    if (dx * dx + dy * dy <= radius * radius) return hit;
  }
  return null;
}

/** Wire pointer events for the tracking-number tooltip. */
export function attachTooltip(refs: PanelRefs, latestHits: () => MarkerHit[]): void {
  refs.mapCanvas.addEventListener("mousemove", (event: MouseEvent) => {
    const rect = refs.mapCanvas.getBoundingClientRect();
    const hit = hitMarker(latestHits(), event.clientX - rect.left, event.clientY - rect.top);
    if (hit) {
      refs.mapTooltip.hidden = false;
      refs.mapTooltip.textContent = `${hit.trackingNumber} · ${hit.carrier} · ${(hit.progress * 100).toFixed(1)}%`;
      refs.mapTooltip.style.left = `${hit.x + 12}px`;
      refs.mapTooltip.style.top = `${hit.y - 12}px`;
    } else {
      refs.mapTooltip.hidden = true;
    }
  });
  refs.mapCanvas.addEventListener("mouseleave", () => {
    refs.mapTooltip.hidden = true;
  });
}
