/**
 * Ambient conditions panel: one small line chart per sensor kind over a
 * sliding window of readings, with alerted points highlighted and a badge
 * counting alerts raised so far.
 */

import { SENSOR_WINDOW, type ConsoleState, type SensorSeries } from "../store.js";
import type { PanelRefs } from "./layout.js";

const CHART_WIDTH = 320;
const CHART_HEIGHT = 110;
const PAD = 8;

export function renderAmbient(refs: PanelRefs, state: ConsoleState): void {
  if (state.alertCount > 0) {
    refs.alertBadge.hidden = false;
    refs.alertBadge.textContent = `${state.alertCount} alert${state.alertCount === 1 ? "" : "s"}`;
  } else {
    refs.alertBadge.hidden = true;
  }
  for (const [kind, series] of state.sensors) {
    const canvas = ensureChart(refs, kind, series);
    drawSeries(canvas, series);
  }
}

function ensureChart(refs: PanelRefs, kind: string, series: SensorSeries): HTMLCanvasElement {
  let figure = refs.charts.querySelector<HTMLElement>(`figure[data-kind="${kind}"]`);
  if (!figure) {
    figure = document.createElement("figure");
    figure.dataset.kind = kind;
    const caption = document.createElement("figcaption");
    caption.textContent = series.unit ? `${kind} (${series.unit})` : kind;
    const canvas = document.createElement("canvas");
    canvas.width = CHART_WIDTH;
    canvas.height = CHART_HEIGHT;
    figure.append(caption, canvas);
    refs.charts.append(figure);
  }
  return figure.querySelector("canvas") as HTMLCanvasElement;
}

function drawSeries(canvas: HTMLCanvasElement, series: SensorSeries): void {
  const ctx = canvas.getContext ? canvas.getContext("2d") : null;
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#f8fafc";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  const readings = series.readings;
  if (readings.length === 0) return;

  let min = Infinity;
  let max = -Infinity;
  for (const reading of readings) {
    min = Math.min(min, reading.value);
    max = Math.max(max, reading.value);
  }
  const span = Math.max(max - min, 1e-9);
  const innerWidth = canvas.width - 2 * PAD;
  const innerHeight = canvas.height - 2 * PAD;
  const xAt = (index: number): number =>
    PAD + (readings.length === 1 ? innerWidth / 2 : (index / (SENSOR_WINDOW - 1)) * innerWidth);
  const yAt = (value: number): number => PAD + (1 - (value - min) / span) * innerHeight;

  ctx.strokeStyle = "#0d9488";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  readings.forEach((reading, index) => {
    const x = xAt(index);
    const y = yAt(reading.value);
    if (index === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();

  for (let index = 0; index < readings.length; index += 1) {
    if (!readings[index].alerted) continue;
    ctx.fillStyle = "#dc2626";
    ctx.beginPath();
    ctx.arc(xAt(index), yAt(readings[index].value), 3.5, 0, Math.PI * 2);
    ctx.fill();
  }

  ctx.fillStyle = "#64748b";
  ctx.font = "10px sans-serif";
  ctx.fillText(max.toFixed(2), 2, PAD + 4);
  ctx.fillText(min.toFixed(2), 2, canvas.height - 2);
}
