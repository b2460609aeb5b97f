/** Ordering panel: buyer selector, per-product quantity inputs, order list. */

import type { OrderFormModel } from "../orderForm.js";
import type { ConsoleState, OrderView } from "../store.js";
import type { PanelRefs } from "./layout.js";

export interface BuyerChoice {
  id: string;
  label: string;
}

/** Populate the buyer selector and one quantity row per product. */
export function buildOrderForm(refs: PanelRefs, buyers: BuyerChoice[], model: OrderFormModel): void {
  refs.buyerSelect.innerHTML = "";
  for (const buyer of buyers) {
    const option = document.createElement("option");
    option.value = buyer.id;
    option.textContent = buyer.label;
    refs.buyerSelect.append(option);
  }
  refs.buyerSelect.value = model.buyer;

  refs.quantityRows.innerHTML = "";
  for (const [product, raw] of Object.entries(model.quantities)) {
    const label = document.createElement("label");
    label.className = "qty-row";
    const caption = document.createElement("span");
    caption.textContent = product;
    const input = document.createElement("input");
    input.type = "text";
    input.inputMode = "numeric";
    input.name = `qty-${product}`;
    input.value = raw;
    input.dataset.product = product;
    const unit = document.createElement("span");
    unit.textContent = "kg";
    label.append(caption, input, unit);
    refs.quantityRows.append(label);
  }
}

/** Read the current form contents back into a model. */
export function readOrderForm(refs: PanelRefs): OrderFormModel {
  const quantities: Record<string, string> = {};
  for (const input of refs.quantityRows.querySelectorAll<HTMLInputElement>("input[data-product]")) {
    quantities[input.dataset.product as string] = input.value;
  }
  return { buyer: refs.buyerSelect.value, quantities };
}

export function setFormErrors(refs: PanelRefs, problems: string[]): void {
  refs.orderErrors.innerHTML = "";
  for (const problem of problems) {
    const item = document.createElement("li");
    item.textContent = problem;
    refs.orderErrors.append(item);
  }
}

export function setFormDisabled(refs: PanelRefs, disabled: boolean): void {
  refs.orderFields.disabled = disabled;
  refs.launchButton.textContent = disabled ? "Launching…" : "Launch order";
}

/** Re-render the order list beneath the form. */
export function renderOrders(refs: PanelRefs, state: ConsoleState): void {
  const orders = [...state.orders.values()].sort((a, b) => a.orderId.localeCompare(b.orderId));
  refs.orderStatus.innerHTML = "";
  for (const order of orders) {
    const item = document.createElement("li");
    item.dataset.orderId = order.orderId;
    item.dataset.status = order.status;
    item.textContent = orderLineText(order);
    refs.orderStatus.append(item);
  }
}

export function orderLineText(order: OrderView): string {
  const lines = Object.entries(order.linesKg)
    .map(([product, kg]) => `${product} ${kg}kg`)
    .join(", ");
  let text = `${order.orderId} · ${order.buyer} · ${lines} · ${order.status}`;
  if (order.seller) text += ` · from ${order.seller}`;
  if (order.score !== null) {
    text += ` · score ${order.score.toFixed(2)} (${order.onTime ? "on time" : "late"})`;
  }
  return text;
}
