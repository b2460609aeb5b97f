/** Order form model: per-product quantities with client-side validation. */

export const DEFAULT_QUANTITY_KG = 50;

export interface OrderFormModel {
  buyer: string;
  /** Raw input text per product, validated on submit. */
  quantities: Record<string, string>;
}

export function defaultForm(products: string[], buyer: string): OrderFormModel {
  const quantities: Record<string, string> = {};
  for (const product of products) quantities[product] = String(DEFAULT_QUANTITY_KG);
  return { buyer, quantities };
}

/** Parse one quantity field; positive integers only, else null. */
export function parseQuantity(raw: string): number | null {
  const text = raw.trim();
  if (!/^[0-9]+$/.test(text)) return null;
  const value = Number(text);
  if (!Number.isSafeInteger(value) || value <= 0) return null;
  return value;
}

/** Human-readable validation problems; empty when the form may be submitted. */
export function formProblems(model: OrderFormModel): string[] {
  const problems: string[] = [];
  if (!model.buyer) problems.push("choose a buyer");
  const products = Object.keys(model.quantities);
  if (products.length === 0) problems.push("no products available to order");
  for (const product of products) {
    if (parseQuantity(model.quantities[product]) === null) {
      problems.push(`${product}: quantity must be a positive whole number of kg`);
    }
  }
  return problems;
}

/** Order lines for POST /api/orders; call only when formProblems is empty. */
export function orderLines(model: OrderFormModel): Record<string, number> {
  const lines: Record<string, number> = {};
  for (const [product, raw] of Object.entries(model.quantities)) {
    const quantity = parseQuantity(raw);
    if (quantity === null) throw new Error(`invalid quantity for ${product}`);
    lines[product] = quantity;
  }
  return lines;
}
