/** Static page scaffold: four panels, connection banner, toast. */

export interface PanelRefs {
  root: HTMLElement;
  banner: HTMLElement;
  toast: HTMLElement;
  simClock: HTMLElement;
  ordering: HTMLElement;
  transport: HTMLElement;
  chat: HTMLElement;
  ambient: HTMLElement;
  orderForm: HTMLFormElement;
  orderFields: HTMLFieldSetElement;
  orderErrors: HTMLUListElement;
  orderStatus: HTMLUListElement;
  buyerSelect: HTMLSelectElement;
  quantityRows: HTMLElement;
  launchButton: HTMLButtonElement;
  mapCanvas: HTMLCanvasElement;
  mapTooltip: HTMLElement;
  chatLines: HTMLOListElement;
  alertBadge: HTMLElement;
  charts: HTMLElement;
}

export function mountLayout(root: HTMLElement): PanelRefs {
  root.innerHTML = `
    <div class="console">
      <header class="console-header">
        <h1>Supply Chain Console</h1>
        <span class="sim-clock" data-ref="sim-clock"></span>
        <span class="banner" data-ref="banner" hidden></span>
      </header>
      <div class="console-grid">
        <section class="panel panel-ordering" data-panel="ordering">
          <h2>Ordering</h2>
          <form data-ref="order-form" novalidate>
            <fieldset data-ref="order-fields">
              <label class="buyer-row">Buyer
                <select data-ref="buyer-select"></select>
              </label>
              <div class="qty-rows" data-ref="qty-rows"></div>
              <ul class="form-errors" data-ref="order-errors"></ul>
              <button type="submit" data-ref="launch">Launch order</button>
            </fieldset>
          </form>
          <h3>Orders</h3>
          <ul class="order-status" data-ref="order-status"></ul>
        </section>
        <section class="panel panel-transport" data-panel="transport">
          <h2>Transport Monitoring</h2>
          <div class="map-wrap">
            <canvas data-ref="map" width="640" height="420"></canvas>
            <div class="tooltip" data-ref="map-tooltip" hidden></div>
          </div>
        </section>
        <section class="panel panel-chat" data-panel="chat">
          <h2>Agent Chat Room</h2>
          <ol class="chat-lines" data-ref="chat-lines"></ol>
        </section>
        <section class="panel panel-ambient" data-panel="ambient">
          <h2>Ambient Conditions <span class="badge" data-ref="alert-badge" hidden></span></h2>
          <div class="charts" data-ref="charts"></div>
        </section>
      </div>
      <div class="toast" data-ref="toast" hidden></div>
    </div>`;

  const ref = <T extends Element>(name: string): T => {
    const node = root.querySelector(`[data-ref="${name}"]`);
    if (!node) throw new Error(`layout is missing ${name}`);
    return node as T;
  };
  const panel = (name: string): HTMLElement => {
    const node = root.querySelector(`[data-panel="${name}"]`);
    if (!node) throw new Error(`layout is missing panel ${name}`);
    return node as HTMLElement;
  };

  return {
    root,
    banner: ref("banner"),
    toast: ref("toast"),
    simClock: ref("sim-clock"),
    ordering: panel("ordering"),
    transport: panel("transport"),
    chat: panel("chat"),
    ambient: panel("ambient"),
    orderForm: ref("order-form"),
    orderFields: ref("order-fields"),
    orderErrors: ref("order-errors"),
    orderStatus: ref("order-status"),
    buyerSelect: ref("buyer-select"),
    quantityRows: ref("qty-rows"),
    launchButton: ref("launch"),
    mapCanvas: ref("map"),
    mapTooltip: ref("map-tooltip"),
    chatLines: ref("chat-lines"),
    alertBadge: ref("alert-badge"),
    charts: ref("charts"),
  };
}

export function setBanner(refs: PanelRefs, text: string | null): void {
  if (text === null) {
    refs.banner.hidden = true;
    refs.banner.textContent = "";
  } else {
    refs.banner.hidden = false;
    refs.banner.textContent = text;
  }
}

let toastTimer: ReturnType<typeof setTimeout> | null = null;

export function showToast(refs: PanelRefs, text: string, ms = 4000): void {
  refs.toast.textContent = text;
  refs.toast.hidden = false;
  if (toastTimer !== null) clearTimeout(toastTimer);
  toastTimer = setTimeout(() => {
    refs.toast.hidden = true;
  }, ms);
}
