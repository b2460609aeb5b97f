/**
 * Console composition root.
 *
 * `initView` mounts the four panels immediately (in their empty state),
 * then bootstraps in the background: fetch the snapshot, chat history, and
 * entity roster; paint; subscribe to the event stream from the snapshot's
 * sequence number.  If the backend is unreachable a banner is shown and the
 * bootstrap retries with backoff.  A sequence gap on the stream triggers a
 * catch-up fetch from `/api/events`.
 */

import { Api, ApiError } from "./api.js";
import { defaultForm, formProblems, orderLines } from "./orderForm.js";
import { renderAmbient } from "./panels/ambient.js";
import { renderChat } from "./panels/chat.js";
import { attachTooltip, drawMap, type MarkerHit } from "./panels/map.js";
import {
  buildOrderForm,
  readOrderForm,
  renderOrders,
  setFormDisabled,
  setFormErrors,
  type BuyerChoice,
} from "./panels/ordering.js";
import { mountLayout, setBanner, showToast, type PanelRefs } from "./panels/layout.js";
import { applyChatHistory, applyEvent, initialState, applySnapshot, type ConsoleState } from "./store.js";
import { StreamClient } from "./stream.js";
import type { EntityInfo, EventRecord } from "./types.js";

export interface InitOptions {
  token?: string;
  fetchImpl?: typeof fetch;
  /** Delay before bootstrap / stream reconnect attempts (injectable for tests). */
  retryDelayMs?: (attempt: number) => number;
}

export interface ConsoleApp {
  state: ConsoleState;
  refs: PanelRefs;
  /** Resolves once the first bootstrap has painted live data. */
  ready: Promise<void>;
  stop(): void;
}

const defaultBackoff = (attempt: number): number => Math.min(500 * 2 ** attempt, 5000);

export function initView(root: HTMLElement, base: string, options: InitOptions = {}): ConsoleApp {
  const refs = mountLayout(root);
  const api = new Api(base, options.token ?? "", options.fetchImpl);
  const retryDelay = options.retryDelayMs ?? defaultBackoff;

  const app = {
    state: initialState(),
    refs,
    entities: [] as EntityInfo[],
    hits: [] as MarkerHit[],
    stream: null as StreamClient | null,
    stopped: false,
    pendingOrders: new Set<string>(),
    resyncing: false,
    dirty: false,
  };

  attachTooltip(refs, () => app.hits);

  function refresh(): void {
    if (app.dirty) return;
    app.dirty = true;
    queueMicrotask(() => {
      app.dirty = false;
      refs.simClock.textContent = `sim t=${app.state.simTime.toFixed(1)}s · seq ${app.state.lastSeq}`;
      renderOrders(refs, app.state);
      renderChat(refs, app.state);
      renderAmbient(refs, app.state);
      app.hits = drawMap(refs, app.state, app.entities);
    });
  }

  async function resync(): Promise<void> {
    if (app.resyncing) return;
    app.resyncing = true;
    try {
      while (app.state.needsResync && !app.stopped) {
        app.state.needsResync = false;
        const missed = await api.events(app.state.lastSeq);
        for (const record of missed) applyEvent(app.state, record);
        for (const record of missed) settlePending(record);
      }
      if (app.stream) app.stream.lastSeq = Math.max(app.stream.lastSeq, app.state.lastSeq);
      refresh();
    } catch {
      app.state.needsResync = true; // try again on the next stream event
    } finally {
      app.resyncing = false;
    }
  }

  function settlePending(record: EventRecord): void {
    if (record.kind !== "OrderPlaced") return;
    const orderId = record.payload.order_id as string;
    if (app.pendingOrders.delete(orderId)) {
      setFormDisabled(refs, false);
      showToast(refs, `${orderId} accepted — watching it run`);
    }
  }

  function onStreamEvent(record: EventRecord): void {
    applyEvent(app.state, record);
    settlePending(record);
    if (app.state.needsResync) void resync();
    refresh();
  }

  async function bootstrap(): Promise<void> {
    for (let attempt = 0; !app.stopped; attempt += 1) {
      try {
        const entities = await api.entities();
        const snapshot = await api.state();
        const history = await api.chat(0);
        app.entities = entities;
        app.state = applySnapshot(snapshot);
        applyChatHistory(app.state, history);
        setBanner(refs, null);
        buildForm();
        app.stream = new StreamClient({
          base,
          since: app.state.lastSeq,
          token: options.token,
          onEvent: onStreamEvent,
          onStatus: (status) => {
            if (status === "open") setBanner(refs, null);
            else if (status === "retrying") setBanner(refs, "event stream lost — reconnecting…");
          },
          fetchImpl: options.fetchImpl,
          retryDelayMs: options.retryDelayMs,
        });
        void app.stream.run();
        refresh();
        return;
      } catch (error) {
        const detail = error instanceof ApiError ? ` (${error.message})` : "";
        setBanner(refs, `backend unreachable — retrying…${detail}`);
        await sleep(retryDelay(attempt));
      }
    }
  }

  function buildForm(): void {
    const wholesaler = app.entities.find((entity) => entity.role === "wholesaler");
    const retailers = app.entities.filter((entity) => entity.role === "retailer");
    const products = (wholesaler?.catalog ?? []).map((item) => item.product);
    const buyers: BuyerChoice[] = [];
    if (wholesaler) buyers.push({ id: wholesaler.id, label: `${wholesaler.id} — replenishment` });
    for (const retailer of retailers) buyers.push({ id: retailer.id, label: `${retailer.id} — wholesale` });
    const model = defaultForm(products, buyers[0]?.id ?? "");
    buildOrderForm(refs, buyers, model);
  }

  refs.orderForm.addEventListener("submit", (event: Event) => {
    event.preventDefault();
    const model = readOrderForm(refs);
    const problems = formProblems(model);
    setFormErrors(refs, problems);
    if (problems.length > 0) return;
    setFormDisabled(refs, true);
    void api
      .placeOrder(model.buyer, orderLines(model))
      .then((orderId) => {
        if (app.state.orders.has(orderId)) {
          // The OrderPlaced event outran the POST response.
          setFormDisabled(refs, false);
          showToast(refs, `${orderId} accepted — watching it run`);
        } else {
          app.pendingOrders.add(orderId);
        }
      })
      .catch((error: unknown) => {
        const message = error instanceof ApiError ? error.message : "order failed — backend unreachable";
        showToast(refs, message);
        setFormDisabled(refs, false);
      });
  });

  const ready = bootstrap();

  return {
    get state() {
      return app.state;
    },
    refs,
    ready,
    stop() {
      app.stopped = true;
      app.stream?.stop();
    },
  };
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
