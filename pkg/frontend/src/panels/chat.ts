/** Agent chat panel: one line per protocol message, appended in order. */

import type { ConsoleState } from "../store.js";
import type { PanelRefs } from "./layout.js";

/** Append any chat lines not yet in the DOM (list only ever grows). */
export function renderChat(refs: PanelRefs, state: ConsoleState): void {
  const list = refs.chatLines;
  for (let i = list.childElementCount; i < state.chat.length; i += 1) {
    const line = state.chat[i];
    const item = document.createElement("li");
    item.textContent = line.text;
    item.dataset.performative = line.performative;
    item.dataset.seq = String(line.seq);
    list.append(item);
  }
  const scroller = list.parentElement;
  if (scroller) scroller.scrollTop = scroller.scrollHeight;
}
