// DOM rendering for the session view: two labelled pans, outcome buttons
// that mirror how the balance settled, the weighing history, and the final
// verdict.

import { PanDoc } from "./api.js";
import { SessionView, describeResult } from "./state.js";

export function describePan(pan: PanDoc): string {
  const parts = pan.coins.map(String);
  for (let i = 0; i < pan.refs; i++) {
    parts.push("ref");
  }
  return parts.length ? parts.join(", ") : "(empty)";
}

export function render(root: HTMLElement, view: SessionView): void {
  const banner = view.banner
    ? `<div class="banner" role="alert">${view.banner}</div>`
    : "";
  const error = view.error
    ? `<div class="error" role="alert">${view.error} <button data-action="retry">retry</button></div>`
    : "";

  let center: string;
  if (view.result) {
    center = `<div class="verdict">${describeResult(view.result)}</div>`;
  } else if (view.next && !view.next.done) {
    center = `
      <div class="weighing">
        <div class="count">weighing ${view.next.weighing_index}</div>
        <div class="pans">
          <div class="pan left"><h3>left pan</h3>${describePan(view.next.left!)}</div>
          <div class="pan right"><h3>right pan</h3>${describePan(view.next.right!)}</div>
        </div>
        <div class="outcomes">
          <button data-outcome="<" ${view.busy ? "disabled" : ""}>left lighter &lt;</button>
          <button data-outcome="=" ${view.busy ? "disabled" : ""}>balanced =</button>
          <button data-outcome=">" ${view.busy ? "disabled" : ""}>left heavier &gt;</button>
        </div>
      </div>`;
  } else {
    center = `<div class="loading">waiting for the service…</div>`;
  }

  const history = view.history
    .map(
      (h, i) => `
      <li>
        {${h.left.coins.join(",")}} : {${h.right.coins.join(",")}} → ${h.outcome}
        <button data-undo="${i}">undo to here</button>
      </li>`,
    )
    .join("");

  root.innerHTML = `
    ${banner}${error}${center}
    <ol class="history">${history}</ol>
  `;
}
