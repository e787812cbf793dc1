import { OutcomeSymbol, SessionApi } from "./api.js";
import { SessionController } from "./state.js";
import { render } from "./ui.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8011";
const coins = Number(params.get("n") ?? "11");

const root = document.getElementById("app")!;
const controller = new SessionController(new SessionApi(baseUrl));
controller.onChange((view) => render(root, view));

root.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const outcome = target.getAttribute("data-outcome");
  if (outcome) {
    void controller.submitOutcome(outcome as OutcomeSymbol);
    return;
  }
  const undo = target.getAttribute("data-undo");
  if (undo !== null) {
    void controller.undoTo(Number(undo));
    return;
  }
  if (target.getAttribute("data-action") === "retry") {
    void controller.start(coins);
  }
});

controller.start(coins).catch((err) => {
  root.innerHTML = `<div class="error">cannot reach ${baseUrl}: ${err}
    <button data-action="retry">retry</button></div>`;
});
