/** Event wiring: one state value, one render target, one in-flight request. */

import { ApiError, ServiceClient, resolveBaseUrl } from "./api.js";
import {
  UiState,
  applyError,
  applyModelInfo,
  applyModelInfoFailure,
  applyResult,
  beginSubmit,
  initialState,
  setInput,
} from "./state.js";
import { render } from "./render.js";

export function mount(root: HTMLElement, client: ServiceClient): { submit(): Promise<void> } {
  let state: UiState = initialState();

  function paint(): void {
    root.innerHTML = render(state);
    const input = root.querySelector<HTMLTextAreaElement>("#email-input");
    input?.addEventListener("input", () => {
      state = setInput(state, input.value);
      const button = root.querySelector<HTMLButtonElement>("#submit");
      if (button) button.disabled = state.inFlight || input.value.trim() === "";
    });
    root.querySelector("#submit")?.addEventListener("click", () => void submit());
    root.querySelector("#retry-info")?.addEventListener("click", () => void loadModelInfo());
  }

  async function submit(): Promise<void> {
    const started = beginSubmit(state);
    if (started === null) return; // empty input or a request already in flight
    state = started;
    paint();
    try {
      const result = await client.predict(state.input);
      state = applyResult(state, result);
    } catch (error) {
      if (error instanceof ApiError) {
        state = applyError(state, { kind: error.kind, message: error.message });
      } else {
        state = applyError(state, {
          kind: "unavailable",
          message: "unexpected response from the service",
        });
      }
    }
    paint();
  }

  async function loadModelInfo(): Promise<void> {
    try {
      state = applyModelInfo(state, await client.modelInfo());
    } catch {
      state = applyModelInfoFailure(state);
    }
    paint();
  }

  paint();
  void loadModelInfo();
  return { submit };
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const base = resolveBaseUrl(window.location.search, window.location.origin);
  mount(document.getElementById("app") as HTMLElement, new ServiceClient(base));
}
