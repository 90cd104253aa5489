/** Pure view: UiState in, markup out. No fetches, no classification logic;
 * every verdict, percentage, band and indicator comes verbatim from the
 * service response carried in the state. */

import { FeatureEntry } from "./types.js";
import { UiState, canSubmit } from "./state.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function formatPercent(fraction: number): string {
  return `${(fraction * 100).toFixed(2)}%`;
}

function formatWeight(weight: number): string {
  const sign = weight > 0 ? "+" : "";
  return `${sign}${weight.toFixed(4)}`;
}

function renderError(state: UiState): string {
  if (!state.error) return "";
  const role = state.error.kind === "validation" ? "validation-message" : "error-banner";
  return `<div class="${role}" data-testid="${role}">${escapeHtml(state.error.message)}</div>`;
}

function renderVerdict(state: UiState): string {
  const result = state.result;
  if (!result) return "";
  const confidence = formatPercent(result.confidence);
  const indicators = result.indicators
    .map(
      (indicator) => `
      <li class="indicator ${indicator.weight > 0 ? "toward-phishing" : "toward-legitimate"}">
        <span class="indicator-term">${escapeHtml(indicator.term)}</span>
        <span class="indicator-weight">${formatWeight(indicator.weight)}</span>
      </li>`
    )
    .join("");
  return `
  <section class="verdict" data-testid="verdict">
    <div class="banner ${result.label}" data-testid="banner">
      ${result.label === "phishing" ? "Phishing" : "Legitimate"}
    </div>
    <div class="confidence">
      <span data-testid="confidence">${confidence}</span> confidence
      <div class="confidence-bar"><div class="confidence-fill ${result.label}"
           style="width: ${(result.confidence * 100).toFixed(2)}%"></div></div>
    </div>
    <div class="risk">Risk: <span class="risk-band ${result.risk_band}"
         data-testid="risk-band">${result.risk_band}</span></div>
    <div class="latency" data-testid="latency">server latency ${result.latency_ms.toFixed(1)} ms</div>
    <ul class="indicators" data-testid="indicators">${indicators}</ul>
  </section>`;
}

function renderHistory(state: UiState): string {
  if (state.history.length === 0) return "";
  const rows = state.history
    .map(
      (entry) => `
      <li><code>${entry.digest}</code>
          <span class="history-verdict ${entry.verdict}">${entry.verdict}</span>
          ${formatPercent(entry.confidence)}</li>`
    )
    .join("");
  return `<section class="history" data-testid="history"><h2>This session</h2><ul>${rows}</ul></section>`;
}

function renderFeatureColumn(title: string, entries: FeatureEntry[], flavor: string): string {
  const rows = entries
    .map(
      (entry) =>
        `<tr><td>${escapeHtml(entry.term)}</td><td>${entry.coefficient.toFixed(2)}</td></tr>`
    )
    .join("");
  return `<table class="features ${flavor}"><caption>${title}</caption>${rows}</table>`;
}

function renderModelInfo(state: UiState): string {
  if (state.modelInfoFailed) {
    return `
    <section class="model-info" data-testid="model-info">
      <h2>Model</h2>
      <p>Model details are unavailable.</p>
      <button id="retry-info" data-testid="retry-info">Retry</button>
    </section>`;
  }
  const info = state.modelInfo;
  if (!info) return "";
  const features = info.top_features
    ? renderFeatureColumn("Phishing indicators", info.top_features.phishing, "phishing") +
      renderFeatureColumn("Legitimate indicators", info.top_features.legitimate, "legitimate")
    : `<p class="no-coefficients" data-testid="no-coefficients">
         This model kind does not expose signed coefficients.</p>`;
  return `
  <section class="model-info" data-testid="model-info">
    <h2>Model</h2>
    <p>${escapeHtml(info.kind)} &middot; ${info.vocab_size.toLocaleString("en-US")} terms</p>
    <div class="feature-columns">${features}</div>
  </section>`;
}

export function render(state: UiState): string {
  return `
  <main>
    <h1>phishguard</h1>
    <p class="tagline">Paste an email body; the service judges it in real time.</p>
    <textarea id="email-input" data-testid="input" rows="8"
      placeholder="Email body...">${escapeHtml(state.input)}</textarea>
    <button id="submit" data-testid="submit" ${canSubmit(state) ? "" : "disabled"}>
      ${state.inFlight ? "Checking..." : "Check email"}
    </button>
    ${renderError(state)}
    ${renderVerdict(state)}
    ${renderHistory(state)}
    ${renderModelInfo(state)}
  </main>`;
}
