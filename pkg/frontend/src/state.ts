/** All view state and its transitions. Transitions are pure so the whole
 * lifecycle is unit-testable; rendering consumes the state read-only.
 * History keeps a digest of each submitted body rather than the body
 * itself: the tool advises on individual emails and should not hoard them. */

import { ModelInfo, PredictResponse } from "./types.js";
import { ApiErrorKind } from "./api.js";

export const HISTORY_LIMIT = 20;

export interface HistoryEntry {
  digest: string;
  verdict: "phishing" | "legitimate";
  confidence: number;
}

export interface UiError {
  kind: ApiErrorKind;
  message: string;
}

export interface UiState {
  input: string;
  inFlight: boolean;
  result: PredictResponse | null;
  error: UiError | null;
  history: HistoryEntry[]; // newest first
  modelInfo: ModelInfo | null;
  modelInfoFailed: boolean;
}

export function initialState(): UiState {
  return {
    input: "",
    inFlight: false,
    result: null,
    error: null,
    history: [],
    modelInfo: null,
    modelInfoFailed: false,
  };
}

/** FNV-1a over UTF-16 code units, rendered as 8 hex digits. */
export function textDigest(text: string): string {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return (hash >>> 0).toString(16).padStart(8, "0");
}

export function setInput(state: UiState, input: string): UiState {
  return { ...state, input };
}

export function canSubmit(state: UiState): boolean {
  return !state.inFlight && state.input.trim().length > 0;
}

/** Returns null when submission is not allowed (empty input or in flight). */
export function beginSubmit(state: UiState): UiState | null {
  if (!canSubmit(state)) return null;
  return { ...state, inFlight: true, error: null };
}

export function applyResult(state: UiState, result: PredictResponse): UiState {
  const entry: HistoryEntry = {
    digest: textDigest(state.input),
    verdict: result.label,
    confidence: result.confidence,
  };
  return {
    ...state,
    inFlight: false,
    result,
    error: null,
    history: [entry, ...state.history].slice(0, HISTORY_LIMIT),
  };
}

/** Failures never clear the input; the banner is non-blocking. */
export function applyError(state: UiState, error: UiError): UiState {
  return { ...state, inFlight: false, error };
}

export function applyModelInfo(state: UiState, info: ModelInfo): UiState {
  return { ...state, modelInfo: info, modelInfoFailed: false };
}

export function applyModelInfoFailure(state: UiState): UiState {
  return { ...state, modelInfo: null, modelInfoFailed: true };
}
