// Page bootstrap: one search box, one result pane. A new submission
// cancels any in-flight request; an API failure shows a banner and keeps
// the previous results on screen.

import { ApiClient, ApiError, SearchResponse } from "./api.js";
import {
  expandAll,
  markVisited,
  newViewState,
  renderError,
  renderSearch,
  toggleNode,
  ViewState,
} from "./view.js";

const client = new ApiClient("");
let state: ViewState = newViewState();
let lastResponse: SearchResponse | null = null;
let inflight: AbortController | null = null;

function redraw(): void {
  const pane = document.getElementById("results");
  if (!pane || !lastResponse) {
    return;
  }
  pane.replaceChildren(
    renderSearch(lastResponse, state, {
      onToggle(key) {
        toggleNode(state, key);
        redraw();
      },
      onVisit(pageId) {
        markVisited(state, pageId);
        redraw();
      },
    }),
  );
}

function showError(message: string): void {
  const slot = document.getElementById("error");
  slot?.replaceChildren(renderError(message));
}

function clearError(): void {
  document.getElementById("error")?.replaceChildren();
}

async function submit(query: string): Promise<void> {
  if (!query.trim()) {
    return;
  }
  inflight?.abort();
  inflight = new AbortController();
  try {
    const response = await client.search(query, inflight.signal);
    lastResponse = response;
    // fresh collapse state per search; visit marks persist for the session
    const visited = state.visited;
    state = newViewState();
    state.visited = visited;
    clearError();
    redraw();
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") {
      return; // superseded by a newer search
    }
    showError(err instanceof ApiError ? err.message : "search failed; is the server up?");
  }
}

export function init(): void {
  const form = document.getElementById("search-form") as HTMLFormElement | null;
  const input = document.getElementById("query") as HTMLInputElement | null;
  const expand = document.getElementById("expand-all");
  form?.addEventListener("submit", (event) => {
    event.preventDefault();
    void submit(input?.value ?? "");
  });
  expand?.addEventListener("click", () => {
    expandAll(state);
    redraw();
  });
}
