// Rendering of merged trail trees. Everything here is a pure function of
// the last search response plus local UI state (collapsed branches,
// visited pages), so the view can be rebuilt from scratch after any
// interaction. Trail order always follows the response.

import { ForestNode, SearchResponse } from "./api.js";

export interface ViewState {
  collapsed: Set<string>;
  visited: Set<number>;
}

export function newViewState(): ViewState {
  return { collapsed: new Set(), visited: new Set() };
}

export function toggleNode(state: ViewState, key: string): void {
  if (state.collapsed.has(key)) {
    state.collapsed.delete(key);
  } else {
    state.collapsed.add(key);
  }
}

export function expandAll(state: ViewState): void {
  state.collapsed.clear();
}

export function markVisited(state: ViewState, pageId: number): void {
  state.visited.add(pageId);
}

export interface ViewHandlers {
  onToggle?: (key: string) => void;
  onVisit?: (pageId: number, url: string) => void;
}

export function highlightTerms(text: string, terms: string[]): HTMLElement {
  const span = document.createElement("span");
  if (!terms.length) {
    span.textContent = text;
    return span;
  }
  const escaped = terms.map((t) => t.replace(/[.*+?^${}()|[\]\\]/g, "\\$&"));
  const re = new RegExp(`(${escaped.join("|")})`, "gi");
  let last = 0;
  for (const match of text.matchAll(re)) {
    const at = match.index ?? 0;
    if (at > last) {
      span.append(text.slice(last, at));
    }
    const mark = document.createElement("mark");
    mark.textContent = match[0];
    span.append(mark);
    last = at + match[0].length;
  }
  if (last < text.length) {
    span.append(text.slice(last));
  }
  return span;
}

function renderNode(
  node: ForestNode,
  key: string,
  depth: number,
  terms: string[],
  state: ViewState,
  handlers: ViewHandlers,
): HTMLLIElement {
  const li = document.createElement("li");
  li.className = "trail-node";
  li.dataset.depth = String(depth);
  li.dataset.key = key;

  const row = document.createElement("div");
  row.className = "node-row";

  const toggle = document.createElement("button");
  toggle.type = "button";
  toggle.className = "toggle";
  if (node.children.length) {
    const collapsed = state.collapsed.has(key);
    toggle.textContent = collapsed ? "+" : "−";
    toggle.setAttribute("aria-expanded", String(!collapsed));
    toggle.addEventListener("click", () => handlers.onToggle?.(key));
  } else {
    toggle.textContent = "·";
    toggle.disabled = true;
  }
  row.append(toggle);

  const link = document.createElement("a");
  link.href = node.url;
  link.target = "_blank";
  link.rel = "noopener";
  link.className = state.visited.has(node.id) ? "page visited" : "page";
  link.append(highlightTerms(node.title || node.url, terms));
  link.addEventListener("click", () => handlers.onVisit?.(node.id, node.url));
  row.append(link);

  if (node.score > 0) {
    const score = document.createElement("span");
    score.className = "score";
    score.textContent = node.score.toFixed(3);
    row.append(score);
  }
  if (node.end_ranks.length) {
    const end = document.createElement("span");
    end.className = "trail-end";
    end.title = "a returned trail ends here";
    end.textContent = "◆";
    row.append(end);
  }
  li.append(row);

  if (node.children.length && !state.collapsed.has(key)) {
    const ul = document.createElement("ul");
    ul.className = "children";
    node.children.forEach((child, i) => {
      ul.append(renderNode(child, `${key}/${i}`, depth + 1, terms, state, handlers));
    });
    li.append(ul);
  }
  return li;
}

export function renderSearch(
  response: SearchResponse,
  state: ViewState,
  handlers: ViewHandlers = {},
): HTMLElement {
  const container = document.createElement("div");
  container.className = "results";
  const terms = Array.from(
    new Set(response.flat_trails.flatMap((t) => t.terms)),
  );
  if (!response.forest.length) {
    const empty = document.createElement("p");
    empty.className = "no-results";
    empty.textContent = `no results for “${response.query}”`;
    container.append(empty);
    return container;
  }
  const summary = document.createElement("p");
  summary.className = "summary";
  summary.textContent =
    `${response.flat_trails.length} trail${response.flat_trails.length === 1 ? "" : "s"} ` +
    `in ${response.elapsed_ms.toFixed(0)} ms`;
  container.append(summary);

  const forest = document.createElement("ul");
  forest.className = "forest";
  response.forest.forEach((root, i) => {
    forest.append(renderNode(root, String(i), 0, terms, state, handlers));
  });
  container.append(forest);
  return container;
}

export function renderError(message: string): HTMLElement {
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.setAttribute("role", "alert");
  banner.textContent = message;
  return banner;
}
