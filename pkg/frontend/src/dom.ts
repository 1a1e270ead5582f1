/**
 * DOM rendering of the view models plus event wiring. Deliberately thin:
 * everything interesting lives in views.ts / controller.ts.
 */

import type { AppController } from "./controller.js";
import type { Store } from "./state.js";
import { gridViewModel, phylogenyViewModel } from "./views.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderApp(root: HTMLElement, store: Store, controller: AppController): void {
  const render = () => {
    root.replaceChildren(
      renderHeader(store, controller),
      store.state.view === "phylogeny"
        ? renderPhylogeny(store, controller)
        : renderGrid(store, controller),
    );
  };
  store.subscribe(render);
  render();
}

function renderHeader(store: Store, controller: AppController): HTMLElement {
  const header = el("header");
  header.appendChild(el("h1", "title", "stemma"));

  const nav = el("nav");
  const phyloBtn = el("button", "tab", "Phylogeny");
  phyloBtn.disabled = store.state.view === "phylogeny";
  phyloBtn.onclick = () => void controller.loadPhylogeny();
  nav.appendChild(phyloBtn);
  if (store.state.session) {
    const gridBtn = el("button", "tab", `Session (${store.state.session.step})`);
    gridBtn.disabled = store.state.view === "evolve";
    gridBtn.onclick = () => {
      store.state.view = "evolve";
      store.setBanner(store.state.banner); // re-emit
    };
    nav.appendChild(gridBtn);
  }
  header.appendChild(nav);

  if (store.state.toast) {
    const toast = el("div", "toast", store.state.toast);
    toast.onclick = () => store.setToast(null);
    header.appendChild(toast);
  }
  return header;
}

function renderPhylogeny(store: Store, controller: AppController): HTMLElement {
  const vm = phylogenyViewModel(store.state, controller.api);
  const container = el("section", "phylogeny");

  const scratch = el("button", "primary", "Start from scratch");
  scratch.onclick = () => void controller.branchFrom(null);
  container.appendChild(scratch);

  if (vm.empty) {
    container.appendChild(el("p", "empty", vm.emptyMessage));
    return container;
  }

  const canvas = el("div", "dag");
  canvas.style.width = `${vm.layout.width}px`;
  canvas.style.height = `${vm.layout.height}px`;

  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("width", String(vm.layout.width));
  svg.setAttribute("height", String(vm.layout.height));
  svg.classList.add("edges");
  for (const edge of vm.layout.edges) {
    const line = document.createElementNS("http://www.w3.org/2000/svg", "line");
    line.setAttribute("x1", String(edge.x1));
    line.setAttribute("y1", String(edge.y1));
    line.setAttribute("x2", String(edge.x2));
    line.setAttribute("y2", String(edge.y2));
    svg.appendChild(line);
  }
  canvas.appendChild(svg);

  for (const [i, node] of vm.layout.nodes.entries()) {
    const card = el("figure", "node");
    card.style.left = `${node.x}px`;
    card.style.top = `${node.y}px`;
    const img = el("img");
    img.src = vm.thumbs[i].url;
    img.alt = vm.thumbs[i].label;
    card.appendChild(img);
    card.appendChild(el("figcaption", undefined, vm.thumbs[i].label));
    const branch = el("button", "branch", "Branch from here");
    branch.onclick = () => void controller.branchFrom(node.artifactId);
    card.appendChild(branch);
    canvas.appendChild(card);
  }
  container.appendChild(canvas);
  return container;
}

function renderGrid(store: Store, controller: AppController): HTMLElement {
  const vm = gridViewModel(store.state, controller.api);
  const container = el("section", "evolve");

  if (vm.banner) {
    const banner = el("div", "banner", vm.banner);
    const reload = el("button", undefined, "Reload session state");
    reload.onclick = () => void controller.endSession();
    banner.appendChild(reload);
    container.appendChild(banner);
  }

  container.appendChild(el("h2", undefined, vm.stepLabel));
  const grid = el("div", "grid");
  for (const cell of vm.cells) {
    const card = el("figure", cell.selected ? "candidate selected" : "candidate");
    const img = el("img");
    img.src = cell.url;
    img.alt = `candidate ${cell.index}`;
    img.onclick = () => controller.toggleSelect(cell.index);
    card.appendChild(img);
    const publish = el("button", "publish", "Publish");
    publish.onclick = () => void controller.publishCandidate(cell.index);
    card.appendChild(publish);
    grid.appendChild(card);
  }
  container.appendChild(grid);

  const actions = el("div", "actions");
  const next = el("button", "primary", "Next generation");
  next.disabled = !vm.nextEnabled;
  next.onclick = () => void controller.nextGeneration();
  actions.appendChild(next);
  const done = el("button", undefined, "Back to phylogeny");
  done.onclick = () => void controller.endSession();
  actions.appendChild(done);
  container.appendChild(actions);
  return container;
}
