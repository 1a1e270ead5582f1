import { ApiClient } from "./api.js";
import { AppController } from "./controller.js";
import { renderApp } from "./dom.js";
import { Store, initialState } from "./state.js";

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const domains = await api.listDomains();
  const defaultDomain =
    domains.find((d) => d.domain_id === "cppn-picture") ?? domains[0];
  const store = new Store(initialState(defaultDomain.domain_id));
  const controller = new AppController(api, store);

  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");

  const picker = document.getElementById("domain-picker") as HTMLSelectElement | null;
  if (picker) {
    for (const d of domains) {
      const option = document.createElement("option");
      option.value = d.domain_id;
      option.textContent = d.display_name;
      picker.appendChild(option);
    }
    picker.value = defaultDomain.domain_id;
    picker.onchange = () => void controller.loadPhylogeny(picker.value);
  }

  renderApp(root, store, controller);
  await controller.loadPhylogeny();
}

void boot();
