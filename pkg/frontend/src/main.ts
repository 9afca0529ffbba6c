/** Entry point wiring the three panels to a running service. */

import { AdminPanel } from "./adminPanel.js";
import { ApiClient } from "./api.js";
import { RuleBuilderView } from "./ruleBuilder.js";
import { ValidationView } from "./validationView.js";

export function mount(root: HTMLElement, baseUrl: string, adminToken?: string): void {
  const api = new ApiClient(baseUrl, adminToken);

  const handleInput = document.createElement("input");
  handleInput.placeholder = "validator handle";
  handleInput.className = "validator-handle";
  root.appendChild(handleInput);

  const ontologySelect = document.createElement("select");
  ontologySelect.className = "ontology-select";
  root.appendChild(ontologySelect);

  const validationRoot = document.createElement("div");
  validationRoot.id = "validation";
  const builderRoot = document.createElement("div");
  builderRoot.id = "rule-builder";
  const adminRoot = document.createElement("div");
  adminRoot.id = "admin";
  root.append(validationRoot, builderRoot, adminRoot);

  void api.listOntologies().then((ontologies) => {
    for (const o of ontologies) {
      const option = document.createElement("option");
      option.value = o.id;
      option.textContent = `${o.name} (${o.enriched_items} enriched)`;
      ontologySelect.appendChild(option);
    }
  });

  ontologySelect.addEventListener("change", () => {
    const view = new ValidationView(
      validationRoot,
      api,
      ontologySelect.value,
      handleInput.value || "anonymous",
    );
    void view.render();
  });

  const packLines: string[] = [];
  new RuleBuilderView(builderRoot, (line) => packLines.push(line)).render();
  void new AdminPanel(adminRoot, api).renderOntologyList();
}
