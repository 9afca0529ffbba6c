/**
 * Admin panel: ontology upload/delete, syntactic reports grouped by
 * priority, decision-log export, and finalization with weight sums.
 */

import { ApiClient, ViolationReport } from "./api.js";

export class AdminPanel {
  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  async renderOntologyList(): Promise<void> {
    const ontologies = await this.api.listOntologies();
    const table = document.createElement("table");
    table.className = "ontology-list";
    for (const o of ontologies) {
      const row = table.insertRow();
      row.dataset.ontologyId = o.id;
      row.insertCell().textContent = o.name;
      row.insertCell().textContent = String(o.enriched_items);
      const actions = row.insertCell();
      const del = document.createElement("button");
      del.textContent = "Delete";
      del.addEventListener("click", () => {
        void this.api.deleteOntology(o.id).then(() => this.renderOntologyList());
      });
      actions.appendChild(del);
    }
    this.root.replaceChildren(table);
  }

  renderReport(report: ViolationReport): HTMLElement {
    const section = document.createElement("section");
    section.className = "violation-report";
    const totals = document.createElement("p");
    totals.className = "totals";
    totals.textContent = `High: ${report.totals.High}  Medium: ${report.totals.Medium}  Low: ${report.totals.Low}`;
    section.appendChild(totals);

    for (const priority of ["High", "Medium", "Low"] as const) {
      const group = report.rules.filter((r) => r.priority === priority && r.count > 0);
      if (group.length === 0) continue;
      const heading = document.createElement("h4");
      heading.textContent = priority;
      section.appendChild(heading);
      const list = document.createElement("ul");
      for (const rule of group) {
        const li = document.createElement("li");
        li.textContent = `${rule.id} (${rule.count})`;
        const elements = document.createElement("ul");
        for (const v of rule.violations) {
          const inner = document.createElement("li");
          inner.textContent = v.element;
          elements.appendChild(inner);
        }
        li.appendChild(elements);
        list.appendChild(li);
      }
      section.appendChild(list);
    }
    this.root.appendChild(section);
    return section;
  }

  async renderFinalization(
    ontologyId: string,
    body: Record<string, unknown>,
  ): Promise<HTMLElement> {
    const result = await this.api.finalize(ontologyId, body);
    const section = document.createElement("section");
    section.className = "finalization";
    for (const warning of result.warnings) {
      const banner = document.createElement("div");
      banner.className = "warning-banner";
      banner.textContent = warning;
      section.appendChild(banner);
    }
    const table = document.createElement("table");
    for (const [item, entry] of Object.entries(result.items)) {
      const row = table.insertRow();
      row.insertCell().textContent = item;
      row.insertCell().textContent = entry.decision;
      row.insertCell().textContent =
        `accept ${entry.accept_weight.toFixed(3)} / reject ${entry.reject_weight.toFixed(3)}`;
    }
    section.appendChild(table);
    this.root.appendChild(section);
    return section;
  }
}
