/**
 * Validation view: enriched items rendered as green cards with their
 * local context (labels + neighbor triples) and accept/reject buttons.
 * The validator handle is entered once per session and attached to
 * every decision.
 */

import { ApiClient } from "./api.js";
import { CardListener, ElementCard, loadCards } from "./cards.js";

export class ValidationView implements CardListener {
  cards: ElementCard[] = [];

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly ontologyId: string,
    public validatorHandle: string,
  ) {}

  async render(): Promise<void> {
    this.root.replaceChildren();
    this.cards = await loadCards(this.api, this.ontologyId, this);
    if (this.cards.length === 0) {
      const empty = document.createElement("p");
      empty.className = "empty-state";
      empty.textContent = "No enriched elements to review.";
      this.root.appendChild(empty);
      return;
    }
    const list = document.createElement("div");
    list.className = "card-list";
    for (const card of this.cards) {
      list.appendChild(this.renderCard(card));
    }
    this.root.appendChild(list);
  }

  private renderCard(card: ElementCard): HTMLElement {
    const el = document.createElement("div");
    el.className = `card enriched ${card.state}`;
    el.dataset.itemKey = card.itemKey;

    const title = document.createElement("h3");
    title.textContent = card.displayName;
    el.appendChild(title);

    const kind = document.createElement("span");
    kind.className = "kind";
    kind.textContent = card.item.item_kind;
    el.appendChild(kind);

    const neighbors = document.createElement("ul");
    neighbors.className = "neighbors";
    for (const n of card.item.neighbors) {
      const li = document.createElement("li");
      li.textContent = `${n.predicate} → ${n.object}`;
      neighbors.appendChild(li);
    }
    el.appendChild(neighbors);

    const actions = document.createElement("div");
    actions.className = "actions";
    for (const decision of ["accept", "reject"] as const) {
      const button = document.createElement("button");
      button.className = decision;
      button.textContent = decision === "accept" ? "Accept" : "Reject";
      button.addEventListener("click", () => {
        void card.submit(decision, this.validatorHandle);
      });
      actions.appendChild(button);
    }
    el.appendChild(actions);
    return el;
  }

  onChange(card: ElementCard): void {
    for (const el of this.root.querySelectorAll<HTMLElement>("[data-item-key]")) {
      if (el.dataset.itemKey === card.itemKey) {
        el.className = `card enriched ${card.state}`;
      }
    }
  }

  onError(card: ElementCard, message: string): void {
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = `Decision on ${card.displayName} failed: ${message}`;
    this.root.prepend(banner);
  }
}
