/**
 * Decision-card state: one card per enriched item, tracking the last
 * decision POSTed in this session. Submissions update optimistically
 * and revert on failure; a card never drops a decision silently, and
 * concurrent submits on the same card are serialized.
 */

import { ApiClient, ElementItem } from "./api.js";

export type DecisionState = "undecided" | "accepted" | "rejected";

export interface CardListener {
  onChange(card: ElementCard): void;
  onError(card: ElementCard, message: string): void;
}

export class ElementCard {
  state: DecisionState = "undecided";
  private pending: Promise<void> = Promise.resolve();

  constructor(
    public readonly item: ElementItem,
    private readonly api: ApiClient,
    private readonly ontologyId: string,
    private readonly listener: CardListener,
  ) {}

  get itemKey(): string {
    return this.item.item_key;
  }

  /** Short display name: last IRI segment, or the key itself. */
  get displayName(): string {
    if (this.item.labels.length > 0) return this.item.labels[0]!;
    const key = this.item.item_key;
    const idx = Math.max(key.lastIndexOf("#"), key.lastIndexOf("/"));
    return idx >= 0 ? key.slice(idx + 1) : key;
  }

  submit(decision: "accept" | "reject", validatorHandle: string): Promise<void> {
    // serialize per card: double-clicks queue instead of racing
    this.pending = this.pending.then(() => this.doSubmit(decision, validatorHandle));
    return this.pending;
  }

  private async doSubmit(
    decision: "accept" | "reject",
    validatorHandle: string,
  ): Promise<void> {
    const previous = this.state;
    this.state = decision === "accept" ? "accepted" : "rejected";
    this.listener.onChange(this);
    try {
      await this.api.decide(this.ontologyId, validatorHandle, this.itemKey, decision);
    } catch (err) {
      this.state = previous;
      this.listener.onChange(this);
      this.listener.onError(this, err instanceof Error ? err.message : String(err));
    }
  }
}

export async function loadCards(
  api: ApiClient,
  ontologyId: string,
  listener: CardListener,
): Promise<ElementCard[]> {
  const items = await api.elements(ontologyId);
  return items.map((item) => new ElementCard(item, api, ontologyId, listener));
}
