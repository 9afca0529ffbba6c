/** Typed client for the validation service's JSON API. */

export interface OntologySummary {
  id: string;
  name: string;
  uploaded_at: number;
  enriched_items: number;
}

export interface ElementItem {
  item_key: string;
  item_kind: "concept" | "instance" | "relation";
  labels: string[];
  neighbors: { predicate: string; object: string }[];
}

export interface DecisionEntry {
  timestamp: number;
  ontology_id: string;
  validator_handle: string;
  item_key: string;
  item_kind: string;
  decision: "accept" | "reject";
}

export interface RuleReport {
  id: string;
  priority: "Low" | "Medium" | "High";
  count: number;
  error?: string;
  violations: { element: string; detail: string }[];
}

export interface ViolationReport {
  ontology: string;
  rules: RuleReport[];
  totals: Record<"Low" | "Medium" | "High", number>;
}

export interface FinalizationResult {
  ontology: string;
  items: Record<
    string,
    { decision: "accept" | "reject"; accept_weight: number; reject_weight: number }
  >;
  validators: { handle: string; tweet_sim: number; friend_sim: number; score: number }[];
  warnings: string[];
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(`service error ${status}: ${JSON.stringify(detail)}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly adminToken?: string,
  ) {}

  private adminHeaders(): Record<string, string> {
    return this.adminToken ? { Authorization: `Bearer ${this.adminToken}` } : {};
  }

  private async expect<T>(resp: Response): Promise<T> {
    if (!resp.ok) {
      let detail: unknown = null;
      try {
        detail = (await resp.json()).detail;
      } catch {
        detail = await resp.text().catch(() => null);
      }
      throw new ApiError(resp.status, detail);
    }
    if (resp.status === 204) return undefined as T;
    return (await resp.json()) as T;
  }

  async health(): Promise<{ status: string; ontologies: number }> {
    return this.expect(await fetch(`${this.baseUrl}/health`));
  }

  async listOntologies(): Promise<OntologySummary[]> {
    return this.expect(await fetch(`${this.baseUrl}/ontologies`));
  }

  async upload(
    name: string,
    enrichedTtl: string,
    baseTtl?: string,
    manifest?: string[],
  ): Promise<{ id: string }> {
    const form = new FormData();
    form.append("name", name);
    form.append("enriched", new Blob([enrichedTtl]), "enriched.ttl");
    if (baseTtl !== undefined) {
      form.append("base", new Blob([baseTtl]), "base.ttl");
    }
    if (manifest !== undefined) {
      form.append("manifest", new Blob([JSON.stringify(manifest)]), "manifest.json");
    }
    return this.expect(
      await fetch(`${this.baseUrl}/ontologies`, {
        method: "POST",
        body: form,
        headers: this.adminHeaders(),
      }),
    );
  }

  async deleteOntology(id: string): Promise<void> {
    return this.expect(
      await fetch(`${this.baseUrl}/ontologies/${id}`, {
        method: "DELETE",
        headers: this.adminHeaders(),
      }),
    );
  }

  async elements(id: string, enrichedOnly = true): Promise<ElementItem[]> {
    return this.expect(
      await fetch(`${this.baseUrl}/ontologies/${id}/elements?enriched=${enrichedOnly}`),
    );
  }

  async decide(
    id: string,
    validatorHandle: string,
    itemKey: string,
    decision: "accept" | "reject",
  ): Promise<void> {
    return this.expect(
      await fetch(`${this.baseUrl}/ontologies/${id}/decisions`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({
          validator_handle: validatorHandle,
          item_key: itemKey,
          decision,
        }),
      }),
    );
  }

  async exportDecisions(id: string): Promise<DecisionEntry[]> {
    return this.expect(
      await fetch(`${this.baseUrl}/ontologies/${id}/decisions`, {
        headers: this.adminHeaders(),
      }),
    );
  }

  async finalize(id: string, body: Record<string, unknown>): Promise<FinalizationResult> {
    return this.expect(
      await fetch(`${this.baseUrl}/ontologies/${id}/finalize`, {
        method: "POST",
        headers: { "Content-Type": "application/json", ...this.adminHeaders() },
        body: JSON.stringify(body),
      }),
    );
  }

  async syntacticReport(id: string, rulePackPath: string): Promise<ViolationReport> {
    return this.expect(
      await fetch(`${this.baseUrl}/ontologies/${id}/syntactic-report`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ rule_pack_path: rulePackPath }),
      }),
    );
  }
}
