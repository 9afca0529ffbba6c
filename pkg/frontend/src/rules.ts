/**
 * Rule-language vocabulary and the dropdown-driven rule builder.
 *
 * The pairing tables mirror the server's grammar: each clause predicate
 * admits a fixed set of objects/functions, and each operator predicate
 * a fixed set of operators. The builder exposes only those options, so
 * an invalid (predicate, argument) pairing is unconstructable by
 * design; serialize() emits the canonical one-line rule text the
 * server parses.
 */

export const SUBJECTS = [
  "OntologyMetadata",
  "OntologicalElement",
  "Class",
  "Instance",
  "Property",
  "ObjectProperty",
  "DatatypeProperty",
  "SymmetricProperty",
] as const;

export const EXTRACTIVE_PAIRS: Record<string, readonly string[]> = {
  hasRelatedElement: [
    "Domain",
    "Range",
    "Subclass",
    "Superclass",
    "DisjointClass",
    "EquivalentClass",
    "InverseProperty",
    "Label",
    "Comment",
    "Annotation",
  ],
  hasAttribute: ["ID", "Language", "Namespace"],
};

export const FUNCTIONAL_PAIRS: Record<string, readonly string[]> = {
  hasOntologicalProperty: ["IDConsistency", "Uniqueness", "TextValidity"],
  hasLinguisticProperty: ["ContainsPolysemes", "ContainsConjunctions"],
};

export const OPERATOR_PAIRS: Record<string, readonly string[]> = {
  usesLogicalOperator: ["And", "Or", "Not"],
  usesComparativeOperator: ["Equality", "Inverse", "Synonymy", "Dissimilarity"],
};

export const CLAUSE_PREDICATES = [
  ...Object.keys(EXTRACTIVE_PAIRS),
  ...Object.keys(FUNCTIONAL_PAIRS),
];

export const OPERATOR_PREDICATES = Object.keys(OPERATOR_PAIRS);

export const PRIORITIES = ["Low", "Medium", "High"] as const;

export type Subject = (typeof SUBJECTS)[number];
export type Priority = (typeof PRIORITIES)[number];

export interface ClauseRow {
  predicate: string;
  argument: string;
}

export interface OperatorRow {
  predicate: string;
  operator: string;
  /** The clause sequence this operator introduces. */
  clauses: ClauseRow[];
}

/** Valid arguments for a clause predicate; empty for unknown input. */
export function argumentOptions(predicate: string): readonly string[] {
  return EXTRACTIVE_PAIRS[predicate] ?? FUNCTIONAL_PAIRS[predicate] ?? [];
}

export function operatorOptions(predicate: string): readonly string[] {
  return OPERATOR_PAIRS[predicate] ?? [];
}

export function isFunctionalPredicate(predicate: string): boolean {
  return predicate in FUNCTIONAL_PAIRS;
}

export class InvalidPairingError extends Error {
  constructor(predicate: string, argument: string) {
    super(`'${argument}' is not a valid argument for '${predicate}'`);
  }
}

function checkedClause(predicate: string, argument: string): ClauseRow {
  if (!argumentOptions(predicate).includes(argument)) {
    throw new InvalidPairingError(predicate, argument);
  }
  return { predicate, argument };
}

/**
 * Builder state: a subject, a head clause sequence, and operator rows
 * each introducing another sequence. Mutators validate against the
 * pairing tables so the state can never hold an invalid pairing.
 */
export class RuleBuilderState {
  subject: Subject = "Class";
  priority: Priority = "Medium";
  head: ClauseRow[] = [];
  operators: OperatorRow[] = [];

  setSubject(subject: Subject): void {
    this.subject = subject;
  }

  setPriority(priority: Priority): void {
    this.priority = priority;
  }

  addHeadClause(predicate: string, argument: string): void {
    this.head.push(checkedClause(predicate, argument));
  }

  addOperator(predicate: string, operator: string): void {
    if (!operatorOptions(predicate).includes(operator)) {
      throw new InvalidPairingError(predicate, operator);
    }
    this.operators.push({ predicate, operator, clauses: [] });
  }

  addBranchClause(operatorIndex: number, predicate: string, argument: string): void {
    const row = this.operators[operatorIndex];
    if (!row) throw new Error(`no operator row ${operatorIndex}`);
    row.clauses.push(checkedClause(predicate, argument));
  }

  reset(): void {
    this.head = [];
    this.operators = [];
  }

  /**
   * A rule is submittable when every sequence is non-empty, functional
   * clauses are terminal, and a comparative operator (if any) is the
   * only operator and joins extractive-only sequences.
   */
  validationError(): string | null {
    const sequences = [this.head, ...this.operators.map((o) => o.clauses)];
    for (const seq of sequences) {
      if (seq.length === 0) return "every clause sequence needs at least one clause";
      for (const clause of seq.slice(0, -1)) {
        if (isFunctionalPredicate(clause.predicate)) {
          return "a functional clause must end its sequence";
        }
      }
    }
    const comparatives = this.operators.filter(
      (o) => o.predicate === "usesComparativeOperator",
    );
    if (comparatives.length > 0) {
      if (this.operators.length !== 1) {
        return "a comparative operator must be the rule's only operator";
      }
      const extractiveOnly = (seq: ClauseRow[]) =>
        seq.every((c) => !isFunctionalPredicate(c.predicate));
      if (!sequences.every(extractiveOnly)) {
        return "comparative operators join extraction-only sequences";
      }
    }
    return null;
  }

  get submittable(): boolean {
    return this.validationError() === null;
  }

  /** Canonical one-line rule text. */
  serialize(): string {
    const parts: string[] = [this.subject];
    const emit = (seq: ClauseRow[]) => {
      for (const clause of seq) parts.push(clause.predicate, clause.argument);
    };
    emit(this.head);
    for (const row of this.operators) {
      parts.push(row.predicate, row.operator);
      emit(row.clauses);
    }
    return parts.join(" ");
  }

  /** Full pack line including id and priority. */
  serializePackLine(ruleId: string): string {
    return `rule ${ruleId} priority ${this.priority}: ${this.serialize()}`;
  }
}
