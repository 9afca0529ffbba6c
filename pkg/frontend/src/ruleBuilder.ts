/**
 * Dropdown-driven rule builder. Every dropdown is populated from the
 * pairing tables, so the argument list always matches the selected
 * predicate and invalid pairings are unselectable. The live preview
 * shows the canonical rule text; submit stays disabled until the state
 * validates.
 */

import {
  CLAUSE_PREDICATES,
  OPERATOR_PREDICATES,
  PRIORITIES,
  Priority,
  RuleBuilderState,
  SUBJECTS,
  Subject,
  argumentOptions,
  operatorOptions,
} from "./rules.js";

function select(className: string, options: readonly string[]): HTMLSelectElement {
  const el = document.createElement("select");
  el.className = className;
  for (const option of options) {
    const o = document.createElement("option");
    o.value = option;
    o.textContent = option;
    el.appendChild(o);
  }
  return el;
}

export class RuleBuilderView {
  readonly state = new RuleBuilderState();
  private preview!: HTMLElement;
  private submitButton!: HTMLButtonElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly onSubmit: (packLine: string) => void,
  ) {}

  render(): void {
    this.root.replaceChildren();

    const subjectSelect = select("subject", SUBJECTS);
    subjectSelect.addEventListener("change", () => {
      this.state.setSubject(subjectSelect.value as Subject);
      this.refresh();
    });
    subjectSelect.value = this.state.subject;
    this.root.appendChild(this.labelled("Subject", subjectSelect));

    const prioritySelect = select("priority", PRIORITIES);
    prioritySelect.value = this.state.priority;
    prioritySelect.addEventListener("change", () => {
      this.state.setPriority(prioritySelect.value as Priority);
      this.refresh();
    });
    this.root.appendChild(this.labelled("Priority", prioritySelect));

    this.root.appendChild(this.clauseAdder("head-clause", (predicate, argument) => {
      this.state.addHeadClause(predicate, argument);
      this.refresh();
    }));

    const operatorAdder = document.createElement("div");
    operatorAdder.className = "operator-adder";
    const opPredicate = select("operator-predicate", OPERATOR_PREDICATES);
    const opValue = select("operator-value", operatorOptions(OPERATOR_PREDICATES[0]!));
    opPredicate.addEventListener("change", () => {
      // repopulate: the operator list always matches its predicate
      opValue.replaceChildren();
      for (const option of operatorOptions(opPredicate.value)) {
        const o = document.createElement("option");
        o.value = option;
        o.textContent = option;
        opValue.appendChild(o);
      }
    });
    const opAdd = document.createElement("button");
    opAdd.textContent = "Add operator";
    opAdd.className = "add-operator";
    opAdd.addEventListener("click", () => {
      this.state.addOperator(opPredicate.value, opValue.value);
      this.refresh();
    });
    operatorAdder.append(opPredicate, opValue, opAdd);
    this.root.appendChild(operatorAdder);

    this.root.appendChild(
      this.clauseAdder("branch-clause", (predicate, argument) => {
        if (this.state.operators.length === 0) return;
        this.state.addBranchClause(this.state.operators.length - 1, predicate, argument);
        this.refresh();
      }),
    );

    this.preview = document.createElement("pre");
    this.preview.className = "rule-preview";
    this.root.appendChild(this.preview);

    this.submitButton = document.createElement("button");
    this.submitButton.className = "submit-rule";
    this.submitButton.textContent = "Add rule";
    this.submitButton.addEventListener("click", () => {
      if (!this.state.submittable) return;
      this.onSubmit(this.state.serializePackLine(`ui-${Date.now()}`));
      this.state.reset();
      this.refresh();
    });
    this.root.appendChild(this.submitButton);

    this.refresh();
  }

  private labelled(text: string, control: HTMLElement): HTMLElement {
    const wrap = document.createElement("label");
    wrap.textContent = text;
    wrap.appendChild(control);
    return wrap;
  }

  private clauseAdder(
    className: string,
    add: (predicate: string, argument: string) => void,
  ): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = className;
    const predicate = select("clause-predicate", CLAUSE_PREDICATES);
    const argument = select("clause-argument", argumentOptions(CLAUSE_PREDICATES[0]!));
    predicate.addEventListener("change", () => {
      argument.replaceChildren();
      for (const option of argumentOptions(predicate.value)) {
        const o = document.createElement("option");
        o.value = option;
        o.textContent = option;
        argument.appendChild(o);
      }
    });
    const button = document.createElement("button");
    button.textContent = "Add clause";
    button.className = "add-clause";
    button.addEventListener("click", () => add(predicate.value, argument.value));
    wrap.append(predicate, argument, button);
    return wrap;
  }

  private refresh(): void {
    this.preview.textContent = this.state.serialize();
    const error = this.state.validationError();
    this.submitButton.disabled = error !== null;
    this.submitButton.title = error ?? "";
  }
}
