"""ontoqual: syntactic rule evaluation and crowdsourced semantic
validation for OWL ontologies."""

__version__ = "0.1.0"
