"""JSON Schemas (draft 2020-12) for every document the package reads or writes."""

_NAME = {"type": "string", "minLength": 1}
_PAIR = {"type": "array", "items": _NAME, "minItems": 2, "maxItems": 2}

SEM = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "linear Gaussian SEM",
    "type": "object",
    "required": ["vertices", "edges"],
    "properties": {
        "vertices": {"type": "array", "items": _NAME, "uniqueItems": True},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to", "coef"],
                "properties": {"from": _NAME, "to": _NAME, "coef": {"type": "number"}},
                "additionalProperties": False,
            },
        },
        "error_variances": {
            "type": "object",
            "additionalProperties": {"type": "number", "exclusiveMinimum": 0},
        },
    },
    "additionalProperties": False,
}

EXTENDED_PATTERN = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "extended pattern",
    "type": "object",
    "required": ["vertices", "directed", "undirected", "triple_marks", "pair_marks"],
    "properties": {
        "vertices": {"type": "array", "items": _NAME, "uniqueItems": True},
        "directed": {"type": "array", "items": _PAIR},
        "undirected": {"type": "array", "items": _PAIR},
        "triple_marks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["triple", "mark"],
                "properties": {
                    "triple": {"type": "array", "items": _NAME, "minItems": 3, "maxItems": 3},
                    "mark": {"enum": ["collider", "noncollider", "ambiguous"]},
                },
            },
        },
        "pair_marks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["pair", "mark"],
                "properties": {
                    "pair": _PAIR,
                    "mark": {"enum": ["apparently_nonadjacent", "definitely_nonadjacent"]},
                },
            },
        },
    },
}

SEARCH_RESULT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "search result",
    "type": "object",
    "required": ["graph", "nonadjacency_confirmed", "diagnostics"],
    "properties": {
        "graph": EXTENDED_PATTERN,
        "nonadjacency_confirmed": {"type": "boolean"},
        "diagnostics": {"type": "object"},
    },
}

ESTIMATES = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "edge estimates",
    "type": "object",
    "required": ["pairs"],
    "properties": {
        "pairs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to", "estimate"],
                "properties": {
                    "from": _NAME,
                    "to": _NAME,
                    "estimate": {"oneOf": [{"type": "number"}, {"enum": ["zero", "unknown"]}]},
                    "provenance": {"type": "string", "enum": ["unconfirmed", "nonadjacent", "regression", "orientation", "unresolved"]},
                },
            },
        },
    },
}

ORACLE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "population search output",
    "type": "object",
    "required": ["pattern", "extended_pattern", "nonadjacency_confirmed"],
    "properties": {
        "pattern": EXTENDED_PATTERN,
        "extended_pattern": EXTENDED_PATTERN,
        "nonadjacency_confirmed": {"type": "boolean"},
    },
}

VALIDATION = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "model-class validation",
    "type": "object",
    "required": ["pass", "k_triangle_faithful", "nvv", "ubc", "violations"],
    "properties": {
        "pass": {"type": "boolean"},
        "k_triangle_faithful": {"type": "boolean"},
        "nvv": {"type": "boolean"},
        "ubc": {"type": "boolean"},
        "min_conditional_variance": {"type": "number"},
        "max_abs_partial_correlation": {"type": "number"},
        "violations": {"type": "array", "items": {"type": "object"}},
    },
}

EXPERIMENT_CONFIG = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "experiment config",
    "type": "object",
    "properties": {
        "n_vars": {"type": "integer", "minimum": 1},
        "edge_prob": {"type": "number", "minimum": 0, "maximum": 1},
        "coef_range": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "k": {"type": "number"},
        "J": {"type": "number"},
        "C": {"type": "number"},
        "params": {"type": "object"},
        "sample_sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "replications": {"type": "integer", "minimum": 1},
        "alpha": {"type": "number"},
        "alpha_schedule": {"enum": ["fixed", "sqrt"]},
        "L": {"type": "number", "minimum": 0},
        "v5_variant": {"enum": ["all", "some", "off"]},
        "delta": {"type": "number"},
        "master_seed": {"type": "integer"},
        "max_tries": {"type": "integer", "minimum": 1},
        "workers": {"type": "integer", "minimum": 1},
        "output_csv": {"type": ["string", "null"]},
        "output_json": {"type": ["string", "null"]},
        "output_jsonl": {"type": ["string", "null"]},
    },
    "additionalProperties": False,
}

EXPERIMENT_REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "experiment report",
    "type": "object",
    "required": ["config", "model_acceptance_rate", "summaries"],
    "properties": {
        "config": EXPERIMENT_CONFIG,
        "model_acceptance_rate": {"type": "number", "minimum": 0, "maximum": 1},
        "summaries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "any_error_rate", "ci_low", "ci_high"],
                "properties": {
                    "n": {"type": "integer"},
                    **{
                        k: {"type": "number", "minimum": 0, "maximum": 1}
                        for k in ("kind_I_rate", "kind_II_rate", "kind_III_rate", "any_error_rate",
                                  "unknown_rate", "v5_confirm_rate", "ci_low", "ci_high",
                                  "exceed_rate", "exceed_ci_low", "exceed_ci_high")
                    },
                },
            },
        },
    },
}
