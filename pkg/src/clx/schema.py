"""JSON schemas for every document the CLI writes, plus a validator."""

from __future__ import annotations

import jsonschema

__all__ = ["SCHEMAS", "validate"]

_NUM = {"type": "number"}
_CPLX = {"type": "object", "required": ["re", "im"], "properties": {"re": _NUM, "im": _NUM}}
_CPLX_LIST = {"type": "array", "items": _CPLX}
_HYP = {
    "type": "object",
    "required": ["name", "passed", "detail"],
    "properties": {"name": {"type": "string"}, "passed": {"type": "boolean"}, "detail": {"type": "string"}},
}

GRAPH = {
    "type": "object",
    "required": ["n", "edges"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "labels": {"type": "array", "items": {"type": "string"}},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["src", "dst"],
                "properties": {"src": {"type": "integer"}, "dst": {"type": "integer"},
                               "re": _NUM, "im": _NUM, "r": _NUM, "beta_deg": _NUM},
            },
        },
    },
}

CERTIFICATE = {
    "type": "object",
    "required": ["property", "verdict", "route", "witnesses", "hypotheses"],
    "properties": {
        "property": {"enum": ["rEEP", "rEENN"]},
        "verdict": {"enum": ["Certified", "Refuted", "Inconclusive"]},
        "route": {"enum": ["Theorem", "Empirical", "Both"]},
        "witnesses": {"type": "object"},
        "hypotheses": {"type": "array", "items": _HYP},
    },
}

VERDICT = {
    "type": "object",
    "required": ["kind", "corank", "j_reduced_spectrum", "steady_functional", "reasons"],
    "properties": {
        "kind": {"enum": ["Consensus", "Divergent", "MultiSink"]},
        "corank": {"type": "integer", "minimum": 0},
        "j_reduced_spectrum": _CPLX_LIST,
        "gap": {"type": ["number", "null"]},
        "steady_functional": {"type": ["object", "null"]},
        "reasons": {"type": "array", "items": _HYP},
    },
}

DESIGN = {
    "type": "object",
    "required": ["targets", "S", "L_m", "is_laplacian", "spectrum_achieved"],
    "properties": {
        "targets": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
        "S": _CPLX_LIST,
        "L_m": {"type": "array", "items": _CPLX_LIST},
        "is_laplacian": {"type": "boolean"},
        "spectrum_achieved": _CPLX_LIST,
    },
}

INFLUENCE = {
    "type": "object",
    "required": ["values", "imag_residual", "advisory", "most_influential"],
    "properties": {
        "values": {"type": "array", "items": _NUM},
        "imag_residual": {"type": "number", "minimum": 0},
        "advisory": {"type": "boolean"},
        "most_influential": {"type": "integer", "minimum": 0},
    },
}

TRAJECTORY_SUMMARY = {
    "type": "object",
    "required": ["method", "samples", "t_final", "diverged", "truncated_at", "final_consensus_error", "final_state"],
    "properties": {
        "method": {"enum": ["ExpStep", "RK4"]},
        "samples": {"type": "integer", "minimum": 1},
        "t_final": _NUM,
        "diverged": {"type": "boolean"},
        "truncated_at": {"type": ["number", "null"]},
        "final_consensus_error": _NUM,
        "final_state": _CPLX_LIST,
    },
}

ANALYSIS = {
    "type": "object",
    "required": ["n", "connectivity", "spectrum", "corank"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "connectivity": {"type": "object", "required": ["strongly_connected", "sinks", "globally_reachable"]},
        "spectrum": {"type": "object", "required": ["eigenvalues", "diagonalizable"]},
        "corank": {"type": "integer", "minimum": 0},
        "verdict": {"oneOf": [VERDICT, {"type": "null"}]},
    },
}

CERTIFY = {
    "type": "object",
    "required": ["rEEP", "rEENN", "consensus"],
    "properties": {"rEEP": CERTIFICATE, "rEENN": CERTIFICATE, "consensus": VERDICT},
}

PIPELINE = {
    "type": "object",
    "required": ["branch", "verdict_original", "verdict_final", "design", "x0", "steady_state", "trajectory",
                 "consensus_reached"],
    "properties": {
        "branch": {"enum": ["original", "modified"]},
        "verdict_original": {"oneOf": [VERDICT, {"type": "null"}]},
        "verdict_final": {"oneOf": [VERDICT, {"type": "null"}]},
        "design": {"oneOf": [DESIGN, {"type": "null"}]},
        "x0": _CPLX_LIST,
        "steady_state": _CPLX_LIST,
        "trajectory": TRAJECTORY_SUMMARY,
        "consensus_reached": {"type": "boolean"},
    },
}

ERROR = {
    "type": "object",
    "required": ["error", "message"],
    "properties": {"error": {"type": "string"}, "message": {"type": "string"}},
}

SCHEMAS = {
    "graph": GRAPH,
    "certificate": CERTIFICATE,
    "verdict": VERDICT,
    "design": DESIGN,
    "influence": INFLUENCE,
    "trajectory": TRAJECTORY_SUMMARY,
    "analyze": ANALYSIS,
    "certify": CERTIFY,
    "simulate": TRAJECTORY_SUMMARY,
    "diffuse": INFLUENCE,
    "pipeline": PIPELINE,
    "error": ERROR,
}


def validate(kind: str, obj) -> None:
    """Raise :class:`jsonschema.ValidationError` if ``obj`` does not match schema ``kind``."""
    jsonschema.validate(obj, SCHEMAS[kind])
