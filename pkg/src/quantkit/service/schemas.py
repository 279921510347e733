"""Pydantic request/response models for the workbench service.

Formulas, signatures, models, and maps travel as their concrete text syntax;
the service parses and validates them per request.
"""
from __future__ import annotations

from pydantic import BaseModel


class ParseRequest(BaseModel):
    formula: str
    signature: str | None = None


class ParseResponse(BaseModel):
    formula: str
    free_vars: list[str]
    signature: str


class SubstRequest(BaseModel):
    formula: str
    map: str
    signature: str | None = None


class SubstResponse(BaseModel):
    input: str
    map: str
    result: str


class EvalRequest(BaseModel):
    formula: str
    model: str
    valuation: str = ""
    signature: str | None = None


class EvalResponse(BaseModel):
    formula: str
    value_atoms: list[int]
    is_top: bool
    algebra_atoms: int


class AxiomsRequest(BaseModel):
    model: str
    samples: int = 50
    seed: int = 0
    suites: list[str] | None = None


class LawReportModel(BaseModel):
    suite: str
    law: str
    checked: int
    violations: list[str]
    violation_count: int


class AxiomsResponse(BaseModel):
    suites: list[str]
    violations: int
    reports: list[LawReportModel]


class HenkinRequest(BaseModel):
    formulas: str
    rounds: int = 2
    depth: int = 2
    signature: str | None = None
    cross_check_size: int | None = None


class HenkinStats(BaseModel):
    prop_vars: int
    total_vars: int
    clauses: int


class CrossCheck(BaseModel):
    max_size: int
    found: bool
    size: int | None
    agrees: bool


class HenkinResponse(BaseModel):
    verdict: str
    reason: str
    inputs: list[str]
    witnesses: list[str]
    theta: list[str]
    universe: list[str]
    stats: HenkinStats
    model: str | None
    element_terms: dict[str, str] | None
    identity_valuation: dict[str, str] | None
    fragment_perfect: bool | None
    cross_check: CrossCheck | None


class SearchRequest(BaseModel):
    formulas: str
    max_size: int = 3
    signature: str | None = None


class SearchResponse(BaseModel):
    found: bool
    max_size: int
    model: str | None
    valuation: dict[str, str] | None


class UltraproductRequest(BaseModel):
    models: list[str]
    at_index: int
    formulas: str


class UltraproductEntry(BaseModel):
    formula: str
    los_ok: bool
    quotient_equals_factor: bool


class UltraproductResponse(BaseModel):
    at_index: int
    factors: int
    ok: bool
    results: list[UltraproductEntry]
    quotient_model: str


class SupportRequest(BaseModel):
    formula: str
    vars: str
    model: str
    signature: str | None = None


class SupportResponse(BaseModel):
    formula: str
    vars: list[str]
    is_support: bool


class ErrorDetail(BaseModel):
    message: str
    line: int | None = None
    col: int | None = None
