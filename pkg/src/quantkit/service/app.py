"""FastAPI service exposing the workbench operations.

Run with: uvicorn quantkit.service.app:app
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import workspace
from ..parser import ParseError
from . import schemas

app = FastAPI(
    title="quantkit",
    description="Quantifier-logic workbench: parsing, substitution, finite "
                "Boolean-valued models, witness-based model construction, "
                "ultraproducts, and axiom suites.",
    version="0.1.0",
)


def _run(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ParseError as exc:
        raise HTTPException(
            status_code=400,
            detail={"message": exc.message, "line": exc.line, "col": exc.col},
        ) from exc
    except ValueError as exc:
        raise HTTPException(
            status_code=400,
            detail={"message": str(exc), "line": None, "col": None},
        ) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/parse", response_model=schemas.ParseResponse)
def parse(req: schemas.ParseRequest):
    return _run(workspace.op_parse, req.formula, req.signature)


@app.post("/subst", response_model=schemas.SubstResponse)
def subst(req: schemas.SubstRequest):
    return _run(workspace.op_subst, req.formula, req.map, req.signature)


@app.post("/eval", response_model=schemas.EvalResponse)
def eval_formula(req: schemas.EvalRequest):
    return _run(workspace.op_eval, req.formula, req.model, req.valuation,
                req.signature)


@app.post("/axioms", response_model=schemas.AxiomsResponse)
def axioms(req: schemas.AxiomsRequest):
    return _run(workspace.op_axioms, req.model, req.samples, req.seed, req.suites)


@app.post("/henkin", response_model=schemas.HenkinResponse)
def henkin(req: schemas.HenkinRequest):
    return _run(workspace.op_henkin, req.formulas, req.rounds, req.depth,
                req.signature, req.cross_check_size)


@app.post("/search", response_model=schemas.SearchResponse)
def search(req: schemas.SearchRequest):
    return _run(workspace.op_search, req.formulas, req.max_size, req.signature)


@app.post("/ultraproduct", response_model=schemas.UltraproductResponse)
def ultraproduct(req: schemas.UltraproductRequest):
    return _run(workspace.op_ultraproduct, req.models, req.at_index, req.formulas)


@app.post("/support", response_model=schemas.SupportResponse)
def support(req: schemas.SupportRequest):
    return _run(workspace.op_support, req.formula, req.vars, req.model,
                req.signature)
