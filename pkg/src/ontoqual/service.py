"""HTTP service tying the pipeline together: ontology upload,
enriched-element listing, decision capture with append-only JSONL
persistence, expertise-weighted finalization, and syntactic reports.

State lives under a data directory:

    <data_dir>/index.json                  ontology metadata index
    <data_dir>/<id>/enriched.ttl           uploaded ontology
    <data_dir>/<id>/base.ttl               optional base ontology
    <data_dir>/<id>/manifest.json          optional enrichment manifest
    <data_dir>/<id>/decisions.jsonl        append-only decision log
    <data_dir>/<id>/finalization.json      last finalization result

Replaying the files reconstructs state exactly, so a restart loses
nothing that was acknowledged.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import Depends, FastAPI, File, Form, HTTPException, Request, UploadFile
from fastapi.responses import JSONResponse

from .expertise import (
    ExpertiseConfig,
    ProfileArchive,
    tweet_expert_scores,
)
from .ontology import (
    ElementKind,
    OntologyView,
    UnknownElementError,
    apply_manifest,
    build_view,
    enrichment_diff,
)
from .rdf import Iri
from .regress import (
    Decision,
    DecisionMatrix,
    MajorityBaseline,
    load_examples,
    make_regressor,
    weighted_vote,
)
from .rules import EngineContext, eval_pack, load_rule_pack
from .turtle import TurtleSyntaxError, parse_turtle

RELATION_KEY_SEP = " "


def relation_item_key(s: str, p: str, o: str) -> str:
    return RELATION_KEY_SEP.join((s, p, o))


def _item_kind(kind: ElementKind) -> str:
    if kind == ElementKind.INSTANCE:
        return "instance"
    return "concept"


@dataclass
class OntologyRecord:
    id: str
    name: str
    view: OntologyView
    uploaded_at: float
    has_base: bool
    has_manifest: bool

    def enriched_items(self) -> dict[str, dict]:
        items: dict[str, dict] = {}
        for el in self.view.enriched_elements():
            neighbors = []
            for t in self.view.graph.query(el.iri, None, None):
                neighbors.append({"predicate": t.predicate.value, "object": str(t.object)})
            items[el.iri.value] = {
                "item_key": el.iri.value,
                "item_kind": _item_kind(el.kind),
                "labels": [l.lexical for l in el.labels],
                "neighbors": neighbors,
            }
        for s, p, o in sorted(self.view.enriched_relations):
            key = relation_item_key(s, p, o)
            if key in items:
                continue
            items[key] = {
                "item_key": key,
                "item_kind": "relation",
                "labels": [],
                "neighbors": [{"predicate": p, "object": o}],
            }
        return items

    def all_items(self) -> list[dict]:
        out = []
        for el in self.view.elements.values():
            out.append(
                {
                    "item_key": el.iri.value,
                    "item_kind": _item_kind(el.kind),
                    "labels": [l.lexical for l in el.labels],
                    "enriched": el.enriched,
                }
            )
        return out


class OntologyStore:
    """File-backed store. One lock per ontology serializes log appends;
    parsed views are immutable and shared."""

    def __init__(self, data_dir: str | Path) -> None:
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.records: dict[str, OntologyRecord] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._load()

    # -- persistence ---------------------------------------------------

    @property
    def _index_path(self) -> Path:
        return self.data_dir / "index.json"

    def _load(self) -> None:
        if not self._index_path.exists():
            return
        index = json.loads(self._index_path.read_text(encoding="utf-8"))
        for oid, meta in index.get("ontologies", {}).items():
            odir = self.data_dir / oid
            try:
                record = self._build_record(
                    oid,
                    meta["name"],
                    (odir / "enriched.ttl").read_text(encoding="utf-8"),
                    (odir / "base.ttl").read_text(encoding="utf-8")
                    if (odir / "base.ttl").exists()
                    else None,
                    json.loads((odir / "manifest.json").read_text(encoding="utf-8"))
                    if (odir / "manifest.json").exists()
                    else None,
                    uploaded_at=meta.get("uploaded_at", 0.0),
                )
            except (OSError, TurtleSyntaxError, UnknownElementError):
                continue  # skip unreadable entries rather than fail startup
            self.records[oid] = record
            self._locks[oid] = threading.Lock()

    def _save_index(self) -> None:
        index = {
            "ontologies": {
                r.id: {
                    "name": r.name,
                    "uploaded_at": r.uploaded_at,
                    "has_base": r.has_base,
                    "has_manifest": r.has_manifest,
                }
                for r in self.records.values()
            }
        }
        self._index_path.write_text(json.dumps(index, indent=2), encoding="utf-8")

    def _build_record(
        self,
        oid: str,
        name: str,
        enriched_ttl: str,
        base_ttl: Optional[str],
        manifest: Optional[list[str]],
        uploaded_at: float,
    ) -> OntologyRecord:
        view = build_view(parse_turtle(enriched_ttl))
        if manifest is not None:
            view = apply_manifest(view, [Iri(v) for v in manifest])
        elif base_ttl is not None:
            view = enrichment_diff(build_view(parse_turtle(base_ttl)), view)
        return OntologyRecord(
            id=oid,
            name=name,
            view=view,
            uploaded_at=uploaded_at,
            has_base=base_ttl is not None,
            has_manifest=manifest is not None,
        )

    # -- operations ----------------------------------------------------

    def create(
        self,
        name: str,
        enriched_ttl: str,
        base_ttl: Optional[str] = None,
        manifest: Optional[list[str]] = None,
    ) -> OntologyRecord:
        if base_ttl is None and manifest is None:
            raise ValueError("either a base ontology or a manifest is required")
        oid = uuid.uuid4().hex[:12]
        record = self._build_record(oid, name, enriched_ttl, base_ttl, manifest, time.time())
        odir = self.data_dir / oid
        odir.mkdir(parents=True, exist_ok=True)
        (odir / "enriched.ttl").write_text(enriched_ttl, encoding="utf-8")
        if base_ttl is not None:
            (odir / "base.ttl").write_text(base_ttl, encoding="utf-8")
        if manifest is not None:
            (odir / "manifest.json").write_text(json.dumps(manifest), encoding="utf-8")
        self.records[oid] = record
        self._locks[oid] = threading.Lock()
        self._save_index()
        return record

    def get(self, oid: str) -> OntologyRecord:
        try:
            return self.records[oid]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown ontology {oid!r}")

    def delete(self, oid: str) -> None:
        self.get(oid)
        del self.records[oid]
        self._locks.pop(oid, None)
        odir = self.data_dir / oid
        if odir.exists():
            for p in sorted(odir.rglob("*"), reverse=True):
                p.unlink() if p.is_file() else p.rmdir()
            odir.rmdir()
        self._save_index()

    def _log_path(self, oid: str) -> Path:
        return self.data_dir / oid / "decisions.jsonl"

    def append_decision(
        self, oid: str, validator: str, item_key: str, item_kind: str, decision: str
    ) -> dict:
        entry = {
            "timestamp": time.time(),
            "ontology_id": oid,
            "validator_handle": validator,
            "item_key": item_key,
            "item_kind": item_kind,
            "decision": decision,
        }
        with self._locks[oid]:
            with self._log_path(oid).open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry) + "\n")
                fh.flush()
        return entry

    def decisions(self, oid: str) -> list[dict]:
        self.get(oid)
        path = self._log_path(oid)
        if not path.exists():
            return []
        return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line]

    def latest_decisions(self, oid: str) -> dict[tuple[str, str], dict]:
        latest: dict[tuple[str, str], dict] = {}
        for entry in self.decisions(oid):
            latest[(entry["validator_handle"], entry["item_key"])] = entry
        return latest


def create_app(
    data_dir: str | Path,
    admin_token: Optional[str] = None,
    default_rule_pack: Optional[str | Path] = None,
) -> FastAPI:
    store = OntologyStore(data_dir)
    app = FastAPI(title="ontoqual", version="0.1.0")
    app.state.store = store

    def require_admin(request: Request) -> None:
        if admin_token is None:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {admin_token}":
            raise HTTPException(status_code=401, detail="admin token required")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "ontologies": len(store.records)}

    @app.get("/ontologies")
    def list_ontologies() -> list[dict]:
        return [
            {
                "id": r.id,
                "name": r.name,
                "uploaded_at": r.uploaded_at,
                "enriched_items": len(r.enriched_items()),
            }
            for r in sorted(store.records.values(), key=lambda r: r.uploaded_at)
        ]

    @app.post("/ontologies", status_code=201, dependencies=[Depends(require_admin)])
    async def upload(
        name: str = Form(...),
        enriched: UploadFile = File(...),
        base: Optional[UploadFile] = File(None),
        manifest: Optional[UploadFile] = File(None),
    ) -> dict:
        enriched_ttl = (await enriched.read()).decode("utf-8")
        base_ttl = (await base.read()).decode("utf-8") if base is not None else None
        manifest_data = None
        if manifest is not None:
            manifest_data = json.loads((await manifest.read()).decode("utf-8"))
            if not isinstance(manifest_data, list):
                raise HTTPException(status_code=400, detail="manifest must be a JSON array of IRIs")
        if base_ttl is None and manifest_data is None:
            raise HTTPException(
                status_code=422, detail="provide a base ontology or an enrichment manifest"
            )
        try:
            record = store.create(name, enriched_ttl, base_ttl, manifest_data)
        except TurtleSyntaxError as exc:
            raise HTTPException(
                status_code=400,
                detail={"error": str(exc), "line": exc.line, "column": exc.column},
            )
        except UnknownElementError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"id": record.id}

    @app.delete("/ontologies/{oid}", status_code=204, dependencies=[Depends(require_admin)])
    def delete(oid: str) -> None:
        store.delete(oid)

    @app.get("/ontologies/{oid}/elements")
    def elements(oid: str, enriched: bool = True) -> list[dict]:
        record = store.get(oid)
        if enriched:
            items = record.enriched_items()
            return [items[k] for k in sorted(items)]
        return sorted(record.all_items(), key=lambda d: d["item_key"])

    @app.post("/ontologies/{oid}/decisions", status_code=204)
    def decide(oid: str, body: dict) -> None:
        record = store.get(oid)
        for key in ("validator_handle", "item_key", "decision"):
            if key not in body:
                raise HTTPException(status_code=400, detail=f"missing field {key!r}")
        if body["decision"] not in ("accept", "reject"):
            raise HTTPException(status_code=400, detail="decision must be 'accept' or 'reject'")
        items = record.enriched_items()
        item = items.get(body["item_key"])
        if item is None:
            raise HTTPException(
                status_code=404, detail=f"item {body['item_key']!r} is not an enriched item"
            )
        store.append_decision(
            oid, body["validator_handle"], body["item_key"], item["item_kind"], body["decision"]
        )

    @app.get("/ontologies/{oid}/decisions", dependencies=[Depends(require_admin)])
    def export_decisions(oid: str) -> list[dict]:
        return store.decisions(oid)

    @app.post("/ontologies/{oid}/finalize", dependencies=[Depends(require_admin)])
    def finalize(oid: str, body: dict) -> dict:
        record = store.get(oid)
        latest = store.latest_decisions(oid)
        if not latest:
            raise HTTPException(status_code=409, detail="no decisions logged")
        try:
            archive = ProfileArchive.from_file(body["archive_path"])
        except (KeyError, OSError, json.JSONDecodeError) as exc:
            raise HTTPException(status_code=400, detail=f"archive error: {exc}")
        cfg_kwargs = body.get("config", {})
        keywords = body.get("keywords")
        if keywords:
            cfg_kwargs["domain_keywords"] = keywords
        try:
            config = ExpertiseConfig(**cfg_kwargs)
        except (TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=f"config error: {exc}")
        try:
            model = make_regressor(body.get("regressor_spec", "majority"))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if body.get("training_examples_path") and not isinstance(model, MajorityBaseline):
            try:
                model.fit(load_examples(body["training_examples_path"]))
            except Exception as exc:
                raise HTTPException(status_code=400, detail=f"training error: {exc}")

        handles = sorted({v for v, _ in latest})
        known = [h for h in handles if h in archive]
        warnings = [
            f"validator {h!r} not in archive; decisions discarded"
            for h in handles
            if h not in archive
        ]
        records = tweet_expert_scores(known, archive, config, model=model)
        weights = {r.handle: r.score for r in records}

        items = sorted({k for _, k in latest})
        matrix = DecisionMatrix(items=items, validators=known)
        for (validator, item), entry in latest.items():
            if validator in weights:
                matrix.decisions[(validator, item)] = Decision(entry["decision"])
        voted = weighted_vote(matrix, weights)

        per_item = {}
        for item in items:
            accept = sum(
                weights[v]
                for (v, k), e in latest.items()
                if k == item and v in weights and e["decision"] == "accept"
            )
            reject = sum(
                weights[v]
                for (v, k), e in latest.items()
                if k == item and v in weights and e["decision"] == "reject"
            )
            per_item[item] = {
                "decision": voted[item].value,
                "accept_weight": accept,
                "reject_weight": reject,
            }
        result = {
            "ontology": oid,
            "items": per_item,
            "validators": [r.to_dict() for r in records],
            "warnings": warnings,
        }
        (store.data_dir / oid / "finalization.json").write_text(
            json.dumps(result, indent=2), encoding="utf-8"
        )
        return result

    @app.post("/ontologies/{oid}/syntactic-report")
    def syntactic_report(oid: str, body: dict) -> dict:
        record = store.get(oid)
        pack_path = body.get("rule_pack_path") or default_rule_pack
        if pack_path is None:
            raise HTTPException(status_code=400, detail="rule_pack_path required (no default pack)")
        try:
            pack = load_rule_pack(Path(pack_path).read_text(encoding="utf-8"), name=str(pack_path))
        except OSError as exc:
            raise HTTPException(status_code=400, detail=f"cannot read pack: {exc}")
        except Exception as exc:
            raise HTTPException(status_code=400, detail=f"pack parse error: {exc}")
        report = eval_pack(pack, record.view, EngineContext(), ontology_id=oid)
        return report.to_dict()

    return app
