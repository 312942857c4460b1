"""
JSON documents for groups, lattices, monomial actions and computed results.

Group:     {"label", "order_cap", "generators": [{"name", "image"}], "relations"}
           or {"ref": "C2"}; a "mul" table with per-generator "element" indices is
           added when the images alone would renumber the elements.
Lattice:   {"label", "group": <group doc or ref>, "rank", "action": {name: rows}}
Monomial:  {"label", "e", "vars", "generators": {name: {"A", "c", "t"}}, "relations", "group"}
"""

from dataclasses import fields, is_dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import json
import logging
import re

from .cohomology import CohomologyReport
from .errors import LatticeError, NotOddPrime, ParseError, UnknownName, ValidationError
from .exact_linalg import FinAbGroup, IntMatrix
from .flabby import Resolution, RhoVerdict
from .group_core import FiniteGroup, Subgroup, build_group, case1_group, check_relations, from_table, standard_group
from .lattice_core import Lattice, LatticeMap
from .monomial_action import MonomialAction, MonomialGenerator, certify_change, verify_action
from .paper_models import CHANGES, MONOMIAL_TABLES, case1_lattice, catalog, lambda_lattice, require_odd_prime

logger = logging.getLogger(__name__)

FIXTURE_DIR = Path(__file__).parent / "fixtures"

Document = Dict[str, Any]
Source = Union[str, Document]


def _load(source: Source, location: Optional[str] = None) -> Document:
    if isinstance(source, str):
        try:
            source = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}", location=location)
    if not isinstance(source, dict):
        raise ParseError("document must be a JSON object", location=location)
    return source


def _require(doc: Document, key: str, location: str) -> Any:
    if key not in doc:
        raise ParseError(f"missing field {key!r}", location=location)
    return doc[key]


def _integer(x: Any, location: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"expected an integer, got {x!r}", location=location)
    return x


def _int_list(value: Any, location: str) -> List[int]:
    if not isinstance(value, list):
        raise ParseError("expected a list of integers", location=location)
    return [_integer(x, location) for x in value]


def _int_rows(value: Any, location: str) -> List[List[int]]:
    if not isinstance(value, list):
        raise ParseError("expected a list of integer rows", location=location)
    return [_int_list(row, location) for row in value]


def _relations(value: Any, location: str) -> List[tuple]:
    if not isinstance(value, list) or not all(isinstance(r, list) and len(r) == 2 for r in value):
        raise ParseError("relations must be a list of [word, word] pairs", location=location)
    return [(str(lhs), str(rhs)) for lhs, rhs in value]


def dumps(doc: Document) -> str:
    """Two-space indentation and a trailing newline."""
    return json.dumps(doc, indent=2) + "\n"


# Groups


def _ref_candidates(G: FiniteGroup) -> List[str]:
    candidates = []
    if G.label:
        candidates.append(G.label)
        match = re.fullmatch(r"case1\((\d+)\)", G.label)
        if match:
            candidates.append(f"case1:{match.group(1)}")
    return candidates


def group_ref(G: FiniteGroup) -> Optional[str]:
    """A catalog name that rebuilds exactly G, if there is one."""
    for name in _ref_candidates(G):
        try:
            if standard_group(name) == G:
                return name
        except LatticeError:
            continue
    return None


def group_to_doc(G: FiniteGroup) -> Document:
    images = G.permutation_images()
    doc: Document = {
        "label": G.label,
        "order_cap": G.order,
        "generators": [{"name": name, "image": list(image)} for name, image in zip(G.generator_names, images)],
    }
    try:
        rebuilt = build_group(images, G.generator_names, cap=G.order)
    except LatticeError:
        rebuilt = None
    if rebuilt != G:
        doc["mul"] = [list(row) for row in G.mul]
        for entry, element in zip(doc["generators"], G.generators):
            entry["element"] = element
    return doc


def group_from_doc(source: Source, location: str = "group") -> FiniteGroup:
    """
    Build a group from a document or a {"ref": name} pointer.

    Raises:
        ParseError: malformed document or unknown ref
        ValidationError, RelationViolated, ClosureExceedsCap: see build_group
    """
    doc = _load(source, location)
    if "ref" in doc:
        try:
            return standard_group(str(doc["ref"]))
        except UnknownName as exc:
            raise ParseError(exc.message, location=f"{location}.ref")
    entries = _require(doc, "generators", location)
    if not isinstance(entries, list) or not all(isinstance(e, dict) for e in entries):
        raise ParseError("generators must be a list of objects", location=f"{location}.generators")
    names = [str(_require(e, "name", f"{location}.generators[{i}]")) for i, e in enumerate(entries)]
    relations = _relations(doc.get("relations", []), f"{location}.relations")
    label = doc.get("label")
    images = None
    if all("image" in e for e in entries):
        images = [_int_list(e["image"], f"{location}.generators[{i}].image") for i, e in enumerate(entries)]
    if "mul" in doc:
        mul = _int_rows(doc["mul"], f"{location}.mul")
        elements = [_integer(_require(e, "element", f"{location}.generators[{i}]"), f"{location}.generators[{i}]")
                    for i, e in enumerate(entries)]
        G = from_table(mul, elements, names, check=True, label=label)
        if images is not None:
            G = FiniteGroup(G.order, G.mul, G.generators, G.generator_names, images=tuple(map(tuple, images)),
                            label=label)
        check_relations(G, relations)
        return G
    if images is None:
        raise ParseError("every generator needs an image", location=f"{location}.generators")
    cap = doc.get("order_cap")
    if cap is not None:
        cap = _integer(cap, f"{location}.order_cap")
    return build_group(images, names, relations, cap=cap, label=label)


def _group_field(G: FiniteGroup) -> Document:
    ref = group_ref(G)
    return {"ref": ref} if ref else group_to_doc(G)


# Lattices


def lattice_to_doc(L: Lattice) -> Document:
    return {
        "label": L.label,
        "group": _group_field(L.group),
        "rank": L.rank,
        "action": {name: m.to_list() for name, m in zip(L.group.generator_names, L.matrices)},
    }


def lattice_from_doc(source: Source, location: str = "lattice") -> Lattice:
    """
    Build and validate a lattice.

    Raises:
        ParseError: malformed document
        ValidationError, NotUnimodular, RelationViolated: the action is not a representation
    """
    doc = _load(source, location)
    group = group_from_doc(_require(doc, "group", location), f"{location}.group")
    rank = _integer(_require(doc, "rank", location), f"{location}.rank")
    if rank < 0:
        raise ParseError("rank must be a non-negative integer", location=f"{location}.rank")
    action = _require(doc, "action", location)
    if not isinstance(action, dict):
        raise ParseError("action must map generator names to matrices", location=f"{location}.action")
    rows = {name: _int_rows(value, f"{location}.action.{name}") for name, value in action.items()}
    return Lattice.from_generators(group, rows, rank=rank, label=doc.get("label"))


# Monomial actions


def monomial_to_doc(action: MonomialAction) -> Document:
    doc: Document = {
        "label": action.label,
        "e": action.e,
        "vars": list(action.var_names),
        "generators": {
            gen.name: {"A": gen.A.to_list(), "c": [x % action.e for x in gen.c], "t": gen.t % action.e}
            for gen in action.generators
        },
        "relations": [[lhs, rhs] for lhs, rhs in action.relations],
    }
    if action.group is not None:
        doc["group"] = _group_field(action.group)
    return doc


def monomial_from_doc(source: Source, location: str = "monomial", verify: bool = True) -> MonomialAction:
    """
    Build a monomial action; with verify, generators and relations are checked.

    Raises:
        ParseError: malformed document
        ValidationError: verify_action fails, with the failing relation as location
    """
    doc = _load(source, location)
    e = _integer(_require(doc, "e", location), f"{location}.e")
    var_names = _require(doc, "vars", location)
    if not isinstance(var_names, list):
        raise ParseError("vars must be a list of names", location=f"{location}.vars")
    entries = _require(doc, "generators", location)
    if not isinstance(entries, dict):
        raise ParseError("generators must map names to {A, c, t}", location=f"{location}.generators")
    n = len(var_names)
    generators = []
    for name, entry in entries.items():
        where = f"{location}.generators.{name}"
        if not isinstance(entry, dict):
            raise ParseError("generator entry must be an object", location=where)
        A = IntMatrix.from_rows(_int_rows(_require(entry, "A", where), f"{where}.A"), cols=n)
        c = tuple(_int_list(entry.get("c", [0] * n), f"{where}.c"))
        t = _integer(entry.get("t", 1), f"{where}.t")
        generators.append(MonomialGenerator(str(name), A, c, t))
    group = group_from_doc(doc["group"], f"{location}.group") if "group" in doc else None
    action = MonomialAction(n, e, tuple(generators), tuple(str(v) for v in var_names),
                            tuple(_relations(doc.get("relations", []), f"{location}.relations")),
                            group, doc.get("label"))
    if verify:
        ok, witness = verify_action(action)
        if not ok:
            raise ValidationError(f"action fails verification: {witness}", location=location)
    return action


# Results


def _plain(value: Any) -> Any:
    if isinstance(value, IntMatrix):
        return value.to_list()
    if isinstance(value, FinAbGroup):
        return value.to_dict()
    if isinstance(value, Lattice):
        return lattice_to_doc(value)
    if isinstance(value, LatticeMap):
        return value.matrix.to_list()
    if isinstance(value, FiniteGroup):
        return _group_field(value)
    if isinstance(value, Subgroup):
        return {"order": value.order, "elements": list(value.elements)}
    if isinstance(value, Resolution):
        return resolution_to_doc(value)
    if is_dataclass(value):
        return {f.name: _plain(getattr(value, f.name)) for f in fields(value) if not f.name.startswith("_")}
    if isinstance(value, (list, tuple)):
        return [_plain(x) for x in value]
    return value


def resolution_to_doc(resolution: Resolution) -> Document:
    return {
        "M": lattice_to_doc(resolution.M),
        "P": lattice_to_doc(resolution.P),
        "E": lattice_to_doc(resolution.E),
        "inject": resolution.inject.matrix.to_list(),
        "project": resolution.project.matrix.to_list(),
        "cover": [_plain(H) for H in resolution.cover],
    }


def verdict_to_doc(verdict: Any, include_resolution: bool = False) -> Document:
    """Any verdict value; a RhoVerdict embeds its resolution only when asked."""
    if isinstance(verdict, RhoVerdict):
        doc = verdict_to_doc(verdict.invertible)
        doc["acting_group_order"] = verdict.acting_group.order
        doc["conclusion"] = verdict.conclusion
        if include_resolution:
            doc["resolution"] = resolution_to_doc(verdict.resolution)
        return doc
    doc = _plain(verdict)
    verdict_name = doc.pop("verdict", None)
    return {"verdict": verdict_name, **doc}


def _key_order(key: str) -> tuple:
    order, _, index = key.partition(".")
    return int(order), int(index)


def report_to_doc(report: CohomologyReport) -> Document:
    subgroups = {}
    for entry in sorted(report.entries, key=lambda e: _key_order(e.key)):
        subgroups[entry.key] = {
            "order": entry.subgroup.order,
            "elements": list(entry.subgroup.elements),
            "H^-1": entry.hat_minus1.to_dict(),
            "H^0": entry.hat0.to_dict(),
            "H^1": entry.h1.to_dict(),
        }
    return {
        "lattice": report.lattice.label,
        "rank": report.lattice.rank,
        "group_order": report.lattice.group.order,
        "flabby": report.flabby,
        "coflabby": report.coflabby,
        "subgroups": subgroups,
    }


# Files and fixtures


def fixture_documents(p: int) -> Dict[str, Document]:
    """Every shipped document for one odd prime, keyed by file stem."""
    require_odd_prime(p)
    docs: Dict[str, Document] = {
        f"case1_pi_p{p}": group_to_doc(case1_group(p)),
        "sign": lattice_to_doc(catalog("sign")),
        "trivial": lattice_to_doc(catalog("trivial")),
        "regular": lattice_to_doc(catalog("regular")),
        "reiner_1_1_1": lattice_to_doc(catalog("reiner", a=1, b=1, c=1)),
        f"case1_p{p}": lattice_to_doc(case1_lattice(p)),
        f"lambda_p{p}": lattice_to_doc(lambda_lattice(p)),
        f"case3_p{p}": lattice_to_doc(catalog("case3_M", p=p)),
    }
    for name, builder in MONOMIAL_TABLES.items():
        docs[f"{name}_p{p}"] = monomial_to_doc(builder(p))
    for name, (source, change) in CHANGES.items():
        if name in MONOMIAL_TABLES:
            continue
        ok, transformed = certify_change(MONOMIAL_TABLES[source](p), change(p))
        if not ok:
            raise ValidationError(f"change of variables for {name} is not unimodular", location=name)
        step = name.rsplit("_step", 1)
        docs[f"{name}_p{p}"] = monomial_to_doc(replace(transformed, label=f"{step[0]}-step{step[1]}({p})"))
    return docs


def export_fixtures(p: int, out_dir: Union[str, Path]) -> List[Path]:
    """Write fixture_documents(p) to out_dir, one file per document."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, doc in fixture_documents(p).items():
        path = out / f"{stem}.json"
        path.write_text(dumps(doc))
        written.append(path)
    logger.info("wrote %d fixtures for p=%d to %s", len(written), p, out)
    return written


def document_kind(doc: Document) -> str:
    if "rank" in doc and "action" in doc:
        return "lattice"
    if "e" in doc and "vars" in doc:
        return "monomial"
    if "ref" in doc or "mul" in doc or (
            isinstance(doc.get("generators"), list) and all(isinstance(g, dict) and "image" in g
                                                            for g in doc["generators"])):
        return "group"
    raise ParseError("cannot tell whether this is a group, lattice or monomial document")


def _resolve(name: str) -> Union[Path, Document]:
    path = Path(name)
    if path.exists():
        return path
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    shipped = FIXTURE_DIR / f"{stem}.json"
    if shipped.exists():
        return shipped
    match = re.fullmatch(r".+_p(\d+)", stem)
    if match and int(match.group(1)) > 2:
        try:
            docs = fixture_documents(int(match.group(1)))
        except NotOddPrime:
            docs = {}
        if stem in docs:
            logger.info("fixture %s generated from the builders", stem)
            return docs[stem]
    raise ParseError("no such file or fixture", location=name)


def _within(name: str, location: Optional[str]) -> str:
    if not location or location == name:
        return name
    return f"{name}: {location}"


def read_document(path: Union[str, Path]) -> Document:
    """
    The raw document behind a file path or fixture name.

    Names that are not files are looked up in the shipped fixtures, then among the
    documents fixture_documents generates for the prime in a "_p<p>" suffix.

    Raises:
        ParseError: unreadable or malformed JSON, with the path as location
    """
    name = str(path)
    target = _resolve(name)
    if not isinstance(target, Path):
        return target
    try:
        text = target.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", location=name)
    return _load(text, name)


def load_document(path: Union[str, Path], verify: bool = True) -> Union[FiniteGroup, Lattice, MonomialAction]:
    """
    Load and validate a group, lattice or monomial document.

    Raises:
        ParseError: unreadable or malformed document, with the path as location
        ValidationError: the document describes an invalid object
    """
    name = str(path)
    try:
        doc = read_document(name)
        kind = document_kind(doc)
        if kind == "lattice":
            return lattice_from_doc(doc)
        if kind == "monomial":
            return monomial_from_doc(doc, verify=verify)
        return group_from_doc(doc)
    except ParseError as exc:
        raise ParseError(exc.message, location=_within(name, exc.location))
    except LatticeError as exc:
        raise ValidationError(exc.message, location=_within(name, exc.location))
