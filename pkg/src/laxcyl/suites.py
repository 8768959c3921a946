"""Workspaces, check suites and ordered report bundles.

A workspace is a directory of JSON documents.  Each suite expands into
independent checks named ``<document>/<check>``; the checks run in any
order (optionally in worker processes) and the bundle lists them sorted by
name, so the output does not depend on the number of workers.
"""
from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .cdata import CData
from .config import CAPS
from .cylinder import check_fiber_product_commute, identity_law_report, verify_lax_colimit
from .descent import (builtin_spec_pts, check_external_descent, check_internal_descent, is_quasi_coherent,
                      structure_family)
from .errors import LabError, UnknownSuite
from .finring import Ideal, is_epi, is_flat
from .homotopy import van_kampen_check
from .ids import label
from .kernels import FINCRING
from .schematic import (check_cylinder_morphism_theorem, check_cylinder_theorem, check_nerve_corollary,
                        is_pseudo_schematic, is_schematic, nerve_datum)
from .serialize import load


def jsonable(v):
    """Reports hold ids, ideals and tuples; flatten them to JSON values."""
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    if isinstance(v, dict):
        return {k if isinstance(k, str) else _key(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, frozenset):
        return label(v)
    if isinstance(v, Ideal):
        return list(v.sorted_members())
    return repr(v)


def _key(k) -> str:
    try:
        return label(k)
    except TypeError:
        return repr(k)


@dataclass
class Workspace:
    """Named documents loaded from a directory."""

    root: Path
    names: list  # relative paths without the .json suffix, sorted
    kinds: dict

    @classmethod
    def open(cls, root) -> "Workspace":
        root = Path(root)
        names, kinds = [], {}
        if root.exists():
            for path in sorted(root.rglob("*.json")):
                name = path.relative_to(root).as_posix()[:-5]
                kind, _, _ = load(path)
                names.append(name)
                kinds[name] = kind
        return cls(root, names, kinds)

    def of_kind(self, kind: str) -> list:
        return [n for n in self.names if self.kinds[n] == kind]

    def get(self, name: str):
        return load(self.root / f"{name}.json")[2]


# individual checks -------------------------------------------------------------------
# Each returns a report with ``verdict`` True (pass), False (fail) or None (skipped).


def _lax(obj):
    X, Y = obj
    r = verify_lax_colimit(X, Y)
    return {"verdict": r["iso"], "homs": r["homs"], "lax": r["lax"], "witness": r["witness"]}


def _identity_laws(X: CData):
    r = identity_law_report(X)
    return {"verdict": all(v for k, v in r.items() if isinstance(v, bool)), **r}


def _fiber_product(obj):
    f, g = obj
    r = check_fiber_product_commute(f, g)
    return {"verdict": r["iso"], **r}


def _flat_epi_remark(X: CData):
    """Schematic spaces have flat epimorphic restrictions."""
    s = is_schematic(X)
    bad = [[label(x), label(y)] for x, y in X.base.related_pairs()
           if not (is_flat(X.restriction(x, y)) and is_epi(X.restriction(x, y)))]
    return {"verdict": (not s["verdict"]) or not bad, "schematic": s["verdict"], "non_flat_epi": bad}


def _pseudo(X: CData):
    """The pseudo-schematic verdict agrees with the flat and epi oracles on every restriction."""
    r = is_pseudo_schematic(X)
    direct = all(is_flat(X.restriction(x, y)) and is_epi(X.restriction(x, y))
                 for x, y in X.base.related_pairs())
    return {"verdict": r["verdict"] == direct, "pseudo_schematic": r["verdict"], "witness": r.get("witness")}


def _internal(X: CData):
    pre = is_pseudo_schematic(X)["verdict"]
    if not pre:
        return {"verdict": None, "reason": "not pseudo-schematic"}
    r = check_internal_descent(builtin_spec_pts(), X)
    return {"verdict": r["verdict"], **r}


def _structure_qcoh(X: CData):
    r = is_quasi_coherent(structure_family(X))
    return {"verdict": r["verdict"], **r}


def _external(legs):
    r = check_external_descent(builtin_spec_pts(), legs)
    verdict = r["iso"] if r["preconditions_hold"] else None
    return {**r, "verdict": verdict}


def _corollary(legs):
    return check_nerve_corollary(legs)


def _theorem(X):
    return check_cylinder_theorem(X)


def _morphism_theorem(f):
    return check_cylinder_morphism_theorem(f)


def _vankampen(X):
    try:
        return van_kampen_check(X)
    except LabError as e:
        return {"verdict": None, "reason": f"{type(e).__name__}: {e}"}


def _cover_is_valid(legs) -> bool:
    try:
        nerve_datum(legs)
        return True
    except LabError:
        return False


CHECKS = {
    "lax-colimit": [("lax-instance", "universal-property", _lax),
                    ("space", "identity-laws", _identity_laws),
                    ("pair", "fiber-product", _fiber_product)],
    "schematic": [("space", "pseudo-schematic", _pseudo),
                  ("space", "flat-epi-restrictions", _flat_epi_remark),
                  ("datum", "cylinder-theorem", _theorem),
                  ("datum-morphism", "cylinder-morphism-theorem", _morphism_theorem),
                  ("cover", "nerve-corollary", _corollary)],
    "descent": [("space", "internal-descent", _internal),
                ("space", "structure-sheaf-quasi-coherent", _structure_qcoh),
                ("cover", "external-descent", _external)],
    "vankampen": [("datum", "van-kampen", _vankampen)],
}

SUITES = tuple(CHECKS)


def _kernel_of(obj):
    if isinstance(obj, tuple):
        obj = obj[0]
    if isinstance(obj, list):
        obj = obj[0] if obj else None
    if hasattr(obj, "source"):
        obj = obj.source
    return getattr(obj, "kernel", None)


def _applies(suite: str, obj) -> bool:
    """Ringed suites only see ringed input and the van Kampen suite only the rest."""
    ringed = _kernel_of(obj) is FINCRING
    if suite in ("schematic", "descent"):
        return ringed
    if suite == "vankampen":
        return not ringed
    return True


def plan(ws: Workspace, suite: str) -> list:
    """``(check name, document, check id)`` triples, sorted by check name."""
    if suite not in CHECKS:
        raise UnknownSuite(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    tasks = []
    for kind, check, _ in CHECKS[suite]:
        for name in ws.of_kind(kind):
            tasks.append((f"{name}/{check}", name, check))
    return sorted(tasks)


def _run_task(args):
    root, suite, name, check, caps = args
    CAPS.update(**caps)
    kind_fn = {c: fn for _, c, fn in CHECKS[suite]}
    obj = load(Path(root) / f"{name}.json")[2]
    if not _applies(suite, obj):
        return {"verdict": None, "reason": "kernel not covered by this suite"}
    if suite in ("schematic", "descent") and isinstance(obj, list) and not _cover_is_valid(obj):
        return {"verdict": None, "reason": "legs are not flat immersions into one space"}
    try:
        return jsonable(kind_fn[check](obj))
    except LabError as e:
        return {"verdict": False, "error": type(e).__name__, "message": str(e)}


def run_suite(ws: Workspace, suite: str, jobs: int = 1) -> dict:
    """Run every check of ``suite`` and assemble the ordered bundle."""
    tasks = plan(ws, suite)
    caps = CAPS.as_dict()
    args = [(str(ws.root), suite, name, check, caps) for _, name, check in tasks]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, args, chunksize=max(1, len(args) // (4 * jobs))))
    else:
        results = [_run_task(a) for a in args]
    checks = [{"name": t[0], **r} for t, r in zip(tasks, results)]
    passed = sum(1 for c in checks if c["verdict"] is True)
    failed = sum(1 for c in checks if c["verdict"] is False)
    skipped = len(checks) - passed - failed
    warn = []
    if not checks:
        warn.append("workspace holds no documents for this suite; nothing was checked")
        warnings.warn(warn[0])
    return {"suite": suite, "verdict": failed == 0, "warnings": warn,
            "summary": {"total": len(checks), "passed": passed, "failed": failed, "skipped": skipped},
            "checks": checks}


__all__ = ["Workspace", "SUITES", "CHECKS", "plan", "run_suite", "jsonable"]
