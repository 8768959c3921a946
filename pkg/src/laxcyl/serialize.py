"""JSON interchange for posets, rings, data, morphisms and covers.

Identifiers are JSON strings or integers; constructed points (pairs, nerve
subsets) are encoded as arrays and as ``{"subset": [...]}``.  Relations are
written on covers only; loading completes and validates them.

Every document carries a ``kind``.  Loading errors raise :class:`SchemaError`
with a JSON pointer, or a :class:`ValidationError` with a witness.
"""
from __future__ import annotations

import json
from pathlib import Path

from .cdata import CData, CDataMorphism, make_cdata
from .cylinder import LaxDatum, LaxDatumMorphism
from .errors import LabError, SchemaError, UnknownPreset
from .finring import FinRing, Ideal, RingHom, product_ring, quotient_ring, ring_preset
from .ids import sort_ids
from .kernels import KERNELS
from .poset import MonotoneMap, Poset

# identifiers --------------------------------------------------------------------


def encode_id(v):
    if isinstance(v, bool):
        raise TypeError("booleans are not identifiers")
    if isinstance(v, (str, int)):
        return v
    if isinstance(v, tuple):
        return [encode_id(a) for a in v]
    if isinstance(v, frozenset):
        return {"subset": [encode_id(a) for a in sort_ids(v)]}
    raise TypeError(f"cannot encode identifier {v!r}")


def decode_id(doc, ptr=""):
    if isinstance(doc, bool):
        raise SchemaError("identifiers must be strings, integers, arrays or subsets", ptr)
    if isinstance(doc, (str, int)):
        return doc
    if isinstance(doc, list):
        return tuple(decode_id(a, f"{ptr}/{i}") for i, a in enumerate(doc))
    if isinstance(doc, dict) and set(doc) == {"subset"}:
        return frozenset(decode_id(a, f"{ptr}/subset/{i}") for i, a in enumerate(_list(doc["subset"], ptr)))
    raise SchemaError("identifiers must be strings, integers, arrays or subsets", ptr)


def _esc(key) -> str:
    return str(key).replace("~", "~0").replace("/", "~1")


def _list(doc, ptr):
    if not isinstance(doc, list):
        raise SchemaError("expected an array", ptr)
    return doc


def _obj(doc, ptr, required=()):
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", ptr)
    for key in required:
        if key not in doc:
            raise SchemaError(f"missing field {key!r}", f"{ptr}/{key}")
    return doc


def _int(doc, ptr):
    if isinstance(doc, bool) or not isinstance(doc, int):
        raise SchemaError("expected an integer", ptr)
    return doc


def _pairs(doc, ptr):
    """Either an object keyed by string ids or an array of [key, value] pairs."""
    if isinstance(doc, dict):
        return [(k, v, f"{ptr}/{_esc(k)}") for k, v in doc.items()]
    out = []
    for i, item in enumerate(_list(doc, ptr)):
        if not isinstance(item, list) or len(item) != 2:
            raise SchemaError("expected a [key, value] pair", f"{ptr}/{i}")
        out.append((decode_id(item[0], f"{ptr}/{i}/0"), item[1], f"{ptr}/{i}/1"))
    return out


def _relation_entries(doc, ptr):
    """``{"x<y": v}`` or ``[[x, y, v], ...]``."""
    if isinstance(doc, dict):
        out = []
        for k, v in doc.items():
            if k.count("<") != 1:
                raise SchemaError("relation keys are written 'x<y'", f"{ptr}/{_esc(k)}")
            a, b = k.split("<")
            out.append((a, b, v, f"{ptr}/{_esc(k)}"))
        return out
    out = []
    for i, item in enumerate(_list(doc, ptr)):
        if not isinstance(item, list) or len(item) != 3:
            raise SchemaError("expected [x, y, value]", f"{ptr}/{i}")
        out.append((decode_id(item[0], f"{ptr}/{i}/0"), decode_id(item[1], f"{ptr}/{i}/1"), item[2],
                    f"{ptr}/{i}/2"))
    return out


# posets -------------------------------------------------------------------------


def poset_to_json(P: Poset) -> dict:
    return {"elements": [encode_id(x) for x in P.elements],
            "covers": [[encode_id(a), encode_id(b)] for a, b in P.covers()]}


def poset_from_json(doc, ptr="") -> Poset:
    _obj(doc, ptr, ("elements",))
    elements = [decode_id(x, f"{ptr}/elements/{i}") for i, x in enumerate(_list(doc["elements"], f"{ptr}/elements"))]
    covers = []
    for i, c in enumerate(_list(doc.get("covers", []), f"{ptr}/covers")):
        if not isinstance(c, list) or len(c) != 2:
            raise SchemaError("a cover is a pair [lower, upper]", f"{ptr}/covers/{i}")
        covers.append((decode_id(c[0], f"{ptr}/covers/{i}/0"), decode_id(c[1], f"{ptr}/covers/{i}/1")))
    return Poset.from_covers(elements, covers)


def set_to_json(S: Poset) -> dict:
    return {"set": [encode_id(x) for x in S.elements]}


# rings ---------------------------------------------------------------------------


def ring_to_json(R: FinRing) -> dict:
    if R.name:
        try:
            if ring_preset(R.name) == R:
                return {"preset": R.name}
        except LabError:
            pass
    doc = {"order": R.order, "add": [list(r) for r in R.add], "mul": [list(r) for r in R.mul],
           "zero": 0, "one": R.one}
    if R.name:
        doc["name"] = R.name
    return doc


def ring_from_json(doc, ptr="") -> FinRing:
    _obj(doc, ptr)
    if "preset" in doc:
        if not isinstance(doc["preset"], str):
            raise SchemaError("preset names are strings", f"{ptr}/preset")
        try:
            return ring_preset(doc["preset"])
        except UnknownPreset as e:
            raise SchemaError(str(e), f"{ptr}/preset") from None
    if "product" in doc:
        parts = [ring_from_json(r, f"{ptr}/product/{i}")
                 for i, r in enumerate(_list(doc["product"], f"{ptr}/product"))]
        P, _ = product_ring(parts)
        return P
    if "quotient" in doc:
        q = _obj(doc["quotient"], f"{ptr}/quotient", ("ring", "ideal"))
        R = ring_from_json(q["ring"], f"{ptr}/quotient/ring")
        members = [_int(a, f"{ptr}/quotient/ideal/{i}")
                   for i, a in enumerate(_list(q["ideal"], f"{ptr}/quotient/ideal"))]
        if any(not 0 <= a < R.order for a in members):
            raise SchemaError("ideal member out of range", f"{ptr}/quotient/ideal")
        I = Ideal(R, frozenset(members))
        if not I.is_ideal():
            raise SchemaError("not an ideal", f"{ptr}/quotient/ideal")
        Q, _ = quotient_ring(R, I)
        return Q
    _obj(doc, ptr, ("order", "add", "mul", "zero", "one"))
    n = _int(doc["order"], f"{ptr}/order")
    tables = {}
    for key in ("add", "mul"):
        rows = _list(doc[key], f"{ptr}/{key}")
        if len(rows) != n:
            raise SchemaError(f"{key} table must have {n} rows", f"{ptr}/{key}")
        for i, row in enumerate(rows):
            if len(_list(row, f"{ptr}/{key}/{i}")) != n:
                raise SchemaError(f"row must have {n} entries", f"{ptr}/{key}/{i}")
            for j, v in enumerate(row):
                if not 0 <= _int(v, f"{ptr}/{key}/{i}/{j}") < n:
                    raise SchemaError("table entry out of range", f"{ptr}/{key}/{i}/{j}")
        tables[key] = rows
    return FinRing.from_tables(tables["add"], tables["mul"], _int(doc["zero"], f"{ptr}/zero"),
                               _int(doc["one"], f"{ptr}/one"), name=doc.get("name"))


# kernel objects and arrows ---------------------------------------------------------


def object_to_json(kernel, obj) -> dict:
    if kernel.name == "ring":
        return ring_to_json(obj)
    if kernel.name == "set":
        return set_to_json(obj)
    return poset_to_json(obj)


def object_from_json(kernel, doc, ptr=""):
    if kernel.name == "ring":
        return ring_from_json(doc, ptr)
    _obj(doc, ptr)
    if kernel.name == "set":
        if "set" not in doc:
            raise SchemaError("a set literal is {\"set\": [...]}", ptr)
        return Poset.antichain([decode_id(x, f"{ptr}/set/{i}") for i, x in enumerate(_list(doc["set"], f"{ptr}/set"))])
    return poset_from_json(doc, ptr)


def arrow_to_json(kernel, m):
    if kernel.name == "ring":
        return list(m.values)
    return [[encode_id(x), encode_id(m(x))] for x in m.source.elements]


def arrow_from_json(kernel, doc, source, target, ptr=""):
    if kernel.name == "ring":
        values = doc.get("values") if isinstance(doc, dict) else doc
        values = [_int(v, f"{ptr}/{i}") for i, v in enumerate(_list(values, ptr))]
        if len(values) != source.order or any(not 0 <= v < target.order for v in values):
            raise SchemaError("ring map values do not fit the rings", ptr)
        return RingHom(source, target, values)
    mapping = {}
    for k, v, p in _pairs(doc, ptr):
        mapping[k] = decode_id(v, p)
    missing = [x for x in source.elements if x not in mapping]
    if missing:
        raise SchemaError(f"map is undefined on {missing[0]!r}", ptr)
    return MonotoneMap.from_dict(source, target, mapping)


def _kernel(doc, ptr):
    name = doc.get("kernel", "ring")
    if name not in KERNELS:
        raise SchemaError(f"unknown kernel {name!r}", f"{ptr}/kernel")
    return KERNELS[name]


# data ----------------------------------------------------------------------------------


def cdata_to_json(F: CData) -> dict:
    K = F.kernel
    return {"kernel": K.name, "poset": poset_to_json(F.base),
            "stalks": [[encode_id(x), object_to_json(K, F.stalk(x))] for x in F.points],
            "restrictions": [[encode_id(x), encode_id(y), arrow_to_json(K, F.restriction(x, y))]
                             for x, y in F.base.covers()]}


def cdata_from_json(doc, ptr="") -> CData:
    _obj(doc, ptr, ("poset", "stalks"))
    K = _kernel(doc, ptr)
    base = poset_from_json(doc["poset"], f"{ptr}/poset")
    stalks = {}
    for x, v, p in _pairs(doc["stalks"], f"{ptr}/stalks"):
        if x not in base:
            raise SchemaError(f"stalk for unknown point {x!r}", p)
        stalks[x] = object_from_json(K, v, p)
    restrictions = {}
    for x, y, v, p in _relation_entries(doc.get("restrictions", []), f"{ptr}/restrictions"):
        if x not in stalks or y not in stalks:
            raise SchemaError("restriction mentions an unknown point", p)
        restrictions[(x, y)] = arrow_from_json(K, v, stalks[x], stalks[y], p)
    return make_cdata(K, base, stalks, restrictions)


def morphism_to_json(f: CDataMorphism, with_ends=True) -> dict:
    K = f.source.kernel
    doc = {"base": [[encode_id(x), encode_id(f.base(x))] for x in f.source.points],
           "sharp": [[encode_id(x), arrow_to_json(K, f.sharp[x])] for x in f.source.points]}
    if with_ends:
        doc["source"] = cdata_to_json(f.source)
        doc["target"] = cdata_to_json(f.target)
    return doc


def morphism_from_json(doc, source=None, target=None, ptr="") -> CDataMorphism:
    _obj(doc, ptr, ("base", "sharp"))
    if source is None:
        source = cdata_from_json(_obj(doc, ptr, ("source",))["source"], f"{ptr}/source")
    if target is None:
        target = cdata_from_json(_obj(doc, ptr, ("target",))["target"], f"{ptr}/target")
    mapping = {k: decode_id(v, p) for k, v, p in _pairs(doc["base"], f"{ptr}/base")}
    if any(x not in mapping for x in source.points):
        raise SchemaError("base map is not total", f"{ptr}/base")
    base = MonotoneMap.from_dict(source.base, target.base, mapping)
    sharp = {}
    for x, v, p in _pairs(doc["sharp"], f"{ptr}/sharp"):
        if x not in mapping:
            raise SchemaError(f"comorphism at unknown point {x!r}", p)
        sharp[x] = arrow_from_json(source.kernel, v, target.stalk(mapping[x]), source.stalk(x), p)
    return CDataMorphism(source, target, base, sharp)


def datum_to_json(X: LaxDatum) -> dict:
    return {"kernel": X.kernel.name, "shape": poset_to_json(X.shape),
            "fibers": [[encode_id(p), cdata_to_json(X.fibers[p])] for p in X.shape.elements],
            "transitions": [[encode_id(p), encode_id(q), morphism_to_json(X.transitions[(p, q)], False)]
                            for p, q in X.shape.covers()]}


def datum_from_json(doc, ptr="") -> LaxDatum:
    _obj(doc, ptr, ("shape", "fibers"))
    shape = poset_from_json(doc["shape"], f"{ptr}/shape")
    fibers = {}
    for p, v, pp in _pairs(doc["fibers"], f"{ptr}/fibers"):
        if p not in shape:
            raise SchemaError(f"fiber for unknown shape point {p!r}", pp)
        fibers[p] = cdata_from_json(v, pp)
    missing = [p for p in shape.elements if p not in fibers]
    if missing:
        raise SchemaError(f"no fiber for {missing[0]!r}", f"{ptr}/fibers")
    trans = {}
    for p, q, v, pp in _relation_entries(doc.get("transitions", []), f"{ptr}/transitions"):
        if p not in fibers or q not in fibers:
            raise SchemaError("transition mentions an unknown shape point", pp)
        trans[(p, q)] = morphism_from_json(v, fibers[q], fibers[p], pp)
    K = _kernel(doc, ptr) if "kernel" in doc else None
    if K is None and not fibers:
        raise SchemaError("a datum over the empty shape needs a kernel", f"{ptr}/kernel")
    if K is not None and any(F.kernel is not K for F in fibers.values()):
        raise SchemaError("fiber kernel differs from the datum kernel", f"{ptr}/kernel")
    return LaxDatum(shape, fibers, trans, kernel=K)


def datum_morphism_to_json(f: LaxDatumMorphism) -> dict:
    return {"source": datum_to_json(f.source), "target": datum_to_json(f.target),
            "shape_map": [[encode_id(p), encode_id(f.shape_map(p))] for p in f.source.shape.elements],
            "components": [[encode_id(p), morphism_to_json(f.components[p], False)]
                           for p in f.source.shape.elements]}


def datum_morphism_from_json(doc, ptr="") -> LaxDatumMorphism:
    _obj(doc, ptr, ("source", "target", "shape_map", "components"))
    X = datum_from_json(doc["source"], f"{ptr}/source")
    Y = datum_from_json(doc["target"], f"{ptr}/target")
    phi = MonotoneMap.from_dict(X.shape, Y.shape,
                                {k: decode_id(v, p) for k, v, p in _pairs(doc["shape_map"], f"{ptr}/shape_map")})
    comps = {}
    for p, v, pp in _pairs(doc["components"], f"{ptr}/components"):
        comps[p] = morphism_from_json(v, X.fibers[p], Y.fibers[phi(p)], pp)
    return LaxDatumMorphism(X, Y, phi, comps)


def cover_to_json(legs) -> dict:
    X = legs[0].target
    return {"space": cdata_to_json(X),
            "legs": [dict(morphism_to_json(f, False), source=cdata_to_json(f.source)) for f in legs]}


def cover_from_json(doc, ptr="") -> list:
    _obj(doc, ptr, ("space", "legs"))
    X = cdata_from_json(doc["space"], f"{ptr}/space")
    legs = []
    for i, leg in enumerate(_list(doc["legs"], f"{ptr}/legs")):
        legs.append(morphism_from_json(leg, None, X, f"{ptr}/legs/{i}"))
    if not legs:
        raise SchemaError("a cover needs at least one leg", f"{ptr}/legs")
    return legs


# documents ------------------------------------------------------------------------------

def lax_instance_to_json(inst) -> dict:
    X, Y = inst
    return {"datum": datum_to_json(X), "target": cdata_to_json(Y)}


def lax_instance_from_json(doc, ptr=""):
    _obj(doc, ptr, ("datum", "target"))
    return datum_from_json(doc["datum"], ptr + "/datum"), cdata_from_json(doc["target"], ptr + "/target")


def pair_to_json(pair) -> dict:
    f, g = pair
    return {"left": datum_morphism_to_json(f), "right": datum_morphism_to_json(g)}


def pair_from_json(doc, ptr=""):
    _obj(doc, ptr, ("left", "right"))
    return (datum_morphism_from_json(doc["left"], ptr + "/left"),
            datum_morphism_from_json(doc["right"], ptr + "/right"))


ENCODERS = {
    "poset": poset_to_json,
    "ring": ring_to_json,
    "space": cdata_to_json,
    "morphism": morphism_to_json,
    "datum": datum_to_json,
    "datum-morphism": datum_morphism_to_json,
    "cover": cover_to_json,
    "lax-instance": lax_instance_to_json,
    "pair": pair_to_json,
}

DECODERS = {
    "poset": poset_from_json,
    "ring": ring_from_json,
    "space": cdata_from_json,
    "morphism": lambda d, p: morphism_from_json(d, ptr=p),
    "datum": datum_from_json,
    "datum-morphism": datum_morphism_from_json,
    "cover": cover_from_json,
    "lax-instance": lax_instance_from_json,
    "pair": pair_from_json,
}


def to_document(kind: str, obj, name: str = None) -> dict:
    if kind not in ENCODERS:
        raise SchemaError(f"unknown kind {kind!r}", "/kind")
    doc = {"kind": kind}
    if name is not None:
        doc["name"] = name
    doc["body"] = ENCODERS[kind](obj)
    return doc


def from_document(doc):
    """``(kind, name, object)`` from a document, or a bare CData for kind-less input."""
    _obj(doc, "")
    if "kind" not in doc:
        return "space", None, cdata_from_json(doc)
    kind = doc["kind"]
    if kind not in DECODERS:
        raise SchemaError(f"unknown kind {kind!r}", "/kind")
    _obj(doc, "", ("body",))
    return kind, doc.get("name"), DECODERS[kind](doc["body"], "/body")


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} at line {e.lineno}", "") from None


def parse_space(path):
    """A ringed poset (or other datum) from a file; bare CData or a ``space`` document."""
    kind, _, obj = from_document(read_json(path))
    if kind != "space":
        raise SchemaError(f"expected a space, got {kind!r}", "/kind")
    return obj


def load(path):
    return from_document(read_json(path))


def dump(path, kind, obj, name=None):
    Path(path).write_text(canonical_json(to_document(kind, obj, name)), encoding="utf-8")
