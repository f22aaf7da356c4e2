"""Reading and writing systems as YAML documents.

A system file looks like::

    name: freyd
    objects: ['0', '1']
    arrows:
      inf: ['0', '1']            # name: [source, target]
      sup: ['0', '1']
    compose: []                  # [g, f, g.f] for composable non-identity pairs
    elements:                    # elements[b][a] lists the labels of m(b, a)
      '0': {'0': ['*'], '1': ['0', '1/2', '1']}
      '1': {'1': [L, R]}
    rho:                         # rho[f][a]: label in m(target f, a) -> label in m(source f, a)
      inf: {'1': {L: '0', R: '1/2'}}
    lam:                         # lam[g][b]: label in m(b, source g) -> label in m(b, target g)
      inf: {'0': {'*': '0'}}
    realize:                     # optional planar hints
      base: {'1': [[0.0, 0.0], [1.0, 0.0]]}
      arrows: {inf: [[0, 0, 0.0], [0, 0, 0.0]]}       # rows [a, b, tx], [c, d, ty]
      elements: {'1': {'1': {L: [[0.5, 0, 0], [0, 0.5, 0]]}}}

Ids are assigned in declaration order; identities are implicit and
actions of composites may be omitted.
"""
from __future__ import annotations

from pathlib import Path

import yaml

from .approximator import Affine, RealizationHints
from .bimodule import Bimodule, validate_bimodule
from .errors import SystemFileError
from .fincat import FinCategory

TOP_KEYS = ("name", "objects", "arrows", "compose", "elements", "rho", "lam", "realize")
REALIZE_KEYS = ("base", "arrows", "elements")


def _mapping(value, what):
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise SystemFileError(f"{what} must be a mapping", ident=what)
    return {str(k): v for k, v in value.items()}


def _affine(value, what) -> Affine:
    try:
        (a, b, tx), (c, d, ty) = value
        return Affine(((float(a), float(b)), (float(c), float(d))), (float(tx), float(ty)))
    except (TypeError, ValueError):
        raise SystemFileError(f"{what} must be [[a, b, tx], [c, d, ty]]", ident=what) from None


def parse_text(text: str, source: str = "<string>"):
    """Parse a system document; returns ``(Bimodule, RealizationHints | None)``."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None) or getattr(exc, "context_mark", None)
        line, col = (mark.line + 1, mark.column + 1) if mark is not None else (None, None)
        problem = getattr(exc, "problem", None) or str(exc)
        raise SystemFileError(f"{source}: syntax error: {problem}", line=line, column=col) from None
    if doc is None:
        raise SystemFileError(f"{source}: syntax error: empty document", line=1, column=1)
    if not isinstance(doc, dict):
        raise SystemFileError(f"{source}: syntax error: top level must be a mapping", line=1, column=1)
    for key in doc:
        if str(key) not in TOP_KEYS:
            raise SystemFileError(f"{source}: unknown key {key!r}", ident=str(key))
    if "objects" not in doc:
        raise SystemFileError(f"{source}: missing key 'objects'", ident="objects")

    objects = [str(o) for o in doc["objects"] or []]
    arrows = []
    for name, ends in _mapping(doc.get("arrows"), "arrows").items():
        if not isinstance(ends, (list, tuple)) or len(ends) != 2:
            raise SystemFileError(f"{source}: arrow {name!r} must be [source, target]", ident=name)
        s, t = (str(e) for e in ends)
        for o in (s, t):
            if o not in objects:
                raise SystemFileError(f"{source}: arrow {name!r} references unknown object {o!r}", ident=o)
        arrows.append((name, s, t))
    compose = {}
    for entry in doc.get("compose") or []:
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise SystemFileError(f"{source}: compose entries must be [g, f, g.f]", ident=str(entry))
        g, f, h = (str(e) for e in entry)
        compose[(g, f)] = h
    try:
        base = FinCategory.build(objects, arrows, compose)
    except ValueError as exc:
        raise SystemFileError(f"{source}: {exc}", ident=_quoted(str(exc))) from None

    def obj(label, what):
        if label not in objects:
            raise SystemFileError(f"{source}: {what} references unknown object {label!r}", ident=label)
        return label

    def arrow(label, what):
        if label not in base.arrow_labels:
            raise SystemFileError(f"{source}: {what} references unknown arrow {label!r}", ident=label)
        return label

    elements = {}
    for b, row in _mapping(doc.get("elements"), "elements").items():
        obj(b, "elements")
        for a, labs in _mapping(row, f"elements.{b}").items():
            obj(a, f"elements.{b}")
            elements[(b, a)] = [str(x) for x in labs or []]
    rho, lam = {}, {}
    for key, out in (("rho", rho), ("lam", lam)):
        for f, row in _mapping(doc.get(key), key).items():
            arrow(f, key)
            for o, table in _mapping(row, f"{key}.{f}").items():
                obj(o, f"{key}.{f}")
                out[(f, o)] = {str(k): str(v) for k, v in _mapping(table, f"{key}.{f}.{o}").items()}
    try:
        M = Bimodule.build(base, elements, rho, lam, name=str(doc.get("name", "")))
    except (ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        raise SystemFileError(f"{source}: {msg}", ident=_quoted(msg)) from None
    diags = validate_bimodule(M)
    if diags:
        raise SystemFileError(f"{source}: {diags[0].message}", ident=diags[0].code)
    hints = _parse_hints(doc.get("realize"), M, source)
    return M, hints


def _quoted(msg: str) -> str | None:
    parts = msg.split("'")
    return parts[1] if len(parts) >= 3 else None


def _parse_hints(raw, M: Bimodule, source: str) -> RealizationHints | None:
    if raw is None:
        return None
    raw = _mapping(raw, "realize")
    for key in raw:
        if key not in REALIZE_KEYS:
            raise SystemFileError(f"{source}: unknown key 'realize.{key}'", ident=key)
    cat = M.base

    def ob(label):
        try:
            return cat.object_index(label)
        except (KeyError, ValueError):
            raise SystemFileError(f"{source}: realize references unknown object {label!r}", ident=label) from None

    base = {}
    for o, pts in _mapping(raw.get("base"), "realize.base").items():
        try:
            base[ob(o)] = tuple((float(x), float(y)) for x, y in pts)
        except (TypeError, ValueError):
            raise SystemFileError(f"{source}: realize.base.{o} must be a list of [x, y]", ident=o) from None
    arrows = {}
    for f, val in _mapping(raw.get("arrows"), "realize.arrows").items():
        if f not in cat.arrow_labels:
            raise SystemFileError(f"{source}: realize references unknown arrow {f!r}", ident=f)
        arrows[cat.arrow_index(f)] = _affine(val, f"realize.arrows.{f}")
    elements = {}
    for b, row in _mapping(raw.get("elements"), "realize.elements").items():
        for a, table in _mapping(row, f"realize.elements.{b}").items():
            bi, ai = ob(b), ob(a)
            for lab, val in _mapping(table, f"realize.elements.{b}.{a}").items():
                try:
                    m = M.element_index(bi, ai, lab)
                except KeyError:
                    raise SystemFileError(f"{source}: realize references unknown element {lab!r} of m({b},{a})",
                                          ident=lab) from None
                elements[(bi, ai, m)] = _affine(val, f"realize.elements.{b}.{a}.{lab}")
    return RealizationHints(base=base, arrows=arrows, elements=elements)


def parse_system(path) -> tuple[Bimodule, RealizationHints | None]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemFileError(f"{path}: cannot read: {exc.strerror}") from None
    return parse_text(text, str(path))


def _affine_rows(aff: Affine):
    (a, b), (c, d) = aff.matrix
    tx, ty = aff.offset
    return [[float(a), float(b), float(tx)], [float(c), float(d), float(ty)]]


def system_document(M: Bimodule, hints: RealizationHints | None = None) -> dict:
    """The YAML-ready mapping for ``M`` (every non-identity action explicit)."""
    cat = M.base
    n = cat.n_objects
    O = cat.objects
    A = cat.arrow_labels
    non_id = cat.non_identity_arrows
    doc: dict = {"name": M.name} if M.name else {}
    doc["objects"] = list(O)
    doc["arrows"] = {A[f]: [O[cat.source(f)], O[cat.target(f)]] for f in non_id}
    doc["compose"] = [[A[g], A[f], A[h]] for (g, f), h in sorted(cat.compose_table.items())
                      if not cat.is_identity(g) and not cat.is_identity(f)]
    elements = {}
    for b in range(n):
        row = {O[a]: [M.label(b, a, m) for m in range(M.sizes[b][a])] for a in range(n) if M.sizes[b][a]}
        if row:
            elements[O[b]] = row
    doc["elements"] = elements
    rho, lam = {}, {}
    for f in non_id:
        s, t = cat.arrows[f]
        r = {O[a]: {M.label(t, a, m): M.label(s, a, M.rho[f][a][m]) for m in range(M.sizes[t][a])}
             for a in range(n) if M.sizes[t][a]}
        if r:
            rho[A[f]] = r
        lm = {O[b]: {M.label(b, s, m): M.label(b, t, M.lam[f][b][m]) for m in range(M.sizes[b][s])}
              for b in range(n) if M.sizes[b][s]}
        if lm:
            lam[A[f]] = lm
    doc["rho"] = rho
    doc["lam"] = lam
    if hints is not None:
        real: dict = {}
        real["base"] = {O[o]: [[float(x), float(y)] for x, y in pts] for o, pts in sorted(hints.base.items())}
        real["arrows"] = {A[f]: _affine_rows(aff) for f, aff in sorted(hints.arrows.items())}
        els: dict = {}
        for (b, a, m), aff in sorted(hints.elements.items()):
            els.setdefault(O[b], {}).setdefault(O[a], {})[M.label(b, a, m)] = _affine_rows(aff)
        real["elements"] = els
        doc["realize"] = real
    return doc


def emit_system(M: Bimodule, hints: RealizationHints | None = None) -> str:
    return yaml.safe_dump(system_document(M, hints), sort_keys=False, default_flow_style=None,
                          allow_unicode=True, width=100)


def write_system(path, M: Bimodule, hints: RealizationHints | None = None) -> None:
    Path(path).write_text(emit_system(M, hints), encoding="utf-8")
