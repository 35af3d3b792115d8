"""Text file formats: groups, amalgams, group graphs, witness certificates,
and the workspace config.

All serializations are canonical: serializing a parsed value reproduces the
input byte-for-byte, so files round-trip exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import amalgam as am
from . import fingroup
from . import graphgroups as gg
from . import separability as sep
from .amalgam import TAG_H, TAG_K, AmalgamSpec, Word
from .errors import IndexOutOfRange, ParseError
from .fingroup import FiniteGroup, GroupHom


# -- group files --------------------------------------------------------

def serialize_group(G: FiniteGroup, presentation: Optional[str] = None) -> str:
    lines = [f"order {G.order}", "table"]
    lines.extend(" ".join(str(x) for x in row) for row in G.table)
    if G.names:
        lines.append("names " + " ".join(G.names))
    if presentation:
        lines.append("presentation " + presentation)
    return "\n".join(lines) + "\n"


def parse_group(text: str) -> FiniteGroup:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    order = None
    table = []
    names = None
    i = 0
    while i < len(lines):
        ln = lines[i]
        if ln.startswith("order "):
            order = int(ln.split()[1])
        elif ln == "table":
            if order is None:
                raise ParseError("order must precede table")
            for j in range(order):
                i += 1
                if i >= len(lines):
                    raise ParseError("truncated table")
                table.append([int(x) for x in lines[i].split()])
        elif ln.startswith("names "):
            names = ln.split()[1:]
        elif ln.startswith("presentation "):
            pass  # documentation only
        else:
            raise ParseError(f"unrecognized line: {ln!r}")
        i += 1
    if order is None or len(table) != order:
        raise ParseError("missing or incomplete table")
    try:
        return fingroup.from_table(order, table, names)
    except ValueError as exc:
        raise ParseError(str(exc))


def load_group(path: str | Path) -> FiniteGroup:
    return parse_group(Path(path).read_text())


# -- amalgam files ------------------------------------------------------

def serialize_amalgam(spec: AmalgamSpec) -> str:
    parts = ["[H]", serialize_group(spec.H).rstrip("\n"),
             "[K]", serialize_group(spec.K).rstrip("\n"),
             "[A]", "elements " + " ".join(str(a) for a in spec.A.elements),
             "[B]", "elements " + " ".join(str(b) for b in spec.B.elements),
             "[phi]"]
    parts.extend(f"{a} {b}" for a, b in spec.phi)
    return "\n".join(parts) + "\n"


def _split_sections(text: str) -> dict[str, list[str]]:
    sections: dict[str, list[str]] = {}
    current = None
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        if ln.startswith("[") and ln.endswith("]"):
            current = ln[1:-1]
            sections.setdefault(current, [])
        elif current is None:
            raise ParseError(f"content before first section: {ln!r}")
        else:
            sections[current].append(ln)
    return sections


def parse_amalgam(text: str) -> AmalgamSpec:
    sections = _split_sections(text)
    for name in ("H", "K", "A", "B", "phi"):
        if name not in sections:
            raise ParseError(f"missing section [{name}]")
    H = parse_group("\n".join(sections["H"]))
    K = parse_group("\n".join(sections["K"]))

    def elements(lines: list[str]) -> list[int]:
        if len(lines) != 1 or not lines[0].startswith("elements"):
            raise ParseError("subgroup section must be a single 'elements' line")
        return [int(x) for x in lines[0].split()[1:]]

    phi = {}
    for ln in sections["phi"]:
        a, b = ln.split()
        phi[int(a)] = int(b)
    return am.make_amalgam(H, K, elements(sections["A"]),
                           elements(sections["B"]), phi)


def load_amalgam(path: str | Path) -> AmalgamSpec:
    return parse_amalgam(Path(path).read_text())


# -- word literals ------------------------------------------------------

def parse_word(spec: AmalgamSpec, literal: str) -> Word:
    """`H:3 K:1 H:2`; tokens are element indices or names; '' is identity."""
    syllables = []
    for token in literal.split():
        if ":" not in token:
            raise ParseError(f"bad syllable {token!r}, expected TAG:element")
        tag, _, elt = token.partition(":")
        if tag not in (TAG_H, TAG_K):
            raise ParseError(f"bad factor tag {tag!r}")
        syllables.append((tag, spec.factor(tag).index_of_name(elt)))
    return am.word(syllables)


def render_word(spec: AmalgamSpec, w: Word) -> str:
    return " ".join(f"{tag}:{e}" for tag, e in w)


# -- group-graph files --------------------------------------------------

def parse_group_graph(text: str, base_dir: str | Path = ".") -> gg.GroupGraph:
    """Vertex lines reference group files; each edge line gives one geometric
    edge (the inverse edge is added automatically).

    Sections: ``[vertex NAME]`` with a ``group PATH`` line, and
    ``[edge NAME ORIG TERM]`` with ``group PATH``, ``rho i0 i1 ...`` and
    ``tau i0 i1 ...`` lines (images of edge-group elements in order).
    """
    base = Path(base_dir)
    sections = _split_sections(text)
    vertex_group: dict[str, FiniteGroup] = {}
    edges: dict[str, tuple[str, str, FiniteGroup, list[int], list[int]]] = {}
    for header, lines in sections.items():
        kind, *rest = header.split()
        fields = {ln.split()[0]: ln.split()[1:] for ln in lines}
        if kind == "vertex":
            (name,) = rest
            vertex_group[name] = load_group(base / fields["group"][0])
        elif kind == "edge":
            name, orig, term = rest
            egrp = load_group(base / fields["group"][0])
            rho = [int(x) for x in fields["rho"]]
            tau = [int(x) for x in fields["tau"]]
            edges[name] = (orig, term, egrp, rho, tau)
        else:
            raise ParseError(f"unknown section kind {kind!r}")
    edge_names = []
    inv, orig, term = {}, {}, {}
    edge_group, rho_map, tau_map = {}, {}, {}
    for name, (o, t, egrp, rho, tau) in sorted(edges.items()):
        bar = name + "bar"
        edge_names += [name, bar]
        inv[name], inv[bar] = bar, name
        orig[name], term[name] = o, t
        orig[bar], term[bar] = t, o
        edge_group[name] = edge_group[bar] = egrp
        rho_hom = GroupHom(egrp, vertex_group[o], tuple(rho))
        tau_hom = GroupHom(egrp, vertex_group[t], tuple(tau))
        if not (rho_hom.is_valid() and tau_hom.is_valid()):
            raise ParseError(f"edge {name}: rho/tau are not homomorphisms")
        rho_map[name], tau_map[name] = rho_hom, tau_hom
        rho_map[bar], tau_map[bar] = tau_hom, rho_hom
    graph = gg.make_graph(vertex_group.keys(), edge_names, inv, orig, term)
    return gg.make_group_graph(graph, vertex_group, edge_group, rho_map, tau_map)


def load_group_graph(path: str | Path) -> gg.GroupGraph:
    p = Path(path)
    return parse_group_graph(p.read_text(), p.parent)


# -- witness certificates ------------------------------------------------

def serialize_certificate(spec: AmalgamSpec, w: sep.Witness,
                          f: Word, g: Word) -> str:
    """Self-contained certificate for third-party re-verification."""
    fi, gi = sep.word_image(w, f), sep.word_image(w, g)
    lines = ["[witness]",
             f"strategy {w.strategy_tag}",
             f"f {render_word(spec, f) or '-'}",
             f"g {render_word(spec, g) or '-'}",
             "[target]",
             serialize_group(w.target).rstrip("\n"),
             "[psi_H]",
             " ".join(str(x) for x in w.psi_H.images),
             "[psi_K]",
             " ".join(str(x) for x in w.psi_K.images),
             "[images]",
             f"f_image {fi}",
             f"g_image {gi}",
             f"f_class_rep {fingroup.class_of(w.target, fi)[0]}",
             f"g_class_rep {fingroup.class_of(w.target, gi)[0]}"]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> dict:
    sections = _split_sections(text)
    meta = {ln.split()[0]: " ".join(ln.split()[1:]) for ln in sections["witness"]}
    target = parse_group("\n".join(sections["target"]))
    psi_h = [int(x) for x in sections["psi_H"][0].split()]
    psi_k = [int(x) for x in sections["psi_K"][0].split()]
    images = {ln.split()[0]: int(ln.split()[1]) for ln in sections["images"]}
    return {"strategy": meta["strategy"],
            "f": "" if meta["f"] == "-" else meta["f"],
            "g": "" if meta["g"] == "-" else meta["g"],
            "target": target,
            "psi_H": tuple(psi_h),
            "psi_K": tuple(psi_k),
            "images": images}


# -- workspace config ----------------------------------------------------

ENV_PREFIX = "AMALGAMS_"


@dataclass(frozen=True)
class WorkspaceConfig:
    p: int = 2
    max_target_order: int = 16
    max_quotient_index: int = 16
    max_conjugator_length: int = 4
    output: str = "text"  # or "json"

    def budget(self) -> sep.SearchBudget:
        return sep.SearchBudget(self.p, self.max_target_order,
                                self.max_quotient_index,
                                self.max_conjugator_length)


def load_config(path: Optional[str | Path] = None,
                env: Optional[dict[str, str]] = None) -> WorkspaceConfig:
    """`key value` lines; environment variables AMALGAMS_<KEY> override."""
    values: dict[str, str] = {}
    if path is not None:
        for ln in Path(path).read_text().splitlines():
            ln = ln.strip()
            if ln and not ln.startswith("#"):
                key, _, val = ln.partition(" ")
                values[key] = val.strip()
    env = os.environ if env is None else env
    for fld in ("p", "max_target_order", "max_quotient_index",
                "max_conjugator_length", "output"):
        ev = env.get(ENV_PREFIX + fld.upper())
        if ev is not None:
            values[fld] = ev
    kwargs = {}
    for fld, cast in (("p", int), ("max_target_order", int),
                      ("max_quotient_index", int),
                      ("max_conjugator_length", int), ("output", str)):
        if fld in values:
            kwargs[fld] = cast(values[fld])
    return WorkspaceConfig(**kwargs)
