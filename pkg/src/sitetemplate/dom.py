"""Simplified DOM trees: the data model, HTML ingestion and slice serialization.

A :class:`DomTree` is an immutable arena of :class:`DomNode` objects keyed by
integer ids. Ids are assigned in document (pre-order) order when parsing, so
sorting ids reproduces document order.
"""

from __future__ import annotations

import codecs
import html
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from html.parser import HTMLParser
from typing import Iterable, Iterator, Mapping
from urllib.parse import urljoin

from .urls import InvalidURL, Link, normalize_url, registrable_domain

ELEMENT = "element"
TEXT = "text"

VOID_ELEMENTS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)
RAW_TEXT_ELEMENTS = frozenset(("script", "style"))

# Start tags that implicitly close an open <p>.
_CLOSES_P = frozenset(
    """address article aside blockquote details div dl fieldset figcaption figure
    footer form h1 h2 h3 h4 h5 h6 header hr main menu nav ol p pre section table
    ul""".split()
)
# tag -> (tags it closes, tags that bound the search)
_IMPLIED_END = {
    "li": ({"li"}, {"ul", "ol", "menu"}),
    "dt": ({"dt", "dd"}, {"dl"}),
    "dd": ({"dt", "dd"}, {"dl"}),
    "tr": ({"tr", "td", "th"}, {"table", "thead", "tbody", "tfoot"}),
    "td": ({"td", "th"}, {"tr", "table"}),
    "th": ({"td", "th"}, {"tr", "table"}),
    "thead": ({"thead", "tbody", "tfoot", "tr", "td", "th"}, {"table"}),
    "tbody": ({"thead", "tbody", "tfoot", "tr", "td", "th"}, {"table"}),
    "tfoot": ({"thead", "tbody", "tfoot", "tr", "td", "th"}, {"table"}),
    "option": ({"option"}, {"select", "datalist"}),
}
_URL_ATTRS = {"a": "href", "area": "href", "link": "href"}

_WS = re.compile(r"\s+")
_META_CHARSET = re.compile(
    rb"""<meta[^>]+charset\s*=\s*["']?\s*([A-Za-z0-9_\-:.]+)""", re.IGNORECASE
)


class ParseError(ValueError):
    """Raised when bytes cannot be turned into a DOM tree."""


class SliceError(ValueError):
    """Raised when a node set passed to :func:`serialize_slice` is not parent-closed."""


@dataclass(frozen=True)
class DomNode:
    id: int
    kind: str
    tag: str = ""
    attrs: Mapping[str, str] = field(default_factory=dict)
    text: str = ""
    child_ids: tuple[int, ...] = ()
    parent_id: int | None = None
    sibling_index: int = 0

    @property
    def classname(self) -> str:
        return self.attrs.get("class", "")

    @property
    def is_text(self) -> bool:
        return self.kind == TEXT

    def __repr__(self) -> str:
        if self.is_text:
            return f"DomNode({self.id}, text={self.text[:30]!r})"
        return f"DomNode({self.id}, <{self.tag}>, children={len(self.child_ids)})"


@dataclass(frozen=True)
class DomTree:
    root_id: int
    nodes: Mapping[int, DomNode]
    source_url: str = ""

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node_id: object) -> bool:
        return node_id in self.nodes

    @property
    def root(self) -> DomNode:
        return self.nodes[self.root_id]

    def node(self, node_id: int) -> DomNode:
        return self.nodes[node_id]

    def parent(self, node_id: int) -> DomNode | None:
        pid = self.nodes[node_id].parent_id
        return None if pid is None else self.nodes[pid]

    def children(self, node_id: int) -> list[DomNode]:
        return [self.nodes[c] for c in self.nodes[node_id].child_ids]

    def iter_ids(self, start: int | None = None) -> Iterator[int]:
        """Pre-order walk from ``start`` (default: root)."""
        stack = [self.root_id if start is None else start]
        while stack:
            nid = stack.pop()
            yield nid
            stack.extend(reversed(self.nodes[nid].child_ids))

    def subtree(self, node_id: int) -> DomTree:
        ids = list(self.iter_ids(node_id))
        nodes = {i: self.nodes[i] for i in ids}
        nodes[node_id] = replace(nodes[node_id], parent_id=None, sibling_index=0)
        return DomTree(node_id, nodes, self.source_url)

    def path(self, node_id: int) -> list[int]:
        """Ids from the root down to ``node_id`` (debugging helper)."""
        out = [node_id]
        while (pid := self.nodes[out[-1]].parent_id) is not None:
            out.append(pid)
        return out[::-1]

    def link(self, node_id: int) -> str | None:
        node = self.nodes[node_id]
        if node.tag == "a":
            return node.attrs.get("href")
        return None

    def restrict(self, keep: Iterable[int]) -> DomTree:
        """The tree formed by ``keep`` and the edges between kept nodes.

        ``keep`` must be parent-closed and contain the root. Child lists and
        sibling indexes are recomputed for the smaller tree.
        """
        keep = set(keep)
        check_parent_closed(self, keep)
        if self.root_id not in keep:
            raise SliceError("slice does not contain the root")
        nodes = {}
        for nid in keep:
            node = self.nodes[nid]
            nodes[nid] = replace(
                node, child_ids=tuple(c for c in node.child_ids if c in keep)
            )
        for nid in keep:
            for idx, cid in enumerate(nodes[nid].child_ids):
                nodes[cid] = replace(nodes[cid], sibling_index=idx)
        return DomTree(self.root_id, nodes, self.source_url)

    def validate(self) -> None:
        """Check the structural invariants; raises AssertionError on violation."""
        seen = set()
        assert self.root.parent_id is None, "root has a parent"
        for nid in self.iter_ids():
            assert nid not in seen, f"cycle or shared node at {nid}"
            seen.add(nid)
            node = self.nodes[nid]
            assert node.id == nid
            assert (node.tag == "") == (node.kind == TEXT), f"tag/kind mismatch at {nid}"
            for idx, cid in enumerate(node.child_ids):
                child = self.nodes[cid]
                assert child.parent_id == nid, f"bad parent link at {cid}"
                assert child.sibling_index == idx, f"bad sibling index at {cid}"
        assert seen == set(self.nodes), "unreachable nodes"


def check_parent_closed(tree: DomTree, keep: set[int]) -> None:
    for nid in keep:
        if nid not in tree.nodes:
            raise SliceError(f"node {nid} is not in the tree")
        pid = tree.nodes[nid].parent_id
        if pid is not None and pid not in keep:
            raise SliceError(f"node {nid} is kept but its parent {pid} is not")


def normalize_text(text: str) -> str:
    return _WS.sub(" ", text).strip()


# --------------------------------------------------------------------------
# Parsing


def sniff_encoding(data: bytes) -> str:
    for bom, name in (
        (codecs.BOM_UTF8, "utf-8-sig"),
        (codecs.BOM_UTF16_LE, "utf-16"),
        (codecs.BOM_UTF16_BE, "utf-16"),
    ):
        if data.startswith(bom):
            return name
    m = _META_CHARSET.search(data[:2048])
    if m:
        try:
            return codecs.lookup(m.group(1).decode("ascii")).name
        except (LookupError, UnicodeDecodeError):
            pass
    return "utf-8"


class _Builder(HTMLParser):
    def __init__(self, base_url: str, keep_scripts: bool):
        super().__init__(convert_charrefs=True)
        self.base_url = base_url
        self.keep_scripts = keep_scripts
        # Each entry: [tag, attrs, children]; children hold entries or str.
        self.top: list = []
        self.stack: list[list] = []
        self.pending: list[str] = []
        self.skip_depth = 0
        self.skip_tag = ""

    def _container(self) -> list:
        return self.stack[-1][2] if self.stack else self.top

    def _flush(self) -> None:
        if self.pending:
            text = normalize_text("".join(self.pending))
            self.pending = []
            if text:
                self._container().append(text)

    def _close_until(self, tags: set[str], bounds: set[str]) -> None:
        for i in range(len(self.stack) - 1, -1, -1):
            tag = self.stack[i][0]
            if tag in tags:
                del self.stack[i:]
                return
            if tag in bounds:
                return

    def handle_starttag(self, tag, attrs):
        if self.skip_depth:
            if tag == self.skip_tag:
                self.skip_depth += 1
            return
        self._flush()
        if tag in RAW_TEXT_ELEMENTS and not self.keep_scripts:
            self.skip_tag, self.skip_depth = tag, 1
            return
        if tag in _CLOSES_P:
            self._close_until({"p"}, {"table", "td", "th", "button", "li"})
        if tag in _IMPLIED_END:
            self._close_until(*_IMPLIED_END[tag])
        attr_map: dict[str, str] = {}
        for name, value in attrs:
            name = name.lower()
            if name not in attr_map:
                attr_map[name] = normalize_text(value or "") if name == "class" else (value or "")
        url_attr = _URL_ATTRS.get(tag)
        if url_attr and url_attr in attr_map and self.base_url:
            try:
                attr_map[url_attr] = _resolve(attr_map[url_attr], self.base_url)
            except ValueError:
                pass
        entry = [tag, attr_map, []]
        self._container().append(entry)
        if tag not in VOID_ELEMENTS:
            self.stack.append(entry)

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)
        if not self.skip_depth and tag not in VOID_ELEMENTS and self.stack and self.stack[-1][0] == tag:
            self._flush()
            self.stack.pop()
        elif self.skip_depth and tag == self.skip_tag:
            self.skip_depth -= 1

    def handle_endtag(self, tag):
        if self.skip_depth:
            if tag == self.skip_tag:
                self.skip_depth -= 1
            return
        self._flush()
        for i in range(len(self.stack) - 1, -1, -1):
            if self.stack[i][0] == tag:
                del self.stack[i:]
                return

    def handle_data(self, data):
        if not self.skip_depth:
            self.pending.append(data)

    def handle_comment(self, data):
        if not self.skip_depth:
            self._flush()

    def close(self):
        super().close()
        self._flush()


def _resolve(href: str, base: str) -> str:
    href = href.strip()
    lowered = href.lower()
    if lowered.startswith(("javascript:", "mailto:", "tel:", "data:")):
        return href
    return urljoin(base, href)


def parse_html(data: bytes | str, base_url: str = "", keep_scripts: bool = False) -> DomTree:
    """Parse HTML into a :class:`DomTree`.

    Comments are dropped, as are ``script`` and ``style`` elements unless
    ``keep_scripts`` is set. Whitespace-only text is dropped
    and remaining text is whitespace-collapsed. Relative hrefs on ``a``,
    ``area`` and ``link`` are resolved against ``base_url``. A document with
    several top-level elements is wrapped in a synthetic ``html`` root.
    """
    if isinstance(data, str):
        text = data
    elif isinstance(data, (bytes, bytearray, memoryview)):
        data = bytes(data)
        if not data.strip():
            raise ParseError("empty input (0 non-whitespace bytes)")
        encoding = sniff_encoding(data)
        try:
            text = data.decode(encoding, errors="replace")
        except LookupError as exc:
            raise ParseError(f"unknown encoding {encoding!r}") from exc
    else:
        raise ParseError(f"expected bytes, got {type(data).__name__}")
    if not text.strip():
        raise ParseError("empty input")

    builder = _Builder(base_url, keep_scripts)
    try:
        builder.feed(text)
        builder.close()
    except Exception as exc:  # HTMLParser is lenient; this is a last resort
        offset = builder.getpos()
        raise ParseError(f"parser failure near line {offset[0]}, column {offset[1]}: {exc}") from exc

    top = [item for item in builder.top if not isinstance(item, str)]
    if not top:
        raise ParseError("no element found in input")
    if len(builder.top) == 1:
        root_entry = builder.top[0]
    else:
        root_entry = ["html", {}, builder.top]
    return _freeze(root_entry, base_url)


def _freeze(root_entry: list, source_url: str) -> DomTree:
    nodes: dict[int, DomNode] = {}
    counter = 0
    # (entry, parent id, sibling index) -> node id assigned in pre-order.
    pending_children: dict[int, list[int]] = {}
    stack: list[tuple[object, int | None, int]] = [(root_entry, None, 0)]
    order: list[tuple[int, object, int | None, int]] = []
    while stack:
        entry, pid, idx = stack.pop()
        nid = counter
        counter += 1
        order.append((nid, entry, pid, idx))
        if pid is not None:
            pending_children[pid].append(nid)
        if not isinstance(entry, str):
            pending_children[nid] = []
            kids = entry[2]
            for i in range(len(kids) - 1, -1, -1):
                stack.append((kids[i], nid, i))
    for nid, entry, pid, idx in order:
        if isinstance(entry, str):
            nodes[nid] = DomNode(nid, TEXT, text=entry, parent_id=pid, sibling_index=idx)
        else:
            nodes[nid] = DomNode(
                nid,
                ELEMENT,
                tag=entry[0],
                attrs=entry[1],
                child_ids=tuple(pending_children[nid]),
                parent_id=pid,
                sibling_index=idx,
            )
    return DomTree(0, nodes, source_url)


# --------------------------------------------------------------------------
# Links


def extract_links(tree: DomTree, diagnostics: Counter | None = None) -> list[Link]:
    """Distinct same-site outbound links of ``tree`` in document order.

    Self-links, other-domain links and non-http(s) schemes are excluded.
    Rejected hrefs are tallied in ``diagnostics`` when given.
    """
    tally = diagnostics if diagnostics is not None else Counter()
    try:
        own = normalize_url(tree.source_url)
    except InvalidURL:
        own = tree.source_url
    own_domain = registrable_domain(own) if own else ""
    seen: dict[str, None] = {}
    for nid in tree.iter_ids():
        href = tree.link(nid)
        if href is None:
            continue
        try:
            link = normalize_url(href, own or None)
        except InvalidURL:
            tally["malformed" if ":" not in href.split("/")[0] else "scheme"] += 1
            continue
        if link == own:
            tally["self"] += 1
        elif registrable_domain(link) != own_domain:
            tally["cross_domain"] += 1
        elif link in seen:
            tally["duplicate"] += 1
        else:
            seen[link] = None
    return list(seen)


# --------------------------------------------------------------------------
# Serialization


def _start_tag(node: DomNode) -> str:
    parts = [node.tag]
    for name, value in node.attrs.items():
        parts.append(f'{name}="{html.escape(value, quote=True)}"')
    return "<" + " ".join(parts) + ">"


def serialize_slice(tree: DomTree, keep: Iterable[int]) -> bytes:
    """Render the kept nodes of ``tree`` as UTF-8 HTML.

    ``keep`` must be parent-closed. Nodes keep their original order and
    nesting. Adjacent text siblings are separated by an empty comment so that
    re-parsing yields the same text nodes.
    """
    keep = set(keep)
    if not keep:
        return b"<!-- empty template -->\n"
    check_parent_closed(tree, keep)
    if tree.root_id not in keep:
        raise SliceError("slice does not contain the root")

    out: list[str] = []
    raw = False
    stack: list[tuple[str, object]] = [("node", tree.root_id)]
    while stack:
        op, arg = stack.pop()
        if op == "emit":
            out.append(arg)
            continue
        if op == "close":
            raw = False
            out.append(f"</{arg}>")
            continue
        node = tree.nodes[arg]
        if node.is_text:
            out.append(node.text if raw else html.escape(node.text, quote=False))
            continue
        out.append(_start_tag(node))
        if node.tag in VOID_ELEMENTS:
            continue
        raw = node.tag in RAW_TEXT_ELEMENTS
        ops: list[tuple[str, object]] = []
        prev_text = False
        for cid in node.child_ids:
            if cid not in keep:
                continue
            is_text = tree.nodes[cid].is_text
            if is_text and prev_text and not raw:
                ops.append(("emit", "<!---->"))
            ops.append(("node", cid))
            prev_text = is_text
        ops.append(("close", node.tag))
        stack.extend(reversed(ops))
    doctype = "<!DOCTYPE html>\n" if tree.root.tag == "html" else ""
    return (doctype + "".join(out) + "\n").encode("utf-8")
