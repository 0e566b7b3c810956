"""Equal top-down mappings between DOM trees and template extraction."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .dom import DomTree, serialize_slice
from .equality import DEFAULT_CONFIG, EqualityConfig, nodes_equal, similarity

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Mapping:
    """Set of ``(id in t1, id in t2)`` pairs."""

    pairs: frozenset[tuple[int, int]] = frozenset()

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.pairs))

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def left(self) -> frozenset[int]:
        return frozenset(a for a, _ in self.pairs)

    def right(self) -> frozenset[int]:
        return frozenset(b for _, b in self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


@dataclass(frozen=True)
class Template:
    """A parent-closed slice ``kept`` of ``key_tree``."""

    key_tree: DomTree
    kept: frozenset[int]
    sources: tuple[str, ...] = ()
    skipped: tuple[tuple[str, str], ...] = field(default=())

    @classmethod
    def whole(cls, key_tree: DomTree) -> "Template":
        return cls(key_tree, frozenset(key_tree.nodes))

    def __len__(self) -> int:
        return len(self.kept)

    def slice(self) -> DomTree:
        return self.key_tree.restrict(self.kept)

    def to_html(self) -> bytes:
        return serialize_slice(self.key_tree, self.kept)


def _solve_children(
    kids1: Sequence[int],
    kids2: Sequence[int],
    candidates: list[tuple[int, int, float]],
    sizes: dict[tuple[int, int], int],
) -> list[tuple[int, int]]:
    """Pick a one-to-one set of candidate child pairs maximizing the total
    mapped-subtree size, then total similarity."""
    if not candidates:
        return []
    rows = {c1 for c1, _, _ in candidates}
    cols = {c2 for _, c2, _ in candidates}
    if len(candidates) == len(rows) == len(cols):
        return [(c1, c2) for c1, c2, _ in candidates]
    row_ids = [c for c in kids1 if c in rows]
    col_ids = [c for c in kids2 if c in cols]
    r_index = {c: i for i, c in enumerate(row_ids)}
    c_index = {c: i for i, c in enumerate(col_ids)}
    # similarity only breaks ties: its total stays below 1
    scale = 1.0 / (min(len(row_ids), len(col_ids)) + 1)
    weights = np.zeros((len(row_ids), len(col_ids)))
    for c1, c2, sim in candidates:
        weights[r_index[c1], c_index[c2]] = sizes[(c1, c2)] + sim * scale
    rr, cc = linear_sum_assignment(weights, maximize=True)
    return [
        (row_ids[r], col_ids[c]) for r, c in zip(rr, cc) if weights[r, c] > 0
    ]


def compute_etdm(t1: DomTree, t2: DomTree, cfg: EqualityConfig = DEFAULT_CONFIG) -> Mapping:
    """Largest equal top-down mapping containing the pair of roots.

    At every mapped pair the children are matched one-to-one among pairs
    passing :func:`nodes_equal`, choosing the assignment that maps the most
    nodes below; ties go to the higher total similarity.
    """
    r1, r2 = t1.root_id, t2.root_id
    if not nodes_equal(t1.nodes[r1], t2.nodes[r2], cfg):
        raise PreconditionError(
            f"roots are not equal: <{t1.root.tag}> vs <{t2.root.tag}>"
        )
    sizes: dict[tuple[int, int], int] = {}
    chosen: dict[tuple[int, int], list[tuple[int, int]]] = {}
    cands: dict[tuple[int, int], list[tuple[int, int, float]]] = {}

    # Post-order over candidate pairs without recursion (DOMs can be deep).
    stack: list[tuple[int, int]] = [(r1, r2)]
    while stack:
        pair = stack[-1]
        n1, n2 = pair
        if pair not in cands:
            found = []
            for c1 in t1.nodes[n1].child_ids:
                a = t1.nodes[c1]
                for c2 in t2.nodes[n2].child_ids:
                    b = t2.nodes[c2]
                    if nodes_equal(a, b, cfg):
                        found.append((c1, c2, similarity(a, b, cfg)))
            cands[pair] = found
            stack.extend((c1, c2) for c1, c2, _ in found)
            continue
        stack.pop()
        if pair in sizes:
            continue
        picks = _solve_children(
            t1.nodes[n1].child_ids, t2.nodes[n2].child_ids, cands[pair], sizes
        )
        chosen[pair] = picks
        sizes[pair] = 1 + sum(sizes[p] for p in picks)

    pairs = set()
    todo = [(r1, r2)]
    while todo:
        pair = todo.pop()
        pairs.add(pair)
        todo.extend(chosen[pair])
    return Mapping(frozenset(pairs))


def refine(template: Template, page: DomTree, cfg: EqualityConfig = DEFAULT_CONFIG) -> Template:
    """Shrink ``template`` to the part that maps onto ``page``.

    Pages whose root is not equal to the template root are recorded in
    ``skipped`` and leave the template unchanged.
    """
    if not template.kept:
        raise PreconditionError("cannot refine an empty template")
    current = template.slice()
    if not nodes_equal(current.root, page.root, cfg):
        score = similarity(current.root, page.root, cfg)
        reason = (
            f"root mismatch: <{current.root.tag}> vs <{page.root.tag}> "
            f"(similarity {score:.3f}, threshold {cfg.threshold:g})"
        )
        log.info("skipping %s (%s)", page.source_url, reason)
        return replace(template, skipped=template.skipped + ((page.source_url, reason),))
    mapping = compute_etdm(current, page, cfg)
    return replace(
        template,
        kept=mapping.left(),
        sources=template.sources + (page.source_url,),
    )


def extract_template(
    key: DomTree, pages: Iterable[DomTree], cfg: EqualityConfig = DEFAULT_CONFIG
) -> Template:
    """Fold :func:`refine` over ``pages`` in order, starting from the whole key page."""
    template = Template.whole(key)
    for page in pages:
        template = refine(template, page, cfg)
    return template
