"""Discovery of mutually linked page sets (complete subdigraphs) around a key page."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .loaders import LoadError, PageLoader
from .urls import Link

log = logging.getLogger(__name__)

DEFAULT_CS_SIZE = 4
DEFAULT_BUDGET = 50


@dataclass
class SiteGraph:
    """Links explored so far and the directed connections between them."""

    reachable: list[Link]
    processed: list[Link] = field(default_factory=list)
    connections: set[tuple[Link, Link]] = field(default_factory=set)

    def __post_init__(self):
        self._reachable = set(self.reachable)
        self._order = {link: i for i, link in enumerate(self.processed)}

    def add(self, link: Link, outlinks) -> None:
        """Record ``link`` as processed with edges to its outlinks among reachable links."""
        for target in outlinks:
            if target in self._reachable and target != link:
                self.connections.add((link, target))
        if link not in self._order:
            self._order[link] = len(self.processed)
            self.processed.append(link)

    def mutual(self, a: Link, b: Link) -> bool:
        return (a, b) in self.connections and (b, a) in self.connections

    def position(self, link: Link) -> int:
        return self._order[link]


def _max_clique(candidates: list[Link], graph: SiteGraph) -> list[Link]:
    """Largest mutual clique among ``candidates``; ties go to the
    lexicographically earliest processing positions."""
    best: list[Link] = []
    best_key: tuple = ()
    adj = {v: {u for u in candidates if u != v and graph.mutual(u, v)} for v in candidates}

    def consider(clique: list[Link]) -> None:
        nonlocal best, best_key
        key = tuple(sorted(graph.position(v) for v in clique))
        if len(clique) > len(best) or (len(clique) == len(best) and key < best_key):
            best, best_key = list(clique), key

    # Bron-Kerbosch with pivoting, iterative.
    stack = [([], set(candidates), set())]
    while stack:
        r, p, x = stack.pop()
        if not p and not x:
            consider(r)
            continue
        if len(r) + len(p) < len(best):
            continue
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot], key=graph.position):
            stack.append((r + [v], p & adj[v], x & adj[v]))
            p = p - {v}
            x = x | {v}
    return best


def maximal_cs_with(link: Link, graph: SiteGraph) -> tuple[Link, ...]:
    """A maximum set of processed links containing ``link`` whose members are
    pairwise linked in both directions, in processing order."""
    if link not in graph.processed:
        raise ValueError(f"{link} has not been processed")
    neighbours = [v for v in graph.processed if v != link and graph.mutual(link, v)]
    members = [link] + _max_clique(neighbours, graph)
    return tuple(sorted(members, key=graph.position))


@dataclass(frozen=True)
class CliqueResult:
    members: tuple[Link, ...]
    complete: bool
    pages_loaded: int
    n: int
    key_url: Link = ""
    budget_exhausted: bool = False
    failures: tuple[tuple[Link, str], ...] = ()
    graph: SiteGraph | None = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "members": list(self.members),
            "complete": self.complete,
            "pages_loaded": self.pages_loaded,
            "n": self.n,
            "key_url": self.key_url,
            "budget_exhausted": self.budget_exhausted,
            "failures": [list(f) for f in self.failures],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CliqueResult":
        return cls(
            members=tuple(data["members"]),
            complete=bool(data["complete"]),
            pages_loaded=int(data["pages_loaded"]),
            n=int(data["n"]),
            key_url=data.get("key_url", ""),
            budget_exhausted=bool(data.get("budget_exhausted", False)),
            failures=tuple(tuple(f) for f in data.get("failures", ())),
        )


def find_n_cs(
    initial: Link,
    n: int,
    loader: PageLoader,
    budget: int = DEFAULT_BUDGET,
) -> CliqueResult:
    """Load the key page's links in document order until ``n`` of them are
    pairwise mutually linked.

    Returns the clique found, or the largest smaller one when no ``n``-clique
    exists among the links tried. ``budget`` caps page loads, key page included. Pages
    that fail to load are skipped. A failure to load the key page propagates.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    start = loader.fetch_count
    key_tree, reachable = loader.load(initial)
    graph = SiteGraph(list(reachable))
    best: tuple[Link, ...] = ()
    failures = []
    exhausted = False

    def result(members, complete):
        return CliqueResult(
            members=members,
            complete=complete,
            pages_loaded=loader.fetch_count - start,
            n=n,
            key_url=key_tree.source_url,
            budget_exhausted=exhausted,
            failures=tuple(failures),
            graph=graph,
        )

    for link in graph.reachable:
        if loader.fetch_count - start >= budget:
            exhausted = True
            log.warning("load budget of %d pages exhausted", budget)
            break
        try:
            _, outlinks = loader.load(link)
        except LoadError as exc:
            log.info("skipping %s: %s", link, exc)
            failures.append((link, str(exc)))
            continue
        graph.add(link, outlinks)
        cs = maximal_cs_with(link, graph)
        if len(cs) >= n:
            return result(cs, True)
        if len(cs) > len(best):
            best = cs
    return result(best, False)
