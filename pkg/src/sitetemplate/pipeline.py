"""Key page to template: clique discovery, page analysis, reporting."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field

from .cs import DEFAULT_BUDGET, DEFAULT_CS_SIZE, CliqueResult, find_n_cs
from .equality import DEFAULT_CONFIG, EqualityConfig
from .etdm import Template, refine
from .loaders import PageLoader
from .urls import Link

log = logging.getLogger(__name__)


@dataclass
class RunReport:
    key_url: Link
    clique: CliqueResult
    pages_analyzed: list[Link] = field(default_factory=list)
    pages_skipped: list[tuple[Link, str]] = field(default_factory=list)
    template_node_count: int = 0
    key_node_count: int = 0
    pages_loaded_total: int = 0
    elapsed: float = 0.0
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "key_url": self.key_url,
            "clique": self.clique.to_dict(),
            "pages_analyzed": list(self.pages_analyzed),
            "pages_skipped": [list(s) for s in self.pages_skipped],
            "template_node_count": self.template_node_count,
            "key_node_count": self.key_node_count,
            "pages_loaded_total": self.pages_loaded_total,
            "elapsed": self.elapsed,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(
            key_url=data["key_url"],
            clique=CliqueResult.from_dict(data["clique"]),
            pages_analyzed=list(data["pages_analyzed"]),
            pages_skipped=[tuple(s) for s in data["pages_skipped"]],
            template_node_count=int(data["template_node_count"]),
            key_node_count=int(data["key_node_count"]),
            pages_loaded_total=int(data["pages_loaded_total"]),
            elapsed=float(data["elapsed"]),
            warnings=list(data.get("warnings", [])),
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))


def run(
    initial: Link,
    cfg: EqualityConfig = DEFAULT_CONFIG,
    n: int = DEFAULT_CS_SIZE,
    loader: PageLoader | None = None,
    budget: int = DEFAULT_BUDGET,
) -> tuple[Template, RunReport]:
    """Extract the template of the page at ``initial``.

    Clique members were already loaded during discovery, so analysing them
    costs no extra fetches. A key page load failure propagates.
    """
    if loader is None:
        from .loaders import HttpLoader

        loader = HttpLoader()
    started = time.perf_counter()
    start_fetches = loader.fetch_count
    clique = find_n_cs(initial, n, loader, budget)
    key_tree, _ = loader.load(initial)

    template = Template.whole(key_tree)
    analyzed: list[Link] = []
    skipped: list[tuple[Link, str]] = []
    for member in clique.members:
        page, _ = loader.load(member)
        if page.source_url == key_tree.source_url:
            skipped.append((member, "key page"))
            continue
        before = len(template.skipped)
        template = refine(template, page, cfg)
        if len(template.skipped) > before:
            skipped.append((member, template.skipped[-1][1]))
        else:
            analyzed.append(member)

    warnings = []
    if not clique.members:
        warnings.append("no mutually linked pages found; template is the whole key page")
    elif not clique.complete:
        warnings.append(
            f"only a {len(clique.members)}-page clique was found (wanted {n}); "
            "template rests on fewer pages"
        )
    if clique.budget_exhausted:
        warnings.append(f"load budget of {budget} pages exhausted before the search finished")
    if clique.members and not analyzed:
        warnings.append("every clique page was skipped; template is the whole key page")
    for message in warnings:
        log.warning(message)

    report = RunReport(
        key_url=key_tree.source_url,
        clique=clique,
        pages_analyzed=analyzed,
        pages_skipped=skipped,
        template_node_count=len(template.kept),
        key_node_count=len(key_tree),
        pages_loaded_total=loader.fetch_count - start_fetches,
        elapsed=time.perf_counter() - started,
        warnings=warnings,
    )
    return template, report
