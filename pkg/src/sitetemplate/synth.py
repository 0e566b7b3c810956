"""Synthetic websites with a known template and link topology.

A generated site has:

* a main menu (the home page plus ``menu_size - 1`` section pages); every
  page carries the menu, so menu pages link to each other in both directions;
* optionally, ``section_size`` sub-section pages under the first section,
  which share a submenu and therefore form a second mutual clique with their
  parent section;
* leaf articles that only link upwards (menu, submenu), listed by their
  section page.

Every page is assembled from a shared skeleton (head, header, menu, sidebar,
footer) plus page-specific content blocks. The generator knows which nodes
come from the skeleton and writes their pre-order ids to ``truth.json``.
"""

from __future__ import annotations

import html
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

WORDS = (
    "amber basin cedar delta ember fjord grove harbor island juniper kestrel "
    "lagoon meadow nectar orchid prairie quartz river summit timber umber "
    "valley willow yarrow zephyr copper falcon glacier heron lantern"
).split()
SITE_NAMES = ("Northwind", "Bluepine", "Driftwood", "Lumen", "Kettle", "Parcel", "Oakline")
CONTENT_TAGS = ("section", "article", "div", "p", "ul", "figure")


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class SiteSpec:
    page_count: int
    menu_size: int
    seed: int = 0
    section_size: int = 0
    lead_links: int = 0
    dead_link: bool = False
    host: str = "site.test"

    def __post_init__(self):
        if self.menu_size < 1:
            raise SpecError("menu_size must be at least 1 (the home page)")
        if self.section_size and self.menu_size < 2:
            raise SpecError("sub-sections need at least one section page")
        if self.menu_size + self.section_size > self.page_count:
            raise SpecError(
                f"page_count={self.page_count} too small for menu_size="
                f"{self.menu_size} and section_size={self.section_size}"
            )

    @property
    def leaf_count(self) -> int:
        return self.page_count - self.menu_size - self.section_size


class _El:
    __slots__ = ("tag", "attrs", "children", "tpl")

    def __init__(self, tag, attrs=None, children=(), tpl=True):
        self.tag = tag
        self.attrs = attrs or {}
        self.children = list(children)
        self.tpl = tpl


class _Text:
    __slots__ = ("text", "tpl")

    def __init__(self, text, tpl=True):
        self.text = " ".join(text.split())
        self.tpl = tpl


_VOID = {"meta", "link", "br", "img", "hr", "input"}


def _render(node, out: list[str], depth: int = 0) -> None:
    pad = "  " * depth
    if isinstance(node, _Text):
        out.append(pad + html.escape(node.text, quote=False))
        return
    attrs = "".join(f' {k}="{html.escape(v, quote=True)}"' for k, v in node.attrs.items())
    if node.tag in _VOID:
        out.append(f"{pad}<{node.tag}{attrs}>")
        return
    if all(isinstance(c, _Text) for c in node.children) and len(node.children) <= 1:
        inner = html.escape(node.children[0].text, quote=False) if node.children else ""
        out.append(f"{pad}<{node.tag}{attrs}>{inner}</{node.tag}>")
        return
    out.append(f"{pad}<{node.tag}{attrs}>")
    for child in node.children:
        _render(child, out, depth + 1)
    out.append(f"{pad}</{node.tag}>")


def _template_ids(root) -> list[int]:
    ids = []
    stack = [root]
    counter = 0
    while stack:
        node = stack.pop()
        if node.tpl:
            ids.append(counter)
        counter += 1
        if isinstance(node, _El):
            stack.extend(reversed(node.children))
    return ids


@dataclass
class _Page:
    url: str
    path: str
    role: str
    title: str
    parent: str | None = None
    children: list[str] = field(default_factory=list)


@dataclass
class Site:
    spec: SiteSpec
    key_url: str
    pages: dict[str, bytes]
    files: dict[str, str]
    truth: dict

    def manifest(self) -> dict:
        return {"pages": dict(self.files)}


def build_site(spec: SiteSpec) -> Site:
    """Build every page of ``spec`` in memory."""
    rng = random.Random(spec.seed)
    base = f"http://{spec.host}"
    name = rng.choice(SITE_NAMES)
    words = WORDS[:]
    rng.shuffle(words)
    word_iter = iter(words * 8)

    def slug() -> str:
        return next(word_iter)

    pages: dict[str, _Page] = {}
    home = _Page(base + "/", "index.html", "home", "Home")
    pages[home.url] = home
    menu = [home]
    for i in range(spec.menu_size - 1):
        s = slug()
        page = _Page(f"{base}/{s}", f"{s}.html", "menu", s.capitalize())
        pages[page.url] = page
        menu.append(page)
    greys: list[_Page] = []
    if spec.section_size:
        parent = menu[1]
        for _ in range(spec.section_size):
            s = slug()
            page = _Page(f"{parent.url}/{s}", f"{parent.path[:-5]}-{s}.html", "sub", s.capitalize(), parent=parent.url)
            pages[page.url] = page
            greys.append(page)
            parent.children.append(page.url)
    leaves: list[_Page] = []
    sections = menu[1:] or [home]
    for i in range(spec.leaf_count):
        sec = sections[i % len(sections)]
        s = f"{slug()}-{i}"
        prefix = sec.url.rstrip("/")
        page = _Page(f"{prefix}/story/{s}", f"story-{s}.html", "leaf", f"Story {s}", parent=sec.url)
        pages[page.url] = page
        leaves.append(page)
        sec.children.append(page.url)

    header_cls = rng.choice(["masthead", "site-header", "top-bar"])
    footer_cls = rng.choice(["site-footer", "colophon", "page-foot"])
    tagline = rng.random() < 0.6
    sidebar = rng.random() < 0.6
    footer_items = [(f"{base}/{m.url[len(base) + 1:]}", m.title) for m in menu[1:3]]
    if spec.dead_link:
        footer_items.append((f"{base}/about-us", "About"))
    lead = leaves[: spec.lead_links] if spec.lead_links else []
    if spec.lead_links > len(leaves):
        raise SpecError("lead_links exceeds the number of leaf pages")
    block_counter = iter(range(10_000))

    def href(target: str, current: _Page) -> str:
        # Mix absolute, root-relative and plain forms; all resolve to target.
        path = target[len(base):] or "/"
        choice = rng.random()
        if choice < 0.3:
            return target
        if choice < 0.5 and path != "/":
            return path + "/"
        return path

    def block(tag: str, kids) -> _El:
        uid = f"b{next(block_counter)}"
        return _El(tag, {"class": f"c-{uid}", "data-block": uid}, kids, tpl=False)

    def content_for(page: _Page) -> list[_El]:
        out: list[_El] = [block("h2", [_Text(page.title, tpl=False)])]
        for _ in range(rng.randint(1, 3)):
            tag = rng.choice(CONTENT_TAGS)
            if tag == "ul":
                items = [_El("li", {}, [_Text(f"{slug()} {slug()}", tpl=False)], tpl=False)
                         for _ in range(rng.randint(1, 3))]
                out.append(block("ul", items))
            elif tag == "p":
                out.append(block("p", [_Text(f"{slug()} {slug()} {slug()}.", tpl=False)]))
            else:
                inner = [_El("p", {}, [_Text(f"{slug()} {slug()}.", tpl=False)], tpl=False)]
                out.append(block(tag, inner))
        if page.role == "home":
            feature = [p for p in greys] + [p for p in leaves if p not in lead][:3]
            if feature:
                items = [_El("li", {}, [_El("a", {"href": href(p.url, page)}, [_Text(p.title, tpl=False)], tpl=False)], tpl=False)
                         for p in feature]
                out.append(block("ul", items))
        elif page.children:
            items = [_El("li", {}, [_El("a", {"href": href(u, page)}, [_Text(pages[u].title, tpl=False)], tpl=False)], tpl=False)
                     for u in page.children]
            out.append(block("ul", items))
        return out

    def render_page(page: _Page) -> tuple[_El, list[str]]:
        links: list[str] = []

        def note(target: str) -> None:
            if target != page.url and target not in links:
                links.append(target)

        head = _El("head", {}, [
            _El("meta", {"charset": "utf-8"}),
            _El("title", {}, [_Text(f"{page.title} - {name}", tpl=False)]),
            _El("link", {"rel": "stylesheet", "href": "/static/site.css"}),
        ])
        header_kids = [_El("a", {"class": "logo", "href": "/"}, [_Text(name)])]
        if tagline:
            header_kids.append(_El("p", {"class": "tagline"}, [_Text(f"The {name} journal")]))
        header = _El("header", {"class": header_cls}, header_kids)
        note(home.url)

        body_kids = [header]
        if page.role == "home" and lead:
            ticker = _El("div", {"class": "ticker", "data-ticker": "1"}, [
                _El("a", {"href": href(p.url, page)}, [_Text(p.title)]) for p in lead
            ], tpl=False)
            for node in ticker.children:
                node.tpl = False
                node.children[0].tpl = False
            body_kids.append(ticker)
            for p in lead:
                note(p.url)

        current_section = page.url if page.role == "menu" else page.parent
        items = []
        for m in menu:
            attrs = {"class": "active"} if m.url in (page.url, current_section) else {}
            items.append(_El("li", attrs, [_El("a", {"href": href(m.url, page)}, [_Text(m.title)])]))
            note(m.url)
        body_kids.append(_El("nav", {"class": "menu", "aria-label": "Main"}, [_El("ul", {}, items)]))

        sub_parent = None
        if greys:
            if page.url == greys[0].parent or page.role == "sub":
                sub_parent = greys[0].parent
            elif page.role == "leaf" and page.parent == greys[0].parent:
                sub_parent = greys[0].parent
        if sub_parent:
            sub_items = []
            for target, label in [(sub_parent, "Overview")] + [(g.url, g.title) for g in greys]:
                sub_items.append(_El("li", {}, [_El("a", {"href": href(target, page)}, [_Text(label)])], tpl=False))
                note(target)
            sub = _El("nav", {"class": "submenu", "aria-label": "Section"}, [_El("ul", {}, sub_items, tpl=False)], tpl=False)
            for li in sub_items:
                li.children[0].tpl = False
                li.children[0].children[0].tpl = False
            body_kids.append(sub)

        main = _El("main", {"class": "content"}, content_for(page))
        for blk in main.children:
            for a in _iter_links(blk):
                note(_resolve(a.attrs["href"], base))
        body_kids.append(main)

        if sidebar:
            body_kids.append(_El("aside", {"class": "sidebar"}, [
                _El("h3", {}, [_Text("About")]),
                _El("p", {}, [_Text(f"{name} publishes notes on {slug_fixed[0]} and {slug_fixed[1]}.")]),
            ]))

        foot_items = []
        for target, label in footer_items:
            foot_items.append(_El("li", {}, [_El("a", {"href": target}, [_Text(label)])]))
            note(target)
        body_kids.append(_El("footer", {"class": footer_cls}, [
            _El("ul", {}, foot_items),
            _El("p", {}, [_Text(f"(c) 2026 {name}")]),
            _El("a", {"href": "https://social.example.com/" + name.lower()}, [_Text("Follow")]),
            _El("a", {"href": f"mailto:desk@{spec.host}"}, [_Text("Contact")]),
            _El("a", {"href": "#top"}, [_Text("Top")]),
        ]))
        root = _El("html", {"lang": "en"}, [head, _El("body", {"class": f"site-{name.lower()}"}, body_kids)])
        return root, links

    slug_fixed = (slug(), slug())
    out_pages: dict[str, bytes] = {}
    files: dict[str, str] = {}
    template_ids: dict[str, list[int]] = {}
    link_truth: dict[str, list[str]] = {}
    for page in pages.values():
        root, links = render_page(page)
        lines = ["<!DOCTYPE html>"]
        _render(root, lines)
        out_pages[page.url] = ("\n".join(lines) + "\n").encode("utf-8")
        files[page.url] = "pages/" + page.path
        template_ids[page.url] = _template_ids(root)
        link_truth[page.url] = links

    planted = [[m.url for m in menu]]
    if greys:
        planted.append([greys[0].parent] + [g.url for g in greys])
    truth = {
        "key": home.url,
        "clique": [m.url for m in menu],
        "planted_cliques": planted,
        "template_ids": template_ids,
        "links": link_truth,
    }
    return Site(spec, home.url, out_pages, files, truth)


def _iter_links(node):
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, _El):
            if n.tag == "a" and "href" in n.attrs:
                yield n
            stack.extend(reversed(n.children))


def _resolve(href: str, base: str) -> str:
    href = href.rstrip("/") if href not in ("/", base + "/") else href
    if href.startswith("http"):
        return href if href != base else base + "/"
    return base + (href if href else "/")


def generate(spec: SiteSpec, out_dir: str | Path) -> Site:
    """Write the site to ``out_dir`` (``site.json``, ``truth.json``, ``pages/``)."""
    site = build_site(spec)
    out = Path(out_dir)
    (out / "pages").mkdir(parents=True, exist_ok=True)
    for url, rel in site.files.items():
        (out / rel).write_bytes(site.pages[url])
    (out / "site.json").write_text(json.dumps(site.manifest(), indent=2, sort_keys=True) + "\n")
    (out / "truth.json").write_text(json.dumps(site.truth, indent=2, sort_keys=True) + "\n")
    return site
