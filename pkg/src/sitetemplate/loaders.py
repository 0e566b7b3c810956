"""Page sources: an offline corpus (manifest + files) and live HTTP.

Both memoize per instance, so a link is fetched at most once; ``fetch_count``
counts real fetches (successful or not).
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from pathlib import Path

import requests

from .dom import DomTree, ParseError, extract_links, parse_html
from .urls import InvalidURL, Link, normalize_url

log = logging.getLogger(__name__)

USER_AGENT = "sitetemplate/0.1 (+template extraction; offline-friendly)"


class LoadError(Exception):
    """A page could not be fetched or parsed."""


class CorpusError(Exception):
    """The corpus directory or its manifest is unusable."""


class PageLoader:
    """Base loader. Subclasses implement :meth:`fetch`."""

    def __init__(self, keep_scripts: bool = False):
        self.keep_scripts = keep_scripts
        self.fetch_count = 0
        self.diagnostics: Counter = Counter()
        self._memo: dict[Link, tuple[DomTree, list[Link]] | LoadError] = {}

    def fetch(self, link: Link) -> tuple[bytes | str, Link]:
        """Return the raw page and the final URL after redirects."""
        raise NotImplementedError

    def load(self, link: Link) -> tuple[DomTree, list[Link]]:
        """Parsed page plus its filtered outbound links; raises :class:`LoadError`."""
        cached = self._memo.get(link)
        if isinstance(cached, LoadError):
            raise cached
        if cached is not None:
            return cached
        self.fetch_count += 1
        try:
            data, final_url = self.fetch(link)
            tree = parse_html(data, final_url, keep_scripts=self.keep_scripts)
        except (LoadError, ParseError) as exc:
            err = exc if isinstance(exc, LoadError) else LoadError(f"{link}: {exc}")
            self._memo[link] = err
            raise err from None
        result = (tree, extract_links(tree, self.diagnostics))
        self._memo[link] = result
        return result


class CorpusLoader(PageLoader):
    """Serves pages listed in ``<root>/site.json``: ``{"pages": {url: relpath}}``."""

    def __init__(self, root: str | Path, keep_scripts: bool = False):
        super().__init__(keep_scripts)
        self.root = Path(root)
        manifest = self.root / "site.json"
        try:
            raw = json.loads(manifest.read_text(encoding="utf-8"))
            pages = raw["pages"]
            if not isinstance(pages, dict):
                raise TypeError("'pages' must be an object")
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise CorpusError(f"cannot read manifest {manifest}: {exc}") from None
        self.pages: dict[Link, Path] = {}
        for url, rel in pages.items():
            try:
                self.pages[normalize_url(url)] = self.root / rel
            except InvalidURL as exc:
                raise CorpusError(f"bad URL in manifest: {exc}") from None

    def fetch(self, link: Link) -> tuple[bytes, Link]:
        try:
            key = normalize_url(link)
        except InvalidURL as exc:
            raise LoadError(str(exc)) from None
        path = self.pages.get(key)
        if path is None:
            raise LoadError(f"{link}: not in corpus manifest")
        try:
            return path.read_bytes(), key
        except OSError as exc:
            raise LoadError(f"{link}: {exc}") from None


class HttpLoader(PageLoader):
    def __init__(
        self,
        timeout: float = 10.0,
        max_redirects: int = 5,
        user_agent: str = USER_AGENT,
        keep_scripts: bool = False,
        session: requests.Session | None = None,
    ):
        super().__init__(keep_scripts)
        self.timeout = timeout
        self.session = session or requests.Session()
        self.session.max_redirects = max_redirects
        self.session.headers["User-Agent"] = user_agent

    def fetch(self, link: Link) -> tuple[bytes | str, Link]:
        log.debug("GET %s", link)
        try:
            resp = self.session.get(link, timeout=self.timeout, allow_redirects=True)
        except requests.RequestException as exc:
            raise LoadError(f"{link}: {exc.__class__.__name__}: {exc}") from None
        if not 200 <= resp.status_code < 300:
            raise LoadError(f"{link}: HTTP {resp.status_code}")
        ctype = resp.headers.get("Content-Type", "text/html")
        if "html" not in ctype and "xml" not in ctype:
            raise LoadError(f"{link}: not HTML ({ctype})")
        try:
            final = normalize_url(resp.url)
        except InvalidURL as exc:
            raise LoadError(str(exc)) from None
        if "charset=" in ctype.lower() and resp.encoding:
            return resp.content.decode(resp.encoding, errors="replace"), final
        return resp.content, final


class MemoryLoader(PageLoader):
    """Serves pages from a ``{url: html}`` mapping; handy in tests and notebooks."""

    def __init__(self, pages: dict[str, bytes | str], keep_scripts: bool = False):
        super().__init__(keep_scripts)
        self.pages = {normalize_url(url): data for url, data in pages.items()}

    def fetch(self, link: Link) -> tuple[bytes | str, Link]:
        try:
            key = normalize_url(link)
        except InvalidURL as exc:
            raise LoadError(str(exc)) from None
        if key not in self.pages:
            raise LoadError(f"{link}: unknown page")
        return self.pages[key], key
