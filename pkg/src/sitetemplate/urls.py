"""URL normalization and same-site checks.

Links are plain ``str`` values in canonical form: lowercase scheme and host,
default port dropped, dot-segments resolved, fragment stripped, trailing
slash removed (except for the root path). Query strings are kept verbatim.
"""

from __future__ import annotations

import ipaddress
from functools import lru_cache
from urllib.parse import urljoin, urlsplit, urlunsplit

import tldextract

Link = str

ALLOWED_SCHEMES = ("http", "https")
_DEFAULT_PORTS = {"http": 80, "https": 443}

# Offline extractor: uses the public suffix snapshot bundled with tldextract.
_extract = tldextract.TLDExtract(suffix_list_urls=(), cache_dir=None)


class InvalidURL(ValueError):
    pass


def _remove_dot_segments(path: str) -> str:
    if not path:
        return "/"
    out: list[str] = []
    segments = path.split("/")
    for i, seg in enumerate(segments):
        if seg == ".":
            if i == len(segments) - 1:
                out.append("")
            continue
        if seg == "..":
            if len(out) > 1:
                out.pop()
            if i == len(segments) - 1:
                out.append("")
            continue
        out.append(seg)
    result = "/".join(out)
    if not result.startswith("/"):
        result = "/" + result
    return result


def normalize_url(href: str, base: str | None = None) -> Link:
    """Resolve ``href`` against ``base`` and return its canonical form.

    Raises :class:`InvalidURL` for non-http(s) schemes, missing hosts or
    unparseable input.
    """
    href = (href or "").strip()
    try:
        absolute = urljoin(base, href) if base else href
        parts = urlsplit(absolute)
        port = parts.port
    except ValueError as exc:
        raise InvalidURL(f"cannot parse {href!r}: {exc}") from None
    scheme = parts.scheme.lower()
    if scheme not in ALLOWED_SCHEMES:
        raise InvalidURL(f"unsupported scheme in {href!r}")
    host = (parts.hostname or "").lower()
    if not host:
        raise InvalidURL(f"missing host in {href!r}")
    netloc = host if ":" not in host else f"[{host}]"
    if port is not None and port != _DEFAULT_PORTS[scheme]:
        netloc = f"{netloc}:{port}"
    path = _remove_dot_segments(parts.path)
    if len(path) > 1:
        path = path.rstrip("/") or "/"
    return urlunsplit((scheme, netloc, path, parts.query, ""))


@lru_cache(maxsize=4096)
def registrable_domain(url: str) -> str:
    """Return the public-suffix-aware registrable domain of ``url``.

    Hosts without a known public suffix (``localhost``, ``blog.test``) fall
    back to their last two labels; IP addresses are returned as-is.
    """
    host = (urlsplit(url).hostname or "").lower()
    try:
        ipaddress.ip_address(host)
        return host
    except ValueError:
        pass
    ext = _extract(host)
    if ext.suffix and ext.domain:
        return f"{ext.domain}.{ext.suffix}"
    labels = [label for label in host.split(".") if label]
    return ".".join(labels[-2:])


def same_site(a: str, b: str) -> bool:
    return registrable_domain(a) == registrable_domain(b)
