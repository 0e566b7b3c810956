import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from sitetemplate.loaders import CorpusError, CorpusLoader, HttpLoader, LoadError, MemoryLoader


def test_corpus_load(sites_dir):
    loader = CorpusLoader(sites_dir / "blog")
    tree, links = loader.load("http://blog.test/")
    assert tree.source_url == "http://blog.test/"
    assert links and all(l.startswith("http://blog.test/") for l in links)
    assert loader.fetch_count == 1


def test_memoized(sites_dir):
    loader = CorpusLoader(sites_dir / "blog")
    first = loader.load("http://blog.test/")
    assert loader.load("http://blog.test/") is first
    assert loader.fetch_count == 1


def test_failures_are_memoized():
    loader = MemoryLoader({"http://m.test/": "<p>x</p>"})
    for _ in range(2):
        with pytest.raises(LoadError):
            loader.load("http://m.test/gone")
    assert loader.fetch_count == 1


def test_unparseable_page_is_a_load_error():
    loader = MemoryLoader({"http://m.test/": "plain text"})
    with pytest.raises(LoadError):
        loader.load("http://m.test/")


def test_corpus_missing_entry(sites_dir):
    with pytest.raises(LoadError, match="manifest"):
        CorpusLoader(sites_dir / "blog").load("http://blog.test/nope")


@pytest.mark.parametrize(
    "manifest",
    [None, "not json", '{"other": 1}', '{"pages": []}', '{"pages": {"mailto:x": "a.html"}}'],
)
def test_bad_corpus(tmp_path, manifest):
    if manifest is not None:
        (tmp_path / "site.json").write_text(manifest)
    with pytest.raises(CorpusError):
        CorpusLoader(tmp_path)


def test_corpus_file_missing(tmp_path):
    (tmp_path / "site.json").write_text(json.dumps({"pages": {"http://c.test/": "gone.html"}}))
    with pytest.raises(LoadError):
        CorpusLoader(tmp_path).load("http://c.test/")


# -- HTTP -----------------------------------------------------------------------


class _Handler(BaseHTTPRequestHandler):
    seen_agents: list = []

    def log_message(self, *args):
        pass

    def do_GET(self):
        _Handler.seen_agents.append(self.headers.get("User-Agent"))
        port = self.server.server_address[1]
        if self.path == "/old":
            self.send_response(301)
            self.send_header("Location", f"http://localhost:{port}/new")
            self.end_headers()
            return
        if self.path == "/new":
            body = (
                f'<html><body><a href="/a">same host</a>'
                f'<a href="http://127.0.0.1:{port}/b">old host</a></body></html>'
            ).encode()
            ctype = "text/html; charset=utf-8"
        elif self.path == "/latin":
            body = "<p>café</p>".encode("latin-1")
            ctype = "text/html; charset=iso-8859-1"
        elif self.path == "/data.json":
            body, ctype = b"{}", "application/json"
        else:
            self.send_response(404)
            self.end_headers()
            return
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


@pytest.fixture(scope="module")
def server():
    srv = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{srv.server_address[1]}"
    srv.shutdown()
    srv.server_close()


def test_http_redirect_uses_final_url(server):
    port = server.rsplit(":", 1)[1]
    loader = HttpLoader(timeout=5, user_agent="tester/1.0")
    tree, links = loader.load(f"{server}/old")
    assert tree.source_url == f"http://localhost:{port}/new"
    assert links == [f"http://localhost:{port}/a"]
    assert loader.diagnostics["cross_domain"] == 1
    assert _Handler.seen_agents[-1] == "tester/1.0"


def test_http_charset_header(server):
    tree, _ = HttpLoader(timeout=5).load(f"{server}/latin")
    assert tree.root.tag == "p"
    assert tree.children(tree.root_id)[0].text == "café"


@pytest.mark.parametrize("path, message", [("/missing", "HTTP 404"), ("/data.json", "not HTML")])
def test_http_errors(server, path, message):
    with pytest.raises(LoadError, match=message):
        HttpLoader(timeout=5).load(server + path)


def test_http_connection_refused():
    with pytest.raises(LoadError):
        HttpLoader(timeout=2).load("http://127.0.0.1:9/")
