import json

from sitetemplate.equality import DEFAULT_CONFIG
from sitetemplate.loaders import CorpusLoader, MemoryLoader
from sitetemplate.pipeline import RunReport, run


def run_corpus(path, url, **kwargs):
    loader = CorpusLoader(path)
    tpl, report = run(url, DEFAULT_CONFIG, loader=loader, **kwargs)
    return tpl, report, loader


def test_blog_matches_golden(sites_dir):
    tpl, report, loader = run_corpus(sites_dir / "blog", "http://blog.test/")
    assert tpl.to_html() == (sites_dir / "blog" / "template.golden.html").read_bytes()
    assert report.clique.complete
    assert report.pages_loaded_total <= 6
    assert report.pages_loaded_total == loader.fetch_count
    assert report.warnings == []


def test_report_invariants(sites_dir):
    _, report, _ = run_corpus(sites_dir / "blog", "http://blog.test/")
    assert report.template_node_count <= report.key_node_count
    covered = set(report.pages_analyzed) | {s[0] for s in report.pages_skipped}
    assert covered == set(report.clique.members)


def test_bbc_mock(sites_dir):
    tpl, report, _ = run_corpus(sites_dir / "bbc", "http://news.bbc.co.uk/technology")
    html = tpl.to_html().decode()
    assert report.clique.complete
    assert "orb-nav" in html and "Top Stories" in html
    assert "stories-technology" not in html


def test_zero_link_key_page():
    loader = MemoryLoader({"http://z.test/": "<html><body><p>alone</p></body></html>"})
    tpl, report = run("http://z.test/", loader=loader)
    assert tpl.kept == frozenset(tpl.key_tree.nodes)
    assert report.clique.members == ()
    assert report.warnings and "whole key page" in report.warnings[0]


def test_every_page_skipped():
    menu = '<a href="/a">a</a><a href="/b">b</a>'
    loader = MemoryLoader({
        "http://r.test/": f"<html><body>{menu}</body></html>",
        "http://r.test/a": f"<div>{menu}<a href='/'>home</a></div>",
        "http://r.test/b": f"<div>{menu}<a href='/'>home</a></div>",
    })
    tpl, report = run("http://r.test/", n=3, loader=loader)
    assert set(report.clique.members) == {"http://r.test/a", "http://r.test/b"}
    assert report.pages_analyzed == []
    assert len(report.pages_skipped) == 2
    assert tpl.kept == frozenset(tpl.key_tree.nodes)
    assert any("skipped" in w for w in report.warnings)


def test_deterministic(sites_dir):
    a_tpl, a_rep, _ = run_corpus(sites_dir / "blog", "http://blog.test/")
    b_tpl, b_rep, _ = run_corpus(sites_dir / "blog", "http://blog.test/")
    assert a_tpl.kept == b_tpl.kept
    a, b = a_rep.to_dict(), b_rep.to_dict()
    a.pop("elapsed"), b.pop("elapsed")
    assert a == b


def test_report_json_round_trip(sites_dir):
    _, report, _ = run_corpus(sites_dir / "bbc", "http://news.bbc.co.uk/technology")
    text = report.to_json(indent=2)
    again = RunReport.from_json(text)
    assert again.to_dict() == json.loads(text)
    assert again.clique == report.clique
