"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line
(also collected into the "acceptance criteria" terminal summary)."""

import hashlib
import random
import subprocess
import sys
import time

import pytest

from conftest import record_acceptance
from oracles import brute_force_cs, brute_force_etdm, check_mapping, is_clique
from sitetemplate.cs import SiteGraph, maximal_cs_with
from sitetemplate.dom import parse_html
from sitetemplate.equality import DEFAULT_CONFIG, nodes_equal, similarity
from sitetemplate.etdm import compute_etdm, extract_template
from sitetemplate.loaders import MemoryLoader
from sitetemplate.pipeline import run
from sitetemplate.synth import SiteSpec, build_site
from treegen import build, mutate, random_pair, random_spec, random_tree

pytestmark = pytest.mark.acceptance


def verdict(number, name, ok, detail):
    record_acceptance(f"AC{number:<2} {'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, detail


# -- fixtures shared by 6 and 7 ---------------------------------------------------


def topology_sites():
    rng = random.Random(2024)
    specs = []
    while len(specs) < 20:
        page_count = rng.randint(5, 12)
        menu = rng.randint(3, 5)
        sections = rng.choice([0, 3, 4])
        if menu + sections > page_count:
            sections = 0
        specs.append(SiteSpec(page_count, menu, seed=rng.randrange(10**6), section_size=sections,
                              host=f"s{len(specs)}.test"))
    return [build_site(s) for s in specs]


SITES = topology_sites()


def run_site(site, **kwargs):
    loader = MemoryLoader(site.pages)
    return run(site.key_url, DEFAULT_CONFIG, loader=loader, **kwargs)


# -- 1 -------------------------------------------------------------------------


def test_ac1_definition_conformance():
    rng = random.Random(1)
    started = time.perf_counter()
    violations = 0
    for _ in range(200):
        spec = random_spec(rng, rng.randint(2, 25), root_attrs={})
        t1, t2 = build(spec), build(mutate(spec, rng, rate=0.5))
        violations += len(check_mapping(t1, t2, compute_etdm(t1, t2), DEFAULT_CONFIG))
    elapsed = time.perf_counter() - started
    verdict(1, "definition conformance", violations == 0 and elapsed < 10,
            f"{violations} violations over 200 pairs in {elapsed:.2f} s (limit 10 s)")


# -- 2 -------------------------------------------------------------------------


def distinct_similarities(t1, t2):
    """Under every parent pair, the equal child pairs have distinct scores."""
    for a in t1.nodes.values():
        for b in t2.nodes.values():
            scores = [
                similarity(x, y)
                for x in t1.children(a.id) for y in t2.children(b.id)
                if nodes_equal(x, y)
            ]
            rounded = [round(s, 9) for s in scores]
            if len(set(rounded)) != len(rounded):
                return False
    return True


def test_ac2_etdm_oracle():
    rng = random.Random(2)
    started = time.perf_counter()
    fixtures = []
    while len(fixtures) < 100:
        t1, t2 = random_pair(rng, max_nodes=10)
        if nodes_equal(t1.root, t2.root) and distinct_similarities(t1, t2):
            fixtures.append((t1, t2))
    mismatches = sum(len(compute_etdm(t1, t2)) != brute_force_etdm(t1, t2, DEFAULT_CONFIG) for t1, t2 in fixtures)
    elapsed = time.perf_counter() - started
    verdict(2, "ETDM oracle", mismatches == 0 and elapsed < 60,
            f"{mismatches} mismatches over 100 pairs (<= 10 nodes) in {elapsed:.2f} s (limit 60 s)")


# -- 3 -------------------------------------------------------------------------


def test_ac3_self_template_identity():
    rng = random.Random(3)
    failures = 0
    for _ in range(50):
        t = random_tree(rng, rng.randint(1, 60))
        try:
            failures += extract_template(t, [t]).kept != frozenset(t.nodes)
        except Exception:  # any exception counts as a failure
            failures += 1
    verdict(3, "self-template identity", failures == 0, f"{failures} failures over 50 trees")


# -- 4 -------------------------------------------------------------------------


def test_ac4_monotone_shrinkage():
    rng = random.Random(4)
    violations = 0
    for _ in range(100):
        spec = random_spec(rng, rng.randint(5, 40), root_attrs={})
        key = build(spec)
        pages = [build(mutate(spec, rng)) for _ in range(rng.randint(1, 5))]
        previous = frozenset(key.nodes)
        for i in range(1, len(pages) + 1):
            kept = extract_template(key, pages[:i]).kept
            violations += not kept <= previous
            previous = kept
    verdict(4, "monotone shrinkage", violations == 0, f"{violations} violations over 100 fixtures")


# -- 5 -------------------------------------------------------------------------


def test_ac5_cs_oracle():
    rng = random.Random(5)
    started = time.perf_counter()
    mismatches = checks = 0
    for _ in range(100):
        k = rng.randint(1, 8)
        nodes = [f"n{i}" for i in range(k)]
        density = rng.random()
        g = SiteGraph(list(nodes))
        for v in nodes:
            g.add(v, [u for u in nodes if u != v and rng.random() < density])
        for v in nodes:
            checks += 1
            mismatches += set(maximal_cs_with(v, g)) != brute_force_cs(g, v)
    elapsed = time.perf_counter() - started
    verdict(5, "CS oracle", mismatches == 0 and elapsed < 30,
            f"{mismatches} mismatches over 100 digraphs ({checks} links) in {elapsed:.2f} s (limit 30 s)")


# -- 6 -------------------------------------------------------------------------


def planted_reachable_clique(site):
    reachable = set(site.truth["links"][site.key_url])
    return any(
        len([m for m in c if m != site.key_url and m in reachable]) >= 4
        for c in site.truth["planted_cliques"]
    )


def test_ac6_clique_topology_recovery():
    problems = []
    planted_count = 0
    for i, site in enumerate(SITES):
        _, report = run_site(site)
        clique = report.clique
        edges = {(a, b) for a, outs in site.truth["links"].items() for b in outs}
        planted_union = set().union(*map(set, site.truth["planted_cliques"]))
        if planted_reachable_clique(site):
            planted_count += 1
            if not (clique.complete and len(clique.members) == 4):
                problems.append(f"site {i}: no complete 4-CS")
        if not set(clique.members) <= planted_union:
            problems.append(f"site {i}: members outside planted cliques")
        if not is_clique(clique.members, edges):
            problems.append(f"site {i}: non-mutual member pair")
    verdict(6, "clique topology recovery", not problems,
            f"{len(problems)} problems over 20 sites ({planted_count} with a planted 4-CS)"
            + (f": {problems}" if problems else ""))


# -- 7 -------------------------------------------------------------------------


def test_ac7_template_recovery():
    started = time.perf_counter()
    exact = 0
    bad_misses = []
    for i, site in enumerate(SITES):
        tpl, _ = run_site(site)
        truth = frozenset(site.truth["template_ids"][site.key_url])
        if tpl.kept == truth:
            exact += 1
            continue
        key = tpl.key_tree
        if any(not key.nodes[n].is_text for n in tpl.kept ^ truth):
            bad_misses.append(i)
    elapsed = time.perf_counter() - started
    ok = exact >= 18 and not bad_misses and elapsed < 30
    verdict(7, "template recovery", ok,
            f"{exact}/20 exact (need 18), {len(bad_misses)} misses on element nodes, "
            f"{elapsed:.2f} s (limit 30 s)")


# -- 8 -------------------------------------------------------------------------


def test_ac8_fetch_frugality():
    rng = random.Random(8)
    violations = []
    checked = 0
    while checked < 20:
        spec = SiteSpec(rng.randint(6, 14), 5, seed=rng.randrange(10**6),
                        lead_links=rng.randint(0, 2), host="f.test")
        site = build_site(spec)
        first_six = site.truth["links"][site.key_url][:6]
        menu = [u for u in site.truth["planted_cliques"][0] if u != site.key_url]
        if not set(menu) <= set(first_six):
            continue
        checked += 1
        _, report = run_site(site)
        if report.pages_loaded_total > 7:
            violations.append((spec.seed, report.pages_loaded_total))
    verdict(8, "fetch frugality", not violations,
            f"{len(violations)} runs over 7 loads across {checked} sites" + (f": {violations}" if violations else ""))


# -- 9 -------------------------------------------------------------------------


@pytest.mark.parametrize("site, url", [
    ("blog", "http://blog.test/"),
    ("trio", "http://trio.test/"),
    ("bbc", "http://news.bbc.co.uk/technology"),
])
def test_ac9_determinism(sites_dir, site, url):
    digests = set()
    for _ in range(3):
        proc = subprocess.run(
            [sys.executable, "-m", "sitetemplate", "extract", "--corpus", str(sites_dir / site), "--url", url],
            capture_output=True, check=False,
        )
        assert proc.returncode == 0, proc.stderr.decode()
        digests.add(hashlib.sha256(proc.stdout).hexdigest())
    verdict(9, f"determinism ({site})", len(digests) == 1, f"{len(digests)} distinct outputs over 3 CLI runs")


# -- 10 ------------------------------------------------------------------------


def degenerate_cases():
    alone = {"http://d.test/": "<html><body><p>no links</p></body></html>"}
    menu = "".join(f'<a href="/p{i}">{i}</a>' for i in range(4))
    mismatch = {"http://d.test/": f"<html><body>{menu}</body></html>"}
    for i in range(4):
        mismatch[f"http://d.test/p{i}"] = f"<div>{menu}<a href='/'>home</a></div>"
    star = {"http://d.test/": f"<html><body>{menu}</body></html>"}
    for i in range(4):
        star[f"http://d.test/p{i}"] = f"<html><body><p>{i}</p></body></html>"
    return {
        "zero-link key": (alone, {}),
        "all roots mismatch": (mismatch, {}),
        "budget exhausted": (star, {"budget": 1}),
    }


@pytest.mark.parametrize("case", list(degenerate_cases()))
def test_ac10_degenerate_robustness(case):
    pages, kwargs = degenerate_cases()[case]
    try:
        tpl, report = run("http://d.test/", loader=MemoryLoader(pages), **kwargs)
        whole = tpl.kept == frozenset(tpl.key_tree.nodes)
        ok = whole and bool(report.warnings)
        detail = f"whole key page={whole}, warnings={report.warnings}"
    except Exception as exc:  # a crash is the failure being tested for
        ok, detail = False, f"crashed: {exc!r}"
    verdict(10, f"degenerate robustness ({case})", ok, detail)
