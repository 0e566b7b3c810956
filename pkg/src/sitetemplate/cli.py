"""Command line entry point.

    sitetemplate extract --url URL [--corpus DIR] [--out FILE] [--report FILE] ...
    sitetemplate gen-corpus --out DIR --pages N --menu M [--seed S] ...

Exit codes: 0 success, 1 fatal load/parse error, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .cs import DEFAULT_BUDGET, DEFAULT_CS_SIZE
from .dom import ParseError, serialize_slice
from .equality import ConfigError, EqualityConfig
from .loaders import CorpusError, CorpusLoader, HttpLoader, LoadError
from .pipeline import run
from .synth import SiteSpec, SpecError, generate
from .urls import InvalidURL, normalize_url

EXIT_OK, EXIT_FATAL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sitetemplate", description="Extract a website's template from a key page.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    ex = sub.add_parser("extract", help="extract the template of a key page")
    ex.add_argument("--url", required=True, help="key page URL")
    ex.add_argument("--corpus", type=Path, help="offline corpus directory (with site.json)")
    ex.add_argument("--cs-size", type=int, default=DEFAULT_CS_SIZE, help="clique size n (default 4)")
    ex.add_argument("--threshold", type=float, help="equality threshold (default 0.7)")
    ex.add_argument("--weights", type=Path, help="key=value file with weights and threshold")
    ex.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max page loads (default 50)")
    ex.add_argument("--out", type=Path, help="template output file (default stdout)")
    ex.add_argument("--report", type=Path, help="write a JSON run report here")
    ex.add_argument("--keep-scripts", action="store_true", help="keep script/style elements")
    ex.add_argument("--timeout", type=float, help="HTTP timeout in seconds (live mode only)")
    ex.add_argument("--user-agent", help="HTTP User-Agent (live mode only)")

    gen = sub.add_parser("gen-corpus", help="write a synthetic test site")
    gen.add_argument("--out", type=Path, required=True)
    gen.add_argument("--pages", type=int, default=6)
    gen.add_argument("--menu", type=int, default=5)
    gen.add_argument("--sections", type=int, default=0)
    gen.add_argument("--lead-links", type=int, default=0)
    gen.add_argument("--dead-link", action="store_true")
    gen.add_argument("--seed", type=int, default=1)
    gen.add_argument("--host", default="site.test")
    return parser


def _config(args) -> EqualityConfig:
    cfg = EqualityConfig.from_file(args.weights) if args.weights else EqualityConfig()
    if args.threshold is not None:
        cfg = EqualityConfig.from_mapping({"threshold": args.threshold}, base=cfg)
    return cfg


def cmd_extract(args) -> int:
    if args.cs_size < 2:
        raise UsageError("--cs-size must be at least 2")
    if args.budget < 1:
        raise UsageError("--budget must be at least 1")
    try:
        url = normalize_url(args.url)
    except InvalidURL as exc:
        raise UsageError(f"--url: {exc}") from None
    try:
        cfg = _config(args)
    except (ConfigError, OSError) as exc:
        raise UsageError(f"bad equality config: {exc}") from None

    if args.corpus is not None:
        if args.timeout is not None or args.user_agent is not None:
            raise UsageError("--timeout/--user-agent only apply to live mode, not --corpus")
        try:
            loader = CorpusLoader(args.corpus, keep_scripts=args.keep_scripts)
        except CorpusError as exc:
            raise UsageError(str(exc)) from None
    else:
        kwargs = {"keep_scripts": args.keep_scripts}
        if args.timeout is not None:
            kwargs["timeout"] = args.timeout
        if args.user_agent:
            kwargs["user_agent"] = args.user_agent
        loader = HttpLoader(**kwargs)

    try:
        template, report = run(url, cfg, args.cs_size, loader, args.budget)
    except (LoadError, ParseError) as exc:
        print(f"sitetemplate: cannot load key page: {exc}", file=sys.stderr)
        return EXIT_FATAL

    data = serialize_slice(template.key_tree, template.kept)
    if args.out:
        args.out.write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if args.report:
        args.report.write_text(report.to_json(indent=2, sort_keys=True) + "\n")
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(
        f"template: {report.template_node_count}/{report.key_node_count} nodes, "
        f"clique of {len(report.clique.members)}, {report.pages_loaded_total} pages loaded",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_gen_corpus(args) -> int:
    try:
        spec = SiteSpec(
            page_count=args.pages,
            menu_size=args.menu,
            seed=args.seed,
            section_size=args.sections,
            lead_links=args.lead_links,
            dead_link=args.dead_link,
            host=args.host,
        )
        site = generate(spec, args.out)
    except SpecError as exc:
        raise UsageError(str(exc)) from None
    except OSError as exc:
        print(f"sitetemplate: {exc}", file=sys.stderr)
        return EXIT_FATAL
    print(f"wrote {len(site.pages)} pages to {args.out}; key page {site.key_url}", file=sys.stderr)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command (extract or gen-corpus)")
        logging.basicConfig(
            level=logging.WARNING - 10 * min(args.verbose, 2),
            format="%(levelname)s %(name)s: %(message)s",
        )
        if args.command == "extract":
            return cmd_extract(args)
        return cmd_gen_corpus(args)
    except UsageError as exc:
        print(f"sitetemplate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
