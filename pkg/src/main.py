"""
Cyclic Sorting Assistant - Main Application
Command line front end for the coset model, the extremal bounds and the
Schreier graph engine.

Usage:
    python -m src.main stats 6,5,4,3,12,2,11,1,10,9,8,7
    python -m src.main dist "(1,2,3,4)" "(1,4,3,2)"
    python -m src.main bounds --range 2..20 --format csv
    python -m src.main bfs --n 5 --mode diameter
    python -m src.main verify distance-oracle --seed 1
"""

import argparse
import os
import sys
from typing import List, Optional, Tuple, Union

# Allow `python src/main.py` as well as `python -m src.main`
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pandas as pd

from src.suites.verification_suites import create_all_suites, get_suite
from src.tools.cosets import (
    Cycle,
    coset_index,
    distance_witnesses,
    is_heavy_tailed,
    sorting_steps,
    sorting_steps_between,
    unrank,
)
from src.tools.extremal import (
    bounds,
    build_pi0,
    build_pi0_greedy,
    inv_pi0,
    kt_discrepancies,
    kt_sequence,
)
from src.tools.permutation import Permutation
from src.tools.schreier_engine import (
    DistanceField,
    GeneratorSet,
    MinvHistogram,
    bfs,
    diameter_exact,
    estimate_bfs_bytes,
    estimate_table_bytes,
    export_graph,
    is_unimodal,
)
from src.tools.statistics_engine import StatisticsEngine
from src.utils.config import BFS_MODES, EXPORT_CAP, OUTPUT_FORMATS, RunConfig, parse_byte_size
from src.utils.errors import (
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    CyclicSortError,
    DomainError,
    ParseError,
    ResourceLimitError,
    format_bytes,
)
from src.utils.exporters import (
    bounds_frame,
    edges_frame,
    graph_to_dot,
    histogram_frame,
    render_frame,
    render_mapping,
    to_json,
    write_output,
)


DISTRIBUTION_STATISTICS = ("inv", "winv", "cwinv", "minv")


def parse_input(text: str) -> Union[Permutation, Cycle]:
    """'(...)' is cycle notation; anything else is a one-line word."""
    if text.strip().startswith("("):
        return Cycle.parse(text)
    return Permutation.parse(text)


def as_cycle(text: str) -> Cycle:
    value = parse_input(text)
    return value if isinstance(value, Cycle) else Cycle(value.word)


def parse_range(text: str) -> Tuple[int, int]:
    """'2..20', '2-20' or '2:20' (inclusive); a single number is a one-size range."""
    for separator in ("..", ":", "-"):
        if separator in text:
            low, _, high = text.partition(separator)
            break
    else:
        low = high = text
    try:
        return int(low), int(high)
    except ValueError:
        raise ParseError(f"bad range {text!r}: expected 'a..b'", token=text) from None


class CyclicSortingAssistant:
    """
    Orchestrates every command of the tool.

    Holds the statistics engine and the suite registry, checks the
    per-command size caps, and turns library results into rendered output.
    Status lines go to stderr when verbose is on; results go to stdout or
    to the --out file.
    """

    def __init__(self, config: RunConfig):
        self.config = config
        self.statistics = StatisticsEngine()
        self.suites = create_all_suites()
        self._status(f"✅ Cyclic sorting assistant ready ({config.workers} workers)")

    def _status(self, message: str) -> None:
        if self.config.verbose:
            print(message, file=sys.stderr)

    def _banner(self, title: str) -> None:
        self._status(f"\n{'=' * 80}\n{title}\n{'=' * 80}")

    @property
    def fmt(self) -> str:
        return self.config.output_format

    def _require_n(self, minimum: int = 1) -> int:
        n = self.config.n
        if n is None:
            raise DomainError(f"'{self.config.command}' needs --n")
        if n < minimum:
            raise DomainError(f"n must be >= {minimum}, got {n}")
        return n

    def _generators(self, n: int) -> GeneratorSet:
        return GeneratorSet.of(self.config.generator_kind, n)

    # Commands

    def stats(self, word: str) -> str:
        value = parse_input(word)
        p = value.bar() if isinstance(value, Cycle) else value
        self._banner(f"STATISTICS OF {p}")
        results = {"n": p.n, "word": str(p)}
        results.update(self.statistics.calculate_all(p))
        results["coset_index"] = int(coset_index(p))
        results["sorting_steps"] = sorting_steps(p)
        if self.fmt == "json":
            results["coset_mean_inv"] = _rational(results["coset_mean_inv"])
        self._status(f"✅ {len(results) - 2} statistics evaluated")
        return render_mapping("stats", results, self.fmt)

    def distribution(self, statistic: str) -> str:
        """Counts of one statistic over S_n, or of minv over the cosets."""
        n = self._require_n()
        if statistic == "minv":
            series = self.statistics.coset_distribution(n)
        else:
            series = self.statistics.distribution(statistic, n)
        palindromic = self.statistics.is_palindromic(series)
        self._status(f"✅ {statistic} over n = {n}: {len(series)} values")
        if self.fmt == "csv":
            frame = series.rename_axis("value").reset_index()
            return render_frame("stats", frame, "csv")
        values = {"n": n, "statistic": statistic, "counts": series.tolist(),
                  "palindromic": palindromic}
        if self.fmt == "json":
            return to_json("stats", values)
        return render_mapping("stats", values, self.fmt)

    def statistics_catalogue(self) -> str:
        return self.statistics.list_statistics()

    def dist(self, first: str, second: str) -> str:
        g1, g2 = as_cycle(first), as_cycle(second)
        self._banner(f"DISTANCE {g1} -> {g2}")
        witnesses = distance_witnesses(g1, g2)
        shift, tau = witnesses[0]
        steps = sorting_steps_between(g1, g2)
        results = {
            "from": str(g1),
            "to": str(g2),
            "distance": len(steps),
            "witness": str(tau),
            "witness_shift": shift,
            "witness_shifts": [j for j, _ in witnesses],
            "steps": steps,
        }
        return render_mapping("dist", results, self.fmt)

    def pi0(self) -> str:
        n = self._require_n(minimum=2)
        self._banner(f"EXTREMAL PERMUTATION n = {n}")
        word = build_pi0(n)
        kt = kt_sequence(n)
        results = {
            "n": n,
            "pi0": str(word),
            "k_t": list(kt.values),
            "positions": kt.positions(),
            "inv_pi0": inv_pi0(n),
            "heavy_tailed": is_heavy_tailed(word),
            "greedy_agrees": build_pi0_greedy(n) == word,
            "ceiling_discrepancies": [list(d) for d in kt_discrepancies(n)],
        }
        return render_mapping("pi0", results, self.fmt)

    def bounds(self) -> str:
        n_min, n_max = self.config.n_range or (self._require_n(), self._require_n())
        if n_min < 1:
            raise DomainError(f"n must be >= 1, got {n_min}")
        reports = [bounds(n) for n in range(n_min, n_max + 1)]
        self._status(f"✅ {len(reports)} bounds rows")
        if self.fmt == "json":
            return to_json("bounds", [r.to_dict() for r in reports])
        return render_frame("bounds", bounds_frame(reports), self.fmt)

    def _check_cap(self, n: int, mode: str, subject: Optional[str] = None) -> None:
        cap = self.config.size_cap(mode)
        if n > cap:
            hint = "" if self.config.allow_large else "; pass --allow-large to lift the default cap"
            if mode == "diameter":
                required = estimate_table_bytes(n, workers=self.config.workers)
            else:
                required = estimate_bfs_bytes(n, self.config.chunk_size)
            raise ResourceLimitError(
                f"{subject or mode} is capped at n <= {cap} (n = {n} needs about "
                f"{format_bytes(required)}){hint}",
                required_bytes=required,
                cap_bytes=self.config.memory_cap_bytes,
            )

    def _progress(self, level: int, new: int) -> None:
        self._status(f"   level {level}: {new:,} new cosets")

    def _load_field(self, path: str, mode: str) -> DistanceField:
        if mode == "diameter":
            raise DomainError("a dump holds one source; --mode diameter needs every source")
        try:
            field = DistanceField.load(path)
        except OSError as exc:
            raise DomainError(f"cannot read distance dump {path}: {exc.strerror}") from None
        if self.config.n is not None and self.config.n != field.n:
            raise DomainError(f"size mismatch: --n {self.config.n} but the dump is for n = {field.n}")
        self._banner(f"LOADED {path}: n = {field.n} source = {field.source}")
        return field

    def bfs(self, mode: str, dump: Optional[str] = None, load: Optional[str] = None) -> str:
        if load:
            field = self._load_field(load, mode)
            n = field.n
        else:
            n = self._require_n()
            self._check_cap(n, mode)
            generators = self._generators(n)
            self._banner(f"BFS n = {n} mode = {mode} generators = {generators.kind.value}")

            if mode == "diameter":
                result = diameter_exact(n, generators, workers=self.config.workers,
                                        verbose=self.config.verbose,
                                        memory_cap=self.config.memory_cap_bytes)
                self._status(f"✅ diameter {result.diameter}")
                values = {
                    "n": n,
                    "generators": generators.kind.value,
                    "diameter": result.diameter,
                    "source": str(Cycle.from_coset(unrank(result.source, n))),
                    "target": str(Cycle.from_coset(unrank(result.target, n))),
                }
                return render_mapping("bfs", values, self.fmt)

            field = bfs(0, n, generators, workers=self.config.workers,
                        memory_cap=self.config.memory_cap_bytes,
                        chunk_size=self.config.chunk_size, progress=self._progress)
        # a loaded dump does not record its generator set
        kind = field.kind.value if field.kind is not None else "unrecorded"
        if dump:
            self._status(f"✅ distance field written to {field.dump(dump)}")
        if mode == "sort":
            farthest = int(field.farthest()[0])
            values = {
                "n": n,
                "generators": kind,
                "source": str(Cycle.from_coset(unrank(field.source, n))),
                "sort": field.eccentricity,
                "farthest": str(Cycle.from_coset(unrank(farthest, n))),
                "farthest_count": int(field.farthest().size),
            }
            return render_mapping("bfs", values, self.fmt)

        histogram = MinvHistogram(n=n, counts=tuple(field.histogram()))
        unimodal = is_unimodal(histogram)
        if self.fmt == "json":
            return to_json("bfs", {"n": n, "generators": kind,
                                   "counts": list(histogram.counts), "unimodal": unimodal})
        if self.fmt == "csv":
            return render_frame("bfs", histogram_frame(histogram.counts), "csv")
        return render_mapping("bfs", {"n": n, "counts": list(histogram.counts),
                                      "unimodal": unimodal}, self.fmt)

    def verify(self, suite: str, cases: Optional[int] = None) -> Tuple[str, int]:
        names = list(self.suites) if suite == "all" else [get_suite(suite).name]
        n_range = self.config.n_range
        if n_range is None and self.config.n is not None:
            n_range = (self.config.n, self.config.n)
        # size caps of every selected suite are checked before any of them runs
        for name in names:
            mode = self.suites[name].search_mode
            if mode is not None:
                n_max = (n_range or self.suites[name].default_range)[1]
                self._check_cap(n_max, mode, subject=f"suite '{name}'")
        reports = []
        for name in names:
            self._banner(f"VERIFYING {name}")
            report = self.suites[name].run(
                n_range=n_range,
                seed=self.config.seed,
                cases=cases,
                workers=self.config.workers,
                verbose=self.config.verbose,
                memory_cap=self.config.memory_cap_bytes,
            )
            self._status(("✅" if report.passed else "❌") + f" {name}: {len(report.failures)} failures")
            reports.append(report)

        code = EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFICATION_FAILED
        if self.fmt == "json":
            return to_json("verify", [r.to_dict() for r in reports]), code
        if self.fmt == "csv":
            frame = pd.DataFrame([
                {k: v for k, v in r.to_dict().items() if k not in ("failures", "notes")}
                for r in reports
            ])
            return render_frame("verify", frame, "csv"), code
        lines = []
        for r in reports:
            mark = "✅" if r.passed else "❌"
            lines.append(f"{mark} {r.suite}: n={r.n_range[0]}..{r.n_range[1]} "
                         f"cases={r.cases_run:,} failures={len(r.failures)} "
                         f"time={r.wall_time:.2f}s")
            for n, note in r.notes.items():
                lines.append(f"     n={n}: {note}")
            for f in r.failures:
                lines.append(f"     n={f.n} case={f.case}: {f.detail}")
        return "\n".join(lines) + "\n", code

    def export_graph(self) -> str:
        n = self._require_n()
        if n > EXPORT_CAP:
            raise ResourceLimitError(f"explicit export is limited to n <= {EXPORT_CAP}")
        graph = export_graph(n, self._generators(n), cap=EXPORT_CAP)
        self._status(f"✅ {graph.number_of_nodes()} vertices, {graph.number_of_edges()} edges")
        if self.fmt == "csv":
            return render_frame("export-graph", edges_frame(graph), "csv")
        if self.fmt == "json":
            return to_json("export-graph", {
                "n": n,
                "generators": self.config.generator_kind,
                "nodes": list(graph.nodes),
                "edges": edges_frame(graph).values.tolist(),
            })
        return graph_to_dot(graph, name=f"gamma_{n}")


def _rational(value) -> dict:
    return {"num": value.numerator, "den": value.denominator, "decimal": float(value)}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="size n")
    common.add_argument("--range", dest="n_range", help="inclusive size range, e.g. 2..20")
    common.add_argument("--generators", dest="generator_kind", choices=["adjacent", "cyclic"])
    common.add_argument("--workers", type=int, help="worker count (default: CYCSORT_WORKERS)")
    common.add_argument("--memory-cap", help="BFS memory cap, e.g. 2G")
    common.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS)
    common.add_argument("--out", dest="output_path", help="write output to this file")
    common.add_argument("--seed", type=int, help="seed for randomized suites")
    common.add_argument("--allow-large", action="store_true", default=None,
                        help="lift the default size caps to the engine limits")
    common.add_argument("--verbose", "-v", action="store_true", default=None)

    parser = argparse.ArgumentParser(
        prog="cycsort",
        description="Exact sorting of cyclic permutations by adjacent transpositions",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    stats = commands.add_parser("stats", parents=[common], help="statistics of a word or cycle")
    stats.add_argument("word", nargs="?", help="one-line word or cycle, e.g. 3,1,2 or \"(1,3,2)\"")
    stats.add_argument("--distribution", choices=DISTRIBUTION_STATISTICS,
                       help="counts of a statistic over all of S_n (minv: over the cosets)")
    stats.add_argument("--list", dest="list_statistics", action="store_true",
                       help="list the available statistics")

    dist = commands.add_parser("dist", parents=[common], help="distance between two n-cycles")
    dist.add_argument("first")
    dist.add_argument("second")

    commands.add_parser("pi0", parents=[common], help="extremal permutation for --n")
    commands.add_parser("bounds", parents=[common], help="closed-form bounds for --n or --range")

    search = commands.add_parser("bfs", parents=[common], help="exact search over the coset graph")
    search.add_argument("--mode", choices=BFS_MODES, default="sort")
    search.add_argument("--dump", help="write the distance field to this file")
    search.add_argument("--load", help="report on a dumped distance field instead of searching")

    verify = commands.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("suite", nargs="?", default="all",
                        help="suite name or 'all' (" + ", ".join(create_all_suites()) + ")")
    verify.add_argument("--cases", type=int, help="random cases per n")

    commands.add_parser("export-graph", parents=[common], help="write the coset graph (n <= 7)")
    return parser


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_env(
        command=args.command,
        n=args.n,
        n_range=parse_range(args.n_range) if args.n_range else None,
        generator_kind=args.generator_kind,
        workers=args.workers,
        memory_cap_bytes=parse_byte_size(args.memory_cap) if args.memory_cap else None,
        output_format=args.output_format,
        output_path=args.output_path,
        seed=args.seed,
        allow_large=args.allow_large,
        mode=getattr(args, "mode", None),
        verbose=args.verbose,
    )
    assistant = CyclicSortingAssistant(config)
    code = EXIT_OK

    if args.command == "stats":
        if args.list_statistics:
            output = assistant.statistics_catalogue()
        elif args.distribution:
            output = assistant.distribution(args.distribution)
        elif args.word is None:
            raise DomainError("'stats' needs a word, --distribution or --list")
        else:
            output = assistant.stats(args.word)
    elif args.command == "dist":
        output = assistant.dist(args.first, args.second)
    elif args.command == "pi0":
        output = assistant.pi0()
    elif args.command == "bounds":
        output = assistant.bounds()
    elif args.command == "bfs":
        output = assistant.bfs(args.mode, dump=args.dump, load=args.load)
    elif args.command == "verify":
        output, code = assistant.verify(args.suite, cases=args.cases)
    else:
        output = assistant.export_graph()

    write_output(output, config.output_path)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except CyclicSortError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
