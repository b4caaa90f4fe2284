"""Command-line interface tying the library together.

Exit codes: 0 success, 2 usage error (argparse), 3 fixture mismatch in a
full census or tube run, 4 truncation instability that survived automatic
escalation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import Config
from .errors import GrasscatError, TruncationUnstable
from .modules import (Profile, a_vector, build_layered, build_rank1,
                      parse_profile, validate_relations)
from .rims import (almost_consecutive_decompositions, is_projective,
                   parse_rim, peaks, projective_index, slopes, syzygy_rim)
from .roots import (classify_root_vector, enumerate_degree2_real_roots,
                    expected_rigid_rank2_count, q_form, root_coordinates)

EXIT_FIXTURE_MISMATCH = 3
EXIT_TRUNCATION = 4


def _emit(args, payload: dict, table: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        print(table)


def _module_for(profile: Profile, trunc: int):
    from .homology import rank2_extension
    if len(profile.layers) == 1:
        return build_rank1(profile.layers[0], trunc)
    if len(profile.layers) == 2:
        return rank2_extension(profile.layers[0], profile.layers[1], trunc)
    return build_layered(profile.layers, trunc)


def cmd_rim(args, cfg: Config) -> int:
    r = parse_rim(args.rim)
    sl = slopes(r)
    payload = {
        "rim": list(r.elements), "k": r.k, "n": r.n,
        "peaks": sorted(peaks(r)),
        "down_slopes": [list(x) for x in sl.down_intervals],
        "up_slopes": [list(x) for x in sl.up_intervals],
        "min_slope": sl.min_slope,
        "projective_index": projective_index(r),
        "almost_consecutive": [list(d) for d in almost_consecutive_decompositions(r)],
    }
    if payload["almost_consecutive"] and not is_projective(r):
        payload["syzygy_rim"] = list(syzygy_rim(r).elements)
    lines = [f"rim {r} over (k,n)=({r.k},{r.n})",
             f"  peaks: {payload['peaks']}",
             f"  slopes: down {payload['down_slopes']} up {payload['up_slopes']}"
             f" (min {sl.min_slope})"]
    if payload["projective_index"] is not None:
        lines.append(f"  projective: P_{payload['projective_index']}")
    if payload["almost_consecutive"]:
        lines.append(f"  almost consecutive (i,j): {payload['almost_consecutive']}")
        if "syzygy_rim" in payload:
            lines.append(f"  syzygy rim: {payload['syzygy_rim']}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_module(args, cfg: Config) -> int:
    p = parse_profile(args.profile)
    rep = _module_for(p, cfg.truncation_for(p.n))
    report = validate_relations(rep)
    av = a_vector(p)
    payload = {
        "profile": [list(r.elements) for r in p.layers],
        "rank": rep.s,
        "relations_ok": not report,
        "violations": report,
        "a_vector": list(av.entries),
        "q": str(q_form(av)),
        "root_class": classify_root_vector(av),
    }
    table = (f"module {p} rank {rep.s}: relations "
             f"{'ok' if not report else 'FAIL ' + '; '.join(report)}\n"
             f"  a-vector {list(av.entries)}  q = {q_form(av)}"
             f"  ({payload['root_class']})")
    _emit(args, payload, table)
    return 0


def cmd_hom(args, cfg: Config) -> int:
    from .homology import hom_space
    a, b = parse_profile(args.source), parse_profile(args.target)
    N = cfg.truncation_for(a.n)
    ha = hom_space(_module_for(a, N), _module_for(b, N))
    gens = []
    for g in ha.generators:
        gens.append({str(w): [[repr(e) for e in row] for row in g[w].data]
                     for w in sorted(g)})
    payload = {"source": a.label(), "target": b.label(), "z_rank": ha.z_rank}
    if args.verbose:
        payload["generators"] = gens
    _emit(args, payload, f"Hom({a}, {b}) is free of rank {ha.z_rank}")
    return 0


def cmd_ext(args, cfg: Config) -> int:
    from .homology import ext1
    a, b = parse_profile(args.source), parse_profile(args.target)
    N = cfg.truncation_for(a.n)
    dec = ext1(_module_for(a, N), _module_for(b, N))
    payload = {"source": a.label(), "target": b.label(),
               "exponents": list(dec.exponents), "total_dim": dec.total_dim}
    _emit(args, payload,
          f"Ext^1({a}, {b}) ≅ {dec.pretty()}   exponents {list(dec.exponents)}")
    return 0


def cmd_syzygy(args, cfg: Config) -> int:
    from .tubes import tau_orbit
    p = parse_profile(args.profile)
    start = p.layers[0] if len(p.layers) == 1 else p
    orbit = tau_orbit(start, trunc=cfg.truncation_for(p.n))
    member = orbit.members[1 % len(orbit.members)]
    payload = {"input": p.label(), "syzygy": member.label(),
               "rank": member.rank, "a_vector": list(member.a_vec)}
    _emit(args, payload, f"syzygy({p}) = {member.label()} (rank {member.rank})")
    return 0


def cmd_rigid(args, cfg: Config) -> int:
    from .homology import is_rigid, rigid_indecomposable_rank2
    p = parse_profile(args.profile)
    N = cfg.truncation_for(p.n)
    rep = _module_for(p, N)
    rigid = is_rigid(rep)
    payload = {"profile": p.label(), "rigid": rigid}
    if len(p.layers) == 2:
        payload["rigid_indecomposable"] = (
            rigid_indecomposable_rank2(p.layers[0], p.layers[1], N) is not None)
    table = f"{p}: rigid = {rigid}"
    if "rigid_indecomposable" in payload:
        table += f", rigid indecomposable realisation = {payload['rigid_indecomposable']}"
    _emit(args, payload, table)
    return 0


def cmd_ar_seq(args, cfg: Config) -> int:
    from .tubes import ar_sequence
    r = parse_rim(args.rim)
    seq = ar_sequence(r, trunc=cfg.truncation_for(r.n))
    payload = {
        "left": str(seq.left), "middle": seq.middle_label(), "right": str(seq.right),
        "middle_rigid": seq.middle_rigid,
        "middle_indecomposable": seq.middle_indecomposable,
        "exact": seq.exact,
    }
    _emit(args, payload,
          f"AR sequence: {seq.left} -> {seq.middle_label()} -> {seq.right}\n"
          f"  middle rigid: {seq.middle_rigid}, indecomposable: "
          f"{seq.middle_indecomposable}, exact: {seq.exact}")
    return 0


def cmd_orbit(args, cfg: Config) -> int:
    from .tubes import tau_orbit
    from .diagrams import orbit_dot, orbit_tikz
    p = parse_profile(args.profile)
    start = p.layers[0] if len(p.layers) == 1 else p
    orbit = tau_orbit(start, trunc=cfg.truncation_for(p.n))
    if cfg.fmt == "dot":
        print(orbit_dot(orbit), end="")
        return 0
    if cfg.fmt == "tikz":
        print(orbit_tikz(orbit), end="")
        return 0
    payload = orbit.to_json_dict()
    table = (f"orbit of {p}: period {orbit.period} (divides 2v = {2 * orbit.v})\n  "
             + " -> ".join(m.label() for m in orbit.members))
    _emit(args, payload, table)
    return 0


def cmd_tubes(args, cfg: Config) -> int:
    from .tubes import tube_census, write_tube_report
    rep = tube_census(args.k, args.n, trunc=cfg.truncation_for(args.n))
    path = write_tube_report(rep, cfg.output_dir)
    mism = [c for c in rep.fixture_checks if c.status == "MISMATCH"]
    payload = rep.to_json_dict()
    payload["written"] = str(path)
    lines = []
    if rep.banner:
        lines.append(rep.banner)
    lines.append(f"tubes ({args.k},{args.n}): {len(rep.orbits)} orbits, "
                 f"{len(rep.families)} families up to rotation")
    lines.append(f"  periods: " + ", ".join(
        f"{c} of period {p}" for p, c in sorted(rep.periods.items())))
    if rep.mouth_family_periods:
        lines.append("  mouth rows matched by period: " + ", ".join(
            f"{c} of period {p}" for p, c in sorted(rep.mouth_family_periods.items())))
    lines.append(f"  fixture checks: {len(rep.fixture_checks)}, "
                 f"mismatches: {len(mism)}")
    lines.append(f"  report written to {path}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_FIXTURE_MISMATCH if mism else 0


def cmd_roots(args, cfg: Config) -> int:
    if args.degree != 2:
        print("only degree 2 enumeration is implemented", file=sys.stderr)
        return 2
    vecs = enumerate_degree2_real_roots(args.k, args.n)
    payload = {
        "k": args.k, "n": args.n, "degree": 2, "count": len(vecs),
        "expected_rigid_rank2": expected_rigid_rank2_count(args.k, args.n),
        "roots": [list(v.entries) for v in vecs],
    }
    lines = [f"degree-2 real roots for (k,n)=({args.k},{args.n}): {len(vecs)}"]
    for v in vecs if args.verbose else vecs[:10]:
        rc = root_coordinates(v)
        lines.append(f"  {list(v.entries)}  c={list(rc.c)} d={rc.d}")
    if not args.verbose and len(vecs) > 10:
        lines.append(f"  ... ({len(vecs) - 10} more; use --verbose)")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_census(args, cfg: Config) -> int:
    from .census import run_census, verify_conjectures
    sample = args.sample if args.sample is not None else None
    full = sample is None
    rep = run_census(args.k, args.n, trunc=cfg.truncation_for(args.n),
                     sample=sample, jobs=args.jobs,
                     with_orbits=args.orbits and full,
                     cache_dir=cfg.output_dir if full else None,
                     refresh=args.refresh, progress=not args.json)
    counts = rep.counts()
    payload = rep.to_json_dict()
    lines = [f"census (k,n)=({args.k},{args.n})"
             + (" [sampled]" if rep.sampled else "")]
    lines.append(f"  rank1: {counts['rank1']}, rank2 rigid: {counts['rank2_rigid']}"
                 + (f" ({counts['real']} real + {counts['imaginary']} imaginary)"
                    if not rep.sampled else ""))
    if full:
        conj = verify_conjectures(args.k, args.n, report=rep)
        payload["conjectures"] = conj.verdicts()
        lines.append("  conjectures: " + ", ".join(
            f"{k}={v}" for k, v in conj.verdicts().items()))
    if rep.fixture_diffs:
        lines.append("  FIXTURE DIFFS: " + "; ".join(rep.fixture_diffs))
    _emit(args, payload, "\n".join(lines))
    if full and rep.fixture_diffs:
        return EXIT_FIXTURE_MISMATCH
    return 0


def cmd_diagram(args, cfg: Config) -> int:
    from .diagrams import lattice_svg, lattice_tikz
    p = parse_profile(args.profile)
    fmt = cfg.fmt if cfg.fmt in ("svg", "tikz") else "svg"
    text = lattice_svg(p) if fmt == "svg" else lattice_tikz(p)
    if args.write:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        path = cfg.output_dir / f"diagram-{p.label().replace('|', '_')}.{fmt}"
        path.write_text(text)
        print(f"written {path}")
    else:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="grasscat",
        description="Exact Cohen-Macaulay module computations over the "
                    "circular boundary algebra")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--trunc", type=int, default=None,
                    help="working t-adic truncation (default 2n)")
    ap.add_argument("--out", type=Path, default=None, help="output directory")
    ap.add_argument("--format", dest="fmt", default=None,
                    choices=["table", "json", "svg", "tikz", "dot"])
    ap.add_argument("--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rim", help="peaks, slopes and decompositions of a rim")
    s.add_argument("rim", help='compact form like 145@(3,8)')
    s.set_defaults(fn=cmd_rim)

    s = sub.add_parser("module", help="build a module and validate its relations")
    s.add_argument("profile", help='rim or profile like 246|135@(3,9)')
    s.set_defaults(fn=cmd_module)

    s = sub.add_parser("hom", help="Hom space between two modules")
    s.add_argument("source")
    s.add_argument("target")
    s.set_defaults(fn=cmd_hom)

    s = sub.add_parser("ext", help="first extension group between two modules")
    s.add_argument("source")
    s.add_argument("target")
    s.set_defaults(fn=cmd_ext)

    s = sub.add_parser("syzygy", help="syzygy of a module, identified")
    s.add_argument("profile")
    s.set_defaults(fn=cmd_syzygy)

    s = sub.add_parser("rigid", help="rigidity of a module")
    s.add_argument("profile")
    s.set_defaults(fn=cmd_rigid)

    s = sub.add_parser("ar-seq", help="AR sequence at an almost consecutive rim")
    s.add_argument("rim")
    s.set_defaults(fn=cmd_ar_seq)

    s = sub.add_parser("orbit", help="syzygy orbit of a rim or profile")
    s.add_argument("profile")
    s.set_defaults(fn=cmd_orbit)

    s = sub.add_parser("tubes", help="tube census over one ambient")
    s.add_argument("k", type=int)
    s.add_argument("n", type=int)
    s.set_defaults(fn=cmd_tubes)

    s = sub.add_parser("roots", help="degree-2 real root enumeration")
    s.add_argument("k", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--degree", type=int, default=2)
    s.set_defaults(fn=cmd_roots)

    s = sub.add_parser("census", help="rigid rank-2 census")
    s.add_argument("k", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--full", action="store_true", default=False,
                   help="full run (default unless --sample)")
    s.add_argument("--sample", type=float, default=None,
                   help="probabilistic smoke run, e.g. 0.05")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--refresh", action="store_true",
                   help="recompute even when a cache entry exists")
    s.add_argument("--orbits", action="store_true",
                   help="attach a syzygy-orbit id to every census entry")
    s.set_defaults(fn=cmd_census)

    s = sub.add_parser("diagram", help="lattice diagram emitter")
    s.add_argument("profile")
    s.add_argument("--write", action="store_true",
                   help="write into the output directory instead of stdout")
    s.set_defaults(fn=cmd_diagram)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = Config.from_env()
    if args.trunc is not None:
        cfg.truncation = args.trunc
    if args.out is not None:
        cfg.output_dir = args.out
    if args.fmt is not None:
        cfg.fmt = args.fmt
    try:
        return args.fn(args, cfg)
    except TruncationUnstable as exc:
        print(f"truncation instability: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except GrasscatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
