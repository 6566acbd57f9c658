"""``ekr-lab`` command line.

Exit codes: 0 when every verdict holds, 2 when a verdict is false,
1 for usage, input or budget errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _kernels
from .catalog import SpecError, parse_family, parse_group_spec
from .cocliques import (DEFAULT_BUDGET, canonical_cocliques, classify, ekr_bound_certificate,
                        is_coclique, max_cocliques)
from .complements import find_complements, p_element_shortcut_test
from .dergraph import connectivity, is_disjoint_clique_union
from .ekr_module import (dual_distribution, inner_distribution, module_check,
                         stabilizer_distribution)
from .exact import render
from .perm_core import (GroupTooLarge, NotAttempted, conjugacy_classes, is_2transitive,
                        perm_order, point_stabilizer, regular_normal_subgroups)
from .spectra import class_sum_matrix, derangements, least_eigenvalue_report

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def exact(x) -> dict:
    return {"exact": render(Fraction(int(x)) if isinstance(x, (int, np.integer)) else Fraction(x))}


def floating(x: float) -> dict:
    return {"float": float(f"{float(x):.9g}") + 0.0}


# --------------------------------------------------------------------------
# group selection
# --------------------------------------------------------------------------

def load_group(arg: str, cap: int):
    if arg.startswith("@"):
        path = Path(arg[1:])
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}") from exc
        spec = parse_group_spec(text)
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        G = spec.build(cap=cap)
        return G, {"file_sha256": digest, "name": spec.name}
    return parse_family(arg, cap=cap), {"family": arg}


def load_coclique(G, path: str) -> np.ndarray:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read coclique file {path}: {exc}") from exc
    if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
        raise UsageError("coclique file must be a JSON list of image arrays")
    try:
        idx = G.lookup(np.array(doc, dtype=np.int64).reshape(len(doc), G.degree))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"coclique file: {exc}") from exc
    return np.unique(idx)


def describe(G, desc: dict) -> dict:
    return {**desc, "degree": exact(G.degree), "order": exact(G.order)}


# --------------------------------------------------------------------------
# commands: each returns (payload, verdicts)
# --------------------------------------------------------------------------

def cmd_info(G, args):
    cc = conjugacy_classes(G)
    try:
        normal = [len(N) for N in regular_normal_subgroups(G)]
        normal_field = [exact(x) for x in normal]
    except NotAttempted:
        normal_field = "not attempted"
    payload = {
        "transitive": G.is_transitive(),
        "two_transitive": is_2transitive(G) if G.degree >= 2 else False,
        "class_count": exact(cc.count),
        "class_sizes": [exact(s) for s in cc.sizes],
        "class_fixed_points": [exact(G.fix_counts[r]) for r in cc.representatives],
        "class_orders": [exact(perm_order(G.perm(r))) for r in cc.representatives],
        "regular_normal_subgroup_orders": normal_field,
        "stabilizer_order": exact(len(point_stabilizer(G, 0))),
    }
    return payload, {}


def cmd_derangements(G, args):
    D = derangements(G)
    cc = conjugacy_classes(G)
    der_classes = [c for c in range(cc.count) if G.fix_counts[cc.representatives[c]] == 0]
    payload = {
        "d": exact(D.d),
        "derangement_classes": [exact(c) for c in der_classes],
        "class_sizes": [exact(cc.sizes[c]) for c in der_classes],
        "disjoint_clique_union": is_disjoint_clique_union(G),
    }
    if args.list:
        payload["elements"] = [[int(x) for x in G.elements[i]] for i in D.indices]
    return payload, {"identity_not_derangement": bool(G.fix_counts[0] == G.degree)}


def cmd_spectrum(G, args):
    rep = least_eigenvalue_report(G)
    M = class_sum_matrix(G)
    spec = sorted(rep.spectrum, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    payload = {
        "d": exact(rep.d),
        "lambda_star": exact(rep.least),
        "verdict": rep.verdict.value,
        "multiplicity": exact(rep.multiplicity),
        "tolerance": floating(rep.tolerance),
        "spectrum": [floating(z.real) if abs(z.imag) < 1e-9 else
                     {"float": [float(f"{z.real:.9g}"), float(f"{z.imag:.9g}")]} for z in spec],
        "class_sum_matrix": [[exact(x) for x in row] for row in M.entries],
    }
    verdicts = {"psi_affords_lambda_star": rep.multiplicity >= 1}
    return payload, verdicts


def cmd_connectivity(G, args):
    cs = connectivity(G)
    payload = {
        "generated_order": exact(len(cs.generated)),
        "component_count": exact(cs.component_count),
        "is_connected": cs.is_connected,
        "disjoint_clique_union": is_disjoint_clique_union(G),
    }
    return payload, {"component_count_times_generated_is_order":
                     cs.component_count * len(cs.generated) == G.order}


def _coclique_summary(G, S, stab) -> dict:
    cls = classify(S, G)
    mc = module_check(G, S)
    return {
        "elements": [exact(int(i)) for i in S],
        "canonical": cls.canonical,
        "matching": [exact(x) for x in cls.matching] if cls.matching else None,
        "is_subgroup": cls.is_subgroup,
        "is_coset_of_subgroup": cls.is_coset_of_subgroup,
        "module_check": mc.holds,
        "inner_matches_stabilizer": inner_distribution(G, S).values == stab,
    }


def cmd_ekr_check(G, args):
    if not is_2transitive(G):
        raise UsageError("ekr-check needs a 2-transitive group")
    cert = ekr_bound_certificate(G)
    census = max_cocliques(G, limit=args.limit, exhaustive=args.exhaustive,
                           budget=args.budget, seed=args.seed)
    stab = stabilizer_distribution(G).values
    canon = canonical_cocliques(G)
    canon_module = all(module_check(G, c.members).holds for c in canon)
    found = [_coclique_summary(G, np.array(S.members), stab) for S in census.found]
    payload = {
        "target": exact(census.target),
        "bound_certificate": {k: (exact(v) if isinstance(v, (int, np.integer)) and not isinstance(v, bool) else v)
                              for k, v in cert.items()},
        "census": {
            "complete": census.complete,
            "gated": census.gated,
            "budget_exhausted": census.budget_exhausted,
            "total": exact(census.total),
            "canonical_count": exact(census.canonical_count),
            "noncanonical_count": exact(census.noncanonical_count),
            "truncated_at": exact(census.truncated_at) if census.truncated_at else None,
            "nodes": exact(census.nodes),
            "cover": census.cover_kind,
        },
        "canonical_sets": exact(len(canon)),
        "found": found,
    }
    if census.complete and census.total:
        payload["strict_ekr"] = census.noncanonical_count == 0
    verdicts = {
        "ekr_bound": cert["plus_one_found"] == 0 and cert["plus_one_complete"],
        "canonical_in_module": canon_module,
        "found_in_module": all(f["module_check"] for f in found),
        "inner_distribution": all(f["inner_matches_stabilizer"] for f in found),
    }
    if census.budget_exhausted and not census.found:
        raise UsageError("search budget exhausted before any coclique was found")
    return payload, verdicts


def cmd_module_check(G, args):
    if not args.coclique:
        raise UsageError("module-check needs --coclique FILE")
    S = load_coclique(G, args.coclique)
    if len(S) * G.degree != G.order:
        raise UsageError(f"coclique has {len(S)} elements, expected |G|/n = {G.order // G.degree}")
    if not is_coclique(G, S):
        raise UsageError("the given set is not intersecting")
    mc = module_check(G, S)
    e1, epsi = dual_distribution(G, S)
    payload = {
        "size": exact(len(S)),
        "holds": mc.holds,
        "witness": [int(x) for x in G.elements[mc.witness]] if mc.witness is not None else None,
        "quadratic_form": exact(mc.precheck),
        "dual_trivial": exact(e1),
        "dual_psi": exact(epsi),
        **{k: v for k, v in _coclique_summary(G, S, stabilizer_distribution(G).values).items()
           if k not in ("elements", "module_check")},
    }
    return payload, {"module_property": mc.holds}


def cmd_inner_dist(G, args):
    cc = conjugacy_classes(G)
    S = load_coclique(G, args.coclique) if args.coclique else point_stabilizer(G, 0)
    dist = inner_distribution(G, S)
    payload = {
        "set": "file" if args.coclique else "point stabilizer of 0",
        "size": exact(len(S)),
        "classes": [{"representative": [int(x) for x in G.elements[r]],
                     "size": exact(sz), "value": exact(v)}
                    for r, sz, v in zip(cc.representatives, cc.sizes, dist.values)],
    }
    verdicts = {}
    if len(S) * G.degree == G.order and is_coclique(G, S):
        verdicts["matches_stabilizer"] = dist.values == stabilizer_distribution(G).values
    return payload, verdicts


def cmd_complements(G, args):
    normal = regular_normal_subgroups(G)
    if not normal:
        raise UsageError("group has no regular normal subgroup")
    N = normal[0]
    p = perm_order(G.perm(int(N[1])))
    res = find_complements(G, N, budget=args.budget)
    stab = stabilizer_distribution(G).values
    rows = []
    shortcut_agrees = True
    module_ok = True
    for r in res.reports:
        short = p_element_shortcut_test(G, r.subgroup, p, N)
        shortcut_agrees &= short == r.is_coclique
        row = {
            "order": exact(r.order),
            "generators": [[int(x) for x in G.elements[g]] for g in _short_gens(G, r.subgroup)],
            "is_complement": r.is_complement,
            "is_standard": r.is_standard,
            "is_coclique": r.is_coclique,
            "p_element_test": short,
            "derangement_witness": ([int(x) for x in G.elements[r.derangement_witness]]
                                    if r.derangement_witness is not None else None),
        }
        if r.is_coclique:
            row["module_check"] = module_check(G, r.subgroup).holds
            row["inner_matches_stabilizer"] = inner_distribution(G, r.subgroup).values == stab
            module_ok &= row["module_check"] and row["inner_matches_stabilizer"]
        rows.append(row)
    payload = {
        "normal_order": exact(len(N)),
        "p": exact(p),
        "classes": rows,
        "candidates_tried": exact(res.candidates_tried),
        "complements_found": exact(res.complements_found),
        "budget_exceeded": res.budget_exceeded,
        "nonstandard_coclique_found": any(not r.is_standard and r.is_coclique for r in res.reports),
    }
    if res.budget_exceeded:
        raise UsageError("complement search budget exceeded")
    return payload, {"p_element_shortcut_agrees": shortcut_agrees,
                     "coclique_complements_in_module": module_ok}


def _short_gens(G, subgroup):
    from .perm_core import generating_pair
    return generating_pair(G, subgroup)


def _corpus_worker(criterion: int):
    from .corpus import CRITERIA
    return [(c.criterion, c.case, c.passed, c.detail) for c in CRITERIA[criterion]()]


def cmd_corpus(args):
    from .corpus import CRITERIA, Check
    keys = sorted(CRITERIA) if not args.criteria else sorted(set(args.criteria))
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            chunks = list(pool.map(_corpus_worker, keys))
    else:
        chunks = [_corpus_worker(k) for k in keys]
    rows = [Check(*r) for chunk in chunks for r in chunk]
    payload = {"checks": [{"criterion": c.criterion, "case": c.case, "passed": c.passed,
                           "detail": c.detail} for c in rows]}
    verdicts = {f"criterion {c.criterion}: {c.case}": c.passed for c in rows}
    return payload, verdicts, rows


COMMANDS = {
    "info": cmd_info,
    "spectrum": cmd_spectrum,
    "derangements": cmd_derangements,
    "connectivity": cmd_connectivity,
    "ekr-check": cmd_ekr_check,
    "module-check": cmd_module_check,
    "inner-dist": cmd_inner_dist,
    "complements": cmd_complements,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ekr-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, group_required=True):
        p.add_argument("--group", required=group_required,
                       help="family string (e.g. alt:5, agammal1:3,2) or @file.json")
        p.add_argument("--out", choices=("json", "text"), default="json")
        p.add_argument("--limit", type=int, default=10)
        p.add_argument("--exhaustive", action="store_true")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--cap", type=int, default=20_000, help="element cap for group closure")
        p.add_argument("--timings", action="store_true", help="include wall-clock timings")

    for name in COMMANDS:
        p = sub.add_parser(name)
        common(p)
        if name in ("module-check", "inner-dist"):
            p.add_argument("--coclique", help="JSON list of image arrays")
        if name == "derangements":
            p.add_argument("--list", action="store_true", help="include every derangement")
    p = sub.add_parser("corpus", help="run the acceptance criteria over the corpus")
    common(p, group_required=False)
    p.add_argument("--criteria", type=int, nargs="*", help="subset of criterion numbers")
    return ap


def _text(report: dict, rows=None) -> str:
    lines = [f"command: {report['command']}"]
    if report.get("group"):
        g = report["group"]
        label = g.get("family") or g.get("name") or g.get("file_sha256", "")[:12]
        lines.append(f"group: {label}  degree {g['degree']['exact']}  order {g['order']['exact']}")
    if rows is not None:
        lines += [r.line() for r in rows]
    else:
        for k, v in report["payload"].items():
            if isinstance(v, list) and len(v) > 12:
                v = f"[{len(v)} entries]"
            lines.append(f"{k}: {_plain(v)}")
    for k, v in report["verdicts"].items():
        lines.append(f"verdict {k}: {'true' if v else 'FALSE'}")
    return "\n".join(lines)


def _plain(v):
    if isinstance(v, dict) and set(v) in ({"exact"}, {"float"}):
        return next(iter(v.values()))
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_plain(x) for x in v]
    return v


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    rows = None
    try:
        if args.limit < 1 or args.budget < 1 or args.workers < 1:
            raise UsageError("--limit, --budget and --workers must be positive")
        if args.command == "corpus":
            group_field = None
            payload, verdicts, rows = cmd_corpus(args)
        else:
            G, desc = load_group(args.group, args.cap)
            group_field = describe(G, desc)
            payload, verdicts = COMMANDS[args.command](G, args)
    except (UsageError, SpecError, GroupTooLarge, NotAttempted, ValueError, KeyError) as exc:
        print(f"ekr-lab: error: {exc}", file=sys.stderr)
        return 1
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "group": group_field,
        "payload": payload,
        "verdicts": verdicts,
        "timings": {"wall_seconds": floating(time.perf_counter() - t0),
                    "backend": _kernels.BACKEND} if args.timings else None,
    }
    if args.out == "json":
        print(json.dumps(report, sort_keys=True, indent=1))
    else:
        print(_text(report, rows))
    return 0 if all(verdicts.values()) else 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
