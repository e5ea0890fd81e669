"""Command-line entry point: ``ucsgroups <subcommand> [flags]``.

Exit codes: 0 success, 2 when a verdict contradicts ``--expect``, 1 on errors.
JSON output carries ``schema: 1`` and is written with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import UcsError
from .sweep import DEFAULT_BUDGET

SCHEMA = 1


class Outcome:
    """What a subcommand hands back: JSON payload, text rendering, verdict."""

    def __init__(self, payload: dict, text: str, verdict: str | None = None):
        self.payload = payload
        self.text = text
        self.verdict = verdict


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(payload: dict) -> str:
    return json.dumps({"schema": SCHEMA, **payload}, sort_keys=True, indent=2, default=_default)


# ---------------------------------------------------------------------------
# inputs


def _read_lines(path: str) -> list[str]:
    lines = Path(path).read_text().splitlines()
    return [ln.split("#", 1)[0].strip() for ln in lines if ln.split("#", 1)[0].strip()]


def _quotient(args):
    """A Quotient from --group, --relators/--relator or --basis."""
    from .pclass2 import Quotient
    from .ucs import NAMED_GROUPS, named_quotient

    if getattr(args, "group", None):
        if args.group not in NAMED_GROUPS:
            raise ValueError(f"unknown group {args.group!r}; choose from {sorted(NAMED_GROUPS)}")
        return named_quotient(args.group, args.p)
    if args.p is None or args.r is None:
        raise ValueError("--p and --r are required unless --group is given")
    if getattr(args, "basis", None):
        return Quotient(args.p, args.r, json.loads(Path(args.basis).read_text()))
    rels = list(getattr(args, "relator", None) or [])
    if getattr(args, "relators", None):
        rels += _read_lines(args.relators)
    return Quotient.from_relators(args.p, args.r, rels)


def _params(items: list[str] | None) -> dict:
    out: dict = {}
    for item in items or []:
        if "=" not in item:
            raise ValueError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = [int(x) for x in v.split(",")] if "," in v or k == "L" else int(v)
    return out


def _module(args):
    from .grpgen import construct
    from .rep import MatModule

    if getattr(args, "module", None):
        return MatModule.from_json(json.loads(Path(args.module).read_text()))
    if not args.family:
        raise ValueError("give --family/--params or --module")
    return construct(args.family, _params(args.params))


# ---------------------------------------------------------------------------
# subcommands


def cmd_table1(args) -> Outcome:
    from .ypj import table1, table1_text, ypj_report
    from .finfield import is_prime

    rows = table1(args.pmax)
    reports = [ypj_report(p, j).to_json() for p in range(3, args.pmax + 1) if is_prime(p) for j in range(2, p)]
    if args.plot_dir:
        from .report import plot_table1

        plot_table1(rows, args.plot_dir)
    return Outcome({"pmax": args.pmax, "rows": rows, "reports": reports}, table1_text(args.pmax))


def cmd_ypj(args) -> Outcome:
    from .ypj import ypj_report

    rep = ypj_report(args.p, args.j)
    divs = " ".join(map(str, rep.divisors)) or "-"
    return Outcome(rep.to_json(), f"Y_{{{rep.p},{rep.j}}}: divisors {divs}; order {rep.order}; det {rep.det}\n")


def cmd_delta(args) -> Outcome:
    from .ypj import delta

    d = delta(args.n, args.j)
    return Outcome({"n": args.n, "j": args.j, "delta": d}, f"{d}\n")


def cmd_inverse_pairs(args) -> Outcome:
    from .ypj import inverse_pair_check

    ok = inverse_pair_check(args.p)
    return Outcome({"p": args.p, "holds": ok}, f"p={args.p}: {'holds' if ok else 'FAILS'}\n", "holds" if ok else "fails")


def _cert_text(c) -> str:
    stab = c.stab_order if c.stab_order is not None else "-"
    return (
        f"p={c.p} r={c.r} dim N={c.n.dim} mode={c.mode} stab_order={stab}\n"
        f"irreducible on V: {c.irreducible_on_V}; on Phi/N: {c.irreducible_on_PhiModN}\n"
        f"conclusion: {c.conclusion}\n"
    )


def _verdict_ucs(ucs: bool | None) -> str:
    return {True: "ucs", False: "not-ucs", None: "inconclusive"}[ucs]


def cmd_certify_ucs(args) -> Outcome:
    from .rep import MatModule
    from .ucs import catalog_r4, certify_ucs, exponent_p_subspace, witness_generators

    gens = None
    if args.rep:
        if args.r != 4:
            raise ValueError("--rep refers to the r=4 catalogue")
        i = int(args.rep.lstrip("Uu"))
        n = exponent_p_subspace(catalog_r4(args.p)[i])
        if args.mode == "witness":
            gens = witness_generators(args.p, i)
            if gens is None:
                raise ValueError(f"no witness subgroup is known for U{i}")
    else:
        q = _quotient(args)
        args.p, args.r, n = q.p, q.r, q.n
    if args.mode == "witness" and gens is None:
        if not args.gens:
            raise ValueError("witness mode needs --gens (MatModule JSON) or --rep")
        gens = MatModule.from_json(json.loads(Path(args.gens).read_text())).gens
    cert = certify_ucs(
        args.p, args.r, n, args.mode, gens=gens, budget=args.budget, seed=args.seed,
        workers=args.workers, progress=not args.quiet,
    )
    return Outcome(cert.to_json(), _cert_text(cert), _verdict_ucs(cert.ucs))


def cmd_classify_r4(args) -> Outcome:
    from .ucs import classify_r4_exponent_p

    res = classify_r4_exponent_p(args.p, args.budget, args.seed, args.workers, not args.quiet, args.printed)
    lines = [f"p = {res.p}, alpha = {res.alpha}", f"{'i':>3} {'dim':>3} {'degenerate':>10} {'UCS':>5} {'stab_order':>11}"]
    for row in res.rows:
        ucs = {True: "yes", False: "no", None: "?"}[row["ucs"]]
        stab = row["stab_order"] if row["stab_order"] is not None else "-"
        lines.append(f"{row['index']:>3} {row['dim']:>3} {str(row['degenerate']):>10} {ucs:>5} {stab:>11}")
    if res.checksum is not None:
        lines.append(f"orbit checksum {res.checksum} (expected {res.expected_checksum})")
    lines.append(f"UCS exactly when non-degenerate: {res.dichotomy_holds}")
    if args.plot_dir:
        from .report import plot_classify

        plot_classify(res.rows, res.p, args.plot_dir)
    ok = res.dichotomy_holds and res.checksum == res.expected_checksum
    return Outcome(res.to_json(), "\n".join(lines) + "\n", "holds" if ok else "fails")


def cmd_verify_2groups(args) -> Outcome:
    from .ucs import verify_p2_r4_list

    res = verify_p2_r4_list(args.seed, args.workers, not args.quiet)
    lines = [f"{'i':>3} {'dim N':>5} {'UCS':>5} {'stab_order':>10}"]
    for row in res.rows:
        lines.append(f"{row['index']:>3} {row['dim']:>5} {str(row['ucs']):>5} {row['stab_order']:>10}")
    lines.append(f"all UCS: {res.all_ucs}; pairwise inequivalent: {res.pairwise_inequivalent}")
    ok = res.all_ucs and res.pairwise_inequivalent
    return Outcome(res.to_json(), "\n".join(lines) + "\n", "holds" if ok else "fails")


def cmd_thm72(args) -> Outcome:
    from .ucs import thm72_family

    res = thm72_family(args.p, args.budget, args.seed, args.workers, not args.quiet)
    lines = [f"p = {res.p}: {res.n_candidates} candidates, {len(res.classes)} classes"]
    for c in res.classes:
        lines.append(
            f"  size {c['size']:>3}  stab {c['stab_order']:>4}  UCS {c['ucs']}  order {c['order']}  exponent {c['exponent']}"
        )
    return Outcome(res.to_json(), "\n".join(lines) + "\n")


def cmd_construct(args) -> Outcome:
    m = _module(args)
    return Outcome({"family": args.family, "module": m.to_json()}, json.dumps(m.to_json(), sort_keys=True) + "\n")


def cmd_esq_check(args) -> Outcome:
    from .esq import esq_row

    row = esq_row(_module(args), args.seed)
    text = f"dim {row['dim']}: {row['esq']} (hom dim {row['hom_dim']}), {row['irreducible']}\n"
    return Outcome(row, text, row["esq"].replace("_", "-"))


def cmd_esq_scan_dim5(args) -> Outcome:
    from .esq import esq_scan_dim5

    rep = esq_scan_dim5(args.q, args.seed)
    lines = [f"q = {rep['q']}, ord_11(q) = {rep['ord11']}"]
    for key in ("order11", "order55"):
        row = rep[key]
        if row.get("constructed"):
            lines.append(f"  {key}: {row['esq']}, {row['irreducible']}, witness verified {row['witness_verified']}")
        elif row["predicted"]:
            lines.append(f"  {key}: predicted, not constructed over this field")
        else:
            lines.append(f"  {key}: excluded by congruences")
    if "a4" in rep:
        lines.append(f"  A4 3+1+1 modules: none ESQ = {rep['a4']['none_esq']}")
    return Outcome(rep, "\n".join(lines) + "\n")


def cmd_aut_oracle(args) -> Outcome:
    from .aut import aut_oracle

    q = _quotient(args)
    res = aut_oracle(q, args.budget)
    text = (
        f"|G| = {res.group_order}, |Aut| = {res.aut_order}, "
        f"characteristic subgroups {res.n_characteristic} {res.characteristic_orders}\n"
    )
    return Outcome({"quotient": q.to_json(), **res.to_json()}, text, _verdict_ucs(res.ucs))


def cmd_pgroup_stats(args) -> Outcome:
    q = _quotient(args)
    st = q.stats()
    text = "".join(f"{k}: {v}\n" for k, v in st.items())
    return Outcome({"quotient": q.to_json(), **st}, text)


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--plot-dir", default=None, help="write PNG figures here (needs matplotlib)")
    c.add_argument("--expect", default=None, help="exit 2 if the verdict differs")
    c.add_argument("--quiet", action="store_true", help="no progress on stderr")
    return c


def _group_inputs(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--group", help="a named quotient such as Q8, G4")
    sp.add_argument("--p", "-p", type=int)
    sp.add_argument("--r", "-r", type=int)
    sp.add_argument("--relators", help="file with one relator per line")
    sp.add_argument("--relator", action="append", help="a relator word (repeatable)")
    sp.add_argument("--basis", help="JSON file with a basis of N in Frattini coordinates")


def _module_inputs(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--family")
    sp.add_argument("--params", nargs="*", help="key=value pairs, lists comma-separated")
    sp.add_argument("--module", help="MatModule JSON file")


COMMANDS: dict[str, Callable] = {
    "table1": cmd_table1,
    "ypj": cmd_ypj,
    "delta": cmd_delta,
    "inverse-pairs": cmd_inverse_pairs,
    "certify-ucs": cmd_certify_ucs,
    "classify-r4": cmd_classify_r4,
    "verify-2groups": cmd_verify_2groups,
    "thm72": cmd_thm72,
    "construct": cmd_construct,
    "esq-check": cmd_esq_check,
    "esq-scan-dim5": cmd_esq_scan_dim5,
    "aut-oracle": cmd_aut_oracle,
    "pgroup-stats": cmd_pgroup_stats,
}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="ucsgroups", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")

    sp = sub.add_parser("table1", parents=[common])
    sp.add_argument("--pmax", type=int, default=13)
    sp = sub.add_parser("ypj", parents=[common])
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-j", type=int, required=True)
    sp = sub.add_parser("delta", parents=[common])
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-j", type=int, required=True)
    sp = sub.add_parser("inverse-pairs", parents=[common])
    sp.add_argument("-p", type=int, required=True)

    sp = sub.add_parser("certify-ucs", parents=[common])
    _group_inputs(sp)
    sp.add_argument("--rep", help="catalogue representative U0..U18 (r=4, odd p)")
    sp.add_argument("--mode", choices=["sweep", "witness"], default="sweep")
    sp.add_argument("--gens", help="MatModule JSON with witness generators")
    sp = sub.add_parser("classify-r4", parents=[common])
    sp.add_argument("--p", "-p", type=int, default=3)
    sp.add_argument("--printed", action="store_true", help="use U12 with the sign as printed")
    sub.add_parser("verify-2groups", parents=[common])
    sp = sub.add_parser("thm72", parents=[common])
    sp.add_argument("--p", "-p", type=int, default=3)

    for name in ("construct", "esq-check"):
        sp = sub.add_parser(name, parents=[common])
        _module_inputs(sp)
    sp = sub.add_parser("esq-scan-dim5", parents=[common])
    sp.add_argument("--q", "-q", type=int, required=True)
    for name in ("aut-oracle", "pgroup-stats"):
        sp = sub.add_parser(name, parents=[common])
        _group_inputs(sp)
    return parser


def dispatch(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if argv and not argv[0].startswith("-") and argv[0] not in COMMANDS:
        print(f"error: UnknownSubcommand: {argv[0]!r}; choose from {', '.join(COMMANDS)}", file=sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        res = COMMANDS[args.command](args)
    except (UcsError, ValueError, KeyError, OSError, NotImplementedError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    out.write(dumps(res.payload) + "\n" if args.format == "json" else res.text)
    if args.expect is not None and res.verdict != args.expect:
        print(f"verdict {res.verdict!r} differs from expected {args.expect!r}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
