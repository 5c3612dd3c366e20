"""rankshare command line.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .access import AccessError, lattice_of, minors_duality_check
from .codes import DEFAULT_MAX_CODEWORDS, CodeError, RankMetricCode, induced_qpolymatroid, min_rank_distance, singleton_bound
from .field import FieldError, field_make
from .linalg import (
    DEFAULT_MAX_ENUM,
    DimensionMismatch,
    EnumerationLimitError,
    Subspace,
    enumerate_subspaces,
    gaussian_binomial,
    lattice_size,
)
from .polymatroid import QPolymatroid, is_qmatroid
from .port import (
    PortError,
    build_port,
    port_contraction_check,
    port_duality_check,
    port_restriction_check,
    port_to_json,
    qmatroid_gamma_min_check,
    ratio_gap_bound_check,
)
from .scheme import (
    SchemeError,
    Share,
    coalition_value,
    deal,
    entropy_str,
    joint_entropy,
    player_shares,
    pool_rows,
    predicted_entropy,
    reconstruct,
    share,
)
from .serialize import FormatError, fraction_json, load_code, load_json, load_matrix, load_subspace, matrix_from_json
from .verify import run_suite, verify_rank_table

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3
INPUT_ERRORS = (FormatError, FieldError, CodeError, PortError, SchemeError, AccessError, DimensionMismatch, OSError)


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = 0
    max_enum: int = DEFAULT_MAX_ENUM
    max_codewords: int = DEFAULT_MAX_CODEWORDS
    format: str = "json"


class VerificationFailed(Exception):
    pass


def _rows(V) -> list:
    return [list(r) for r in V.rows]


def _guard_lattice(n: int, q: int, cfg: RunConfig):
    size = lattice_size(n, q)
    if size > cfg.max_enum:
        raise EnumerationLimitError(f"L(F_{q}^{n}) has {size} subspaces, above --max-enum {cfg.max_enum}")


def _guard_code(C: RankMetricCode, cfg: RunConfig):
    _guard_lattice(C.n, C.q, cfg)
    if C.q**C.dim > cfg.max_codewords:
        raise EnumerationLimitError(f"{C.q}^{C.dim} codewords, above --max-codewords {cfg.max_codewords}")


def _load_setup(args, cfg):
    C = load_code(args.code)
    _guard_code(C, cfg)
    P0 = load_subspace(args.dealer, C.n)
    P = load_subspace(args.players, C.n)
    return C, P0, P


def _check_field(C, *spaces):
    for V in spaces:
        if V.field != C.field:
            raise FormatError("subspace file over a different field than the code")


# --- commands ----------------------------------------------------------------


def cmd_analyze(args, cfg: RunConfig) -> dict:
    C = load_code(args.code)
    _guard_code(C, cfg)
    d = min_rank_distance(C, cfg.max_codewords) if C.dim else None
    bound = singleton_bound(C.n, C.m, d) if d is not None else None
    return {
        "n": C.n,
        "m": C.m,
        "q": C.q,
        "dim": C.dim,
        "d_rk": d,
        "singleton_bound": bound,
        "mrd": bound is not None and C.dim == bound,
        "qmatroid": is_qmatroid(induced_qpolymatroid(C), cfg.max_enum),
    }


def _status(ok) -> str:
    return "skipped" if ok is None else ("pass" if ok else "fail")


def cmd_port(args, cfg: RunConfig) -> dict:
    C, P0, P = _load_setup(args, cfg)
    _check_field(C, P0, P)
    port = build_port(induced_qpolymatroid(C), P0, P, cfg.max_enum)
    checks = {}
    if args.checks:
        checks["ratio_gap"] = _status(ratio_gap_bound_check(port))
        LP = lattice_of(P)
        checks["restriction"] = _status(all(port_restriction_check(port, Z) for Z in LP))
        reps = [port_contraction_check(port, Z) for Z in LP if Z not in port.gamma]
        checks["contraction_gamma"] = _status(all(r.gamma_equal for r in reps))
        checks["contraction_alpha"] = _status(all(r.alpha_equal for r in reps))
        if port.structure.degenerate or port.dealer_rank != P0.dim:
            checks["duality"] = "skipped"
        else:
            d = port_duality_check(port)
            checks["duality"] = _status(d.lattice_map_ok and d.witness is not None)
        if P0.dim == 1 and is_qmatroid(port.polymatroid):
            checks["gamma_min_theorem"] = _status(qmatroid_gamma_min_check(port).ok)
        else:
            checks["gamma_min_theorem"] = "skipped"
        checks["minors_duality"] = _status(all(minors_duality_check(port.structure, Z).ok for Z in LP))
    return port_to_json(port, checks, expand=args.expand)


def cmd_share(args, cfg: RunConfig) -> dict:
    C, P0, P = _load_setup(args, cfg)
    S = load_matrix(args.secret, C.m)
    _check_field(C, P0, P)
    inst = deal(C, P0, P, S, cfg.seed)
    out = inst.to_json()
    out["shares"] = [s.to_json() for s in player_shares(inst)]
    return out


def _read_shares(path, C) -> list[Share]:
    data = load_json(path)
    if not isinstance(data, list):
        raise FormatError("shares file must be a list of {holder, value} objects")
    F = C.field
    out = []
    for item in data:
        try:
            base = {"q": F.q, "p": F.p, "e": F.e}
            value = matrix_from_json({**base, "rows": item["value"]}, C.m)
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad share entry: {exc}") from None
        if value.nrows != len(item["holder"]):
            raise FormatError("share value needs one row per holder row")
        V, val = pool_rows(F, C.n, C.m, item["holder"], value.rows)
        out.append(Share(V, val))
    return out


def cmd_reconstruct(args, cfg: RunConfig) -> dict:
    C, P0, P = _load_setup(args, cfg)
    _check_field(C, P0, P)
    if args.shares:
        shares = _read_shares(args.shares, C)
    else:
        if not args.secret:
            raise FormatError("give either --shares or a secret to deal")
        inst = deal(C, P0, P, load_matrix(args.secret, C.m), cfg.seed)
        shares = [share(inst, load_subspace(f, C.n)) for f in args.coalition or []]
    for s in shares:
        if not P.contains(s.holder):
            raise SchemeError(f"share holder {s.holder} is not inside the player space")
    V, value = coalition_value(shares, C.field, C.n, C.m)
    secret, count = reconstruct(C, P0, V, value)
    return {
        "coalition": _rows(V),
        "reconstructed": secret is not None,
        "secret": secret.tolist() if secret is not None else None,
        "candidates": count,
    }


def cmd_entropy(args, cfg: RunConfig) -> dict:
    C = load_code(args.code)
    _guard_code(C, cfg)
    spaces = [load_subspace(f, C.n) for f in args.subspace or []]
    if not spaces:
        spaces = list(lattice_of(Subspace.full(C.field, C.n)))
    M = induced_qpolymatroid(C)
    rows = []
    for V in spaces:
        rows.append(
            {
                "subspace": _rows(V),
                "rank": fraction_json(M.rank(V)),
                "entropy": entropy_str(joint_entropy(C, [V], cfg.max_codewords)),
                "predicted": entropy_str(predicted_entropy(C, V)),
            }
        )
    out = {"entropies": rows}
    if args.given:
        W = load_subspace(args.given, C.n)
        out["conditional_on"] = _rows(W)
        out["conditional"] = [
            entropy_str(joint_entropy(C, [V, W], cfg.max_codewords) - joint_entropy(C, [W], cfg.max_codewords))
            for V in spaces
        ]
    return out


def cmd_verify(args, cfg: RunConfig) -> dict:
    if args.rank_table:
        rep = verify_rank_table(_load_rank_table(args.rank_table))
    else:
        rep = run_suite(args.suite, args.trials, cfg.seed)
    out = {
        "suite": "rank-table" if args.rank_table else args.suite,
        "seed": cfg.seed,
        "passed": sum(r.passed for r in rep.results),
        "failed": sum(not r.passed for r in rep.results),
        "results": [r.line() for r in rep.results],
    }
    fail = rep.first_failure()
    if fail is not None:
        out["first_failure"] = fail.line()
        raise VerificationFailed(out)
    return out


def _load_rank_table(path) -> QPolymatroid:
    """A rank table as emitted by the library: {q, p, e, n, ranks: [{subspace, rank}]}."""
    from fractions import Fraction

    data = load_json(path)
    try:
        F = field_make(int(data["p"]), int(data.get("e", 1)), data.get("modulus"))
        n = int(data["n"])
        table = {
            Subspace.span(F, entry["subspace"], n): Fraction(entry["rank"]["num"], entry["rank"]["den"])
            for entry in data["ranks"]
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad rank table: {exc}") from None
    if len(table) != lattice_size(n, F.q):
        raise FormatError(f"rank table covers {len(table)} of {lattice_size(n, F.q)} subspaces")
    return QPolymatroid.from_table(F, n, table, name="table")


def cmd_enumerate(args, cfg: RunConfig) -> dict:
    F = field_make(*_prime_power(args.q))
    if args.k is not None and not 0 <= args.k <= args.n:
        raise FormatError(f"k = {args.k} outside 0..{args.n}")
    count = gaussian_binomial(args.n, args.k, F.q) if args.k is not None else lattice_size(args.n, F.q)
    if count > cfg.max_enum:
        raise EnumerationLimitError(f"{count} subspaces, above --max-enum {cfg.max_enum}")
    spaces = list(enumerate_subspaces(F, args.n, args.k, cfg.max_enum))
    return {"q": F.q, "n": args.n, "k": args.k, "count": len(spaces), "subspaces": [_rows(V) for V in spaces]}


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                break
            return p, e
    raise FormatError(f"q = {q} is not a prime power")


COMMANDS = {
    "analyze": cmd_analyze,
    "port": cmd_port,
    "share": cmd_share,
    "reconstruct": cmd_reconstruct,
    "entropy": cmd_entropy,
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
}


# --- output ------------------------------------------------------------------


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        if set(obj) == {"num", "den"}:
            return [pad + f"{obj['num']}/{obj['den']}"]
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and (not _flat(v) or _strings(v)):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(pad + _inline(obj))
    return lines


def _strings(v) -> bool:
    return isinstance(v, list) and all(isinstance(x, str) for x in v)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return set(v) == {"num", "den"}
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and all(isinstance(y, int) for y in x)) for x in v)


def _inline(v) -> str:
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        return f"{v['num']}/{v['den']}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    return json.dumps(v, separators=(",", ":")) if isinstance(v, list) else str(v)


def _json(obj, indent: int = 0) -> str:
    """Indented JSON with integer lists and matrices kept on one line."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict) and obj and set(obj) != {"num", "den"}:
        items = [f"{inner}{json.dumps(k)}: {_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and obj and (not _flat(obj) or _strings(obj)):
        return "[\n" + ",\n".join(inner + _json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    return json.dumps(obj, separators=(", ", ": "))


def render(obj, fmt: str) -> str:
    if fmt == "json":
        return _json(obj)
    return "\n".join(_text(obj))


# --- parser ------------------------------------------------------------------


def _positive(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _seed(s: str) -> int:
    v = int(s, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=argparse.SUPPRESS, help="64-bit seed (default 0)")
    common.add_argument("--max-enum", type=_positive, default=argparse.SUPPRESS, help="lattice size guard")
    common.add_argument("--max-codewords", type=_positive, default=argparse.SUPPRESS, help="codeword scan guard")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)

    ap = argparse.ArgumentParser(prog="rankshare", description="Secret sharing from rank-metric codes.", parents=[common])
    ap.add_argument("--version", action="version", version=f"rankshare {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="code parameters and flags")
    p.add_argument("code")

    def setup(p):
        p.add_argument("code")
        p.add_argument("dealer", help="subspace file for P0")
        p.add_argument("players", help="subspace file for P")

    p = sub.add_parser("port", parents=[common], help="derived access structure")
    setup(p)
    p.add_argument("--checks", action="store_true", help="run the port propositions")
    p.add_argument("--expand", action="store_true", help="list all of Gamma and A")

    p = sub.add_parser("share", parents=[common], help="deal a secret and print every player's share")
    setup(p)
    p.add_argument("secret", help="matrix file for S")

    p = sub.add_parser("reconstruct", parents=[common], help="recover the secret from a coalition")
    setup(p)
    p.add_argument("secret", nargs="?", help="secret to deal before collecting shares")
    p.add_argument("--coalition", action="append", metavar="SUBSPACE", help="holder subspace file, repeatable")
    p.add_argument("--shares", metavar="FILE", help="JSON list of {holder, value}")

    p = sub.add_parser("entropy", parents=[common], help="entropies of the coset variables")
    p.add_argument("code")
    p.add_argument("--subspace", action="append", metavar="FILE")
    p.add_argument("--given", metavar="FILE", help="also report H(Z_V | Z_given)")

    p = sub.add_parser("verify", parents=[common], help="golden and randomized checks")
    p.add_argument("--suite", choices=("axioms", "ports", "entropy", "all"), default="all")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--rank-table", metavar="FILE", help="check the axioms of a supplied rank table instead")

    p = sub.add_parser("enumerate", parents=[common], help="list subspaces in canonical order")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    cfg = RunConfig(
        args.command,
        getattr(args, "seed", 0),
        getattr(args, "max_enum", DEFAULT_MAX_ENUM),
        getattr(args, "max_codewords", DEFAULT_MAX_CODEWORDS),
        getattr(args, "format", "json"),
    )
    try:
        out = COMMANDS[args.command](args, cfg)
    except VerificationFailed as exc:
        print(render(exc.args[0], cfg.format))
        return EXIT_FAIL
    except EnumerationLimitError as exc:
        print(f"rankshare: guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except INPUT_ERRORS as exc:
        print(f"rankshare: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(render(out, cfg.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
