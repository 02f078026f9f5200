"""Command-line front end: quotient sweeps, defect tables, reference values.

Subcommands
-----------
algebraic    entropy trace of a principal algebraic action along a quotient
             chain, with a spectral reference value and an invertibility
             certificate appended.
subshift     homomorphism-count entropy table of a subshift of finite type
             over cyclic approximations.
mahler       Mahler measure estimates (Jensen and quadrature) plus the
             torus invertibility certificate for a Laurent polynomial.
sofic-check  multiplicativity and freeness defects of quotient-induced
             sofic maps for a list of group elements.

Exit codes: 0 success, 2 invalid input, 3 non-invertible input (report is
still written), 4 resource guard tripped.

Reports are deterministic: identical configurations produce byte-identical
CSV or JSON output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence, Tuple

from . import algebraic, spectral, subshift as subshift_mod
from .algebraic import csv_field
from .groups import (
    ExplicitQuotient,
    GroupRingElement,
    ParseError,
    ResourceGuardError,
    element_mul,
    freeness_defect,
    multiplicative_defect,
    normalize_element,
    parse_laurent,
    parse_word,
    render_word,
    sofic_map_from_quotient,
    torus_quotient,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_INVERTIBLE = 3
EXIT_RESOURCE = 4

DEFAULT_GRIDS = {1: 8192, 2: 256, 3: 48, 4: 24}

GROUP_RANKS = {"Z": 1, "Z2": 2, "Z3": 3, "Z4": 4}


class ConfigError(ValueError):
    """Invalid command-line configuration or input file."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sofic",
        description="Entropy of algebraic actions and subshifts over finite quotients.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="report format"
    )
    common.add_argument("--out", help="write the report to this path instead of stdout")

    group_args = argparse.ArgumentParser(add_help=False)
    group_args.add_argument(
        "--group",
        default="Z",
        help="Z, Z2, Z3, Z4, or file:<quotient-chain.json> for explicit quotient data",
    )
    group_args.add_argument(
        "--quotients", help="range a..b of cyclic moduli (expanded per axis for Z^d)"
    )
    group_args.add_argument(
        "--moduli",
        action="append",
        help="explicit comma-separated moduli for one quotient; repeatable",
    )

    p_alg = sub.add_parser(
        "algebraic",
        parents=[common, group_args],
        help="entropy trace of a principal algebraic action",
    )
    p_alg.add_argument("--poly", help="Laurent polynomial in x, y, z, w")
    p_alg.add_argument("--grid", type=int, help="torus grid per axis for the reference")

    p_sub = sub.add_parser(
        "subshift",
        parents=[common],
        help="homomorphism-count entropy table for an SFT",
    )
    p_sub.add_argument("--sft", required=True, help="path to the SFT JSON description")
    p_sub.add_argument("--quotients", required=True, help="range a..b of cycle lengths")
    p_sub.add_argument(
        "--budget", default="0", help="comma-separated list of site budgets"
    )

    p_mah = sub.add_parser(
        "mahler",
        parents=[common],
        help="Mahler measure estimates and invertibility certificate",
    )
    p_mah.add_argument("--group", default="Z", help="Z, Z2, Z3, or Z4")
    p_mah.add_argument("--poly", required=True, help="Laurent polynomial in x, y, z, w")
    p_mah.add_argument("--grid", type=int, help="torus grid per axis")

    p_chk = sub.add_parser(
        "sofic-check",
        parents=[common, group_args],
        help="multiplicativity/freeness defect table of quotient-induced maps",
    )
    p_chk.add_argument(
        "--elements",
        required=True,
        help="semicolon-separated group elements (ints for Z, comma tuples for Z^d, words for explicit chains)",
    )
    return parser


# ---------------------------------------------------------------------------
# argument helpers


def _parse_range(text: str) -> List[int]:
    parts = text.split("..")
    if len(parts) != 2:
        raise ConfigError(f"quotient range must look like a..b, got {text!r}")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigError(f"quotient range bounds must be integers, got {text!r}") from None
    if a < 1 or b < a:
        raise ConfigError(f"quotient range must satisfy 1 <= a <= b, got {text!r}")
    return list(range(a, b + 1))


def _parse_int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _parse_elements(text: str, rank: int) -> list:
    elements = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if rank == 0:
            elements.append(parse_word(chunk))
        elif rank == 1:
            try:
                elements.append(int(chunk))
            except ValueError:
                raise ConfigError(f"expected an integer element, got {chunk!r}") from None
        else:
            vec = _parse_int_list(chunk)
            if len(vec) != rank:
                raise ConfigError(
                    f"element {chunk!r} has {len(vec)} components, expected {rank}"
                )
            elements.append(tuple(vec))
    if not elements:
        raise ConfigError("no elements given")
    return elements


def _element_str(elem, rank: int) -> str:
    if rank == 0:
        return render_word(elem)
    if rank == 1:
        return str(elem)
    return "|".join(str(x) for x in elem)


def _load_chain(path: str):
    """Load an explicit quotient chain: label, optional poly, quotient list."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read quotient chain {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed JSON in {path!r}: {exc.msg} (at position {exc.pos})"
        ) from None
    if "quotients" not in obj or not obj["quotients"]:
        raise ConfigError(f"quotient chain {path!r} lists no quotients")
    quotients = []
    for i, spec in enumerate(obj["quotients"]):
        if "table" not in spec or "images" not in spec:
            raise ConfigError(f"quotient #{i} needs 'table' and 'images' fields")
        try:
            quotients.append(
                ExplicitQuotient(
                    table=spec["table"],
                    generator_images=spec["images"],
                    label=spec.get("label", f"quotient{i}"),
                )
            )
        except ValueError as exc:
            raise ConfigError(f"quotient #{i} in {path!r}: {exc}") from None
    poly = None
    if "poly" in obj:
        terms = {}
        for word_text, coeff in obj["poly"].items():
            terms[parse_word(word_text)] = int(coeff)
        poly = GroupRingElement(0, terms)
    label = obj.get("name", path)
    return label, poly, quotients


def _resolve_group(args) -> Tuple[int, Optional[GroupRingElement], Optional[list]]:
    """(rank, chain poly, chain quotients); rank 0 means explicit chain."""
    group = args.group
    if group in GROUP_RANKS:
        return GROUP_RANKS[group], None, None
    if group.startswith("file:"):
        label, poly, quotients = _load_chain(group[len("file:") :])
        return 0, poly, quotients
    raise ConfigError(f"unknown group {group!r}; use Z, Z2, Z3, Z4, or file:<path>")


def _torus_quotients(args, rank: int) -> list:
    if args.moduli:
        if args.quotients:
            raise ConfigError("give either --quotients or --moduli, not both")
        quotients = []
        for text in args.moduli:
            moduli = _parse_int_list(text)
            if len(moduli) != rank:
                raise ConfigError(
                    f"--moduli {text!r} has {len(moduli)} entries, expected {rank}"
                )
            quotients.append(torus_quotient(moduli))
        sizes = [q.size for q in quotients]
        if any(b < a for a, b in zip(sizes, sizes[1:])):
            raise ConfigError("--moduli quotients must be in nondecreasing size order")
        return quotients
    if not args.quotients:
        raise ConfigError("a quotient range (--quotients a..b) is required")
    return [torus_quotient([n] * rank) for n in _parse_range(args.quotients)]


def _write_report(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _certificate_obj(cert: spectral.InvertibilityCertificate) -> dict:
    return {
        "verdict": cert.verdict,
        "grid": cert.grid,
        "lipschitz_bound": cert.lipschitz_bound,
        "min_abs": cert.min_abs,
        "min_abs_lower_bound": cert.min_abs_lower_bound,
        "witness": list(cert.witness) if cert.witness is not None else None,
        "witness_abs": cert.witness_abs,
    }


# ---------------------------------------------------------------------------
# subcommands


def run_algebraic(args) -> int:
    rank, chain_poly, chain_quotients = _resolve_group(args)
    if rank == 0:
        if args.poly:
            raise ConfigError(
                "explicit chains take the polynomial from the chain file, not --poly"
            )
        if chain_poly is None:
            raise ConfigError("the quotient chain file defines no 'poly'")
        f = chain_poly
        quotients = chain_quotients
        sizes = [q.size for q in quotients]
        if any(b < a for a, b in zip(sizes, sizes[1:])):
            raise ConfigError("chain quotients must be in nondecreasing size order")
    else:
        if not args.poly:
            raise ConfigError("--poly is required for torus groups")
        f = parse_laurent(args.poly, rank)
        quotients = _torus_quotients(args, rank)
    if f.is_zero:
        raise ConfigError("the zero element has no principal algebraic action")

    grid = args.grid or DEFAULT_GRIDS.get(rank)
    certificate = None
    reference = None
    if rank >= 1:
        certificate = spectral.certify_invertible_torus(f, grid)
        try:
            if rank == 1:
                reference = spectral.mahler_jensen(f).value
            else:
                reference = spectral.mahler_quadrature(f, grid).value
        except (spectral.NearZeroError, ValueError):
            reference = None

    trace = algebraic.entropy_trace(f, quotients, reference=reference)

    if args.format == "json":
        obj = trace.to_json_obj()
        obj["certificate"] = _certificate_obj(certificate) if certificate else None
        obj["residual"] = trace.residual
        report = json.dumps(obj, indent=2) + "\n"
    else:
        report = trace.to_csv()
    _write_report(report, args.out)

    summary = sys.stdout if args.out else sys.stderr
    if trace.records:
        last = trace.records[-1]
        summary.write(f"final h = {last.h_n!r} at {last.label} (d={last.d})\n")
    if trace.skipped:
        summary.write(f"skipped {len(trace.skipped)} non-invertible quotient(s)\n")
    if trace.residual is not None:
        summary.write(f"residual |h_N - reference| = {trace.residual!r}\n")
    for note in trace.caveats:
        summary.write(f"caveat: {note}\n")

    if certificate is not None and certificate.verdict == "not_invertible_suspected":
        return EXIT_NOT_INVERTIBLE
    if not trace.records:
        return EXIT_NOT_INVERTIBLE
    return EXIT_OK


def run_subshift(args) -> int:
    try:
        with open(args.sft, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read SFT file {args.sft!r}: {exc}") from None
    try:
        sft = subshift_mod.SubshiftSFT.from_json(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed JSON in {args.sft!r}: {exc.msg} (at position {exc.pos})"
        ) from None
    except ValueError as exc:
        raise ConfigError(f"invalid SFT in {args.sft!r}: {exc}") from None

    lengths = _parse_range(args.quotients)
    budgets = _parse_int_list(args.budget)
    if any(b < 0 for b in budgets):
        raise ConfigError("budgets must be >= 0")
    table = subshift_mod.subshift_entropy_table(sft, lengths, budgets)
    report = table.to_json() if args.format == "json" else table.to_csv()
    _write_report(report, args.out)
    return EXIT_OK


def run_mahler(args) -> int:
    if args.group not in GROUP_RANKS:
        raise ConfigError("mahler supports the torus groups Z, Z2, Z3, Z4")
    rank = GROUP_RANKS[args.group]
    f = parse_laurent(args.poly, rank)
    if f.is_zero:
        raise ConfigError("the zero element has no Mahler measure")
    grid = args.grid or DEFAULT_GRIDS[rank]

    estimates = []
    if rank == 1:
        est = spectral.mahler_jensen(f)
        estimates.append(est)
    try:
        estimates.append(spectral.mahler_quadrature(f, grid))
    except spectral.NearZeroError:
        pass
    certificate = spectral.certify_invertible_torus(f, grid)

    if args.format == "json":
        obj = {
            "poly": f.render(),
            "estimates": [
                {
                    "method": e.method,
                    "value": e.value,
                    "error_bound": e.error_bound,
                    "evaluations": e.evaluations,
                    "grid": e.grid,
                }
                for e in estimates
            ],
            "certificate": _certificate_obj(certificate),
        }
        report = json.dumps(obj, indent=2) + "\n"
    else:
        lines = ["method,value,error_bound,evaluations,grid"]
        for e in estimates:
            grid_field = "" if e.grid is None else str(e.grid)
            lines.append(
                f"{e.method},{e.value!r},{e.error_bound!r},{e.evaluations},{grid_field}"
            )
        report = "\n".join(lines) + "\n"
    _write_report(report, args.out)

    summary = sys.stdout if args.out else sys.stderr
    for e in estimates:
        summary.write(f"{e.method}: {e.value!r} (error bound {e.error_bound:.3e})\n")
    summary.write(f"certificate: {certificate.verdict}\n")
    if certificate.verdict == "not_invertible_suspected":
        return EXIT_NOT_INVERTIBLE
    return EXIT_OK


def run_sofic_check(args) -> int:
    rank, _, chain_quotients = _resolve_group(args)
    if rank == 0:
        quotients = chain_quotients
    else:
        quotients = _torus_quotients(args, rank)
    elements = _parse_elements(args.elements, rank)
    elements = [normalize_element(e, rank) for e in elements]
    pairs = [(s, t) for s in elements for t in elements if s != t]
    if not pairs:
        raise ConfigError("need at least two distinct elements for defect checks")

    needed = set(elements)
    for s, t in pairs:
        needed.add(element_mul(s, t, rank))

    rows = []
    for q in quotients:
        sigma = sofic_map_from_quotient(q, needed)
        for s, t in pairs:
            rows.append(
                {
                    "label": q.label,
                    "d": q.size,
                    "s": _element_str(s, rank),
                    "t": _element_str(t, rank),
                    "multiplicative_defect": multiplicative_defect(sigma, s, t),
                    "freeness_defect": freeness_defect(sigma, s, t),
                }
            )

    if args.format == "json":
        report = json.dumps({"group": args.group, "rows": rows}, indent=2) + "\n"
    else:
        lines = ["label,d,s,t,multiplicative_defect,freeness_defect"]
        for r in rows:
            lines.append(
                f"{csv_field(r['label'])},{r['d']},{csv_field(r['s'])},{csv_field(r['t'])},"
                f"{r['multiplicative_defect']!r},{r['freeness_defect']!r}"
            )
        report = "\n".join(lines) + "\n"
    _write_report(report, args.out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "algebraic": run_algebraic,
        "subshift": run_subshift,
        "mahler": run_mahler,
        "sofic-check": run_sofic_check,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, ParseError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (ResourceGuardError, subshift_mod.EnumerationCapError) as exc:
        sys.stderr.write(f"resource guard: {exc}\n")
        return EXIT_RESOURCE


def console_entry():
    sys.exit(main())
