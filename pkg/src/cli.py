import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from src import arquiver, runtime_config
from src.config.setting import load_engine_settings
from src.errors import ContractViolation, InjectiveInput, UsageError, WindowExceeded
from src.families import qsl2, serial
from src.quiverrep import serialize
from src.reports import Report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_WINDOW = 3

# options whose values may start with "-"
_SIGNED_OPTIONS = ("--window", "--range")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


def _join_signed(argv: Sequence[str]) -> List[str]:
    out: List[str] = []
    items = list(argv)
    k = 0
    while k < len(items):
        if items[k] in _SIGNED_OPTIONS and k + 1 < len(items):
            out.append(f"{items[k]}={items[k + 1]}")
            k += 2
            continue
        out.append(items[k])
        k += 1
    return out


def _span(text: str) -> Tuple[int, int]:
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        raise UsageError(f"Expected lo:hi, got {text!r}") from None
    if lo > hi:
        raise UsageError(f"Empty range {text!r}")
    return lo, hi


def _dims_text(dims: Dict[int, int]) -> str:
    return " ".join(f"{v}:{d}" for v, d in sorted(dims.items()))


# --- parser ---


def build_parser() -> argparse.ArgumentParser:
    settings = runtime_config.load_settings()
    parser = _Parser(prog="arq", description="Comodule calculus for two coalgebra families")
    families = parser.add_subparsers(dest="family", required=True)

    s = families.add_parser("serial", help="truncated path coalgebra of type A-infinity-infinity")
    s_actions = s.add_subparsers(dest="action", required=True)

    def serial_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--n", type=int, default=int(settings["serial_n"]), help="path-length bound")
        p.add_argument("--window", default=str(settings["serial_window"]), help="vertex window lo:hi")

    op = s_actions.add_parser("op", help="apply a closed form to an interval")
    serial_common(op)
    op.add_argument("operation", choices=sorted(SERIAL_OPERATIONS))
    op.add_argument("interval", nargs="+", help="V i j | U i j | S i | I i")
    op.add_argument("--format", choices=("text", "json"), default="text")

    ar = s_actions.add_parser("ar", help="AR quiver of the window")
    serial_common(ar)
    ar.add_argument("--stable", action="store_true", help="delete injectives")
    ar.add_argument("--format", choices=("ascii", "dot", "json", "text"), default="ascii")

    ver = s_actions.add_parser("verify", help="check closed forms against the oracle")
    serial_common(ver)
    ver.add_argument("--range", help="interval vertex range lo:hi")
    ver.add_argument("--margin", type=int)
    ver.add_argument("--depth", type=int, default=2, help="requested Omega-depth for the default margin")
    ver.add_argument("--ops", help="comma separated subset of checks")
    ver.add_argument("--side", choices=("V", "U", "both"), default="both")
    ver.add_argument("--threads", type=int)
    ver.add_argument("--format", choices=("text", "tsv", "json"), default="text")

    sr = s_actions.add_parser("realize", help="interval as a quiver representation (JSON)")
    serial_common(sr)
    sr.add_argument("interval", nargs="+")

    dv = s_actions.add_parser("dimvec", help="dimension vector of an interval")
    serial_common(dv)
    dv.add_argument("interval", nargs="+")
    dv.add_argument("--format", choices=("text", "json"), default="text")

    q = families.add_parser("qsl2", help="non-trivial block of quantum SL(2)")
    q_actions = q.add_subparsers(dest="action", required=True)

    def block_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--window", type=int, default=int(settings["qsl2_window"]), help="w, meaning [0,w]")
        p.add_argument("--margin", type=int)
        p.add_argument("--depth", type=int, default=int(settings["qsl2_depth"]))

    def block_ranges(p: argparse.ArgumentParser) -> None:
        p.add_argument("--kmax", type=int, default=int(settings["qsl2_kmax"]))
        p.add_argument("--nmax", type=int, default=int(settings["qsl2_nmax"]))

    qop = q_actions.add_parser("op", help="apply a symbolic operation to O^k S n or I n")
    block_common(qop)
    qop.add_argument("operation", choices=sorted(BLOCK_OPERATIONS))
    qop.add_argument("object", nargs="+")
    qop.add_argument("--format", choices=("text", "json"), default="text")

    qar = q_actions.add_parser("ar", help="AR quiver around the simples")
    block_common(qar)
    block_ranges(qar)
    qar.add_argument("--stable", action="store_true")
    qar.add_argument("--format", choices=("ascii", "dot", "json", "text"), default="ascii")

    qver = q_actions.add_parser("verify", help="injectives, almost split sequences and functor identities")
    block_common(qver)
    block_ranges(qver)
    qver.add_argument("--threads", type=int)
    qver.add_argument("--format", choices=("text", "tsv", "json"), default="text")

    qsym = q_actions.add_parser("check-symmetric", help="Gram matrix of the form and Nakayama on objects")
    block_common(qsym)
    block_ranges(qsym)
    qsym.add_argument("--threads", type=int)
    qsym.add_argument("--format", choices=("text", "tsv", "json"), default="text")

    qr = q_actions.add_parser("realize", help="O^k S n or I n as a quiver representation (JSON)")
    block_common(qr)
    qr.add_argument("object", nargs="+")

    qdv = q_actions.add_parser("dimvec", help="dimension vector of O^k S(n)")
    block_common(qdv)
    qdv.add_argument("--k", type=int, default=0)
    qdv.add_argument("--n", type=int, required=True)
    qdv.add_argument("--format", choices=("text", "json"), default="text")

    census = q_actions.add_parser("census", help="decompose pseudo-random modules and name the summands")
    block_common(census)
    census.add_argument("--samples", type=int, default=int(settings["census_samples"]))
    census.add_argument("--seed", type=int, default=int(settings["census_seed"]))
    census.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    return parser


# --- rendering ---


def _render_report(report: Report, fmt: str) -> str:
    if fmt == "tsv":
        return report.to_tsv()
    if fmt == "json":
        return report.to_json()
    return report.to_text()


def _render_quiver(q: arquiver.ARQuiver, fmt: str, split_components: bool = False) -> str:
    if fmt == "dot":
        return arquiver.to_dot(q)
    if fmt == "json":
        return arquiver.to_json(q)
    if fmt == "text":
        violations = arquiver.mesh_lint(q)
        lines = [
            f"nodes: {len(q.nodes)}",
            f"arrows: {len(q.arrows)}",
            f"translation: {len(q.translation)}",
            f"components: {len(arquiver.components(q))}",
            f"mesh violations: {len(violations)}",
        ]
        lines += [f"  {v.node_id} -> {v.translate_id}" for v in violations]
        return "\n".join(lines) + "\n"
    if split_components:
        pieces = [arquiver.to_ascii(arquiver.restrict(q, group)) for group in arquiver.components(q)]
        return "\n".join(pieces)
    return arquiver.to_ascii(q)


# --- serial ---


def _serial_family(args: argparse.Namespace) -> serial.SerialFamily:
    lo, hi = _span(args.window)
    return serial.SerialFamily(args.n, lo, hi)


def _serial_closed(name: str) -> Callable[[serial.SerialFamily, serial.Interval], str]:
    def run_closed(fam: serial.SerialFamily, v: serial.Interval) -> str:
        return serial.CLOSED_FORMS[name](fam, v).text()

    return run_closed


SERIAL_OPERATIONS: Dict[str, Callable[[serial.SerialFamily, serial.Interval], str]] = {
    **{name.replace("_", "-"): _serial_closed(name) for name in serial.CLOSED_FORMS},
    "almost-split": lambda fam, v: serial.almost_split(fam, v).text(),
    "almost-split-ending": lambda fam, v: serial.almost_split_ending(fam, v).text(),
}


def _serial_op(args: argparse.Namespace, out: TextIO) -> int:
    fam = _serial_family(args)
    v = fam.check(serial.parse_interval(args.interval, fam.n))
    fam.require_window(v)
    result = SERIAL_OPERATIONS[args.operation](fam, v)
    if args.format == "json":
        payload = {"family": fam.family_name, "operation": args.operation, "input": v.text(), "output": result}
        printed = serial.printed_u_reading(fam, args.operation, v)
        if printed is not None:
            payload["printed_reading"] = printed.text()
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(result + "\n")
    return EXIT_OK


def _serial_ar(args: argparse.Namespace, out: TextIO) -> int:
    q = serial.ar_quiver(_serial_family(args))
    if args.stable:
        q = arquiver.stable(q)
    out.write(_render_quiver(q, args.format))
    return EXIT_OK


def _serial_verify(args: argparse.Namespace, out: TextIO, threads: int) -> int:
    fam = _serial_family(args)
    operations = serial.DEFAULT_OPERATIONS if not args.ops else tuple(s.strip() for s in args.ops.split(",") if s.strip())
    sides = (serial.Side.V, serial.Side.U) if args.side == "both" else (serial.Side(args.side),)
    margin = args.margin if args.margin is not None else serial.default_margin(fam.n, args.depth)
    report = serial.verify(
        fam,
        operations=operations,
        interval_range=_span(args.range) if args.range else None,
        threads=threads,
        sides=sides,
        margin=margin,
    )
    out.write(_render_report(report, args.format))
    return EXIT_OK if report.all_passed else EXIT_FAILED


def _serial_realize(args: argparse.Namespace, out: TextIO) -> int:
    fam = _serial_family(args)
    rep = fam.realize(fam.check(serial.parse_interval(args.interval, fam.n)))
    out.write(serialize.dumps(serialize.representation_to_dict(rep)))
    return EXIT_OK


def _serial_dimvec(args: argparse.Namespace, out: TextIO) -> int:
    fam = _serial_family(args)
    dims = fam.realize(serial.parse_interval(args.interval, fam.n)).dim_vector()
    if args.format == "json":
        out.write(json.dumps({str(v): d for v, d in sorted(dims.items())}) + "\n")
    else:
        out.write(_dims_text(dims) + "\n")
    return EXIT_OK


# --- qsl2 ---


def _block_family(args: argparse.Namespace) -> qsl2.BlockFamily:
    if args.margin is not None:
        return qsl2.BlockFamily(args.window, args.margin)
    return qsl2.BlockFamily.with_depth(args.window, args.depth)


def _block_shift(steps: int) -> Callable[[qsl2.BlockFamily, qsl2.BlockObject], str]:
    def run_shift(fam: qsl2.BlockFamily, obj: qsl2.BlockObject) -> str:
        if isinstance(obj, qsl2.InjectiveLabel):
            return "0"
        return qsl2.omega(obj, steps).text()

    return run_shift


BLOCK_OPERATIONS: Dict[str, Callable[[qsl2.BlockFamily, qsl2.BlockObject], str]] = {
    "syzygy": _block_shift(1),
    "cosyzygy": _block_shift(-1),
    "cosyzygy2": _block_shift(-2),
    "dtr": _block_shift(-2),
    "nakayama": lambda fam, obj: obj.text(),
    "almost-split": lambda fam, obj: qsl2.almost_split(fam, obj).text(),
    "almost-split-ending": lambda fam, obj: qsl2.almost_split_ending(fam, obj).text(),
}


def _block_op(args: argparse.Namespace, out: TextIO) -> int:
    fam = _block_family(args)
    obj = qsl2.parse_object(args.object)
    result = BLOCK_OPERATIONS[args.operation](fam, obj)
    if args.format == "json":
        payload = {"family": fam.family_name, "operation": args.operation, "input": obj.text(), "output": result}
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(result + "\n")
    return EXIT_OK


def _block_ar(args: argparse.Namespace, out: TextIO) -> int:
    q = qsl2.ar_quiver(_block_family(args), args.kmax, args.nmax)
    if args.stable:
        q = arquiver.stable(q)
    out.write(_render_quiver(q, args.format, split_components=True))
    return EXIT_OK


def _block_verify(args: argparse.Namespace, out: TextIO, threads: int) -> int:
    report = qsl2.verify(_block_family(args), args.kmax, args.nmax, threads)
    out.write(_render_report(report, args.format))
    return EXIT_OK if report.all_passed else EXIT_FAILED


def _block_symmetric(args: argparse.Namespace, out: TextIO, threads: int) -> int:
    report = qsl2.check_symmetric(_block_family(args), args.kmax, args.nmax, threads)
    out.write(_render_report(report, args.format))
    return EXIT_OK if report.all_passed else EXIT_FAILED


def _block_realize(args: argparse.Namespace, out: TextIO) -> int:
    rep = _block_family(args).realize(qsl2.parse_object(args.object))
    out.write(serialize.dumps(serialize.representation_to_dict(rep)))
    return EXIT_OK


def _block_dimvec(args: argparse.Namespace, out: TextIO) -> int:
    dims = _block_family(args).dim_vector(qsl2.StringObject(args.k, args.n))
    if args.format == "json":
        out.write(json.dumps({str(v): d for v, d in sorted(dims.items())}) + "\n")
    else:
        out.write(_dims_text(dims) + "\n")
    return EXIT_OK


def _block_census(args: argparse.Namespace, out: TextIO) -> int:
    report = qsl2.orbit_census(_block_family(args), args.samples, args.seed)
    out.write(_render_report(report, args.format))
    return EXIT_OK if report.all_passed else EXIT_FAILED


def _dispatch(args: argparse.Namespace, out: TextIO, threads: int) -> int:
    if args.family == "serial":
        if args.action == "op":
            return _serial_op(args, out)
        if args.action == "ar":
            return _serial_ar(args, out)
        if args.action == "verify":
            return _serial_verify(args, out, threads)
        if args.action == "realize":
            return _serial_realize(args, out)
        return _serial_dimvec(args, out)
    if args.action == "op":
        return _block_op(args, out)
    if args.action == "ar":
        return _block_ar(args, out)
    if args.action == "verify":
        return _block_verify(args, out, threads)
    if args.action == "check-symmetric":
        return _block_symmetric(args, out, threads)
    if args.action == "census":
        return _block_census(args, out)
    if args.action == "realize":
        return _block_realize(args, out)
    return _block_dimvec(args, out)


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        engine = load_engine_settings()
    except RuntimeError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    logging.basicConfig(level=engine.logging_level, stream=err)
    try:
        args = build_parser().parse_args(_join_signed(sys.argv[1:] if argv is None else argv))
        threads = getattr(args, "threads", None)
        if threads is None:
            threads = engine.threads
        if threads < 1:
            raise UsageError("--threads must be at least 1")
        return _dispatch(args, out, threads)
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    except WindowExceeded as exc:
        err.write(f"window exceeded: {exc}\n")
        return EXIT_WINDOW
    except (ContractViolation, InjectiveInput) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
