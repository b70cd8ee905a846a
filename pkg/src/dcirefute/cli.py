"""Build, verify and export certificates that groups A x| C8 are not DCI.

Exit codes: 0 ok, 1 property refuted or check failed, 2 pipeline failure,
3 budget exceeded, 4 unsupported export, 64 usage, 65 bad input data,
73 cannot write output.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .abstract import by_name
from .certificate import CertificateFormatError, DciCertificate, regular_table, verify_certificate
from .closure import DEFAULT_NODE_CAP, ArcSet, two_closure, to_dot
from .construction import ConstructionParams
from .dci import BRUTE_ORDER, PipelineError, babai_refutation, construction_generators, dci_brute
from .errors import CapacityError, DomainError, VerificationError
from .groups import DEFAULT_ELEMENT_CAP, PermGroup, use_seed
from .perm import format_generators, parse_generators

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_PIPELINE = 2
EXIT_BUDGET = 3
EXIT_EXPORT = 4
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_IO = 73


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized chain building")
    common.add_argument("--jobs", type=_positive, default=1,
                        help="worker count (accepted; searches currently run in-process)")
    common.add_argument("--node-cap", type=_positive, default=DEFAULT_NODE_CAP)
    common.add_argument("--element-cap", type=_positive, default=DEFAULT_ELEMENT_CAP)

    parser = _Parser(prog="dcirefute", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("refute", parents=[common], help="build and verify a DCI refutation certificate")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out", help="certificate path (default: stdout)")

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate independently")
    p.add_argument("cert")

    p = sub.add_parser("two-closure", parents=[common], help="2-closure of a group given by a generator file")
    p.add_argument("gens")

    p = sub.add_parser("brute-dci", parents=[common], help="exhaustive DCI check of a small abelian group")
    p.add_argument("group", help="e.g. c8, c2xc4")

    p = sub.add_parser("export-dot", parents=[common], help="write the witness digraph of a certificate as DOT")
    p.add_argument("cert")
    p.add_argument("--out", required=True)
    return parser


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"cannot write {path}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _read(path):
    with open(path) as fh:
        return fh.read()


def _load_certificate(path) -> DciCertificate:
    return DciCertificate.loads(_read(path))


def cmd_refute(args) -> int:
    try:
        params = ConstructionParams(args.k, args.r)
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cert = babai_refutation(params, node_cap=args.node_cap, element_cap=args.element_cap)
    except PipelineError as exc:
        print(f"pipeline failed at stage {exc.check}: {exc.detail}", file=sys.stderr)
        return EXIT_PIPELINE
    return _write(args.out, cert.dumps())


def cmd_verify(args) -> int:
    cert = _load_certificate(args.cert)
    result = verify_certificate(cert, rebuild=construction_generators)
    for line in result.log:
        logging.getLogger(__name__).info(line)
    if not result.ok:
        for line in result.failed:
            print(line, file=sys.stderr)
        return EXIT_REFUTED
    print("certificate verified")
    return EXIT_OK


def cmd_two_closure(args) -> int:
    gens = parse_generators(_read(args.gens))
    if not gens:
        raise DomainError("generator file is empty")
    G = PermGroup(gens)
    closure = two_closure(G, node_cap=args.node_cap)
    print(f"degree {G.degree}")
    print(f"order {G.order()}")
    print(f"closure_order {closure.order()}")
    print("# generators of the 2-closure")
    sys.stdout.write(format_generators(closure.chain.strong_generators() or [G.identity()]))
    return EXIT_OK


def cmd_brute_dci(args) -> int:
    try:
        R = by_name(args.group)
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if R.order > BRUTE_ORDER:
        print(f"group order {R.order} is above the oracle ceiling {BRUTE_ORDER}", file=sys.stderr)
        return EXIT_USAGE
    pairs = dci_brute(R, node_cap=args.node_cap)
    if not pairs:
        print("DCI confirmed")
        return EXIT_OK
    for S, T in pairs:
        print("S=" + "{" + ",".join(map(str, S)) + "} T={" + ",".join(map(str, T)) + "}")
    print(f"{len(pairs)} violating pairs: {R.name} is not DCI")
    return EXIT_REFUTED


def cmd_export_dot(args) -> int:
    cert = _load_certificate(args.cert)
    if cert.kind != "digraph":
        print("certificate carries a coloured witness; DOT export needs a single digraph",
              file=sys.stderr)
        return EXIT_EXPORT
    g = cert.generators
    t = regular_table([g["tau1"], g["rho1"], g["rho2"]], cert.degree)
    if t is None:
        raise CertificateFormatError("generators do not give a regular group")
    arcs = ArcSet.from_arcs(cert.degree, ((x, t[s][x]) for x in range(cert.degree) for s in cert.S))
    return _write(args.out, to_dot(arcs, cert.k, cert.r))


COMMANDS = {
    "refute": cmd_refute,
    "verify": cmd_verify,
    "two-closure": cmd_two_closure,
    "brute-dci": cmd_brute_dci,
    "export-dot": cmd_export_dot,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with use_seed(args.seed):
            return COMMANDS[args.command](args)
    except CapacityError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DomainError as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except VerificationError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_REFUTED


if __name__ == "__main__":
    sys.exit(main())
