"""Command-line front end.

Exit codes: 0 success, 1 I/O error, 2 unreadable or invalid input,
3 matrix not unitary, 4 verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import bench
from .circuit import export_qasm, parse_qasm
from .errors import NotUnitaryError, ShapeError, SizeError, VerificationError
from .linalg import haar_random_unitary, is_unitary, num_qubits, read_matrix, write_matrix
from .pipeline import MAX_VERIFY_QUBITS, SynthesisOptions, predicted_gate_counts, synthesize_unitary
from .qr import DEFAULT_BLOCK_SIZE, DEFAULT_CROSSOVER
from .simulator import verify_synthesis

EXIT_IO = 1
EXIT_PARSE = 2
EXIT_NOT_UNITARY = 3
EXIT_VERIFY = 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _load_matrix(path):
    try:
        return read_matrix(path)
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}", EXIT_IO) from e
    except ValueError as e:
        raise CliError(f"{path}: {e}", EXIT_PARSE) from e


def _write_report(path, report):
    Path(path).write_text(report.to_json(indent=2) + "\n")


def cmd_random(args):
    try:
        u = haar_random_unitary(args.n_qubits, args.seed)
    except SizeError as e:
        raise CliError(str(e), EXIT_PARSE) from e
    write_matrix(u, args.out)
    return 0


def cmd_synth(args):
    u = _load_matrix(args.matrix)
    try:
        num_qubits(u.shape[0])
    except ShapeError as e:
        raise CliError(f"{args.matrix}: {e}", EXIT_PARSE) from e
    opts = SynthesisOptions(block_size=args.block_size, crossover=args.nx,
                            merge_diagonals=not args.no_merge, cancel_x_layers=not args.no_cancel_x,
                            verify=args.verify, tolerance=args.tol, force_verify=args.force_verify)
    try:
        circuit, report = synthesize_unitary(u, opts)
    except NotUnitaryError as e:
        raise CliError(f"{args.matrix}: {e}", EXIT_NOT_UNITARY) from e
    except SizeError as e:
        raise CliError(str(e), EXIT_PARSE) from e
    except VerificationError as e:
        with open(args.qasm, "w") as fh:
            export_qasm(e.circuit, fh)
        _write_report(args.report, e.report)
        raise CliError(str(e), EXIT_VERIFY) from e
    with open(args.qasm, "w") as fh:
        export_qasm(circuit, fh)
    _write_report(args.report, report)
    return 0


def cmd_verify(args):
    u = _load_matrix(args.matrix)
    if args.self_unitary or args.qasm is None:
        if not is_unitary(u, args.tol if args.tol is not None else 1e-10):
            raise CliError(f"{args.matrix} is not unitary", EXIT_NOT_UNITARY)
        print("unitary")
        return 0
    try:
        circuit = parse_qasm(Path(args.qasm).read_text())
    except OSError as e:
        raise CliError(f"cannot read {args.qasm}: {e.strerror}", EXIT_IO) from e
    except ValueError as e:
        raise CliError(f"{args.qasm}: {e}", EXIT_PARSE) from e
    if not is_unitary(u, 1e-10):
        raise CliError(f"{args.matrix} is not unitary", EXIT_NOT_UNITARY)
    tol = args.tol if args.tol is not None else 1e-10 * u.shape[0]
    try:
        ok, residual = verify_synthesis(u, circuit, tol, max_qubits=args.max_qubits)
    except (ShapeError, SizeError) as e:
        raise CliError(str(e), EXIT_PARSE) from e
    print(json.dumps({"residual": residual, "tol": tol, "ok": ok}))
    return 0 if ok else EXIT_VERIFY


def cmd_bench(args):
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    for m in modes:
        if m not in bench.MODES:
            raise CliError(f"unknown mode {m!r}; expected one of {', '.join(bench.MODES)}", EXIT_PARSE)
    seeds = range(args.seed, args.seed + args.seeds)
    qubits = range(args.min_qubits, args.max_qubits + 1)
    for m in modes:
        if args.min_qubits < 1 or args.max_qubits > bench.MAX_QUBITS[m]:
            raise CliError(f"{m} supports 1..{bench.MAX_QUBITS[m]} qubits", EXIT_PARSE)
    opts = SynthesisOptions(block_size=args.block_size, crossover=args.nx)
    path = Path(args.out)
    header = not (args.append and path.exists() and path.stat().st_size > 0)
    with open(path, "a" if args.append else "w") as fh:
        if header:
            bench.write_csv([], fh)

        def emit(rec):
            bench.write_csv([rec], fh, header=False)
            fh.flush()
            if not args.quiet:
                print(f"{rec.mode} n={rec.n_qubits} seed={rec.seed} {rec.wall_time_ms:.1f} ms",
                      file=sys.stderr)

        bench.run_bench(qubits, modes, seeds, threads=args.threads, opts=opts, on_record=emit)
    return 0


def cmd_counts(args):
    if args.n_qubits < 1:
        raise CliError("n must be positive", EXIT_PARSE)
    p = predicted_gate_counts(args.n_qubits)
    print(json.dumps({"cnot": p.cnot, "rotation": p.rotation}))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="hhsynth", description="Synthesize quantum circuits "
                                "from unitary matrices via Householder reflections.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("random", help="write a Haar-random unitary")
    r.add_argument("n_qubits", type=int)
    r.add_argument("out")
    r.add_argument("--seed", type=int, default=None)
    r.set_defaults(func=cmd_random)

    s = sub.add_parser("synth", help="synthesize a circuit for a unitary")
    s.add_argument("matrix")
    s.add_argument("qasm")
    s.add_argument("report")
    s.add_argument("--block-size", type=int, default=DEFAULT_BLOCK_SIZE)
    s.add_argument("--nx", type=int, default=DEFAULT_CROSSOVER, help="unblocked crossover order")
    s.add_argument("--no-merge", action="store_true", help="keep every diagonal separate")
    s.add_argument("--no-cancel-x", action="store_true", help="skip the X cancellation pass")
    s.add_argument("--verify", action="store_true", help="simulate and compare with the input")
    s.add_argument("--tol", type=float, default=None, help="residual bound (default 1e-10 * 2^n)")
    s.add_argument("--force-verify", action="store_true",
                   help=f"allow verification above {MAX_VERIFY_QUBITS} qubits")
    s.add_argument("--threads", type=int, default=None)
    s.set_defaults(func=cmd_synth)

    v = sub.add_parser("verify", help="check a circuit against a matrix")
    v.add_argument("matrix")
    v.add_argument("qasm", nargs="?")
    v.add_argument("--tol", type=float, default=None)
    v.add_argument("--self-unitary", action="store_true", help="only check that the matrix is unitary")
    v.add_argument("--max-qubits", type=int, default=10, help="simulation size guard")
    v.add_argument("--threads", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time factorizations and synthesis")
    b.add_argument("--min-qubits", type=int, default=1)
    b.add_argument("--max-qubits", type=int, default=8)
    b.add_argument("--modes", default="modified-qr,generic-qr")
    b.add_argument("--seeds", type=int, default=1, help="number of seeds")
    b.add_argument("--seed", type=int, default=0, help="first seed")
    b.add_argument("--out", default="bench.csv")
    b.add_argument("--append", action="store_true")
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--block-size", type=int, default=DEFAULT_BLOCK_SIZE)
    b.add_argument("--nx", type=int, default=DEFAULT_CROSSOVER)
    b.add_argument("--quiet", action="store_true")
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("counts", help="print the leading-order gate-count prediction")
    c.add_argument("n_qubits", type=int)
    c.set_defaults(func=cmd_counts)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command != "bench" and getattr(args, "threads", None):
            with threadpool_limits(limits=args.threads):
                return args.func(args)
        return args.func(args)
    except CliError as e:
        print(f"hhsynth: {e}", file=sys.stderr)
        return e.code
    except OSError as e:
        print(f"hhsynth: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"hhsynth: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
