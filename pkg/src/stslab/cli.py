"""Command-line front end.

Every output embeds a manifest (command, input, output, seed, version) and is
byte-identical for identical arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .code import CodeValidationError, StabilizerCode, canonical_pairs, code_distance_exact, load_code, validate
from .lattice import LatticeLayout, LatticeSpec, toric_logical
from .pauli import PauliOperator

EXIT_OK, EXIT_INTERNAL, EXIT_VALIDATION, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass(frozen=True)
class RunManifest:
    command: str
    input: object
    output: str
    seed: int | None
    version: str = __version__

    def to_json(self) -> dict:
        return asdict(self)


def _add_lattice_flags(p: argparse.ArgumentParser, spec_arg: bool = True) -> None:
    if spec_arg:
        p.add_argument("spec", nargs="?", help="code or lattice JSON: a path or an inline JSON string")
    p.add_argument("--family", choices=["ising", "toric"])
    p.add_argument("--D", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--dims", help="comma-separated linear sizes, overrides --L")
    p.add_argument("--out", default="-")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stslab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="emit code JSON for a lattice family")
    _add_lattice_flags(p, spec_arg=False)

    p = sub.add_parser("analyze", help="k, distance, canonical pairs, dimension duality, topological order")
    _add_lattice_flags(p)
    p.add_argument("--max-weight", type=int, default=4, help="distance search cap")

    p = sub.add_parser("barrier", help="energy barrier of a logical operator")
    _add_lattice_flags(p)
    p.add_argument("--logical", help="Pauli string such as ZZII, default: lightest canonical logical")
    p.add_argument("--max-weight", type=int, default=20)

    p = sub.add_parser("thermal", help="Metropolis order parameter or memory time")
    _add_lattice_flags(p, spec_arg=False)
    p.add_argument("--mode", choices=["order", "memory"], default="order")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--sweeps", type=int, default=1000)
    p.add_argument("--burn-in", type=int, default=0)
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--trials", type=int, default=10, help="memory mode: independent runs")
    p.add_argument("--summary", help="path for the JSON summary, default: stdout")

    p = sub.add_parser("regions", help="g_R for the standard regions or a given one")
    _add_lattice_flags(p)
    p.add_argument("--region", help="JSON list of particle coordinates")

    p = sub.add_parser("appendixc", help="column-operator combinatorics self-tests")
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--out", default="-")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int)
    return parser


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return max(1, args.threads)
    env = os.environ.get("STSLAB_THREADS")
    return max(1, int(env)) if env else 1


def _lattice_spec(args) -> LatticeSpec | None:
    if not args.family:
        return None
    if args.D is None:
        raise UsageError("--D is required with --family")
    if args.dims:
        dims = tuple(int(x) for x in args.dims.split(","))
    elif args.L is not None:
        dims = (args.L,) * args.D
    else:
        raise UsageError("--L or --dims is required with --family")
    if args.family == "toric" and args.m is None:
        raise UsageError("--m is required for the toric family")
    return LatticeSpec(args.family, args.D, dims, args.m if args.family == "toric" else None)


def _load(args) -> tuple[StabilizerCode, LatticeLayout | None, LatticeSpec | None, object]:
    """Code, optional layout, optional lattice spec and the manifest input entry."""
    spec = _lattice_spec(args)
    if spec is not None:
        code, layout = spec.build()
        return code, layout, spec, spec.to_json()
    text = getattr(args, "spec", None)
    if not text:
        raise UsageError("give a code/lattice JSON or --family flags")
    try:
        data = json.loads(text) if text.lstrip().startswith("{") else json.loads(Path(text).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationFailure(f"cannot read input: {exc}") from exc
    inp = data if text.lstrip().startswith("{") else text
    if "family" in data:
        spec = LatticeSpec.from_json(data)
        code, layout = spec.build()
        return code, layout, spec, inp
    try:
        code = load_code(data)
    except (KeyError, ValueError) as exc:
        raise ValidationFailure(f"bad code JSON: {exc}") from exc
    layout = LatticeLayout.from_json(data["layout"]) if "layout" in data else None
    lat = LatticeSpec.from_json(data["lattice"]) if "lattice" in data else None
    return code, layout, lat, inp


def _emit(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _json_text(manifest: RunManifest, body: dict) -> str:
    return json.dumps({"manifest": manifest.to_json(), **body}, indent=2, sort_keys=True) + "\n"


def _require_valid(code: StabilizerCode) -> None:
    rep = validate(code)
    if not rep.ok:
        raise ValidationFailure(rep.message)


def cmd_build(args) -> int:
    spec = _lattice_spec(args)
    if spec is None:
        raise UsageError("build needs --family")
    code, layout = spec.build()
    _require_valid(code)
    man = RunManifest("build", spec.to_json(), args.out, args.seed)
    body = {**code.to_json(), "layout": layout.to_json(), "lattice": spec.to_json()}
    _emit(args.out, _json_text(man, body))
    return EXIT_OK


def cmd_analyze(args) -> int:
    from .sts import classify_dimensions, topological_order_check

    code, layout, _, inp = _load(args)
    _require_valid(code)
    body: dict = {"n_qubits": code.n_qubits, "n_generators": code.n_generators, "k": code.k}
    if code.k:
        d = code_distance_exact(code, args.max_weight)
        body["distance"] = d
        body["distance_cap"] = args.max_weight
        body["distance_exceeded"] = d is None
        body["canonical_pairs"] = [[a.to_string(), b.to_string()] for a, b in canonical_pairs(code).pairs]
    if layout is not None:
        body["layout"] = layout.to_json()
        body["duality"] = classify_dimensions(code, layout).to_json()
        topo = topological_order_check(code, layout)
        body["topological_order"] = {
            "passed": topo.passed,
            "corner_box_g": topo.corner_box_g,
            "max_particle_g": topo.max_particle_g,
        }
    man = RunManifest("analyze", inp, args.out, args.seed)
    _emit(args.out, _json_text(man, body))
    return EXIT_OK


def cmd_barrier(args) -> int:
    from .barrier import CapacityError, barrier_for_representative

    code, _, _, inp = _load(args)
    _require_valid(code)
    if args.logical:
        logical = PauliOperator.from_string(args.logical)
        if logical.n_qubits != code.n_qubits:
            raise ValidationFailure("logical length does not match the code")
    else:
        if code.k == 0:
            raise ValidationFailure("code has no logical operators")
        logical = min(canonical_pairs(code).flat(), key=lambda p: (p.weight, p.symplectic))
    if not code.is_logical(logical):
        raise ValidationFailure("operator is not a nontrivial logical")
    try:
        res = barrier_for_representative(code, logical, args.max_weight)
    except CapacityError as exc:
        raise ValidationFailure(str(exc)) from exc
    man = RunManifest("barrier", inp, args.out, args.seed)
    body = {"logical": logical.to_string(), **res.to_json()}
    _emit(args.out, _json_text(man, body))
    return EXIT_OK


def _thermal_logical(spec: LatticeSpec, layout: LatticeLayout) -> tuple[PauliOperator, tuple[int, ...]]:
    """Z on one particle (Ising) or the Z plane along the leading axes (toric), with translation axes."""
    if spec.family == "ising":
        return PauliOperator.from_sparse(layout.n_qubits, {0: "Z"}), tuple(range(spec.D))
    axes = tuple(range(spec.m))
    return toric_logical(layout, spec.D, spec.m, axes, "Z"), tuple(range(spec.m, spec.D))


def cmd_thermal(args) -> int:
    from .thermal import ThermalConfig, bootstrap_median_ci, memory_time, order_parameter

    spec = _lattice_spec(args)
    if spec is None:
        raise UsageError("thermal needs --family")
    code, layout = spec.build()
    _require_valid(code)
    logical, axes = _thermal_logical(spec, layout)
    try:
        cfg = ThermalConfig(
            T=args.T, eps=args.eps, sweeps=args.sweeps, burn_in=args.burn_in, seed=args.seed,
            chains=args.chains, threads=_threads(args),
        )
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc
    inp = {**spec.to_json(), "mode": args.mode, "T": args.T, "eps": args.eps, "sweeps": args.sweeps,
           "burn_in": args.burn_in, "chains": args.chains, "trials": args.trials}
    summary_path = args.summary or "-"
    man = RunManifest("thermal", inp, args.out, args.seed)
    L = list(spec.dims)
    if args.mode == "order":
        est, traj = order_parameter(code, layout, logical, axes, cfg)
        buf = io.StringIO()
        buf.write("# manifest: " + json.dumps(man.to_json(), sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        w.writerow(["sweep", "energy", "order_parameter", "chain"])
        for c in range(traj.energy.shape[0]):
            for s in range(traj.energy.shape[1]):
                w.writerow([cfg.burn_in + s + 1, repr(float(traj.energy[c, s])), repr(float(traj.order[c, s])), c])
        if args.out != "-":
            _emit(args.out, buf.getvalue())
        body = {"T": args.T, "eps": args.eps, "L": L, "mean": est.mean, "stderr": est.stderr,
                "failure_times": None, "n_bias": est.n_bias}
    else:
        res = memory_time(code, logical, cfg, args.trials, args.sweeps)
        if args.out != "-":
            buf = io.StringIO()
            buf.write("# manifest: " + json.dumps(man.to_json(), sort_keys=True) + "\n")
            w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
            w.writerow(["trial", "failure_sweep", "censored"])
            for i, t in enumerate(res.failure_times):
                w.writerow([i, "" if t is None else t, int(t is None)])
            _emit(args.out, buf.getvalue())
        times = res.times_array()
        lo, hi = bootstrap_median_ci(times, seed=args.seed)
        body = {"T": args.T, "eps": 0.0, "L": L, "mean": float(times.mean()),
                "stderr": float(times.std(ddof=1) / math.sqrt(len(times))) if len(times) > 1 else 0.0,
                "median": res.median, "median_ci95": [lo, hi], "censored": res.censored,
                "max_sweeps": res.max_sweeps, "failure_times": list(res.failure_times)}
    _emit(summary_path, _json_text(man, body))
    return EXIT_OK


def cmd_regions(args) -> int:
    from .sts import Region, check_equivalences, g_of, region_Q, region_R

    code, layout, _, inp = _load(args)
    _require_valid(code)
    if layout is None:
        raise ValidationFailure("regions need a lattice layout")
    body: dict = {"k": code.k, "layout": layout.to_json()}
    if args.region:
        try:
            region = Region.from_json(layout, json.loads(args.region))
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise ValidationFailure(f"bad region: {exc}") from exc
        body["region"] = region.to_json()
        body["g"] = g_of(code, region)
        body["g_complement"] = g_of(code, region.complement())
    else:
        from itertools import product

        body["g_R"] = {str(m): g_of(code, region_R(layout, m)) for m in range(layout.D + 1)}
        body["g_Q"] = {"".join(map(str, d)): g_of(code, region_Q(layout, d)) for d in product((0, 1), repeat=layout.D)}
        if layout.D in (2, 3):
            body["equivalences"] = [{"relation": n, "g_left": a, "g_right": b} for n, a, b in check_equivalences(code, layout)]
    man = RunManifest("regions", inp, args.out, args.seed)
    _emit(args.out, _json_text(man, body))
    return EXIT_OK


def cmd_appendixc(args) -> int:
    from . import columns as C

    results = {}
    ok = True
    for m in range(args.m_max + 1):
        h = 1 << m
        good = all(
            C.column_star(C.characteristic_column(C.index_vector(a, m)), C.characteristic_column(C.index_vector(b, m)), m)
            == C.characteristic_column(C.index_vector(a + b, m))
            for a in range(h) for b in range(h - a)
        )
        results[f"star_law_m{m}"] = good
        ok &= good
    lucas = all(C.binomial_parity(a, b) == math.comb(a, b) % 2 for a in range(256) for b in range(a + 1))
    results["lucas_parity_below_256"] = lucas
    ok &= lucas
    rng = random.Random(args.seed)
    found = verified = 0
    for _ in range(args.trials):
        m = rng.randint(0, min(2, args.m_max))
        v = rng.randint(1, 2)
        x = rng.randint(2 * v + 1, 2 * v + 3)
        ell = [C.ColumnOperator(tuple(PauliOperator(v, rng.getrandbits(v), rng.getrandbits(v)) for _ in range(1 << m)))
               for _ in range(x)]
        B = C.find_odd_identity_matrix(ell)
        if B is not None:
            found += 1
            verified += C.is_odd_identity_matrix(ell, B)
    results["odd_matrix_trials"] = args.trials
    results["odd_matrix_found"] = found
    results["odd_matrix_verified"] = verified
    ok &= found == verified == args.trials
    results["passed"] = ok
    man = RunManifest("appendixc", {"m_max": args.m_max, "trials": args.trials}, args.out, args.seed)
    _emit(args.out, _json_text(man, results))
    return EXIT_OK if ok else EXIT_VALIDATION


COMMANDS = {
    "build": cmd_build,
    "analyze": cmd_analyze,
    "barrier": cmd_barrier,
    "thermal": cmd_thermal,
    "regions": cmd_regions,
    "appendixc": cmd_appendixc,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"stslab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationFailure, CodeValidationError) as exc:
        print(f"stslab: validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SystemExit as exc:
        # --help / --version
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        print(f"stslab: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())
