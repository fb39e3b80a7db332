"""Command-line front end.

Subcommands: generate, check, solve, design, analyze, simulate, reproduce,
codec.  Every run that writes files also writes a JSON manifest next to
them recording the command line, the seed actually used, input hashes,
output hashes and wall time, so results can be reproduced and diffed.

Exit codes: 0 success, 1 runtime error, 2 usage error (including a solver
applied outside its parameter domain).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import secrets
import sys
import time
from dataclasses import dataclass, field
from math import floor
from pathlib import Path

from . import __version__, analysis, ensemble
from .codec import (
    BINARY_CYCLIC,
    MDS,
    ChunkSet,
    CodecConfig,
    cyclic_codebook,
    cyclic_decode_burst,
    cyclic_encode,
    mds_decode,
    mds_encode,
    read_chunk_file,
    write_chunk_file,
)
from .conditions import coverage_holds, hall_full_throughput, pairwise_holds, t_max
from .errors import CodedSwitchError, TooLarge, WrongParams
from .model import Instance, Solution, throughput, validate_instance, validate_solution
from .placement import (
    BlockDesign,
    PlacementRng,
    build_lexicographic_packing,
    build_projective_plane,
    draw_cyclic,
    draw_design,
    draw_uniform,
    verify_packing,
    with_k,
)
from .solvers import (
    solve_cyclic,
    solve_design,
    solve_greedy,
    solve_matching_k1,
    solve_matching_k2n2,
    solve_oracle,
)


@dataclass
class RunManifest:
    """Reproducibility record written alongside command outputs."""

    argv: list
    seed: int | None
    version: str = __version__
    python: str = sys.version.split()[0]
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    wall_time_s: float = 0.0

    def add_input(self, path) -> None:
        self.inputs.append({"path": str(path), "sha256": _sha256(path)})

    def add_output(self, path) -> None:
        self.outputs.append({"path": str(path), "sha256": _sha256(path)})

    def write(self, path) -> None:
        obj = {
            "argv": self.argv,
            "seed": self.seed,
            "version": self.version,
            "python": self.python,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "wall_time_s": round(self.wall_time_s, 6),
        }
        Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _resolve_seed(args) -> int:
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = secrets.randbits(63)
    return int(seed)


def _manifest_path(first_output: Path) -> Path:
    p = Path(first_output)
    if p.is_dir():
        return p / "manifest.json"
    return p.with_suffix(p.suffix + ".manifest.json")


# -- subcommand implementations ----------------------------------------------

def _cmd_generate(args) -> int:
    if args.policy == "design" and not args.design:
        print("error: --policy design requires --design FILE", file=sys.stderr)
        return 2
    seed = _resolve_seed(args)
    t0 = time.perf_counter()
    rng = PlacementRng(seed, 0).generator()
    k = args.k if args.k is not None else args.n
    if args.policy == "uniform":
        inst = draw_uniform(args.N, args.n, args.L, rng)
    elif args.policy == "cyclic":
        inst = draw_cyclic(args.N, args.n, args.L, rng)
    else:
        design = BlockDesign.load(args.design)
        inst = draw_design(design, args.L, rng)
    inst = with_k(inst, k)
    validate_instance(inst)
    out = Path(args.out)
    out.write_text(inst.to_json() + "\n")
    man = RunManifest(argv=sys.argv[1:], seed=seed)
    if args.policy == "design":
        man.add_input(args.design)
    man.add_output(out)
    man.wall_time_s = time.perf_counter() - t0
    man.write(_manifest_path(out))
    print(f"wrote {out}")
    return 0


def _cmd_check(args) -> int:
    inst = Instance.from_json(Path(args.infile).read_text())
    try:
        validate_instance(inst)
    except CodedSwitchError as exc:
        print(f"instance: INVALID ({type(exc).__name__}: {exc})")
        return 1
    print(f"instance: ok (N={inst.N}, k={inst.k}, n={inst.n}, L={inst.L}, "
          f"placement={inst.placement})")
    if args.solution:
        sol = Solution.from_json(Path(args.solution).read_text())
        try:
            validate_solution(inst, sol)
        except CodedSwitchError as exc:
            print(f"solution: INVALID ({type(exc).__name__}: {exc})")
            return 1
        print(f"solution: ok (l_star={sol.l_star}, rho={throughput(inst, sol):.6g})")
    if args.conditions:
        print(f"coverage_holds: {coverage_holds(inst)}")
        if inst.L >= 2:
            bound = t_max(inst.n, inst.k, inst.L)
            print(f"t_max: {bound} (floor {floor(bound)})")
            print(f"pairwise_holds: {pairwise_holds(inst)}")
        try:
            print(f"hall_full_throughput: {hall_full_throughput(inst)}")
        except TooLarge:
            print("hall_full_throughput: skipped (L exceeds the enumeration cap)")
    return 0


_ALGOS = {
    "oracle": lambda inst, args, rng: solve_oracle(inst),
    "greedy": lambda inst, args, rng: solve_greedy(inst, rng),
    "k1": lambda inst, args, rng: solve_matching_k1(inst),
    "k2n2": lambda inst, args, rng: solve_matching_k2n2(inst),
    "cyclic": lambda inst, args, rng: solve_cyclic(inst),
    "design": lambda inst, args, rng: solve_design(inst, BlockDesign.load(args.design)),
}


def _cmd_solve(args) -> int:
    seed = _resolve_seed(args)
    t0 = time.perf_counter()
    inst = Instance.from_json(Path(args.infile).read_text())
    validate_instance(inst)
    if args.algo == "design" and not args.design:
        raise WrongParams("--algo design requires --design FILE")
    rng = PlacementRng(seed, 1).generator()
    sol = _ALGOS[args.algo](inst, args, rng)
    validate_solution(inst, sol)
    out = Path(args.out)
    out.write_text(sol.to_json() + "\n")
    man = RunManifest(argv=sys.argv[1:], seed=seed)
    man.add_input(args.infile)
    if args.design:
        man.add_input(args.design)
    man.add_output(out)
    man.wall_time_s = time.perf_counter() - t0
    man.write(_manifest_path(out))
    print(f"l_star={sol.l_star} rho={throughput(inst, sol):.6g} -> {out}")
    return 0


def _cmd_design(args) -> int:
    t0 = time.perf_counter()
    if args.design_cmd == "build":
        if args.kind == "plane":
            if args.q is None:
                print("error: --kind plane requires --q", file=sys.stderr)
                return 2
            design = build_projective_plane(args.q)
        else:
            if None in (args.N, args.n, args.t_max):
                print("error: --kind packing requires --N --n --t-max", file=sys.stderr)
                return 2
            design = build_lexicographic_packing(args.N, args.n, args.t_max)
        verify_packing(design)
        out = Path(args.out)
        design.save(out)
        man = RunManifest(argv=sys.argv[1:], seed=None)
        man.add_output(out)
        man.wall_time_s = time.perf_counter() - t0
        man.write(_manifest_path(out))
        print(f"wrote {out} (b={design.b} blocks, N={design.N}, n={design.n}, t={design.t})")
        return 0
    design = BlockDesign.load(args.infile)
    try:
        verify_packing(design)
    except CodedSwitchError as exc:
        print(f"design: INVALID ({type(exc).__name__}: {exc})")
        return 1
    print(f"design: ok (b={design.b}, N={design.N}, n={design.n}, t={design.t})")
    return 0


_ANALYZE_REQUIRED = {
    "cover-uni": ("N", "n", "k"),
    "pair-cyc": ("N", "n", "k"),
    "pair-des": ("b",),
    "cover-cyc": ("N", "n", "k"),
    "full-tp": ("N", "n", "k"),
}


def _cmd_analyze(args) -> int:
    missing = [f"--{a}" for a in _ANALYZE_REQUIRED[args.what] if getattr(args, a) is None]
    if missing:
        print(f"error: --what {args.what} requires {' '.join(missing)}", file=sys.stderr)
        return 2
    seed = _resolve_seed(args)
    what = args.what
    if what == "cover-uni":
        est = analysis.p_cover_uniform(args.N, args.n, args.k, args.L)
    elif what == "pair-cyc":
        t_int = args.t_max if args.t_max is not None else floor(t_max(args.n, args.k, args.L))
        est = analysis.p_pair_cyclic(args.N, args.n, t_int, args.L)
    elif what == "pair-des":
        est = analysis.p_pair_design(args.b, args.L)
    elif what == "cover-cyc":
        est = analysis.p_cover_cyclic(
            args.N, args.n, args.k, args.L, samples=args.trials, rng=PlacementRng(seed, 2)
        )
    else:  # full-tp
        design = BlockDesign.load(args.design) if args.design else None
        est = analysis.p_full_throughput_exact(
            args.policy, args.N, args.n, args.k, args.L,
            design=design, samples=args.trials, seed=seed, exact_only=args.exact_only,
        )
    print(f"{est.value:.12g},{est.method},{est.stderr:.6g}")
    return 0


def _cmd_simulate(args) -> int:
    seed_override = getattr(args, "seed", None)
    t0 = time.perf_counter()
    obj = json.loads(Path(args.spec).read_text())
    if seed_override is not None:
        obj["seed"] = int(seed_override)
    spec = ensemble.ExperimentSpec(
        policy=obj["policy"],
        N=int(obj["N"]),
        k=int(obj["k"]),
        n=int(obj["n"]),
        L_range=tuple(obj["L_range"]),
        trials=int(obj.get("trials", 100_000)),
        seed=int(obj.get("seed", 0)),
        solver=obj.get("solver", "oracle"),
        design_source=obj.get("design_source"),
    )
    report = ensemble.run_ensemble(spec)
    out = Path(args.out)
    report.to_csv(out)
    man = RunManifest(argv=sys.argv[1:], seed=spec.seed)
    man.add_input(args.spec)
    man.add_output(out)
    man.wall_time_s = time.perf_counter() - t0
    man.write(_manifest_path(out))
    print(f"wrote {out} ({len(report.rows)} rows)")
    return 0


def _cmd_reproduce(args) -> int:
    seed = _resolve_seed(args)
    t0 = time.perf_counter()
    paths = ensemble.reproduce_figure(args.figure, args.out, trials=args.trials, seed=seed)
    man = RunManifest(argv=sys.argv[1:], seed=seed)
    for p in paths:
        man.add_output(p)
    man.wall_time_s = time.perf_counter() - t0
    man.write(Path(args.out) / "manifest.json")
    for p in paths:
        print(p)
    return 0


def _codec_cfg(args) -> CodecConfig:
    family = BINARY_CYCLIC if args.family == "cyclic" else MDS
    return CodecConfig(k=args.k, n=args.n, B=args.B, family=family)


def _cmd_codec(args) -> int:
    if args.codec_cmd == "demo":
        cfg = _codec_cfg(args)
        if cfg.family == BINARY_CYCLIC:
            words = sorted(cyclic_codebook(cfg))
            print(f"[{cfg.n},{cfg.k}] binary cyclic code, generator {cfg.generator:#b}")
            print("codebook:", " ".join(words))
            r = cfg.n - cfg.k
            print(f"burst recovery (erase {r} consecutive positions):")
            demo = CodecConfig(k=cfg.k, n=cfg.n, B=1, family=BINARY_CYCLIC, generator=cfg.generator)
            for start in range(cfg.n):
                erased = [(start + i) % cfg.n for i in range(r)]
                ok = 0
                for msg in range(1 << cfg.k):
                    data = [bytes([(msg >> d) & 1]) for d in range(cfg.k)]
                    cs = cyclic_encode(data, demo)
                    keep = [i for i in range(cfg.n) if i not in erased]
                    if cyclic_decode_burst(cs.mask(keep), demo) == data:
                        ok += 1
                print(f"  positions {erased}: {ok}/{1 << cfg.k} messages recovered")
        else:
            print(f"[{cfg.n},{cfg.k}] MDS code over GF(256), chunk size B={cfg.B}")
            rng_payload = bytes(range(cfg.B))
            data = [bytes((b + j) % 256 for b in rng_payload) for j in range(cfg.k)]
            cs = mds_encode(data, cfg)
            from itertools import combinations

            total = ok = 0
            for keep in combinations(range(cfg.n), cfg.k):
                total += 1
                if mds_decode(cs.mask(keep), cfg) == data:
                    ok += 1
            print(f"round-trips from every k-subset: {ok}/{total}")
        return 0

    if args.codec_cmd == "encode":
        t0 = time.perf_counter()
        payload = Path(args.infile).read_bytes()
        k = args.k
        B = args.B if args.B is not None else max(1, -(-len(payload) // k))
        family = BINARY_CYCLIC if args.family == "cyclic" else MDS
        cfg = CodecConfig(k=k, n=args.n, B=B, family=family)
        padded = payload.ljust(k * B, b"\0")
        data = [padded[i * B : (i + 1) * B] for i in range(k)]
        cs = cyclic_encode(data, cfg) if family == BINARY_CYCLIC else mds_encode(data, cfg)
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        man = RunManifest(argv=sys.argv[1:], seed=None)
        man.add_input(args.infile)
        for i, chunk in enumerate(cs.chunks):
            p = out_dir / f"chunk_{i:03d}.bin"
            write_chunk_file(p, cfg, i, chunk)
            man.add_output(p)
        man.wall_time_s = time.perf_counter() - t0
        man.write(out_dir / "manifest.json")
        print(f"wrote {cfg.n} chunks to {out_dir} (B={B})")
        return 0

    # decode
    t0 = time.perf_counter()
    in_dir = Path(args.in_dir)
    slots: dict = {}
    meta = None
    for p in sorted(in_dir.glob("chunk_*.bin")):
        k, n, B, index, payload = read_chunk_file(p)
        meta = (k, n, B)
        slots[index] = payload
    if meta is None:
        print("no chunk files found", file=sys.stderr)
        return 1
    k, n, B = meta
    family = BINARY_CYCLIC if args.family == "cyclic" else MDS
    cfg = CodecConfig(k=k, n=n, B=B, family=family)
    chunks = ChunkSet(chunks=tuple(slots.get(i) for i in range(n)))
    data = (
        cyclic_decode_burst(chunks, cfg)
        if family == BINARY_CYCLIC
        else mds_decode(chunks, cfg)
    )
    out = Path(args.out)
    out.write_bytes(b"".join(data))
    man = RunManifest(argv=sys.argv[1:], seed=None)
    for p in sorted(in_dir.glob("chunk_*.bin")):
        man.add_input(p)
    man.add_output(out)
    man.wall_time_s = time.perf_counter() - t0
    man.write(_manifest_path(out))
    print(f"wrote {out}")
    return 0


# -- argument parsing ----------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="codedswitch",
        description="Coded packet placement and read scheduling experiments",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="draw a random instance")
    g.add_argument("--policy", choices=("uniform", "cyclic", "design"), required=True)
    g.add_argument("--N", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--L", type=int, required=True)
    g.add_argument("--k", type=int, default=None, help="defaults to n (uncoded)")
    g.add_argument("--design", help="block design file (design policy)")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", default="instance.json")
    g.set_defaults(func=_cmd_generate)

    c = sub.add_parser("check", help="validate an instance (and solution)")
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--solution", default=None)
    c.add_argument("--conditions", action="store_true",
                   help="also report coverage/pairwise/Hall full-throughput checks")
    c.set_defaults(func=_cmd_check)

    s = sub.add_parser("solve", help="run a read algorithm")
    s.add_argument("--algo", choices=sorted(_ALGOS), required=True)
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out", default="solution.json")
    s.add_argument("--design", default=None, help="design file for --algo design")
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=_cmd_solve)

    d = sub.add_parser("design", help="build or verify block designs")
    dsub = d.add_subparsers(dest="design_cmd", required=True)
    db = dsub.add_parser("build")
    db.add_argument("--kind", choices=("plane", "packing"), required=True)
    db.add_argument("--q", type=int, help="projective plane order (prime)")
    db.add_argument("--N", type=int)
    db.add_argument("--n", type=int)
    db.add_argument("--t-max", dest="t_max", type=int)
    db.add_argument("--out", required=True)
    db.set_defaults(func=_cmd_design)
    dv = dsub.add_parser("verify")
    dv.add_argument("--in", dest="infile", required=True)
    dv.set_defaults(func=_cmd_design)

    a = sub.add_parser("analyze", help="probability computations (CSV row: value,method,stderr)")
    a.add_argument("--what", choices=("cover-uni", "pair-cyc", "pair-des", "cover-cyc", "full-tp"),
                   required=True)
    a.add_argument("--N", type=int)
    a.add_argument("--n", type=int)
    a.add_argument("--k", type=int)
    a.add_argument("--L", type=int, required=True)
    a.add_argument("--b", type=int, help="block count (pair-des)")
    a.add_argument("--t-max", dest="t_max", type=int, default=None)
    a.add_argument("--policy", choices=("uniform", "cyclic", "design"), default="cyclic")
    a.add_argument("--design", default=None)
    a.add_argument("--trials", type=int, default=10**6)
    a.add_argument("--exact-only", action="store_true")
    a.add_argument("--seed", type=int, default=None)
    a.set_defaults(func=_cmd_analyze)

    m = sub.add_parser("simulate", help="run an ensemble experiment from a JSON spec")
    m.add_argument("--spec", required=True)
    m.add_argument("--out", default="report.csv")
    m.add_argument("--seed", type=int, default=None,
                   help="override the seed in the experiment file")
    m.add_argument("--threads", type=int,
                   default=int(os.environ.get("CODEDSWITCH_THREADS", "1")),
                   help="accepted for interface compatibility; results do not depend on it")
    m.set_defaults(func=_cmd_simulate)

    r = sub.add_parser("reproduce", help="write one experiment family's CSV+SVG artifacts")
    r.add_argument("--figure", type=int, required=True, choices=sorted(ensemble.FIGURES))
    r.add_argument("--out", required=True)
    r.add_argument("--trials", type=int, default=None)
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--threads", type=int,
                   default=int(os.environ.get("CODEDSWITCH_THREADS", "1")))
    r.set_defaults(func=_cmd_reproduce)

    k = sub.add_parser("codec", help="erasure codec demos and chunk file tools")
    ksub = k.add_subparsers(dest="codec_cmd", required=True)
    kd = ksub.add_parser("demo")
    kd.add_argument("--family", choices=("mds", "cyclic"), required=True)
    kd.add_argument("--k", type=int, required=True)
    kd.add_argument("--n", type=int, required=True)
    kd.add_argument("--B", type=int, default=16)
    kd.set_defaults(func=_cmd_codec)
    ke = ksub.add_parser("encode")
    ke.add_argument("--family", choices=("mds", "cyclic"), required=True)
    ke.add_argument("--k", type=int, required=True)
    ke.add_argument("--n", type=int, required=True)
    ke.add_argument("--B", type=int, default=None)
    ke.add_argument("--in", dest="infile", required=True)
    ke.add_argument("--out-dir", required=True)
    ke.set_defaults(func=_cmd_codec)
    kc = ksub.add_parser("decode")
    kc.add_argument("--family", choices=("mds", "cyclic"), required=True)
    kc.add_argument("--in-dir", required=True)
    kc.add_argument("--out", required=True)
    kc.set_defaults(func=_cmd_codec)

    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except WrongParams as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CodedSwitchError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
