"""Command-line interface: verify, certify, ext, random.

Reports are canonical JSON on stdout (or ``--out``): stable field
order, no timestamps or timings in the payload, so identical inputs
and seeds produce byte-identical bytes.  Phase timings go to stderr.

Exit codes: 0 all checks pass, 1 verification failure, 2 input error
(unreadable/malformed instance, invariant violation on load, or a
precondition like an insufficient jmax).
"""

from __future__ import annotations

import argparse
import sys
import time

from .ce import build_ce, cototalize, verify_ce, verify_ce_plus
from .certify import certify_cofiltered, derived_hom, hom_vanishing_test, verify_certificate
from .complexes import ChainMap, Complex, mapping_cone
from .instances import Instance, InstanceError, random_complex, read_instance, write_instance
from .modules import free_module, jordan_module
from .report import CheckReport, digest_bytes, report_to_json
from .towers import (
    holim_presentation,
    stage_kernel,
    truncation_tower,
    verify_left_complete,
    verify_split_links,
)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cecert",
        description="exact verification of split injective resolutions of complexes over F_p[x]/(x^m)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run the full structural verification suite")
    verify.add_argument("path", help="instance file")
    verify.add_argument("--jmax", type=int, default=None, help="resolution rows (default: window + 3)")
    verify.add_argument("--tower-depth", type=int, default=None, help="tower stages (default: -lo + 1)")
    verify.add_argument("--seed", type=int, default=0, help="seed for sampled chain maps")
    verify.add_argument("--samples", type=int, default=5, help="sampled chain maps for hom-vanishing")
    verify.add_argument("--out", default=None, help="write the report here instead of stdout")

    certify = sub.add_parser("certify", help="produce and verify a cofiltration certificate")
    certify.add_argument("path")
    certify.add_argument("--jmax", type=int, default=None)
    certify.add_argument("--out", default=None)

    ext = sub.add_parser("ext", help="hyper-Ext dimension table against the instance")
    ext.add_argument("path")
    ext.add_argument("--module", choices=["simple", "free"], default="simple",
                     help="source module: the simple k or the free Q")
    ext.add_argument("--depth", type=int, default=3, help="top cohomological degree")
    ext.add_argument("--jmax", type=int, default=None, help="default: enough for the depth")
    ext.add_argument("--out", default=None)

    rand = sub.add_parser("random", help="generate a seeded random instance file")
    rand.add_argument("--p", type=int, default=3)
    rand.add_argument("--m", type=int, default=2)
    rand.add_argument("--window", type=int, nargs=2, default=[0, 2], metavar=("LO", "HI"))
    rand.add_argument("--maxdim", type=int, default=4)
    rand.add_argument("--seed", type=int, default=0)
    rand.add_argument("--out", default=None)
    return parser


def _timed(label: str, fn, *args, **kwargs):
    start = time.perf_counter()
    result = fn(*args, **kwargs)
    ms = (time.perf_counter() - start) * 1000.0
    print(f"timing {label} {ms:.1f}ms", file=sys.stderr)
    return result


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _load(path: str) -> tuple[Instance, str]:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from None
    return read_instance(data.decode("utf-8")), digest_bytes(data)


def _window(x: Complex) -> tuple[int, int]:
    if x.is_zero_complex():
        return 0, 0
    return x.lo, x.hi


def _default_jmax(x: Complex) -> int:
    lo, hi = _window(x)
    return (hi - lo) + 3


def _base_payload(command: str, inst: Instance, digest: str, params: dict) -> dict:
    return {
        "format": "cecert-report v1",
        "command": command,
        "input_sha256": digest,
        "label": inst.label,
        "params": params,
        "checks": [],
        "summary": {},
    }


def _finish(payload: dict, rep: CheckReport, out: str | None) -> int:
    payload["checks"] = [item.to_dict() for item in rep.items]
    payload["summary"] = {
        "total": len(rep.items),
        "failed": len(rep.failures()),
        "ok": rep.ok,
    }
    _emit(report_to_json(payload), out)
    return 0 if rep.ok else 1


def _cmd_verify(args) -> int:
    inst, digest = _load(args.path)
    x = inst.complex
    lo, hi = _window(x)
    jmax = args.jmax if args.jmax is not None else _default_jmax(x)
    depth = args.tower_depth if args.tower_depth is not None else max(0, -lo) + 1
    payload = _base_payload(
        "verify", inst, digest,
        {"p": x.cat.p, "m": x.cat.m, "window": [lo, hi], "jmax": jmax,
         "tower_depth": depth, "samples": args.samples, "seed": args.seed},
    )
    rep = CheckReport()
    ce = _timed("build_ce", build_ce, x, jmax)
    rep.extend(_timed("verify_ce", verify_ce, ce), prefix="ce-")
    rep.extend(_timed("verify_ce_plus", verify_ce_plus, ce), prefix="ce-plus-")
    tower = _timed("truncation_tower", truncation_tower, ce, depth)
    rep.extend(_timed("verify_split_links", verify_split_links, tower), prefix="tower-")
    pres = _timed("holim_presentation", holim_presentation, tower)
    rep.extend(pres.report, prefix="holim-")
    for n in range(len(tower.links)):
        analysis = _timed(f"stage_kernel_{n}", stage_kernel, tower, n)
        detail = "" if analysis.literal_display_matches else "resolution differentials present in kernel"
        rep.add(f"stage-kernel-{n}", analysis.report.ok, detail)
    rep.extend(
        _timed("verify_left_complete", verify_left_complete, ce, depth, tower),
        prefix="left-complete-",
    )
    if x.is_zero_complex():
        rep.add("hom-vanishing-trivial", True, "zero complex")
    else:
        cone, _, _ = mapping_cone(ChainMap.identity(x))
        target = cototalize(ce.bicomplex).complex
        hv = _timed(
            "hom_vanishing_test", hom_vanishing_test, cone, target,
            samples=args.samples, seed=args.seed,
        )
        rep.extend(hv, prefix="homvan-")
    return _finish(payload, rep, args.out)


def _cmd_certify(args) -> int:
    inst, digest = _load(args.path)
    x = inst.complex
    lo, hi = _window(x)
    jmax = args.jmax if args.jmax is not None else _default_jmax(x)
    payload = _base_payload(
        "certify", inst, digest,
        {"p": x.cat.p, "m": x.cat.m, "window": [lo, hi], "jmax": jmax},
    )
    ce = _timed("build_ce", build_ce, x, jmax)
    target = cototalize(ce.bicomplex).complex
    cert = _timed("certify_cofiltered", certify_cofiltered, target)
    rep = _timed("verify_certificate", verify_certificate, cert)
    payload["certificate"] = {
        "steps": cert.steps,
        "target_dims": [[d, target.dim_at(d)] for d in target.degrees()],
        "pieces": [
            {"index": p.index, "degree": p.degree, "blocks": p.blocks}
            for p in cert.pieces
        ],
    }
    return _finish(payload, rep, args.out)


def _cmd_ext(args) -> int:
    inst, digest = _load(args.path)
    x = inst.complex
    lo, hi = _window(x)
    if args.depth < 0:
        raise InstanceError("--depth must be >= 0")
    need = max(_default_jmax(x), args.depth - lo + 4)
    jmax = args.jmax if args.jmax is not None else need
    payload = _base_payload(
        "ext", inst, digest,
        {"p": x.cat.p, "m": x.cat.m, "window": [lo, hi], "jmax": jmax,
         "module": args.module, "depth": args.depth},
    )
    mod = jordan_module(x.cat, [1]) if args.module == "simple" else free_module(x.cat, 1)
    ce = _timed("build_ce", build_ce, x, jmax)
    data = _timed("derived_hom", derived_hom, mod, ce, args.depth)
    payload["ext"] = {
        "module": args.module,
        "depth": args.depth,
        "dims": [[n, data.dims[n]] for n in sorted(data.dims)],
    }
    rep = CheckReport()
    rep.add("ext-computed", True, f"{len(data.dims)} degrees")
    return _finish(payload, rep, args.out)


def _cmd_random(args) -> int:
    lo, hi = args.window
    inst = random_complex(args.p, args.m, lo, hi, args.maxdim, args.seed)
    _emit(write_instance(inst), args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    handlers = {
        "verify": _cmd_verify,
        "certify": _cmd_certify,
        "ext": _cmd_ext,
        "random": _cmd_random,
    }
    try:
        return handlers[args.command](args)
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
