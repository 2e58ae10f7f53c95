"""Command-line client for the acycle service.

Every subcommand builds the same pydantic request the HTTP API accepts and
either executes it in-process (default) or posts it to a running service via
--url.  Exit codes: 0 success, 2 precondition failure, 3 identity violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .acycles import PreconditionError, StructuralError
from .experiments import IdentityViolationError
from .simplicial import DomainError

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_IDENTITY = 3


def _execute(args, path: str, req) -> dict:
    """Run a request locally through the service handlers or remotely."""
    if args.url:
        import httpx

        resp = httpx.post(
            args.url.rstrip("/") + path, json=req.model_dump(), timeout=None
        )
        if resp.status_code == 422:
            raise PreconditionError(resp.json().get("detail", resp.text))
        resp.raise_for_status()
        return resp.json()
    from .service import handlers

    fn = getattr(handlers, path.strip("/"))
    return fn(req).model_dump()


def _emit(obj: dict, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _read_filtration_text(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def cmd_sample(args) -> int:
    from .service import models

    req = models.SampleRequest(
        process=models.ProcessModel(
            kind=args.kind,
            n=args.n,
            d=args.d,
            birth_law=args.birth_law,
            max_dim=args.max_dim,
        ),
        master_seed=args.seed,
        trial=args.trial,
    )
    out = _execute(args, "/sample", req)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out["filtration"])
        print(json.dumps({k: v for k, v in out.items() if k != "filtration"}, indent=2))
    else:
        sys.stdout.write(out["filtration"])
    return EXIT_OK


def cmd_ph(args) -> int:
    from .service import models

    req = models.PersistenceRequest(
        filtration=_read_filtration_text(args.filtration),
        degree=args.degree,
        domain=args.domain,
    )
    out = _execute(args, "/ph", req)
    if args.csv:
        from fractions import Fraction

        from .persistence import PersistenceDiagram, diagram_to_csv

        D = PersistenceDiagram(args.degree)
        for p in out["pairs"]:
            death = None if p["death"] == "inf" else Fraction(p["death"])
            D.pairs.append((Fraction(p["birth"]), death))
        with open(args.csv, "w", newline="") as fh:
            diagram_to_csv(D, fh)
    _emit(out, args.json_out)
    return EXIT_OK


def cmd_msa(args) -> int:
    from .service import models

    req = models.MsaRequest(
        filtration=_read_filtration_text(args.filtration),
        degree=args.degree,
        domain=args.domain,
    )
    _emit(_execute(args, "/msa", req), args.json_out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .service import models

    req = models.VerifyRequest(
        filtration=_read_filtration_text(args.filtration), degree=args.degree
    )
    out = _execute(args, "/verify", req)
    _emit(out, args.json_out)
    if not out["equal"]:
        print(f"identity violated for {args.filtration}", file=sys.stderr)
        return EXIT_IDENTITY
    return EXIT_OK


def cmd_experiment(args) -> int:
    from .service import models

    with open(args.config) as fh:
        cfg_obj = json.load(fh)
    proc = cfg_obj["process"]
    hist = cfg_obj.get("histogram", {})
    outputs = cfg_obj.get("outputs", {})
    args.csv = args.csv or outputs.get("csv")
    args.summary = args.summary or outputs.get("summary")
    args.histogram = args.histogram or outputs.get("histogram")
    identity_check = bool(cfg_obj.get("identity_check", True))
    verify_all = bool(cfg_obj.get("verify_all", False))
    if args.verify == "none":
        identity_check, verify_all = False, False
    elif args.verify == "all":
        identity_check, verify_all = True, True
    elif args.verify == "sample":
        identity_check, verify_all = True, False
    req = models.ExperimentRequest(
        process=models.ProcessModel(
            kind=proc["kind"],
            n=int(proc["n"]),
            d=int(proc["d"]),
            birth_law=proc.get("birth_law", "uniform"),
            max_dim=proc.get("max_dim"),
            m=proc.get("m"),
        ),
        trials=int(cfg_obj["trials"]),
        master_seed=int(cfg_obj.get("master_seed", cfg_obj.get("seed", args.seed))),
        degree=int(cfg_obj.get("degree", -1)),
        identity_check=identity_check,
        verify_all=verify_all,
        histogram=models.HistogramModel(
            bins=int(hist.get("bins", 32)), range=float(hist.get("range", 1.0))
        ),
        horizon=cfg_obj.get("horizon"),
    )
    out = _execute(args, "/experiment", req)
    if args.csv:
        import csv as _csv

        with open(args.csv, "w", newline="") as fh:
            w = _csv.writer(fh)
            w.writerow(["trial", "lifetime_exact", "lifetime", "n_pairs", "seconds", "verified"])
            for r in out["records"]:
                w.writerow(
                    [r["trial"], r["lifetime"], f"{r['lifetime_decimal']:.17g}",
                     r["n_pairs"], f"{r['seconds']:.6f}", int(r["verified"])]
                )
    if args.histogram:
        with open(args.histogram, "w") as fh:
            for row in out["histogram"]:
                fh.write(",".join(f"{v:.10g}" for v in row) + "\n")
    summary = {k: v for k, v in out.items() if k not in ("records", "histogram")}
    _emit(summary, args.summary)
    return EXIT_OK


def cmd_scaling(args) -> int:
    from .service import models

    req = models.ScalingRequest(
        process=args.process,
        d=args.d,
        n_list=[int(x) for x in args.n_list.split(",")],
        trials=args.trials,
        master_seed=args.seed,
    )
    _emit(_execute(args, "/scaling", req), args.json_out)
    return EXIT_OK


def cmd_rho(args) -> int:
    from .service import models

    req = models.RhoRequest(
        n=args.n, d=args.d, m=args.m, trials=args.trials, seed=args.seed
    )
    _emit(_execute(args, "/rho", req), args.json_out)
    return EXIT_OK


def cmd_limit(args) -> int:
    from .service import models

    req = models.LimitRequest(d=args.d, tol=args.tol)
    _emit(_execute(args, "/limit", req), args.json_out)
    return EXIT_OK


def cmd_kalai(args) -> int:
    from .service import models

    req = models.KalaiRequest(n=args.n, d=args.d, cap=args.cap)
    _emit(_execute(args, "/kalai", req), args.json_out)
    return EXIT_OK


def cmd_morse(args) -> int:
    from .service import models

    req = models.MorseRequest(
        filtration=_read_filtration_text(args.filtration), d=args.d, at_time=args.at_time
    )
    _emit(_execute(args, "/morse", req), args.json_out)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("acycle.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="acycle",
        description="Spanning acycles, persistence lifetimes, and random-complex experiments",
    )
    p.add_argument("--url", default=os.environ.get("ACYCLE_URL", ""),
                   help="base URL of a running service; default runs in-process")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="emit a filtration file")
    sp.add_argument("--kind", default="linial-meshulam",
                    choices=["linial-meshulam", "clique"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trial", type=int, default=0)
    sp.add_argument("--birth-law", default="uniform", choices=["uniform", "exponential"])
    sp.add_argument("--max-dim", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_sample)

    sp = sub.add_parser("ph", help="persistence diagram of a filtration file")
    sp.add_argument("filtration")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--domain", default="fraction", choices=["fraction", "gfp"])
    sp.add_argument("--csv", default=None)
    sp.add_argument("--json-out", default=None)
    sp.set_defaults(fn=cmd_ph)

    sp = sub.add_parser("msa", help="minimum spanning acycle of a filtration file")
    sp.add_argument("filtration")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--domain", default="fraction", choices=["fraction", "gfp"])
    sp.add_argument("--json-out", default=None)
    sp.set_defaults(fn=cmd_msa)

    sp = sub.add_parser("verify", help="three-way lifetime identity check")
    sp.add_argument("filtration")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--json-out", default=None)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("experiment", help="run trials from a JSON config file")
    sp.add_argument("--config", required=True)
    sp.add_argument("--verify", default="config", choices=["config", "none", "sample", "all"])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv", default=None, help="per-trial CSV output")
    sp.add_argument("--summary", default=None, help="summary JSON output")
    sp.add_argument("--histogram", default=None, help="mean-diagram CSV matrix output")
    sp.set_defaults(fn=cmd_experiment)

    sp = sub.add_parser("scaling", help="lifetime scaling study across n")
    sp.add_argument("--process", default="linial-meshulam",
                    choices=["linial-meshulam", "clique"])
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n-list", required=True, help="comma-separated sizes")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json-out", default=None)
    sp.set_defaults(fn=cmd_scaling)

    sp = sub.add_parser("rho", help="adder-probability estimate for the uniform model")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json-out", default=None)
    sp.set_defaults(fn=cmd_rho)

    sp = sub.add_parser("limit", help="conjectured limiting constant by quadrature")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--json-out", default=None)
    sp.set_defaults(fn=cmd_limit)

    sp = sub.add_parser("kalai", help="exhaustive squared-torsion sum check")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--cap", type=int, default=10**7)
    sp.add_argument("--json-out", default=None)
    sp.set_defaults(fn=cmd_kalai)

    sp = sub.add_parser("morse", help="critical counts of the lexicographic matching")
    sp.add_argument("filtration")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--at-time", default=None, help='subcomplex time as "p/q"')
    sp.add_argument("--json-out", default=None)
    sp.set_defaults(fn=cmd_morse)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.set_defaults(fn=cmd_serve)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (DomainError, PreconditionError, StructuralError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except IdentityViolationError as exc:
        path = None
        try:
            from .experiments import dump_offending_filtration

            if hasattr(exc, "process_spec"):
                path = dump_offending_filtration(
                    exc.seed, exc.process_spec, tempfile.gettempdir()
                )
        except Exception:  # diagnostics only
            path = None
        msg = f"identity violation: {exc}"
        if path:
            msg += f" (filtration dumped to {path})"
        print(msg, file=sys.stderr)
        return EXIT_IDENTITY


if __name__ == "__main__":
    sys.exit(main())
