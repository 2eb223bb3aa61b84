"""Command-line interface.

Every subcommand is a thin client of the HTTP service: it reads local
files, posts JSON to the service, and writes the response out.  By
default the service runs in-process (no network); ``--server URL`` points
the same client at a remote instance.

Exit codes: 0 on success, 1 on any input or computation error, 2 when a
fit completes without meeting the convergence tolerances (the result is
still written).
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from typing import Sequence

import httpx

from .dataio import load_csv
from .errors import RsbekkError


def make_client(server: str | None):
    """In-process test client by default, a real HTTP client with --server."""
    if server:
        return httpx.Client(base_url=server, timeout=3600.0)
    import warnings

    with warnings.catch_warnings():
        # starlette deprecation chatter from its own TestClient import
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app())


class CliError(Exception):
    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


def _post(client, path: str, payload: dict) -> dict:
    try:
        resp = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        raise CliError(f"cannot reach service: {exc}") from exc
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise CliError(f"service error ({resp.status_code}): {detail}")
    return resp.json()


def _canonical_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _columns_csv(dates: Sequence[str], columns: dict, extra: dict | None = None) -> str:
    import csv as _csv

    buf = io.StringIO()
    w = _csv.writer(buf, lineterminator="\n")
    names = list(columns)
    extra_names = list(extra) if extra else []
    w.writerow(["date"] + names + extra_names)
    for i, d in enumerate(dates):
        row = [d] + [repr(float(columns[n][i])) for n in names]
        row += [str(extra[n][i]) for n in extra_names]
        w.writerow(row)
    return buf.getvalue()


def _series_payload(path: str) -> dict:
    table = load_csv(path)
    for col in ("rm", "rb"):
        if col not in table.columns:
            raise CliError(
                f"{path}: missing column {col!r} "
                f"(have {sorted(table.columns)}); expected date,rm,rb"
            )
    return {
        "dates": list(table.dates),
        "rm": [float(v) for v in table.columns["rm"]],
        "rb": [float(v) for v in table.columns["rb"]],
    }


def _load_result_doc(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not valid JSON: {exc}") from exc


def cmd_stats(args, client) -> int:
    table = load_csv(args.input)
    payload = {
        "columns": {k: [float(x) for x in v] for k, v in table.columns.items()},
        "lags": args.lags,
    }
    doc = _post(client, "/stats", payload)["stats"]
    if args.json:
        _emit(_canonical_json(doc), args.out)
        return 0
    fields = ["n_obs", "mean", "std", "skewness", "kurtosis", "jarque_bera",
              "jarque_bera_pvalue", "ljung_box_levels", "ljung_box_levels_pvalue",
              "ljung_box_squares", "ljung_box_squares_pvalue"]
    lines = []
    for name in table.columns:
        s = doc[name]
        lines.append(f"{name}:")
        for f in fields:
            v = s[f]
            shown = "n/a" if v is None else (f"{v:.6g}" if isinstance(v, float) else str(v))
            lines.append(f"  {f:<26} {shown}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_fit(args, client) -> int:
    payload = {
        "series": _series_payload(args.input),
        "regimes": args.regimes,
        "restricted": args.restricted,
        "restarts": args.restarts,
        "seed": args.seed,
        "max_iterations": args.max_iterations,
        "std_errors": not args.no_std_errors,
        "polish": not args.no_polish,
    }
    doc = _post(client, "/fit", payload)
    _emit(_canonical_json(doc), args.out)
    if not doc.get("converged", False):
        print("warning: optimizer did not meet the convergence tolerances",
              file=sys.stderr)
        return 2
    return 0


def cmd_filter(args, client) -> int:
    payload = {
        "series": _series_payload(args.input),
        "result": _load_result_doc(args.result),
    }
    doc = _post(client, "/filter", payload)
    if args.json:
        _emit(_canonical_json(doc), args.out)
    else:
        _emit(_columns_csv(doc["dates"], doc["columns"]), args.out)
    return 0


def cmd_simulate(args, client) -> int:
    payload = {
        "result": _load_result_doc(args.result),
        "periods": args.periods,
        "seed": args.seed,
        "start_month": args.start_month,
    }
    doc = _post(client, "/simulate", payload)
    if args.json:
        _emit(_canonical_json(doc), args.out)
        return 0
    columns = {"rm": doc["rm"], "rb": doc["rb"]}
    extra = {"state": doc["states"]} if doc.get("states") is not None else None
    _emit(_columns_csv(doc["dates"], columns, extra), args.out)
    return 0


def cmd_premium(args, client) -> int:
    payload = {
        "series": _series_payload(args.input),
        "result": _load_result_doc(args.result),
        "weights": args.weights,
    }
    doc = _post(client, "/premium", payload)
    if args.json:
        _emit(_canonical_json(doc), args.out)
        return 0
    _emit(_columns_csv(doc["dates"], doc["columns"]), args.out)
    if args.annualize:
        print(f"annualized median premium: {doc['annualized_median_total']:.6g} "
              f"({100 * doc['annualized_median_total']:.4g}% per year)",
              file=sys.stderr)
    else:
        print(f"median monthly premium: {doc['median_total']:.6g}", file=sys.stderr)
    return 0


def cmd_serve(args, _client) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsbekk",
        description="Bivariate BEKK in-mean models with regime switching",
    )
    parser.add_argument("--server", default=None,
                        help="URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="summary statistics for each column of a CSV")
    p.add_argument("input", help="CSV with a date column and numeric columns")
    p.add_argument("--lags", type=int, default=6, help="Ljung-Box lags (default 6)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--out", default=None, help="write output to a file")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("fit", help="fit a model to a date,rm,rb CSV")
    p.add_argument("input")
    p.add_argument("--regimes", type=int, choices=(1, 2), default=1)
    p.add_argument("--restricted", action="store_true",
                   help="pin l21 = l22 = 0 in the bond mean equation")
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iterations", type=int, default=5000)
    p.add_argument("--no-std-errors", action="store_true")
    p.add_argument("--no-polish", action="store_true",
                   help="skip the gradient polish after Nelder-Mead")
    p.add_argument("--out", default=None, help="write the result JSON to a file")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("filter", help="per-month probabilities and variances under a fitted model")
    p.add_argument("input")
    p.add_argument("result", help="result JSON from 'fit'")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("simulate", help="simulate a fitted model")
    p.add_argument("result", help="result JSON from 'fit'")
    p.add_argument("--periods", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start-month", default="2000-01")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("premium", help="risk-premium decomposition under a fitted model")
    p.add_argument("input")
    p.add_argument("result")
    p.add_argument("--weights", choices=("smoothed", "filtered", "ex_ante"),
                   default="smoothed")
    p.add_argument("--annualize", action="store_true",
                   help="report the annualized median premium")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_premium)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            return cmd_serve(args, None)
        with make_client(args.server) as client:
            return args.func(args, client)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except RsbekkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
