"""Command-line client for the experiment service.

The CLI is a thin HTTP client: every subcommand builds a typed request,
sends it to the service, and writes the returned tables as CSV or JSON
files.  By default the request runs against an in-process instance of
the FastAPI app (no server needed); pass ``--server-url`` to target a
running ``asnr-lab serve`` instance instead.

Exit codes: 0 success, 2 configuration error, 3 numeric or transport
failure.  ASNR_LAB_THREADS caps the service-side worker count.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import httpx
from pydantic import ValidationError

from . import __version__
from .service import schemas
from .tables import ResultTable, emit_table

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_ENDPOINTS = {
    "amp-sweep": ("/v1/experiments/amp-sweep", schemas.AmpSweepRequest),
    "width-sweep": ("/v1/experiments/width-sweep", schemas.WidthSweepRequest),
    "roc": ("/v1/experiments/roc", schemas.RocRequest),
    "density": ("/v1/experiments/density", schemas.DensityRequest),
    "sweep2d": ("/v1/experiments/sweep2d", schemas.Sweep2DRequest),
    "gamma-table": ("/v1/experiments/gamma-table", schemas.GammaTableRequest),
}


def parse_int_list(text: str) -> list[int]:
    """Parse '3,10,50' or an inclusive range '1:50'."""
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",") if part.strip()]


def parse_float_list(text: str) -> list[float]:
    """Parse '1,2,3' or an inclusive range 'start:stop:step'."""
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) == 2:
            lo, hi, step = parts[0], parts[1], 1.0
        elif len(parts) == 3:
            lo, hi, step = parts
        else:
            raise ValueError(f"bad range {text!r}")
        n = int(round((hi - lo) / step))
        return [lo + k * step for k in range(n + 1)]
    return [float(part) for part in text.split(",") if part.strip()]


def _add_common(parser: argparse.ArgumentParser, grid: bool = True) -> None:
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON config file; flags override its fields")
    parser.add_argument("--out", type=Path, default=Path("results"),
                        help="output directory (default: ./results)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--server-url", default=None,
                        help="remote service URL (default: run in-process)")
    parser.add_argument("--seed", type=int, default=None)
    if grid:
        parser.add_argument("--sigma", type=float, default=None)
        parser.add_argument("--eta", type=float, default=None)
        parser.add_argument("--grid-spacing", type=float, default=None,
                            dest="grid_spacing")
        parser.add_argument("--grid-extent", type=float, default=None,
                            dest="grid_extent")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asnr-lab",
        description="Area-based vs peak-based SNR detection experiments")
    parser.add_argument("--version", action="version",
                        version=f"asnr-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amp-sweep", help="detection probability vs amplitude "
                                         "with critical amplitudes")
    _add_common(p)
    p.add_argument("--family", action="append", dest="families",
                   choices=("gaussian", "lorentzian", "voigt"))
    p.add_argument("--fwhm-bins", type=parse_int_list, default=None,
                   dest="fwhm_bins", help="e.g. '3,10,50'")
    p.add_argument("--amplitudes", type=parse_float_list, default=None,
                   help="e.g. '0:5:0.5'")
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--n-mc", type=int, default=None, dest="n_mc")
    p.add_argument("--repeats", type=int, default=None, dest="n_repeats")

    p = sub.add_parser("width-sweep", help="mean SNR and aSNR/pSNR ratio "
                                           "vs peak width")
    _add_common(p)
    p.add_argument("--family", action="append", dest="families",
                   choices=("gaussian", "lorentzian", "voigt"))
    p.add_argument("--widths", type=parse_int_list, default=None,
                   dest="fwhm_bins", help="e.g. '1:50'")
    p.add_argument("--amplitudes", type=parse_float_list, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--n-mc", type=int, default=None, dest="n_mc")
    p.add_argument("--repeats", type=int, default=None, dest="n_repeats")

    p = sub.add_parser("roc", help="H0/H1 threshold sweep, TPR/FPR, AUC")
    _add_common(p)
    p.add_argument("--family", default=None,
                   choices=("gaussian", "lorentzian", "voigt"))
    p.add_argument("--fwhm-bins", type=int, default=None, dest="fwhm_bins")
    p.add_argument("--width-param", type=float, default=None,
                   dest="width_param",
                   help="family b parameter in axis units (overrides "
                        "--fwhm-bins)")
    p.add_argument("--amplitude", type=float, default=None)
    p.add_argument("--n-mc", type=int, default=None, dest="n_mc")
    p.add_argument("--repeats", type=int, default=None, dest="n_repeats")
    p.add_argument("--tau-min", type=float, default=None, dest="tau_min")
    p.add_argument("--tau-max", type=float, default=None, dest="tau_max")
    p.add_argument("--tau-step", type=float, default=None, dest="tau_step")
    p.add_argument("--one-sided", action="store_false", dest="two_sided",
                   default=None,
                   help="threshold the signed aSNR instead of |aSNR|")

    p = sub.add_parser("density", help="statistic density histograms under "
                                       "H0 and H1")
    _add_common(p)
    p.add_argument("--family", default=None,
                   choices=("gaussian", "lorentzian", "voigt"))
    p.add_argument("--fwhm-bins", type=int, default=None, dest="fwhm_bins")
    p.add_argument("--width-param", type=float, default=None,
                   dest="width_param")
    p.add_argument("--amplitude", type=float, default=None)
    p.add_argument("--bin-width", type=float, default=None, dest="bin_width")
    p.add_argument("--n-mc", type=int, default=None, dest="n_mc")

    p = sub.add_parser("sweep2d", help="2D width x amplitude mean pSNR/vSNR "
                                       "surfaces")
    _add_common(p)
    p.add_argument("--family", action="append", dest="families",
                   choices=("gaussian", "lorentzian", "voigt"))
    p.add_argument("--widths-px", type=parse_int_list, default=None,
                   dest="widths_px", help="e.g. '1:20'")
    p.add_argument("--amplitudes", type=parse_float_list, default=None)
    p.add_argument("--n-mc", type=int, default=None, dest="n_mc")
    p.add_argument("--repeats", type=int, default=None, dest="n_repeats")

    p = sub.add_parser("gamma-table", help="analytic improvement-factor "
                                           "coefficients")
    _add_common(p, grid=False)
    p.add_argument("--family", action="append", dest="families",
                   choices=("gaussian", "lorentzian", "voigt"))
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--b-over-dx", type=float, default=None, dest="b_over_dx")

    p = sub.add_parser("serve", help="run the experiment service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


_NON_PAYLOAD = {"command", "config", "out", "format", "server_url",
                "host", "port"}


def _build_payload(args: argparse.Namespace) -> dict[str, Any]:
    payload: dict[str, Any] = {}
    if args.config is not None:
        try:
            payload.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot read config file {args.config}: {exc}")
    for key, value in vars(args).items():
        if key in _NON_PAYLOAD or value is None:
            continue
        payload[key] = value
    return payload


def _post(path: str, payload: dict[str, Any],
          server_url: str | None) -> tuple[int, Any]:
    if server_url:
        with httpx.Client(base_url=server_url, timeout=None) as client:
            resp = client.post(path, json=payload)
            return resp.status_code, resp.json()

    from .service.app import create_app

    async def _run():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://asnr-lab.internal",
                                     timeout=None) as client:
            resp = await client.post(path, json=payload)
            return resp.status_code, resp.json()

    return asyncio.run(_run())


def _write_tables(body: dict[str, Any], experiment: str, out_dir: Path,
                  fmt: str) -> list[Path]:
    created_at = datetime.now(timezone.utc).isoformat()
    written = []
    for payload in body["tables"]:
        meta = dict(payload["meta"])
        meta["created_at"] = created_at
        meta["wall_time_s"] = body["wall_time_s"]
        table = ResultTable(name=payload["name"], columns=payload["columns"],
                            rows=payload["rows"], meta=meta)
        stem = meta.get("suggested_filename", payload["name"])
        path = out_dir / experiment / f"{stem}.{fmt}"
        written.append(emit_table(table, fmt, path))
        for warning in meta.get("warnings", []):
            print(f"warning: {warning}", file=sys.stderr)
    return written


def run_cli(argv: list[str] | None = None) -> int:
    """Parse arguments, run one experiment, write result files."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK

    path, schema = _ENDPOINTS[args.command]
    try:
        payload = _build_payload(args)
        request = schema.model_validate(payload)
    except (ValueError, ValidationError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        status, body = _post(path, request.model_dump(), args.server_url)
    except httpx.HTTPError as exc:
        print(f"error: service request failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    if status == 422:
        print(f"error: service rejected configuration: {body}",
              file=sys.stderr)
        return EXIT_CONFIG
    if status != 200:
        print(f"error: experiment failed ({status}): {body}", file=sys.stderr)
        return EXIT_NUMERIC

    written = _write_tables(body, args.command, args.out, args.format)
    for p in written:
        print(p)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    return run_cli(argv)


if __name__ == "__main__":
    sys.exit(main())
