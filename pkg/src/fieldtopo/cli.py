"""Command-line client for the analysis service.

The CLI only speaks HTTP: by default it mounts the service in-process
(ASGI transport, no socket), or targets a running server via --server.

Exit codes: 0 all checks pass, 1 some check did not pass, 2 usage or
validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx


def _make_client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # no server given: mount the service in-process and speak HTTP to it
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        from starlette.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app(), base_url="http://fieldtopo.internal")


def _canonical_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _cmd_list(args) -> int:
    with _make_client(args.server) as client:
        resp = client.get("/scenarios")
        resp.raise_for_status()
        for row in resp.json():
            print(f"{row['name']:24s} {row['description']}")
    return 0


def _cmd_analyze(args) -> int:
    path = Path(args.scenario)
    request: dict = {}
    if path.exists():
        try:
            request["scenario"] = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            print(f"error: cannot parse {path}: {exc}", file=sys.stderr)
            return 2
    else:
        request["name"] = args.scenario
    if args.seed is not None:
        request["seed"] = args.seed
    if args.refinement is not None:
        request["refinement"] = args.refinement

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with _make_client(args.server) as client:
        resp = client.post("/analyze", json=request)
        if resp.status_code == 400:
            print(f"error: {resp.json().get('detail', resp.text)}", file=sys.stderr)
            return 2
        if resp.status_code == 422:
            print(f"error: invalid request: {resp.text}", file=sys.stderr)
            return 2
        resp.raise_for_status()
        report = resp.json()

        report_path = out_dir / f"{report['scenario']}.report.json"
        report_path.write_text(_canonical_json(report))
        written = [report_path]

        if args.format in ("csv", "svg"):
            render = client.post(
                "/render", json={"report": report, "format": args.format}
            )
            render.raise_for_status()
            for fname, content in render.json()["files"].items():
                fpath = out_dir / fname
                fpath.write_text(content)
                written.append(fpath)

    for rep in report["reports"]:
        print(
            f"[{rep['verdict']:>9s}] {rep['condition']}: "
            f"expected {rep['expected']}, observed {rep['observed']}"
        )
    print(f"aggregate: {report['aggregate']}")
    for fpath in written:
        print(f"wrote {fpath}")
    return 0 if report["aggregate"] == "pass" else 1


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("fieldtopo.service.app:app", host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fieldtopo",
        description="Topological necessary-condition checks for control dynamics",
    )
    parser.add_argument(
        "--list-scenarios", action="store_true", help="list built-in scenarios and exit"
    )
    parser.add_argument("--server", default=None, help="URL of a running service")
    sub = parser.add_subparsers(dest="command")

    analyze = sub.add_parser("analyze", help="run a scenario file or built-in name")
    analyze.add_argument("scenario", help="path to a scenario JSON file or a built-in name")
    analyze.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    analyze.add_argument("--out", default=".", help="output directory for reports")
    analyze.add_argument(
        "--format", choices=("json", "csv", "svg"), default="json",
        help="additional rendering beside the JSON report",
    )
    analyze.add_argument(
        "--refinement", type=int, default=None,
        help="override the default mesh refinement of constructed spheres",
    )
    analyze.add_argument("--server", default=None, help="URL of a running service")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)
    try:
        if args.list_scenarios:
            return _cmd_list(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "serve":
            return _cmd_serve(args)
    except httpx.HTTPError as exc:
        print(f"error: service request failed: {exc}", file=sys.stderr)
        return 2
    parser.print_help()
    return 2


if __name__ == "__main__":
    sys.exit(main())
