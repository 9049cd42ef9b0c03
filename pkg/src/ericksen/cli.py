"""Thin command-line client for the service endpoints.

By default the CLI talks to the FastAPI app in-process (no server needed);
pass --server to point it at a running instance instead.  Exit codes:
0 success, 1 configuration/validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _client(server):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _load_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        print(f"error: config file not found: {p}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as e:
        print(f"error: malformed JSON in {p}: {e}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _apply_overrides(cfg: dict, args) -> dict:
    if args.seed is not None:
        cfg["seed"] = args.seed
    return cfg


def _validate_config(cfg: dict) -> None:
    from pydantic import ValidationError

    from .experiments.config import ExperimentConfig

    try:
        ExperimentConfig.model_validate(cfg)
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(p) for p in first["loc"])
        print(f"error: config key '{loc}': {first['msg']}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _post(client, path, payload):
    resp = client.post(path, json=payload)
    if resp.status_code == 422:
        detail = resp.json().get("detail", resp.text)
        print(f"error: {detail}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)
    if resp.status_code >= 500:
        print(f"numerical failure: {resp.text}", file=sys.stderr)
        raise SystemExit(EXIT_NUMERICAL)
    resp.raise_for_status()
    return resp.json()


def _print_rows(rows) -> None:
    if not rows:
        return
    cols = ["case_tag", "eps", "eps_times_total", "surface_estimate",
            "mean_cos2", "mean_sin2", "deficit", "asymmetry", "converged"]
    print("  ".join(f"{c:>16s}" for c in cols))
    for r in rows:
        cells = []
        for c in cols:
            v = r.get(c)
            if isinstance(v, float):
                cells.append(f"{v:16.6g}")
            else:
                cells.append(f"{str(v) if v is not None else '':>16s}")
        print("  ".join(cells))


def _run_sweep_like(args, endpoint: str) -> int:
    cfg = _apply_overrides(_load_config(args.config), args)
    _validate_config(cfg)
    with _client(args.server) as client:
        data = _post(client, endpoint, {
            "config": cfg, "out_dir": args.out, "threads": args.threads,
        })
    _print_rows(data["rows"])
    print(f"wrote {data['csv_path']} and {data['summary_path']}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="ericksen", description=__doc__)
    parser.add_argument("--server", default=None, help="base URL of a running service; in-process if omitted")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_out=True):
        p.add_argument("--config", required=True, help="JSON experiment config")
        if needs_out:
            p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=None)

    for name in ("sweep", "droplet", "anchoring"):
        add_common(sub.add_parser(name))
    add_common(sub.add_parser("reference-d", help="sharp-interface director minimization"), needs_out=False)
    add_common(sub.add_parser("validate-constants"), needs_out=False)
    orbit_p = sub.add_parser("orbit")
    orbit_p.add_argument("--config", required=True)
    orbit_p.add_argument("--out", default="out")
    orbit_p.add_argument("--eps", type=float, default=None)
    orbit_p.add_argument("--gamma", type=float, default=0.55)
    orbit_p.add_argument("--threads", type=int, default=1)
    orbit_p.add_argument("--seed", type=int, default=None)

    args = parser.parse_args(argv)

    if args.command in ("sweep", "droplet", "anchoring"):
        endpoint = {"sweep": "/sweep", "droplet": "/droplet", "anchoring": "/anchoring"}[args.command]
        return _run_sweep_like(args, endpoint)

    if args.command == "validate-constants":
        cfg = _load_config(args.config)
        _validate_config(cfg)
        payload = {"constants": cfg.get("constants", {}), "case": cfg.get("case")}
        with _client(args.server) as client:
            data = _post(client, "/validate-constants", payload)
        if not data["accepted"]:
            print(f"rejected: {data['violated']}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"accepted: case {data['case']}, "
              f"lambda={data['coercivity_lambda']:.6g}, Lambda={data['coercivity_Lambda']:.6g}")
        return EXIT_OK

    if args.command == "reference-d":
        cfg = _apply_overrides(_load_config(args.config), args)
        _validate_config(cfg)
        with _client(args.server) as client:
            data = _post(client, "/reference-d", {"config": cfg})
        print(f"D = {data['d_value']:.8g}  (alpha term {data['alpha_term']:.8g}, "
              f"frank term {data['frank_term']:.8g}, scatter {data['restart_scatter']:.3g})")
        return EXIT_OK

    if args.command == "orbit":
        cfg = _load_config(args.config)
        payload = {
            "potential": cfg.get("potential", {}),
            "beta": cfg.get("constants", {}).get("beta", 1.0),
            "out_dir": args.out,
        }
        if args.eps is not None:
            payload["eps"] = args.eps
            payload["gamma"] = args.gamma
        with _client(args.server) as client:
            data = _post(client, "/orbit", payload)
        print(f"alpha0 = {data['alpha0']:.9g}, orbit energy = {data['orbit_energy']:.9g}, "
              f"equipartition defect = {data['equipartition_defect']:.3g}")
        if data.get("truncated"):
            t = data["truncated"]
            print(f"truncated eps={t['eps']:g} gamma={t['gamma']:g}: "
                  f"excess = {t['excess']:.3g}, defect = {t['defect']:.3g}")
        if data.get("csv_path"):
            print(f"wrote {data['csv_path']}")
        return EXIT_OK

    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
