"""Command line front end.

Runs in-process by default; ``--server URL`` sends the same request to a
running service instead.  Exit status: 0 certified, 2 certification failure,
1 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .nilpotent import format_matrix, parse_matrix_json
from .reports import Report, UsageError
from .sl2 import InternalConsistencyError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="unipinv", description="Exact invariants of unipotent matrices acting on free and relatively free algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", "--report", dest="format", choices=("text", "json"), default="text")
        sp.add_argument("--output", "-o", type=Path, help="write the report here instead of stdout")
        sp.add_argument("--server", metavar="URL", help="send the request to a running service")

    for name in ("jordan", "log", "exp"):
        sp = sub.add_parser(name)
        sp.add_argument("--matrix", type=Path, required=True)
        common(sp)

    for name in ("kernel", "module-constants"):
        sp = sub.add_parser(name)
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--weights", "--weights-y", dest="weights", type=_int_list, help="Jordan cell weights, e.g. '1 1' or 2")
        src.add_argument("--matrix", type=Path, help="JSON file with a nilpotent matrix")
        sp.add_argument("--max-degree", type=int)
        if name == "module-constants":
            sp.add_argument("--z-weights", "--weights-z", dest="z_weights", type=_int_list, required=True)
        common(sp)

    sp = sub.add_parser("relfree")
    sp.add_argument("--class", dest="nil_class", type=int, required=True)
    sp.add_argument("--vars", type=int, required=True)
    sp.add_argument("--delta", type=Path, required=True)
    sp.add_argument("--max-degree", type=int, default=6)
    common(sp)

    sp = sub.add_parser("trace")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--vars", type=int, required=True)
    sp.add_argument("--delta", type=Path, required=True)
    sp.add_argument("--max-degree", type=int, default=4)
    sp.add_argument("--word-length", type=int)
    common(sp)

    sp = sub.add_parser("verify")
    sp.add_argument("report_file", type=Path)
    common(sp)
    return p


def _load_json(path: Path):
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg}, line {exc.lineno})") from None


def _load_matrix(path: Path) -> dict:
    obj = _load_json(path)
    if isinstance(obj, dict) and "matrix" in obj and "entries" not in obj:
        obj = obj["matrix"]
    if isinstance(obj, list):
        obj = {"size": len(obj), "entries": obj}
    try:
        return format_matrix(parse_matrix_json(obj))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def build_request(args) -> dict:
    cmd = args.command
    if cmd in ("jordan", "log", "exp"):
        return {"matrix": _load_matrix(args.matrix)}
    if cmd in ("kernel", "module-constants"):
        req: dict = {"max_degree": args.max_degree}
        if args.weights is not None:
            req["weights"] = args.weights
        else:
            req["matrix"] = _load_matrix(args.matrix)
        if cmd == "module-constants":
            req["z_weights"] = args.z_weights
        return req
    if cmd == "relfree":
        return {"class": args.nil_class, "vars": args.vars, "delta": _load_matrix(args.delta), "max_degree": args.max_degree}
    if cmd == "trace":
        req = {"n": args.n, "vars": args.vars, "delta": _load_matrix(args.delta), "max_degree": args.max_degree}
        if args.word_length is not None:
            req["word_length"] = args.word_length
        return req
    return {"report": _load_json(args.report_file)}


def _remote(url: str, command: str, payload: dict) -> Report:
    import httpx

    try:
        resp = httpx.post(f"{url.rstrip('/')}/{command}", json=payload, timeout=None)
    except httpx.HTTPError as exc:
        raise UsageError(f"cannot reach {url}: {exc}") from None
    if resp.status_code == 422:
        detail = resp.json().get("detail")
        raise UsageError(detail if isinstance(detail, str) else json.dumps(detail))
    if resp.status_code != 200:
        raise InternalConsistencyError(f"service returned HTTP {resp.status_code}")
    body = resp.json()
    return Report(body["command"], body["report"], body["text"], body["certified"])


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "max_degree", None) is not None and args.max_degree < 1:
            raise UsageError("--max-degree must be at least 1")
        payload = build_request(args)
        if args.server:
            rep = _remote(args.server, args.command, payload)
        else:
            from .service import handle

            rep = handle(args.command, payload)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except ValueError as exc:
        # non-nilpotent / non-unipotent input and similar
        print(f"error: {exc}", file=stderr)
        return 1
    except InternalConsistencyError as exc:
        print(f"certification failure: {exc}", file=stderr)
        return 2
    out = rep.render(args.format)
    if args.output:
        args.output.write_text(out)
    else:
        stdout.write(out)
    return rep.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
