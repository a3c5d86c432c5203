"""
コマンドライン (Command-Line Entry Point)

すべての機能をサブコマンドとして束ね、結果を1つの証明書として標準出力に書きます。
診断とタイミングは標準エラー（logger）に出します。

終了コード:
- 0: pass / 成功（lab の inapplicable も 0）
- 1: 公理違反・検査の失敗（証明書に反例）
- 2: 使い方の誤り・不正な入力（JSON の位置情報つき）
"""

import argparse
import asyncio
import json
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import TypeAdapter, ValidationError

from schurlab.automorphisms import AffineAut, closure, orbit
from schurlab.certificates import (
    FAIL,
    PASS,
    build_certificate,
    build_error_certificate,
    canonical_json,
    render_table,
    to_plain,
)
from schurlab.config import DEFAULT_JOBS, DEFAULT_WINDOW, ENUM_MAX_N, TOOL_NAME, TOOL_VERSION
from schurlab.difference_sets import (
    ALL,
    NON_TRIVIAL_ONLY,
    enumerate_difference_sets,
    find_difference_partitions,
)
from schurlab.errors import AxiomViolation, InputError, SchurLabError
from schurlab.finite_cyclic import (
    FinitePartition,
    classify_traditional,
    enumerate_by_refinement,
    enumerate_schur_rings,
    identity_block_witness,
    verify_partition,
)
from schurlab.group_algebra import GroupContext
from schurlab.lab import CHECKS, default_requests, list_checks, run_checks
from schurlab.logger import setup_logger
from schurlab.oracles import Window, oracle_from_spec, verify_on_window
from schurlab.schemas import AutomorphismSpec, OracleSpec, PartitionSpec

logger = setup_logger(__name__)

# (verdict, result, 表形式の行)
Outcome = Tuple[str, Any, List[Dict[str, Any]]]


# --- 入力の読み込み (Input Loading) ---


def load_json(path: str) -> Any:
    """JSONファイルを読む。壊れたJSONは行・列つきの InputError にする。"""
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}", path=path) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(
            f"malformed JSON in {path}: {e.msg}", path=path, line=e.lineno, column=e.colno
        ) from e


def _parse_json_arg(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(
            f"malformed JSON in {what}: {e.msg}", argument=what, line=e.lineno, column=e.colno
        ) from e


def _validate(model, data: Any, source: str):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise InputError(
            f"{source} does not match the expected schema",
            source=source,
            errors=to_plain(e.errors(include_url=False, include_context=False)),
        ) from e


def _parse_element(text: str) -> Tuple[int, int]:
    parts = text.split(",")
    try:
        t, k = (int(x) for x in parts)
    except ValueError as e:
        raise InputError(f"element must be 't,k', got {text!r}", element=text) from e
    return t, k


# --- サブコマンド (Subcommands) ---


def cmd_verify_zn(args: argparse.Namespace) -> Outcome:
    spec = _validate(PartitionSpec, load_json(args.file), args.file)
    witness = identity_block_witness(spec.n, spec.classes)
    if witness is not None:
        raise AxiomViolation("i", "{0} is not a block", witness)
    partition = FinitePartition.from_classes(spec.n, spec.classes)
    table = verify_partition(partition)
    result = {"partition": partition.to_record(), "structure_constants": table.to_record()}
    rows = [
        {"C": c, "D": d, "E": e, "lambda": lam}
        for (c, d, e), lam in sorted(table.triples.items())
    ]
    return PASS, result, rows


def cmd_enum_zn(args: argparse.Namespace) -> Outcome:
    if args.method == "refinement":
        rings = enumerate_by_refinement(args.n)
    else:
        rings = enumerate_schur_rings(args.n, max_n=args.max_n)
    records = []
    for ring in rings:
        record: Dict[str, Any] = {"classes": ring.to_record()["classes"]}
        if args.classify:
            record["traditional"] = classify_traditional(ring).to_record()
        records.append(record)
    rows = [
        {
            "#": idx,
            "blocks": len(r["classes"]),
            "kind": r.get("traditional", {}).get("kind"),
            "classes": r["classes"],
        }
        for idx, r in enumerate(records)
    ]
    return PASS, {"n": args.n, "count": len(records), "rings": records}, rows


def cmd_classify_zn(args: argparse.Namespace) -> Outcome:
    spec = _validate(PartitionSpec, load_json(args.file), args.file)
    witness = identity_block_witness(spec.n, spec.classes)
    if witness is not None:
        raise AxiomViolation("i", "{0} is not a block", witness)
    partition = FinitePartition.from_classes(spec.n, spec.classes)
    verify_partition(partition)
    tag = classify_traditional(partition)
    verdict = FAIL if tag.kind == "non-traditional" else PASS
    rows = [{"kind": tag.kind, "witness": tag.witness}]
    return verdict, {"partition": partition.to_record(), "traditional": tag.to_record()}, rows


def cmd_orbit(args: argparse.Namespace) -> Outcome:
    ctx = GroupContext(args.n)
    raw = _parse_json_arg(args.generators, "--generators")
    try:
        specs = TypeAdapter(List[AutomorphismSpec]).validate_python(raw)
    except ValidationError as e:
        raise InputError(
            "generators must be a list of {eps, m, i} objects",
            errors=to_plain(e.errors(include_url=False, include_context=False)),
        ) from e
    H = closure([AffineAut(ctx, s.eps, s.m, s.i) for s in specs])
    t, k = _parse_element(args.element)
    members = orbit(H, ctx.element(t, k))
    result = {"subgroup": H.to_record(), "element": [t, k], "orbit": members.to_record()}
    rows = [{"t": g.t, "k": g.k} for g in members]
    return PASS, result, rows


def cmd_oracle_verify(args: argparse.Namespace) -> Outcome:
    spec = _validate(OracleSpec, load_json(args.file), args.file)
    o = oracle_from_spec(spec)
    table = verify_on_window(o, Window(args.window))
    result = {
        "oracle": spec.model_dump(exclude_none=True),
        "window": args.window,
        "structure_constants": table.to_record(),
    }
    rows = [
        {"C": c, "D": d, "E": e, "lambda": lam}
        for (c, d, e), lam in sorted(table.triples.items())
    ]
    return PASS, result, rows


def cmd_diffsets(args: argparse.Namespace) -> Outcome:
    sizes = [args.k] if args.k is not None else None
    certificates = enumerate_difference_sets(args.v, sizes)
    records = [c.to_record() for c in certificates]
    return PASS, {"v": args.v, "count": len(records), "difference_sets": records}, records


def cmd_diffpart(args: argparse.Namespace) -> Outcome:
    mode = NON_TRIVIAL_ONLY if args.non_trivial_only else ALL
    search = find_difference_partitions(args.v, mode)
    rows = [dp.to_record() for dp in search.partitions]
    return PASS, search.to_record(), rows


def cmd_lab(args: argparse.Namespace) -> Outcome:
    if args.list:
        checks = list_checks()
        return PASS, {"checks": checks}, checks
    if args.all:
        requests = default_requests()
    elif args.check:
        params: Dict[str, Any] = {
            "n": args.n,
            "p": args.p,
            "window": args.window,
            "bound": args.bound,
            "trials": args.trials,
            "seed": args.seed,
        }
        if args.file:
            params["spec"] = load_json(args.file)
        requests = [(args.check, _accepted(args.check, params))]
    else:
        raise InputError("lab needs --check NAME, --all or --list", available=sorted(CHECKS))
    reports = asyncio.run(run_checks(requests, args.jobs))
    verdict = FAIL if any(r.verdict == "fail" for r in reports) else PASS
    records = [r.model_dump() for r in reports]
    rows = [
        {"check": r.check, "verdict": r.verdict, "witnesses": len(r.witnesses), "notes": r.notes}
        for r in reports
    ]
    return verdict, {"reports": records}, rows


def _accepted(check: str, params: Dict[str, Any]) -> Dict[str, Any]:
    """検査関数が受け取らない（かつ指定された）フラグは使い方の誤りとする"""
    if check not in CHECKS:
        raise InputError(f"unknown check {check!r}", check=check, available=sorted(CHECKS))
    code = CHECKS[check].func.__code__
    accepted = set(code.co_varnames[: code.co_argcount])
    extra = sorted(k for k, v in params.items() if v is not None and k not in accepted)
    if extra:
        raise InputError(
            f"check {check!r} does not take {', '.join(extra)}",
            check=check,
            accepted=sorted(accepted),
        )
    return {k: v for k, v in params.items() if k in accepted}


COMMANDS: Dict[str, Callable[[argparse.Namespace], Outcome]] = {
    "verify-zn": cmd_verify_zn,
    "enum-zn": cmd_enum_zn,
    "classify-zn": cmd_classify_zn,
    "orbit": cmd_orbit,
    "oracle-verify": cmd_oracle_verify,
    "diffsets": cmd_diffsets,
    "diffpart": cmd_diffpart,
    "lab": cmd_lab,
}


# --- 引数定義 (Argument Parser) ---


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """使い方の誤りを例外にして、エラー証明書を出せるようにする"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog=TOOL_NAME,
        description="Schur rings over Z_n and Z×Z_n: verification, enumeration, theorem lab.",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    parser.add_argument(
        "--format", choices=("json", "table"), default="json", help="output format (default: json)"
    )
    parser.add_argument(
        "--jobs", type=int, default=DEFAULT_JOBS, help="worker processes for lab runs"
    )
    cmds = parser.add_subparsers(dest="command", title="subcommands", parser_class=_Parser)

    cmd = cmds.add_parser("verify-zn", help="verify a partition of Z_n against the axioms")
    cmd.add_argument("--file", required=True, metavar="path", help="partition JSON {n, classes}")

    cmd = cmds.add_parser("enum-zn", help="enumerate every Schur ring over Z_n")
    cmd.add_argument("--n", type=int, required=True)
    cmd.add_argument("--max-n", type=int, default=ENUM_MAX_N, help="enumeration budget")
    cmd.add_argument("--method", choices=("brute-force", "refinement"), default="brute-force")
    cmd.add_argument("--classify", action="store_true", help="attach the traditional tag")

    cmd = cmds.add_parser("classify-zn", help="classify a Schur ring over Z_n as traditional")
    cmd.add_argument("--file", required=True, metavar="path")

    cmd = cmds.add_parser("orbit", help="orbit of an element under a generated subgroup")
    cmd.add_argument("--n", type=int, required=True)
    cmd.add_argument(
        "--generators", required=True, metavar="json", help='e.g. \'[{"eps":-1,"m":1,"i":0}]\''
    )
    cmd.add_argument("--element", required=True, metavar="t,k")

    cmd = cmds.add_parser("oracle-verify", help="verify an oracle spec on a window")
    cmd.add_argument("--file", required=True, metavar="path", help="oracle spec JSON")
    cmd.add_argument("--window", type=int, default=DEFAULT_WINDOW)

    cmd = cmds.add_parser("diffsets", help="enumerate difference sets in Z_v")
    cmd.add_argument("--v", type=int, required=True)
    cmd.add_argument("--k", type=int, default=None)

    cmd = cmds.add_parser("diffpart", help="search difference partitions of Z_v")
    cmd.add_argument("--v", type=int, required=True)
    cmd.add_argument("--non-trivial-only", action="store_true")

    cmd = cmds.add_parser("lab", help="run theorem-lab checks")
    mode = cmd.add_mutually_exclusive_group()
    mode.add_argument("--check", metavar="name", choices=sorted(CHECKS))
    mode.add_argument("--all", action="store_true")
    mode.add_argument("--list", action="store_true")
    for flag in ("--n", "--p", "--window", "--bound", "--trials", "--seed"):
        cmd.add_argument(flag, type=int, default=None)
    cmd.add_argument("--file", metavar="path", help="oracle spec JSON for oracle checks")
    return parser


# --- 実行 (Run) ---


def _exit_code(verdict: str) -> int:
    return 1 if verdict == FAIL else 0


def _emit(document: Dict[str, Any], fmt: str, rows: Optional[Sequence[Dict[str, Any]]]) -> None:
    if fmt == "table" and rows is not None:
        print(f"{document['command']}: {document['verdict']}")
        print(render_table(rows))
    else:
        print(canonical_json(document))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        document = build_error_certificate(None, {}, InputError(f"usage: {e}"))
        print(canonical_json(document))
        return 2
    if args.command is None:
        parser.print_help(sys.stderr)
        print(canonical_json(build_error_certificate(None, {}, InputError("no subcommand given"))))
        return 2

    parameters = {
        k: v for k, v in vars(args).items() if k not in ("command", "format", "jobs") and v is not None
    }
    started = time.perf_counter()
    rows: Optional[List[Dict[str, Any]]] = None
    try:
        if args.jobs < 1:
            raise InputError(f"--jobs must be at least 1, got {args.jobs}", jobs=args.jobs)
        verdict, result, rows = COMMANDS[args.command](args)
        document = build_certificate(args.command, parameters, verdict, result)
        code = _exit_code(verdict)
    except AxiomViolation as e:
        logger.warning("⚠️ %s: axiom (%s) violated: %s", args.command, e.axiom, e.message)
        document = build_error_certificate(args.command, parameters, e)
        code = 1
    except SchurLabError as e:
        logger.error("❌ %s: %s", args.command, e.message)
        document = build_error_certificate(args.command, parameters, e)
        code = e.exit_code
    except Exception as e:
        logger.error("❌ %s: %s: %s", args.command, type(e).__name__, e, exc_info=True)
        document = build_error_certificate(args.command, parameters, e)
        code = 2
    elapsed = (time.perf_counter() - started) * 1000
    logger.info("⏱️ %s finished in %.1f ms (exit %d)", args.command, elapsed, code)
    _emit(document, args.format, rows)
    return code
