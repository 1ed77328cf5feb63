"""Command line driver: list machines, render diagrams, run traces, replay logs.

Input files carry one encoded command per line; blank lines and ``#``
comments are skipped. With ``--log``, each processed input appends one
record to a JSONL event log, which ``replay`` later re-runs against a
fresh machine to verify that every logged output regenerates exactly.

Exit codes are part of the contract: 0 ok, 2 usage or unknown machine,
3 codec or log problems, 4 topology violation, 5 feedback overflow,
6 replay divergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from . import cart as cart_domain
from .cart import CartCommand, ShippingCommand
from .compose import Basic, FeedbackOverflow, Left, Right, RunConfig, StateMachine
from .machine import DisallowedTransition
from .render import render_base, render_flow

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CODEC = 3
EXIT_TOPOLOGY = 4
EXIT_FEEDBACK = 5
EXIT_DIVERGED = 6

ENV_FEEDBACK_CAP = "CREM_FEEDBACK_CAP"
DEFAULT_FEEDBACK_CAP = 1000


class CodecError(ValueError):
    """A line of input text could not be decoded for the chosen machine."""

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MalformedLog(ValueError):
    """An event log file violated the record schema."""


class _UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RegistryEntry:
    """A runnable machine: fresh-instance factory plus text codecs."""

    factory: Callable[[], StateMachine]
    decode_input: Callable[[str], Any]
    encode_input: Callable[[Any], str]
    encode_output: Callable[[Any], str]


def _enum_decoder(enum_cls):
    def decode(text: str):
        name = text.strip()
        try:
            return enum_cls[name]
        except KeyError:
            raise CodecError(f"{name!r} is not a {enum_cls.__name__}") from None

    return decode


def _encode_enum(value) -> str:
    return value.name


_SIDES = {"cart": (Left, CartCommand), "ship": (Right, ShippingCommand)}


def _decode_side(text: str):
    parts = text.split()
    if len(parts) != 2 or parts[0] not in _SIDES:
        raise CodecError(
            f"expected 'cart <CartCommand>' or 'ship <ShippingCommand>', got {text.strip()!r}"
        )
    wrapper, enum_cls = _SIDES[parts[0]]
    try:
        return wrapper(enum_cls[parts[1]])
    except KeyError:
        raise CodecError(f"{parts[1]!r} is not a {enum_cls.__name__}") from None


def _encode_side(value) -> str:
    if isinstance(value, Left):
        return f"cart {value.value.name}"
    if isinstance(value, Right):
        return f"ship {value.value.name}"
    raise CodecError(f"cannot encode {value!r}")


def default_registry() -> dict[str, RegistryEntry]:
    return {
        "cart": RegistryEntry(
            cart_domain.cart,
            _enum_decoder(CartCommand),
            _encode_enum,
            _encode_enum,
        ),
        "shipping": RegistryEntry(
            cart_domain.shipping,
            _enum_decoder(ShippingCommand),
            _encode_enum,
            _encode_enum,
        ),
        "whole-cart-domain": RegistryEntry(
            cart_domain.whole_cart_domain,
            _enum_decoder(CartCommand),
            _encode_enum,
            _encode_enum,
        ),
        "cart-and-shipping": RegistryEntry(
            cart_domain.cart_and_shipping,
            _decode_side,
            _encode_side,
            _encode_side,
        ),
    }


def _lookup(registry: Mapping[str, RegistryEntry], name: str) -> RegistryEntry:
    try:
        return registry[name]
    except KeyError:
        raise _UsageError(f"unknown machine {name!r}") from None


def _resolve_feedback_cap(flag: int | None) -> int:
    if flag is not None:
        cap = flag
    else:
        raw = os.environ.get(ENV_FEEDBACK_CAP)
        if raw is None:
            cap = DEFAULT_FEEDBACK_CAP
        else:
            try:
                cap = int(raw)
            except ValueError:
                raise _UsageError(
                    f"{ENV_FEEDBACK_CAP} must be an integer, got {raw!r}"
                ) from None
    if cap < 1:
        raise _UsageError("feedback cap must be at least 1")
    return cap


def _read_command_lines(source: str) -> list[tuple[int, str]]:
    if source == "-":
        raw = sys.stdin.read().splitlines()
    else:
        raw = Path(source).read_text(encoding="utf-8").splitlines()
    lines = []
    for number, text in enumerate(raw, start=1):
        stripped = text.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((number, text))
    return lines


def _load_log(path: Path) -> list[dict]:
    records = []
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as error:
        raise MalformedLog(f"cannot read log {path}: {error}") from error
    for number, text in enumerate(raw.splitlines(), start=1):
        try:
            record = json.loads(text)
        except json.JSONDecodeError as error:
            raise MalformedLog(f"line {number}: not valid JSON: {error}") from None
        if (
            not isinstance(record, dict)
            or set(record) != {"seq", "input", "outputs"}
            or not isinstance(record["seq"], int)
            or not isinstance(record["input"], str)
            or not isinstance(record["outputs"], list)
            or not all(isinstance(item, str) for item in record["outputs"])
        ):
            raise MalformedLog(f"line {number}: not a valid event record")
        if record["seq"] != len(records):
            raise MalformedLog(
                f"line {number}: expected seq {len(records)}, found {record['seq']}"
            )
        records.append(record)
    return records


def _cmd_list(args, registry) -> int:
    for name in sorted(registry):
        print(name)
    return EXIT_OK


def _cmd_render(args, registry) -> int:
    entry = _lookup(registry, args.machine)
    tree = entry.factory()
    if args.mode == "base":
        if not isinstance(tree, Basic):
            raise _UsageError(
                f"machine {args.machine!r} is composed; base mode works only "
                "for single machines (use --mode flow)"
            )
        diagram = render_base(tree.machine, args.format)
    else:
        diagram = render_flow(tree, args.format)
    if args.out is None:
        sys.stdout.write(diagram.text)
    else:
        Path(args.out).write_text(diagram.text, encoding="utf-8")
    return EXIT_OK


def _restore_from_log(machine: StateMachine, records, entry, config) -> StateMachine:
    """Re-run logged inputs so new records continue where the log left off."""
    for record in records:
        try:
            value = entry.decode_input(record["input"])
        except CodecError as error:
            raise MalformedLog(f"seq {record['seq']}: {error}") from error
        _, machine = machine.step(value, config)
    return machine


def _cmd_run(args, registry) -> int:
    entry = _lookup(registry, args.machine)
    config = RunConfig(feedback_cap=_resolve_feedback_cap(args.feedback_cap))
    machine = entry.factory()
    lines = _read_command_lines(args.input)

    seq = 0
    log_path = Path(args.log) if args.log else None
    if log_path is not None and log_path.exists() and log_path.stat().st_size > 0:
        previous = _load_log(log_path)
        machine = _restore_from_log(machine, previous, entry, config)
        seq = len(previous)

    log_handle = log_path.open("a", encoding="utf-8") if log_path else None
    try:
        for number, text in lines:
            try:
                value = entry.decode_input(text)
            except CodecError as error:
                raise CodecError(str(error), line=number) from None
            outputs, machine = machine.step(value, config)
            encoded = [entry.encode_output(item) for item in outputs]
            print(f"[{', '.join(encoded)}]")
            if log_handle is not None:
                record = {
                    "seq": seq,
                    "input": entry.encode_input(value),
                    "outputs": encoded,
                }
                log_handle.write(json.dumps(record, sort_keys=True) + "\n")
                log_handle.flush()
                seq += 1
    finally:
        if log_handle is not None:
            log_handle.close()
    return EXIT_OK


def _cmd_replay(args, registry) -> int:
    entry = _lookup(registry, args.machine)
    config = RunConfig(feedback_cap=_resolve_feedback_cap(None))
    records = _load_log(Path(args.log))
    machine = entry.factory()
    for record in records:
        try:
            value = entry.decode_input(record["input"])
        except CodecError as error:
            raise MalformedLog(f"seq {record['seq']}: {error}") from error
        outputs, machine = machine.step(value, config)
        encoded = [entry.encode_output(item) for item in outputs]
        if encoded != record["outputs"]:
            print(
                f"replay diverged at seq {record['seq']}: "
                f"logged {record['outputs']}, regenerated {encoded}"
            )
            return EXIT_DIVERGED
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crem",
        description="Run, render and replay composed state machines.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    list_parser = commands.add_parser("list", help="list registered machines")
    list_parser.set_defaults(handler=_cmd_list)

    render_parser = commands.add_parser("render", help="emit a diagram")
    render_parser.add_argument("machine")
    render_parser.add_argument("--format", choices=["dot", "mermaid"], default="dot")
    render_parser.add_argument("--mode", choices=["base", "flow"], default="flow")
    render_parser.add_argument("--out", default=None, help="output path (default stdout)")
    render_parser.set_defaults(handler=_cmd_render)

    run_parser = commands.add_parser("run", help="feed a command file to a machine")
    run_parser.add_argument("machine")
    run_parser.add_argument("--input", required=True, help="command file, or - for stdin")
    run_parser.add_argument("--log", default=None, help="append event records to this file")
    run_parser.add_argument("--feedback-cap", type=int, default=None)
    run_parser.set_defaults(handler=_cmd_run)

    replay_parser = commands.add_parser("replay", help="verify a log regenerates exactly")
    replay_parser.add_argument("machine")
    replay_parser.add_argument("--log", required=True)
    replay_parser.set_defaults(handler=_cmd_replay)

    return parser


def main(
    argv: Sequence[str] | None = None,
    registry: Mapping[str, RegistryEntry] | None = None,
) -> int:
    if registry is None:
        registry = default_registry()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args, registry)
    except _UsageError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE
    except CodecError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_CODEC
    except MalformedLog as error:
        print(f"error: malformed log: {error}", file=sys.stderr)
        return EXIT_CODEC
    except DisallowedTransition as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_TOPOLOGY
    except FeedbackOverflow as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_FEEDBACK
    except OSError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE


def script_main() -> None:
    raise SystemExit(main())
