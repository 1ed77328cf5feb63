import io
import json

import pytest

from crem import cli
from crem.cart import CartCommand, ShippingCommand


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv(cli.ENV_FEEDBACK_CAP, raising=False)


def write_lines(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return str(path)


def test_list_prints_sorted_registry(capsys):
    assert cli.main(["list"]) == 0
    names = capsys.readouterr().out.splitlines()
    assert names == sorted(names)
    for required in ("cart", "whole-cart-domain", "cart-and-shipping"):
        assert required in names


def test_list_on_empty_registry(capsys):
    assert cli.main(["list"], registry={}) == 0
    assert capsys.readouterr().out == ""


def test_render_flow_dot_to_stdout(capsys):
    assert cli.main(["render", "whole-cart-domain", "--format", "dot", "--mode", "flow"]) == 0
    out = capsys.readouterr().out
    assert out.count("subgraph") == 3


def test_render_base_mermaid_has_initial_marker(capsys):
    assert cli.main(["render", "cart", "--format", "mermaid", "--mode", "base"]) == 0
    assert "[*] -->" in capsys.readouterr().out


def test_render_unknown_machine_exits_2(capsys):
    assert cli.main(["render", "nosuch"]) == 2
    assert "unknown machine" in capsys.readouterr().err


def test_render_base_mode_rejected_for_composed_machine(capsys):
    assert cli.main(["render", "whole-cart-domain", "--mode", "base"]) == 2
    assert "composed" in capsys.readouterr().err


def test_render_writes_output_file(tmp_path, capsys):
    out = tmp_path / "cart.dot"
    assert cli.main(["render", "cart", "--mode", "base", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text(encoding="utf-8").startswith('digraph "cart"')


def test_run_whole_cart_domain(tmp_path, capsys):
    commands = write_lines(tmp_path / "cmds.txt", ["PayCart"])
    assert cli.main(["run", "whole-cart-domain", "--input", commands]) == 0
    assert capsys.readouterr().out == "[PaymentInProgress, PaymentDone]\n"


def test_run_cart_and_shipping(tmp_path, capsys):
    commands = write_lines(tmp_path / "cmds.txt", ["cart PayCart"])
    assert cli.main(["run", "cart-and-shipping", "--input", commands]) == 0
    assert (
        capsys.readouterr().out
        == "[cart PaymentInProgress, cart PaymentDone, ship InTransit]\n"
    )


def test_run_empty_input(tmp_path, capsys):
    commands = write_lines(tmp_path / "cmds.txt", [])
    assert cli.main(["run", "cart", "--input", commands]) == 0
    assert capsys.readouterr().out == ""


def test_run_skips_blanks_and_comments(tmp_path, capsys):
    commands = write_lines(
        tmp_path / "cmds.txt", ["# warm-up", "", "PayCart", "   ", "MarkCartAsPaid"]
    )
    assert cli.main(["run", "cart", "--input", commands]) == 0
    assert capsys.readouterr().out == "[CartPaymentInitiated]\n[CartPaymentCompleted]\n"


def test_run_reads_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("PayCart\n"))
    assert cli.main(["run", "cart", "--input", "-"]) == 0
    assert capsys.readouterr().out == "[CartPaymentInitiated]\n"


def test_run_codec_error_reports_line(tmp_path, capsys):
    commands = write_lines(tmp_path / "cmds.txt", ["PayCart", "FooBar"])
    assert cli.main(["run", "cart", "--input", commands]) == 3
    err = capsys.readouterr().err
    assert "line 2" in err
    assert "FooBar" in err


def test_run_writes_event_log(tmp_path, capsys):
    commands = write_lines(tmp_path / "cmds.txt", ["PayCart", "MarkCartAsPaid"])
    log = tmp_path / "log.jsonl"
    assert cli.main(["run", "cart", "--input", commands, "--log", str(log)]) == 0
    records = [json.loads(line) for line in log.read_text(encoding="utf-8").splitlines()]
    assert records == [
        {"seq": 0, "input": "PayCart", "outputs": ["CartPaymentInitiated"]},
        {"seq": 1, "input": "MarkCartAsPaid", "outputs": ["CartPaymentCompleted"]},
    ]
    capsys.readouterr()


def test_run_appends_and_resumes_from_existing_log(tmp_path, capsys):
    first = write_lines(tmp_path / "first.txt", ["PayCart"])
    second = write_lines(tmp_path / "second.txt", ["MarkCartAsPaid"])
    log = tmp_path / "log.jsonl"
    assert cli.main(["run", "cart", "--input", first, "--log", str(log)]) == 0
    assert cli.main(["run", "cart", "--input", second, "--log", str(log)]) == 0
    out = capsys.readouterr().out
    # the second run resumed from the logged state: the cart was already
    # at InitiatingPayment, so MarkCartAsPaid completes the payment
    assert out.splitlines() == ["[CartPaymentInitiated]", "[CartPaymentCompleted]"]
    records = [json.loads(line) for line in log.read_text(encoding="utf-8").splitlines()]
    assert [r["seq"] for r in records] == [0, 1]
    assert cli.main(["replay", "cart", "--log", str(log)]) == 0


def test_run_rejects_feedback_cap_below_one(tmp_path, capsys):
    commands = write_lines(tmp_path / "cmds.txt", ["PayCart"])
    assert cli.main(["run", "cart", "--input", commands, "--feedback-cap", "0"]) == 2


def test_run_rejects_invalid_env_cap(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.ENV_FEEDBACK_CAP, "many")
    commands = write_lines(tmp_path / "cmds.txt", ["PayCart"])
    assert cli.main(["run", "cart", "--input", commands]) == 2
    assert cli.ENV_FEEDBACK_CAP in capsys.readouterr().err


def test_run_feedback_overflow_exit_code(tmp_path, capsys):
    commands = write_lines(tmp_path / "cmds.txt", ["PayCart"])
    assert (
        cli.main(["run", "whole-cart-domain", "--input", commands, "--feedback-cap", "2"])
        == 5
    )


def test_run_missing_input_file(tmp_path, capsys):
    assert cli.main(["run", "cart", "--input", str(tmp_path / "absent.txt")]) == 2


def test_replay_empty_log(tmp_path):
    log = tmp_path / "log.jsonl"
    log.write_text("", encoding="utf-8")
    assert cli.main(["replay", "cart", "--log", str(log)]) == 0


def test_replay_detects_corruption(tmp_path, capsys):
    commands = write_lines(tmp_path / "cmds.txt", ["PayCart", "PayCart", "MarkCartAsPaid"])
    log = tmp_path / "log.jsonl"
    assert cli.main(["run", "cart", "--input", commands, "--log", str(log)]) == 0
    records = [json.loads(line) for line in log.read_text(encoding="utf-8").splitlines()]
    records[1]["outputs"] = ["CartPaymentCompleted"]
    log.write_text(
        "".join(json.dumps(r, sort_keys=True) + "\n" for r in records), encoding="utf-8"
    )
    capsys.readouterr()
    assert cli.main(["replay", "cart", "--log", str(log)]) == 6
    out = capsys.readouterr().out
    assert "seq 1" in out
    assert "CartPaymentCompleted" in out  # logged list
    assert "[]" in out  # regenerated list


def test_replay_rejects_bad_json(tmp_path, capsys):
    log = tmp_path / "log.jsonl"
    log.write_text("not json\n", encoding="utf-8")
    assert cli.main(["replay", "cart", "--log", str(log)]) == 3


def test_replay_rejects_bad_seq(tmp_path, capsys):
    log = tmp_path / "log.jsonl"
    record = {"seq": 5, "input": "PayCart", "outputs": []}
    log.write_text(json.dumps(record) + "\n", encoding="utf-8")
    assert cli.main(["replay", "cart", "--log", str(log)]) == 3


def test_replay_rejects_wrong_schema(tmp_path, capsys):
    log = tmp_path / "log.jsonl"
    log.write_text(json.dumps({"seq": 0, "input": "PayCart"}) + "\n", encoding="utf-8")
    assert cli.main(["replay", "cart", "--log", str(log)]) == 3


def test_replay_unknown_machine(tmp_path, capsys):
    log = tmp_path / "log.jsonl"
    log.write_text("", encoding="utf-8")
    assert cli.main(["replay", "nosuch", "--log", str(log)]) == 2


def test_usage_error_exit_code(capsys):
    assert cli.main([]) == 2
    assert cli.main(["frobnicate"]) == 2


def test_run_maps_disallowed_transition_to_exit_4(tmp_path, capsys):
    from crem import Basic, BaseMachine, MachineState, StepResult, Topology

    topo = Topology((("a", ("b",)), ("b", ())))

    def jump_back(state, value):
        return StepResult([value], MachineState({"a": "b", "b": "a"}[state.vertex]))

    registry = {
        "flipflop": cli.RegistryEntry(
            lambda: Basic(BaseMachine("flipflop", topo, MachineState("a"), jump_back)),
            lambda text: text.strip(),
            lambda value: value,
            lambda value: value,
        )
    }
    commands = write_lines(tmp_path / "cmds.txt", ["x", "y"])
    assert cli.main(["run", "flipflop", "--input", commands], registry=registry) == 4
    assert "flipflop" in capsys.readouterr().err


@pytest.mark.parametrize(
    "machine,lines",
    [
        ("cart", [c.name for c in CartCommand]),
        ("whole-cart-domain", [c.name for c in CartCommand]),
        ("shipping", [c.name for c in ShippingCommand]),
        (
            "cart-and-shipping",
            [f"cart {c.name}" for c in CartCommand]
            + [f"ship {c.name}" for c in ShippingCommand],
        ),
    ],
)
def test_codec_round_trip_is_canonical(machine, lines):
    entry = cli.default_registry()[machine]
    for line in lines:
        assert entry.encode_input(entry.decode_input(line)) == line
        # decoding is forgiving about surrounding whitespace
        assert entry.encode_input(entry.decode_input(f"  {line}  ")) == line


def test_run_round_trip_for_every_registered_machine(tmp_path, capsys):
    inputs = {
        "cart": ["PayCart", "MarkCartAsPaid", "PayCart"],
        "shipping": ["StartShipping", "MarkAsDelivered"],
        "whole-cart-domain": ["PayCart", "MarkCartAsPaid"],
        "cart-and-shipping": ["cart PayCart", "ship MarkAsDelivered"],
    }
    for name, lines in inputs.items():
        commands = write_lines(tmp_path / f"{name}.txt", lines)
        log = tmp_path / f"{name}.jsonl"
        assert cli.main(["run", name, "--input", commands, "--log", str(log)]) == 0
        assert cli.main(["replay", name, "--log", str(log)]) == 0
    capsys.readouterr()


def test_run_output_is_deterministic(tmp_path, capsys):
    commands = write_lines(tmp_path / "cmds.txt", ["cart PayCart", "ship StartShipping"])
    assert cli.main(["run", "cart-and-shipping", "--input", commands]) == 0
    first = capsys.readouterr().out
    assert cli.main(["run", "cart-and-shipping", "--input", commands]) == 0
    assert capsys.readouterr().out == first
