import json
import os
import signal
import socket
import subprocess
import sys
import time
import urllib.request
from importlib import resources

MODELS = resources.files("bddlqbf").joinpath("models")


def model(name):
    return str(MODELS.joinpath(name))


def run_cli(*args, stdin=None, timeout=120):
    return subprocess.run(
        [sys.executable, "-m", "bddlqbf.cli", *args],
        input=stdin,
        capture_output=True,
        text=True,
        timeout=timeout,
    )


def test_check_clean_model_exits_zero():
    r = run_cli("check", model("positional.domain"), model("tic-5x4.problem"))
    assert r.returncode == 0
    assert "sanity: pass" in r.stdout


def test_check_syntax_error_exits_two_with_position(tmp_path):
    bad = tmp_path / "bad.domain"
    bad.write_text("#blackactions\n:action a\n:parameters (?x ?y)\n")
    r = run_cli("check", str(bad), model("tic-5x4.problem"))
    assert r.returncode == 2
    assert "3:" in r.stderr  # line of the broken parameter list


def test_check_sanity_violation_exits_two(tmp_path):
    won = tmp_path / "won.problem"
    won.write_text(
        "#boardsize\n5 4\n#init\n(black(1,1)black(1,2)black(1,3))\n#depth\n5\n"
        "#blackgoals\n(black(?x,?y)black(?x,?y+1)black(?x,?y+2))\n#whitegoals\n"
    )
    r = run_cli("check", model("positional.domain"), str(won))
    assert r.returncode == 2
    assert "violation" in r.stdout


def test_usage_error_exits_one():
    r = run_cli("scan", model("positional.domain"), model("tic-5x4.problem"), "--dmin", "3")
    assert r.returncode == 1
    r = run_cli("oracle", model("positional.domain"))
    assert r.returncode == 1
    r = run_cli("oracle", "/no/such/file", model("tic-5x4.problem"))
    assert r.returncode == 1


def test_encode_qcir_to_file_round_trips(tmp_path):
    out = tmp_path / "tic.qcir"
    r = run_cli(
        "encode", model("positional.domain"), model("tic-5x4.problem"), "--out", str(out)
    )
    assert r.returncode == 0
    assert "variables=" in r.stdout and "gates=" in r.stdout
    text = out.read_text()
    assert text.startswith("#QCIR-G14")

    sys.path.insert(0, os.path.dirname(__file__))
    from qbfeval import parse_qcir

    reparsed = parse_qcir(text)
    assert reparsed.output is not None


def test_encode_qdimacs_counts(tmp_path):
    out = tmp_path / "tic.qdimacs"
    r = run_cli(
        "encode",
        model("positional.domain"),
        model("tic-5x4.problem"),
        "--format",
        "qdimacs",
        "--out",
        str(out),
        "--json",
    )
    assert r.returncode == 0
    payload = json.loads(r.stdout)
    header = out.read_text().splitlines()[0].split()
    assert payload["variables"] == int(header[2])
    assert payload["clauses"] == int(header[3])


def test_encode_rejects_depth_zero():
    r = run_cli(
        "encode", model("positional.domain"), model("tic-5x4.problem"), "--depth", "0"
    )
    assert r.returncode == 1


def test_oracle_reports_win_and_loss():
    r = run_cli("oracle", model("connectc.domain"), model("connect2-2x2.problem"))
    assert r.returncode == 0 and "Black wins" in r.stdout and "principal move" in r.stdout
    r = run_cli("oracle", model("connectc.domain"), model("connect3-3x3.problem"), "--json")
    assert r.returncode == 0
    assert json.loads(r.stdout)["blackWins"] is False


def test_oracle_domineering_4x4():
    r = run_cli("oracle", model("domineering.domain"), model("domineering-4x4.problem"))
    assert r.returncode == 0 and "Black wins" in r.stdout


def test_solve_without_solver_exits_three():
    env = {k: v for k, v in os.environ.items() if not k.startswith("BDDLQBF_")}
    r = subprocess.run(
        [sys.executable, "-m", "bddlqbf.cli", "solve", model("positional.domain"),
         model("tic-5x4.problem")],
        capture_output=True,
        text=True,
        env=env,
    )
    assert r.returncode == 3


def test_solve_with_stub_solver(tmp_path):
    exe = tmp_path / "stub"
    exe.write_text("#!/bin/sh\nexit 10\n")
    exe.chmod(0o755)
    r = run_cli(
        "solve", model("positional.domain"), model("positional-1x1.problem"),
        "--solver", str(exe),
    )
    assert r.returncode == 0 and "true" in r.stdout


def test_scan_with_oracle():
    r = run_cli(
        "scan", model("domineering.domain"), model("domineering-3x2.problem"),
        "--dmin", "2", "--dmax", "6", "--use-oracle", "--json",
    )
    assert r.returncode == 0
    assert json.loads(r.stdout)["criticalDepth"] == 2


def test_play_terminal_full_session():
    # white answers until the session ends; quit guards against runaway loops
    moves = "\n".join(["occupy 1 1", "occupy 5 1", "occupy 3 3", "quit", ""])
    r = run_cli(
        "play", model("positional.domain"), model("tic-5x4.problem"),
        stdin=moves,
    )
    assert r.returncode == 0
    assert "legal white moves" in r.stdout
    assert "verdict" in r.stdout or "abandon" in r.stdout or "quit" not in r.stdout


def test_play_refusal_message():
    r = run_cli("play", model("connectc.domain"), model("connect3-3x3.problem"), stdin="")
    assert r.returncode == 0
    assert "refused" in r.stdout


def test_play_rejects_malformed_then_continues():
    moves = "\n".join(["bogus 1", "occupy 99 1", "quit", ""])
    r = run_cli(
        "play", model("positional.domain"), model("tic-5x4.problem"), stdin=moves
    )
    assert r.returncode == 0
    assert "enter: <action-name> <x> <y>" in r.stdout
    assert "rejected" in r.stdout


def test_serve_lifecycle():
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    proc = subprocess.Popen(
        [sys.executable, "-m", "bddlqbf.cli", "serve", "--port", str(port)],
        stdout=subprocess.PIPE,
        stderr=subprocess.STDOUT,
    )
    try:
        deadline = time.time() + 30
        body = None
        while time.time() < deadline:
            try:
                with urllib.request.urlopen(f"http://127.0.0.1:{port}/models", timeout=1) as resp:
                    body = json.load(resp)
                break
            except OSError:
                time.sleep(0.3)
        assert body and "tic-5x4" in body["models"]
        req = urllib.request.Request(
            f"http://127.0.0.1:{port}/sessions",
            data=json.dumps({"model": "domineering-2x2"}).encode(),
            headers={"Content-Type": "application/json"},
        )
        with urllib.request.urlopen(req, timeout=5) as resp:
            view = json.load(resp)
        assert view["status"] == "finished" and view["valid"] is True
    finally:
        proc.send_signal(signal.SIGINT)
        try:
            proc.wait(timeout=10)
        except subprocess.TimeoutExpired:
            proc.kill()
