"""End-to-end checks of the rzlmi command line: exit codes, reports, pipelines."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
failures = []


def run(*args, stdin=None):
    proc = subprocess.run([BIN, *args, "-q"], input=stdin, capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + ("" if cond else f"  {detail}"))
    if not cond:
        failures.append(name)


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    code, out, _ = run("corpus", "emit", "circle")
    check("corpus emit circle", code == 0)
    circle = tmp / "circle.json"
    circle.write_text(out)
    doc = json.loads(out)
    check("emitted document is polynomial JSON", doc["vars"] == 2 and doc["name"] == "circle")

    code, out, _ = run("corpus", "list")
    check("corpus list", code == 0 and "vamos" in json.loads(out)["names"])

    code, out, _ = run("rz-check", "--poly", str(circle), "--point", "0,0", "--lines", "200", "--seed", "7")
    rep = json.loads(out)
    check("rz-check circle exits 0", code == 0)
    check("rz-check circle status", rep["status"] == "rz-confirmed-sampled")
    check("report echoes version and config", rep["version"] and rep["config"]["seed"] == 7)

    code, out, _ = run("corpus", "emit", "tv_screen")
    tv = tmp / "tv.json"
    tv.write_text(out)
    code, out, _ = run("rz-check", "--poly", str(tv))
    rep = json.loads(out)
    check("rz-check tv screen exits 1 with a witness line", code == 1 and "dir" in rep["verdict"]["witness"])

    code, out, _ = run("construct", "--poly", str(circle), "--point", "0,0", "--mode", "exact")
    rep = json.loads(out)
    check("construct circle exits 0", code == 0)
    a0 = rep["pencil"]["matrices"][0]
    check("construct circle A0 = I", a0["re"] == [["1", "0"], ["0", "1"]] and a0["im"] == [["0", "0"], ["0", "0"]])
    check("construct trace carries the divisor", rep["trace"]["divisor"]["degree"] == 2)

    bad = json.loads(circle.read_text())["pencil"]
    for m in bad["matrices"]:
        m["re"] = [[str(-int(x)) if x != "0" else "0" for x in row] for row in m["re"]]
    badf = tmp / "bad.json"
    badf.write_text(json.dumps(bad))
    code, out, _ = run("verify", "--pencil", str(badf), "--poly", str(circle), "--point", "0,0")
    rep = json.loads(out)
    base = rep["checks"][0]
    check("verify sign-flipped pencil exits 1", code == 1)
    check("basepoint witness present", base["check"] == "basepoint-definite" and "witness" in base)

    emit = subprocess.run([BIN, "corpus", "emit", "circle", "-q"], capture_output=True, text=True).stdout
    built = subprocess.run([BIN, "construct", "--poly", "-", "-q"], input=emit, capture_output=True, text=True)
    ver = subprocess.run([BIN, "verify", "--pencil", "-", "-q"], input=built.stdout, capture_output=True, text=True)
    check("corpus emit | construct | verify passes", built.returncode == 0 and ver.returncode == 0,
          ver.stderr)
    check("pipeline h = 1", json.loads(ver.stdout)["h"]["terms"] == [{"exp": [0, 0], "re": "1"}])

    code, out, _ = run("corpus", "emit", "random_rz:3:2:float")
    r3 = tmp / "r3.json"
    r3.write_text(out)
    code, built, _ = run("construct", "--poly", str(r3))
    check("construct float cubic", code == 0)
    b3 = tmp / "b3.json"
    b3.write_text(built)
    code, out, _ = run("verify", "--pencil", str(b3))
    check("verify float cubic", code == 0)
    code, out, _ = run("cross-check", "--pencil", str(b3), "--lines", "60")
    check("cross-check constructed cubic", code == 0 and json.loads(out)["checks"][0]["extra"]["basepoint"]
          == "positive-definite")
    code, out, _ = run("cross-check", "--pencil", str(b3), "--cofactor", "9")
    check("cross-check cofactor out of range exits 3", code == 3)

    code, out, _ = run("realify", "--pencil", str(circle))
    rep = json.loads(out)
    check("realify doubles the size", code == 0 and rep["pencil"]["n"] == 4 and rep["pencil"]["class"] == "real-symmetric")

    code, out, _ = run("hermite", "--poly", str(circle))
    rep = json.loads(out)
    check("hermite circle passes", code == 0 and rep["m"] == 2)
    code, out, _ = run("renegar", "--poly", str(circle), "--order", "1")
    rep = json.loads(out)
    check("renegar first derivative of the circle is 2", code == 0 and
          rep["derivatives"][0]["poly"]["terms"] == [{"exp": [0, 0], "re": "2"}])
    code, _, _ = run("member", "--poly", str(circle), "--x", "1/2,1/2")
    check("member inside exits 0", code == 0)
    code, _, _ = run("member", "--poly", str(circle), "--x", "1,1")
    check("member outside exits 1", code == 1)
    code, out, _ = run("interlace", "--poly", str(r3))
    rep = json.loads(out)
    check("interlace derivative passes and both tests agree", code == 0 and rep["agree"])

    first = run("construct", "--poly", str(r3), "--threads", "1")[1]
    second = run("construct", "--poly", str(r3), "--threads", "3")[1]
    check("identical configs give identical bytes", first == second)

    mal = tmp / "mal.txt"
    mal.write_text("1 - x1^2 + * x2\n")
    proc = subprocess.run([BIN, "rz-check", "--poly", str(mal)], capture_output=True, text=True)
    code, err = proc.returncode, proc.stderr
    check("malformed polynomial exits 3 with a position", code == 3 and "1:" in err, err)
    dup = tmp / "dup.json"
    dup.write_text('{"vars": 2, "terms": [{"exp": [0, 0], "re": "1"}, {"exp": [0, 0], "re": "2"}]}')
    code, _, _ = run("rz-check", "--poly", str(dup))
    check("duplicate exponents exit 3", code == 3)
    code, _, _ = run("rz-check")
    check("missing --poly exits 3", code == 3)
    code, _, _ = run("corpus", "emit", "nonsense")
    check("unknown corpus name exits 3", code == 3)
    code, out, _ = run("construct", "--poly", str(tv))
    check("construct on a non-RZ polynomial exits 1", code == 1 and json.loads(out)["error"]["stage"] == "rz-precondition")

sys.exit(1 if failures else 0)
