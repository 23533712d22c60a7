#!/usr/bin/env python3
"""End-to-end exercises of the spanstream CLI: exit codes, report JSON,
stream/spanner files, bench CSV."""

import json
import os
import subprocess
import sys
import tempfile

CLI = sys.argv[1]
FAILURES = []


def run(*args, env=None, expect=0):
    e = dict(os.environ)
    if env:
        e.update(env)
    r = subprocess.run([CLI] + list(args), capture_output=True, text=True,
                       env=e, timeout=300)
    if r.returncode != expect:
        FAILURES.append(f"{args}: exit {r.returncode} (wanted {expect})\n"
                        f"stderr: {r.stderr[:500]}")
    return r


def check(cond, msg):
    if not cond:
        FAILURES.append(msg)


def main():
    tmp = tempfile.mkdtemp(prefix="spanstream_cli_")

    # hand-built C_50 stream
    c50 = os.path.join(tmp, "c50.stream")
    with open(c50, "w") as f:
        f.write("n 50\n")
        for v in range(49):
            f.write(f"+ {v} {v + 1}\n")
        f.write("+ 0 49\n")

    # bs k=2 on a cycle: the only 3-spanner of a cycle is the cycle
    r = run("run", "--stream", c50, "--algo", "bs", "--k", "2",
            "--seed", "7")
    rep = json.loads(r.stdout)
    check(rep["passes"] == 2, f"bs passes {rep['passes']} != 2")
    check(rep["max_stretch"] == 1, f"bs stretch {rep['max_stretch']} != 1")
    check(rep["verified"] is True, "bs run not verified")
    check(rep["spanner_edges"] == 50, "bs spanner is not the cycle")

    # gen + run + verify round trip
    stream = os.path.join(tmp, "g.stream")
    r = run("gen", "--family", "gnp", "--n", "64", "--p", "0.15",
            "--seed", "3", "--deletion-ratio", "0.25", "--out", stream)
    check(os.path.exists(stream), "gen wrote no stream file")

    spanner = os.path.join(tmp, "h.graph")
    report = os.path.join(tmp, "h.report.json")
    r = run("run", "--stream", stream, "--algo", "kw", "--k", "3",
            "--seed", "9", "--spanner-out", spanner)
    with open(report, "w") as f:
        f.write(r.stdout)
    rep = json.loads(r.stdout)
    check(rep["passes"] == 2, f"kw passes {rep['passes']} != 2")
    check(rep["max_stretch"] <= 7, f"kw stretch {rep['max_stretch']} > 7")

    r = run("verify", "--stream", stream, "--spanner", spanner,
            "--report", report)
    ver = json.loads(r.stdout)
    check(ver["verified"] is True, "verify rejected a good spanner")
    check(ver["max_stretch"] == rep["max_stretch"],
          "verify recomputed a different stretch")

    # spanner with a phantom edge: subgraph violation, exit 2
    bad = os.path.join(tmp, "bad.graph")
    with open(spanner) as f:
        lines = f.read().splitlines()
    present = {tuple(sorted(map(int, l.split()))) for l in lines[1:] if l}
    phantom = None
    for u in range(64):
        for v in range(u + 1, 64):
            if (u, v) not in present:
                phantom = (u, v)
                break
        if phantom:
            break
    with open(bad, "w") as f:
        f.write("\n".join(lines) + f"\n{phantom[0]} {phantom[1]}\n")
    run("verify", "--stream", stream, "--spanner", bad, expect=2)

    # declared bound from the closed form
    r = run("run", "--stream", stream, "--algo", "recursive-kw",
            "--k", "7", "--g", "1", "--seed", "5")
    rep = json.loads(r.stdout)
    check(rep["declared_bound"] == 29,
          f"recursive-kw declared {rep['declared_bound']} != 29")
    check(rep["passes"] == 2, f"recursive-kw passes {rep['passes']} != 2")

    # same seed twice: byte-identical report modulo wall_ms
    a = json.loads(run("run", "--stream", stream, "--algo", "tradeoff",
                       "--alpha", "0.5", "--seed", "11").stdout)
    b = json.loads(run("run", "--stream", stream, "--algo", "tradeoff",
                       "--alpha", "0.5", "--seed", "11").stdout)
    a["wall_ms"] = b["wall_ms"] = 0
    check(a == b, "same-seed reports differ beyond wall_ms")

    # STREAMSPAN_SEED env default
    c = json.loads(run("run", "--stream", stream, "--algo", "tradeoff",
                       "--alpha", "0.5",
                       env={"STREAMSPAN_SEED": "11"}).stdout)
    c["wall_ms"] = 0
    check(a == c, "STREAMSPAN_SEED did not act as the default seed")

    # bench CSV shape
    r = run("bench", "--algo", "bs", "--k", "2", "--family", "gnp",
            "--n", "32", "--n", "48", "--seeds", "2", "--seed", "1")
    rows = r.stdout.strip().splitlines()
    header = ("algo,family,n,m,k,g,alpha,t,rounds,seed,passes,spanner_edges,"
              "max_stretch,declared_bound,peak_words,"
              "max_bits_per_player_per_round,verified,wall_ms")
    check(rows[0] == header, f"bench header mismatch: {rows[0]}")
    check(len(rows) == 5, f"bench row count {len(rows) - 1} != 4")
    for row in rows[1:]:
        check(len(row.split(",")) == len(header.split(",")),
              "bench row arity mismatch")

    # parameter errors exit 2
    run("run", "--stream", stream, "--algo", "nope", expect=2)
    run("run", "--stream", os.path.join(tmp, "missing.stream"),
        "--algo", "bs", expect=2)
    run("gen", "--family", "cut-bad", "--n", "2",
        "--out", os.path.join(tmp, "x.stream"), expect=2)

    if FAILURES:
        print("CLI TEST FAILURES:")
        for f in FAILURES:
            print(" -", f)
        sys.exit(1)
    print("cli: all checks passed")


if __name__ == "__main__":
    main()
