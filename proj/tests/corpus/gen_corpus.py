#!/usr/bin/env python3
"""Regenerates trace.txt and truth.json for every corpus entry.

Run from the repo root with the bindings on PYTHONPATH and the stub lib
server up on 127.0.0.1:18126 (external-script needs it):

    python3 -m http.server 18126 --directory tests/stubs/webroot &
    PYTHONPATH=build/bindings python3 tests/corpus/gen_corpus.py

Truth statuses are assigned by function name; unnamed functions default
to alive (every anonymous function in this corpus runs during load).
"""
import json
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
CORPUS = os.path.join(ROOT, "tests", "corpus")
TOOL = os.path.join(ROOT, "build", "tools", "lacuna")
RUNNER = os.path.join(ROOT, "tools", "trace_runner.js")

sys.path.insert(0, os.path.join(ROOT, "build", "bindings"))
import lacuna

# name -> dead; anything unnamed or unlisted is alive
DEAD = {
    "direct-chain": {"unusedA", "unusedB"},
    "property-dispatch": {"drop"},
    "higher-order": {"triple"},
    "callbacks-timers": {"neverWired"},
    "nested-functions": {"makeLogger", "fmt", "write", "deadOuter", "deadInner"},
    "iife-init": {"legacy"},
    "class-methods": {"perimeter", "describe"},
    "event-wiring": {"onDrop"},
    "fp-computed": {"purge", "legacyExport", "legacyImport"},
    "fn-shared-field": {"adminRender", "oldShow", "formatLegacy"},
    "external-script": {"libraryDead", "unusedLocal"},
    "inline-html": {"farewell"},
}

# sanity: names that must exist in the listing even though they are alive
ALIVE_MUST = {
    "fp-computed": {"saveDraft"},
    "fn-shared-field": {"userRender"},
    "external-script": {"boot", "shared"},
}


def gen_entry(entry):
    app = os.path.join(CORPUS, entry, "app")
    disc = lacuna.discover(app)
    names = {}
    for fn in disc["functions"]:
        if fn["id"] == "<global>[0:0]":
            continue
        names[fn["id"]] = fn.get("name") or ""
    print(f"{entry}: {len(names)} functions")

    dead_names = DEAD[entry]
    listed = set(n for n in names.values() if n)
    missing = (dead_names | ALIVE_MUST.get(entry, set())) - listed
    if missing:
        raise SystemExit(f"{entry}: names not found in discovery: {missing} (have {listed})")

    truth = {"app": entry, "functions": []}
    for fid in sorted(names):
        status = "dead" if names[fid] in dead_names else "alive"
        truth["functions"].append({"id": fid, "status": status})
    with open(os.path.join(CORPUS, entry, "truth.json"), "w") as f:
        json.dump(truth, f, indent=2)
        f.write("\n")

    scratch = tempfile.mkdtemp(prefix="corpusgen-")
    try:
        instr = os.path.join(scratch, "instr")
        subprocess.run([TOOL, "instrument", "--app", app, "--out", instr],
                       check=True, capture_output=True, text=True)
        trace = os.path.join(CORPUS, entry, "trace.txt")
        if os.path.exists(trace):
            os.remove(trace)
        env = dict(os.environ, LACUNA_TRACE=trace, LACUNA_RUNNER_MAX_MS="400")
        r = subprocess.run(["node", RUNNER, instr], env=env,
                           capture_output=True, text=True, timeout=30)
        if r.returncode != 0:
            raise SystemExit(f"{entry}: runner failed\n{r.stderr}")
        with open(trace) as f:
            print("  trace lines:", sum(1 for _ in f))
    finally:
        shutil.rmtree(scratch, ignore_errors=True)


def main():
    entries = sorted(e for e in os.listdir(CORPUS)
                     if os.path.isdir(os.path.join(CORPUS, e, "app")))
    expect = set(DEAD)
    if set(entries) != expect:
        raise SystemExit(f"entry mismatch: {set(entries) ^ expect}")
    for e in entries:
        gen_entry(e)
    print("done")


if __name__ == "__main__":
    main()
