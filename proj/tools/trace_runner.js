#!/usr/bin/env node
// Runs an instrumented app copy and writes the recorded call trace.
//
//   node trace_runner.js <instrumented-app-root> <trace-file>
//
// Script groups come from _lacuna_manifest.json (one group per HTML document
// plus "<orphans>" for standalone scripts); each group executes in a fresh VM
// context, the way sibling pages get fresh windows. Without a manifest every
// .js file runs in one shared context.
//
// Environment:
//   LACUNA_TRACE          overrides the trace output path
//   LACUNA_INVOKE         "globals" additionally calls every global function
//                         with no arguments after load (default: load only)
//   LACUNA_RUNNER_MAX_MS  wall-clock budget for app timers (default 10000)

"use strict";

const fs = require("fs");
const path = require("path");
const vm = require("vm");

const root = process.argv[2];
const traceOut = process.env.LACUNA_TRACE || process.argv[3];
if (!root || !traceOut) {
  process.stderr.write("usage: trace_runner.js <instrumented-app-root> <trace-file>\n");
  process.exit(1);
}
const maxMs = Number(process.env.LACUNA_RUNNER_MAX_MS || 10000);
const errConsole = new console.Console(process.stderr, process.stderr);

function loadGroups() {
  const manifestPath = path.join(root, "_lacuna_manifest.json");
  if (fs.existsSync(manifestPath)) {
    return JSON.parse(fs.readFileSync(manifestPath, "utf8")).groups || [];
  }
  const scripts = [];
  (function scan(dir) {
    for (const entry of fs.readdirSync(dir, { withFileTypes: true })) {
      const p = path.join(dir, entry.name);
      if (entry.isDirectory()) scan(p);
      else if (entry.name.endsWith(".js")) scripts.push(path.relative(root, p));
    }
  })(root);
  scripts.sort();
  return [{ name: "<all>", scripts }];
}

function stubDocument() {
  const node = () => ({
    addEventListener() {},
    appendChild() {},
    setAttribute() {},
    style: {},
    classList: { add() {}, remove() {}, toggle() {} },
  });
  return {
    addEventListener() {},
    removeEventListener() {},
    getElementById: () => null,
    querySelector: () => null,
    querySelectorAll: () => [],
    createElement: node,
    body: node(),
    head: node(),
  };
}

const contexts = [];

function runGroup(group) {
  const sandbox = {
    console: errConsole,
    setTimeout,
    setInterval,
    clearTimeout,
    clearInterval,
    queueMicrotask,
    document: stubDocument(),
    fetch: () => Promise.resolve({ text: async () => "", json: async () => ({}) }),
  };
  sandbox.window = sandbox;
  sandbox.global = sandbox;
  const ctx = vm.createContext(sandbox);
  contexts.push(ctx);

  for (const rel of group.scripts) {
    const file = path.join(root, rel);
    let code;
    try {
      code = fs.readFileSync(file, "utf8");
    } catch (e) {
      errConsole.error(`trace_runner: cannot read ${rel}: ${e.message}`);
      continue;
    }
    try {
      vm.runInContext(code, ctx, { filename: rel });
    } catch (e) {
      errConsole.error(`trace_runner: ${group.name}/${rel} threw: ${e && e.message}`);
    }
  }

  if (process.env.LACUNA_INVOKE === "globals") {
    for (const key of Object.keys(sandbox)) {
      if (key === "window" || key === "global" || key === "__lacuna__") continue;
      const value = sandbox[key];
      if (typeof value !== "function") continue;
      try {
        value();
      } catch (e) {
        /* exploratory call, failures expected */
      }
    }
  }
}

let written = false;
function writeTrace() {
  if (written) return;
  written = true;
  const lines = new Set();
  for (const ctx of contexts) {
    const probe = ctx.__lacuna__;
    if (!probe || typeof probe.text !== "function") continue;
    for (const line of probe.text().split("\n")) {
      if (line) lines.add(line);
    }
  }
  fs.mkdirSync(path.dirname(traceOut), { recursive: true });
  fs.writeFileSync(traceOut, [...lines].map((l) => l + "\n").join(""));
}

for (const group of loadGroups()) {
  try {
    runGroup(group);
  } catch (e) {
    errConsole.error(`trace_runner: group ${group.name} failed: ${e && e.message}`);
  }
}

// App timers keep the loop alive until they fire; the watchdog caps that
// (unref so it never keeps the loop alive on its own).
setTimeout(() => {
  writeTrace();
  process.exit(0);
}, maxMs).unref();

process.on("beforeExit", writeTrace);
process.on("exit", writeTrace);
