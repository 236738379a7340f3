#!/usr/bin/env python3
"""Checks simulator result directories against the published formats.

--cli mode runs the scenario corpus through the command-line tool first;
--check mode validates directories that already exist. Exit 0 when clean,
1 on any problem, 77 when a required module is missing.
"""
import argparse
import json
import re
import shutil
import subprocess
import sys
from pathlib import Path

try:
    import dpkt
    import jsonschema
    from lxml import etree
except ImportError as e:
    print(f"missing module: {e.name}; skipping")
    sys.exit(77)

TRACE_NAME = re.compile(r"^(wifi|lte|internet)-(\d+)-(\d+)\.tr$")
TRACE_LINE = re.compile(
    r"^[tr] \d+\.\d{9} (udp|tcp) [\d.]+:\d+ > [\d.]+:\d+ len=\d+ uid=\d+( rx=-?\d+\.\d{3})?$")
PROGRESS_LINE = re.compile(r"^\[[0-9.]+ s\] speedup [0-9.]+ events (\d+)$")
FOOTER = re.compile(r"^Simulation finished at \S+ \((\d+) events\)$")
LINKTYPE_RAW = 101
SHORT_RUNS = {"scenario2": 20}  # seconds; the full run writes over a gigabyte


def check_dir(d: Path, schema) -> list:
    problems = []
    report = d / "report.xml"
    if not report.exists():
        return [f"{d}: no report.xml"]
    doc = etree.parse(str(report), etree.XMLParser(huge_tree=True))
    if not schema.validate(doc):
        problems += [f"{report}: {e.message} (line {e.line})" for e in list(schema.error_log)[:5]]

    devices = {}
    for kind in ("Drone", "Zsp", "Remote"):
        for ent in doc.iter(kind):
            for dev in ent.iter("NetDevice"):
                key = (dev.get("layer"), ent.get("host"), dev.get("id"))
                pk = dev.find("Packets")
                devices[key] = int(pk.get("count")) if pk is not None else 0

    seen = set()
    for tr in sorted(d.glob("*.tr")):
        m = TRACE_NAME.match(tr.name)
        if not m:
            problems.append(f"{tr}: unexpected trace name")
            continue
        key = m.groups()
        seen.add(key)
        lines = tr.read_text().splitlines()
        bad = [l for l in lines if not TRACE_LINE.match(l)]
        if bad:
            problems.append(f"{tr}: {len(bad)} malformed lines, first: {bad[0]!r}")
        frames = 0
        with open(tr.with_suffix(".pcap"), "rb") as f:
            reader = dpkt.pcap.Reader(f)
            if reader.datalink() != LINKTYPE_RAW:
                problems.append(f"{tr.with_suffix('.pcap')}: linktype {reader.datalink()}")
            for _, buf in reader:
                ip = dpkt.ip.IP(buf)
                if ip.len != len(buf):
                    problems.append(f"{tr.with_suffix('.pcap')}: IPv4 length mismatch")
                    break
                frames += 1
        expected = devices.get(key)
        if expected is None:
            problems.append(f"{tr}: no matching NetDevice in report.xml")
        elif not (frames == len(lines) == expected):
            problems.append(f"{tr}: {len(lines)} trace lines, {frames} pcap frames, "
                            f"{expected} packets in report.xml")
    for key, count in devices.items():
        if count and key not in seen:
            problems.append(f"{d}: device {key} has {count} packets but no trace file")

    stats = doc.find("Statistics")
    total = int(stats.get("events"))
    per = sum(int(i.get("events")) for i in stats.iter("interval"))
    if per != total:
        problems.append(f"{report}: interval events sum {per} != {total}")

    progress = d / "progress.log"
    if progress.exists():
        lines = progress.read_text().splitlines()
        s = sum(int(m.group(1)) for m in map(PROGRESS_LINE.match, lines) if m)
        footer = next((FOOTER.match(l) for l in lines if FOOTER.match(l)), None)
        if footer is None:
            problems.append(f"{progress}: no footer")
        elif not (s == int(footer.group(1)) == total):
            problems.append(f"{progress}: lines sum {s}, footer {footer.group(1)}, report {total}")
    return problems


def run_corpus(cli, scenarios: Path, workdir: Path, scenario_schema) -> tuple:
    problems, dirs = [], []
    shutil.rmtree(workdir, ignore_errors=True)
    workdir.mkdir(parents=True)
    for sc in sorted(scenarios.glob("*.json")):
        if scenario_schema is not None:
            errs = list(scenario_schema.iter_errors(json.loads(sc.read_text())))
            problems += [f"{sc.name}: {e.message}" for e in errs[:5]]
        out = workdir / sc.stem
        cmd = [cli, "run", str(sc), "--results", str(out)]
        if sc.stem in SHORT_RUNS:
            cmd += ["--duration", str(SHORT_RUNS[sc.stem])]
        r = subprocess.run(cmd, capture_output=True, text=True)
        if r.returncode != 0:
            problems.append(f"{sc.name}: exit {r.returncode}: {r.stderr.strip()}")
            continue
        dirs.append(out)
    return problems, dirs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--schema", required=True, help="report.xsd")
    ap.add_argument("--scenario-schema", help="scenario JSON schema")
    ap.add_argument("--cli", help="simulator executable")
    ap.add_argument("--scenarios", type=Path)
    ap.add_argument("--workdir", type=Path)
    ap.add_argument("--check", nargs="+", type=Path, default=[])
    ap.add_argument("--keep", action="store_true", help="keep --workdir output")
    a = ap.parse_args()

    schema = etree.XMLSchema(etree.parse(a.schema))
    scenario_schema = None
    if a.scenario_schema:
        doc = json.loads(Path(a.scenario_schema).read_text())
        scenario_schema = jsonschema.validators.validator_for(doc)(doc)

    problems, dirs = [], list(a.check)
    if a.cli:
        if not (a.scenarios and a.workdir):
            ap.error("--cli needs --scenarios and --workdir")
        p, d = run_corpus(a.cli, a.scenarios, a.workdir, scenario_schema)
        problems += p
        dirs += d
    if not dirs:
        ap.error("nothing to check")
    for d in dirs:
        found = check_dir(d, schema)
        print(f"{'ok  ' if not found else 'FAIL'} {d}")
        problems += found
    if a.cli and not a.keep:
        shutil.rmtree(a.workdir, ignore_errors=True)
    for p in problems:
        print("  " + p)
    return 1 if problems else 0


if __name__ == "__main__":
    sys.exit(main())
