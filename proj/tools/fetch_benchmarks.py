#!/usr/bin/env python3
"""Fetch ISCAS-85 netlists and convert them to .bench.

The gate-level Verilog copies shipped in the `circuitgraph` wheel on PyPI are
used as the source.  Only primitive gate instances are converted.

    python3 tools/fetch_benchmarks.py --out tests/fixtures c17 c432 c499 c880
"""
import argparse
import pathlib
import re
import subprocess
import sys
import tempfile
import zipfile

PRIMITIVES = {
    "and": "AND", "nand": "NAND", "or": "OR", "nor": "NOR",
    "xor": "XOR", "xnor": "XNOR", "not": "NOT", "buf": "BUF",
}


def convert(name, text):
    text = re.sub(r"//[^\n]*", "", text)
    body = text[text.index(";") + 1:text.index("endmodule")]
    inputs, outputs, gates = [], [], []
    for stmt in body.split(";"):
        stmt = " ".join(stmt.split())
        if not stmt:
            continue
        head, _, rest = stmt.partition(" ")
        if head == "input":
            inputs += [s.strip() for s in rest.split(",")]
        elif head == "output":
            outputs += [s.strip() for s in rest.split(",")]
        elif head == "wire":
            continue
        elif head in PRIMITIVES:
            m = re.match(r"\s*\S*\s*\((.*)\)\s*$", rest)
            if not m:
                sys.exit(f"{name}: cannot parse '{stmt}'")
            pins = [p.strip() for p in m.group(1).split(",")]
            gates.append((pins[0], PRIMITIVES[head], pins[1:]))
        else:
            sys.exit(f"{name}: unsupported statement '{stmt}'")
    lines = [f"# {name}", f"# {len(inputs)} inputs", f"# {len(outputs)} outputs",
             f"# {len(gates)} gates", ""]
    lines += [f"INPUT({n})" for n in inputs] + [""]
    lines += [f"OUTPUT({n})" for n in outputs] + [""]
    lines += [f"{o} = {t}({', '.join(ins)})" for o, t, ins in gates]
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="tests/fixtures")
    ap.add_argument("names", nargs="+")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run([sys.executable, "-m", "pip", "download", "--no-deps",
                        "circuitgraph==0.2.1", "-d", tmp], check=True)
        wheel = next(pathlib.Path(tmp).glob("circuitgraph-*.whl"))
        with zipfile.ZipFile(wheel) as z:
            for name in args.names:
                text = z.read(f"circuitgraph/netlists/{name}.v").decode()
                (out / f"{name}.bench").write_text(convert(name, text))
                print(f"wrote {out / (name + '.bench')}")


if __name__ == "__main__":
    main()
