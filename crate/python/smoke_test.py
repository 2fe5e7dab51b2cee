#!/usr/bin/env python3
"""Smoke test for the volog_py extension module.

Build the module first:

    cargo build -p volog-py --features extension-module

then run this script from anywhere inside the repository:

    python3 python/smoke_test.py
"""

import pathlib
import shutil
import subprocess
import sys
import sysconfig
import tempfile


def locate_module() -> pathlib.Path:
    """Find the built cdylib and stage it under an importable name."""
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("debug", "release")
        for name in ("libvolog_py.so", "libvolog_py.dylib", "volog_py.dll")
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is None:
        print("volog_py is not built; building it now", file=sys.stderr)
        subprocess.run(
            ["cargo", "build", "-p", "volog-py", "--features", "extension-module"],
            cwd=root,
            check=True,
        )
        built = next(c for c in candidates if c.exists())
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    stage = pathlib.Path(tempfile.mkdtemp(prefix="volog_py_"))
    shutil.copy2(built, stage / f"volog_py{suffix}")
    return stage


sys.path.insert(0, str(locate_module()))

import volog_py  # noqa: E402


def check(label: str, condition: bool) -> None:
    status = "ok" if condition else "FAIL"
    print(f"{label}: {status}")
    if not condition:
        sys.exit(1)


ctx = volog_py.Context(5, 3)
check("teichmuller(2) mod 125", str(volog_py.teichmuller(ctx.int(2), 3)) == "57 + O(5^3)")

iwasawa = volog_py.Branch.iwasawa(5)
check("log(6) at three digits", str(volog_py.log(ctx.int(6), iwasawa)) == "55 + O(5^3)")

curve = volog_py.Tate(ctx, ctx.int(125))
check("q has a 3-gon fiber", curve.n == 3)
value = curve.integrate(ctx.int(6), iwasawa)
check("worked integral", str(value) == "55 + O(5^3)")
check("closed form agrees", value.agrees(curve.closed_form(ctx.int(6), iwasawa)))
check("q integrates to zero", curve.integrate(ctx.int(125), iwasawa).is_zero())

other = volog_py.Branch(ctx.int(17))
check(
    "branch independence",
    curve.integrate(ctx.int(30), iwasawa).agrees(curve.integrate(ctx.int(30), other)),
)

wide = volog_py.Context(5, 10)
graph = volog_py.Graph(["A", "B"], [("e1", "A", "B"), ("e2", "A", "B"), ("e3", "A", "B")])
theta = volog_py.Cochain(
    graph, {"e1": wide.int(1), "e2": wide.int(2), "e3": wide.int(3)}
)
harmonic, gamma = theta.decompose()
check("harmonic part is harmonic", harmonic.is_harmonic())
values = dict(harmonic.values())
check("h(e1) = -1", values["e1"].agrees(wide.int(-1)))
check("h(e2) = 0", values["e2"].is_zero())
check("h(e3) = 1", values["e3"].agrees(wide.int(1)))
offsets = dict(gamma)
check("gamma is pinned at A", offsets["A"].is_zero())
check("gamma(B) = 2", offsets["B"].agrees(wide.int(2)))

refined, paths = graph.subdivide(2)
check("subdivision doubles the edges", len(refined.edges) == 6)
check("e1 becomes a 2-path", len(paths["e1"]) == 2)

f = volog_py.Laurent(5, {0: "5", 1: "1", 3: "1"})
check("lemma sample", f.lemma_check() == (1, 1, True))
check("polygon corner", (0, 1) in f.newton_vertices())
check("evaluation", f.evaluate(wide.int(2), 10).agrees(wide.int(15)))

walked = volog_py.interpolate(ctx.parse("55 + O(5^3)"), ctx.int(10), "1/2")
check("interpolation midpoint", str(walked) == "60 + O(5^3)")

print("smoke test passed")
