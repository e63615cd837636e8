"""Smoke test for the flagcurv Python extension.

Build first:

    cargo build --release -p flagcurv-py --features extension-module

then run `python3 python/smoke_test.py`. An already installed `flagcurv`
module is used if the build artifact is missing.
"""

import importlib.util
import json
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    for profile in ("release", "debug"):
        for name in ("libflagcurv_py.so", "libflagcurv_py.dylib", "flagcurv_py.dll"):
            lib = ROOT / "target" / profile / name
            if lib.exists():
                suffix = ".pyd" if name.endswith(".dll") else ".so"
                tmp = Path(tempfile.mkdtemp()) / ("flagcurv" + suffix)
                shutil.copy(lib, tmp)
                spec = importlib.util.spec_from_file_location("flagcurv", tmp)
                mod = importlib.util.module_from_spec(spec)
                spec.loader.exec_module(mod)
                return mod
    import flagcurv

    return flagcurv


def main():
    fc = load()
    print("flagcurv", fc.__version__)

    assert fc.p_polys([1.0, 2.0, 3.0]) == [8.0, 8.0, -8.0]

    c = fc.classify("W24", [1, 1, 1])
    assert c["flags"]["strongly_nonneg"] and not c["flags"]["strongly_pos"]
    assert c["reason"] == "all_equal_normal"

    c = fc.classify("W24", [1, 1, 1.2])
    assert c["flags"]["sec_pos"] and not c["flags"]["strongly_pos"]

    cert = fc.certify("W6", [1, 1, 1.2])
    assert json.loads(cert)["min_eigenvalue"] > 0
    assert fc.verify_certificate(cert)

    b = fc.blocks("W24", [1, 1.3, 1.7], omega0=True)
    assert all(abs(x) < 1e-12 for row in b["R3"] for x in row)

    r = fc.crosscheck("W12", 5, 1)
    assert r["block_deviation"] < 1e-9

    csv = fc.scan_csv("W6", 20)
    assert csv.splitlines()[0].startswith("s1,s2,s3,p1,p2,p3")
    assert fc.svg("W6").count("<line") == 3

    try:
        fc.classify("W24", [1, 0, 1])
    except ValueError:
        pass
    else:
        raise AssertionError("degenerate s accepted")

    failed = [t["name"] for t in fc.selftest() if not t["passed"]]
    assert not failed, failed
    print("ok")


if __name__ == "__main__":
    sys.exit(main())
