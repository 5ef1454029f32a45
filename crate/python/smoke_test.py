"""Smoke test for the Python extension.

Build first:

    cargo build --release -p braidnomial-py --features extension-module

then run `python3 python/smoke_test.py`. If the module is not installed the
script loads the freshly built library from target/release.
"""

import importlib
import os
import shutil
import sys
import tempfile

HERE = os.path.dirname(os.path.abspath(__file__))
TARGET = os.path.join(HERE, "..", "target", "release")


def load():
    try:
        return importlib.import_module("braidnomial_py")
    except ImportError:
        pass
    for name in ("libbraidnomial_py.so", "libbraidnomial_py.dylib", "braidnomial_py.dll"):
        built = os.path.join(TARGET, name)
        if os.path.exists(built):
            tmp = tempfile.mkdtemp()
            ext = ".pyd" if name.endswith(".dll") else ".so"
            shutil.copy(built, os.path.join(tmp, "braidnomial_py" + ext))
            sys.path.insert(0, tmp)
            return importlib.import_module("braidnomial_py")
    sys.exit("braidnomial_py not built; see the docstring")


def main():
    bn = load()

    eq = bn.Equation(5, 3, 2, 7)
    assert (eq.m, eq.n, eq.p, eq.q, eq.N, eq.R) == (1, 5, 3, 2, 4, "108/3125")
    assert [eq.coincidence_pair(l) for l in range(4)] == [(2, 0), (3, 1), (4, 2), (0, 3)]

    sigma = eq.predict("sigma")
    assert [t["alpha"] for t in sigma["twists"]["twists"]] == ["-4/15", "2/5"]
    inf = eq.predict("infinity")
    assert inf["twists"]["twists"][0]["alpha"] == "-7/5"

    try:
        bn.Equation(3, 1, 1, 1)
    except ValueError as e:
        assert "not convex" in str(e)
    else:
        raise AssertionError("invalid equation accepted")

    w = bn.BraidWord(3, [1, 2, 1])
    assert w.same_element(bn.BraidWord(3, [2, 1, 2]))
    assert w.exponent_sum() == 3 and len(w) == 3
    assert w.then(w.inverse()).permutation() == [0, 1, 2]
    assert w.svg().count('class="crossing positive"') == 3

    assert bn.group_order(3, [[1, 0, 2], [1, 2, 0]]) == 6

    report = bn.run((5, 3, 2, 7), "all", "verify")
    assert report["schema"] == bn.REPORT_SCHEMA
    assert report["status"] == "ok", report["status"]
    verdicts = {l["loop"]: l["comparison"]["verdict"] for l in report["loops"]}
    assert set(verdicts.values()) <= {"match", "match_up_to_conjugation"}, verdicts
    assert report["galois"]["empirical"]["order"] == "120"

    tracker_only = bn.run((12, 5, 1, 4), "zero", "verify", tracker_only=True)
    codes = {w["code"] for w in tracker_only["warnings"]}
    assert "GcdConditionViolated" in codes
    assert tracker_only["loops"][0]["prediction"] is None

    print("python smoke test passed")


if __name__ == "__main__":
    main()
