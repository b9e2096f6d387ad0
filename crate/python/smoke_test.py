"""Smoke test for the lpcomb_py extension.

Build the extension and put it on the path first:
    cargo build --release -p lpcomb-py --features extension-module
    mkdir -p /tmp/pyext && cp target/release/liblpcomb_py.so /tmp/pyext/lpcomb_py.so
    PYTHONPATH=/tmp/pyext python3 python/smoke_test.py
"""

import pathlib

import lpcomb_py

ROOT = pathlib.Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "crates" / "core" / "tests" / "fixtures"


def main() -> None:
    text = (FIXTURES / "sp2_three_chars.spec").read_text()
    phi = lpcomb_py.Parameter.from_spec(text, "phi")
    assert phi.target() == "Sp(2)", phi.target()
    assert phi.component_group_order() == 4
    assert phi.s_tilde_order() == 1
    assert len(phi.partition_classes()) == 4
    assert phi.packet_stats()["orbit_count"] == 1
    assert all(row["balanced"] for row in phi.ledger())

    c = lpcomb_py.constants("Sp2")
    assert (c["i"], c["sigma"]) == ("-1/4", "-1/8"), c

    data = lpcomb_py.elliptic_data("Sp", 2, "00")
    assert len(data) == 8, data
    assert any(d["iota"] == "1/4" for d in data)

    code, out, _ = lpcomb_py.run_cli(["constants", "--shape", "SO3", "--format", "json"])
    assert code == 0 and '"sigma": "-1/4"' in out, out

    try:
        lpcomb_py.constants("Xy3")
    except lpcomb_py.LpcombError:
        pass
    else:
        raise AssertionError("bad shape accepted")
    print("python smoke test: OK")


if __name__ == "__main__":
    main()
