"""Smoke test for the Python extension. Build it first:

    pip install --no-build-isolation -e crates/python
"""

import csv
import io
import json

import valdist


def main() -> None:
    assert set(valdist.builtin_names()) == {
        "three_conics",
        "quang_sharp_transcendental",
        "trivial_valuation_remark",
        "tangent_line_M2",
    }

    norm = valdist.gauss_norm(["25", "0", "1"], 5, "-4", "4")
    assert norm.eval("-4") == "-2" and norm.eval("4") == "8"
    assert norm.slopes == ["0", "2"]

    conics = valdist.Scenario.builtin("three_conics")
    assert conics.q == 3 and conics.degrees == [2, 2, 2]
    t_seq, general, m, m_status, alpha = conics.invariants()
    assert t_seq == [3, 1, 0] and not general
    assert (m, m_status, alpha) == (1, "certified", "1")

    report = conics.verify()
    assert report.status == "verified"
    assert report.bound("new") == ("2", True, "0", True)
    assert report.bound("quang")[0] == "3"
    assert report.proximity("D2").eval("5") == "10"
    assert json.loads(report.to_json())["constants"] == "domain-relative"

    rows = list(csv.DictReader(io.StringIO(conics.evaluate("0:10:21"))))
    assert len(rows) == 21
    five = next(r for r in rows if r["t"] == "5")
    assert (five["T"], five["m_1"], five["m_2"], five["m_3"]) == ("5", "5", "10", "5")

    again = valdist.Scenario.from_json(conics.to_json())
    assert again.to_json() == conics.to_json()

    remark = valdist.Scenario.builtin("trivial_valuation_remark").verify()
    assert remark.sharpness_ratio == "149/50"

    transcendental = valdist.Scenario.builtin("quang_sharp_transcendental").verify()
    assert transcendental.status == "conditionally verified"
    assert transcendental.characteristic.eval("10") == "156"

    try:
        valdist.Scenario.from_json('{"valuation": {"kind": "p-adic", "p": 4}}')
    except ValueError as e:
        assert "prime" in str(e) or "schema" in str(e)
    else:
        raise AssertionError("p = 4 accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
