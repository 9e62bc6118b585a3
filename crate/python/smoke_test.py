"""Quick check of the Python bindings. Run after `maturin develop` or installing the wheel."""

import json

import fatcut


def main():
    d = fatcut.Diagram("3^0,2^0,1^0")
    assert len(d) == 6
    assert d == fatcut.Diagram.triangle(2)
    assert d.translate(1, 0).equivalent(d) == (1, 0)
    lo, hi = d.split(1, 0, 2)
    assert (len(lo), len(hi)) == (5, 1)

    big = fatcut.LinearSystem.plane(21, "7x6,6x4,1")
    r = fatcut.generic_dimension(big)
    assert (r.value, r.certainty) == (-1, "CertifiedNonSpecial"), r

    special = fatcut.LinearSystem.plane(2, "2,2")
    r = fatcut.generic_dimension(special, seed=3)
    assert r.is_special() and r.value == 0
    exact = fatcut.exact_dimension(special, [(1, 1, 2, 1), (5, 3, 7, 2)])
    assert exact.value == 0 and exact.certainty == "ExactRational"
    assert fatcut.prove(special) is None

    cert = fatcut.prove(fatcut.LinearSystem.plane(10, "4x3,3"), leaf_threshold=20)
    report = cert.verify()
    assert report.verified and report.conclusion == 29, str(report)
    again = fatcut.Certificate.from_json(cert.to_json())
    assert again == cert
    assert json.loads(cert.to_json())["version"] == 1

    layer = fatcut.lemma("fatlayer", 2, 6, 4)
    assert layer.verify(parallel=False).conclusion == -1
    assert all(s.vdim == -1 for s in fatcut.eols(3))

    records = fatcut.hh_campaign(2, 6)
    found = {(r.d, r.m, r.r) for r in records if r.special}
    assert found == {(2, 2, 2), (4, 2, 5)}, found
    assert all(r.witness[1] == -2 for r in records if r.special)
    assert not any(r.discrepancy for r in records)

    try:
        fatcut.LinearSystem.plane(3, "0")
    except ValueError:
        pass
    else:
        raise AssertionError("zero multiplicity accepted")
    print("python bindings ok")


if __name__ == "__main__":
    main()
