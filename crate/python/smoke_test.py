"""Smoke test for the pyvfc extension module.

Build and install first:
    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/pyvfc-*.whl
"""

import json

import pyvfc


def test_tables():
    assert pyvfc.weil_betti(1) == {0: 1, 3: 1}
    assert pyvfc.vey_basis(2, 5) == ["u1 | c1^2", "u1 | c2"]
    assert [pyvfc.partition(n) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    t = pyvfc.haefliger_table(2)
    assert (t[3], t[4]) == (2, 4)
    assert pyvfc.gl_betti(2) == [1, 1, 0, 1, 1]


def test_fields():
    x = pyvfc.VectorField.basis([1, 0], 1)
    y = pyvfc.VectorField.basis([0, 1], 2)
    z = pyvfc.VectorField.basis([2, -1], 1)
    assert str(x.bracket(y)) == "0"
    assert x.bracket(z) == pyvfc.VectorField([[([3, -1], "1")], []])
    assert pyvfc.Cocycle("div", 1, 2).evaluate([z]) == z.divergence()
    a = pyvfc.VectorField.basis([1], 1, model="affine")
    assert a.dim == 1 and a.divergence() == "1 * x^(0)"


def test_forms():
    f = pyvfc.Form.monomial([1, 0], [2])
    assert f.degree == 1 and not f.is_exact()
    assert f.d().is_exact()
    assert pyvfc.Form.monomial([3, -1], [1], "5").d().d().is_zero()
    k1 = pyvfc.Form.monomial([0, 0], [1])
    assert not k1.is_exact() and k1.reduce_mod_exact() == k1


def test_cocycles():
    x = pyvfc.VectorField.basis([1, 0], 1)
    z = pyvfc.VectorField.basis([2, -1], 1)
    c = pyvfc.Cocycle("psibar", 2, 2)
    assert c.degree == 2
    assert c.evaluate([x, z]) == "[-4/3 * t^(3,-1) κ_2]"
    assert c.evaluate([z, x]) == "[4/3 * t^(3,-1) κ_2]"
    assert pyvfc.Cocycle("psi", 1, 2).evaluate([x]) == "[0]"
    try:
        pyvfc.Cocycle("nope", 1, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown family accepted")


def test_verify():
    report = json.loads(pyvfc.verify("extensions", dim=1))
    assert report["schema_version"] == 1
    assert report["summary"]["failed"] == 0
    assert json.loads(pyvfc.verify("", dim=1))["checks"] == []
    a = pyvfc.verify("crossed-hom", dim=2, radius=1, seed=5)
    assert a == pyvfc.verify("crossed-hom", dim=2, radius=1, seed=5)
    planted = json.loads(pyvfc.verify("crossed-hom", dim=2, radius=1, planted=True))
    assert planted["summary"]["failed"] > 0


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok  {name}")
