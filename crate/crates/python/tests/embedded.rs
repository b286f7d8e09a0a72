use pyo3::ffi::c_str;
use pyo3::prelude::*;
use pyscva::pyscva;

fn run(code: &std::ffi::CStr) {
    pyo3::append_to_inittab!(pyscva);
    Python::initialize();
    Python::attach(|py| {
        if let Err(e) = py.run(code, None, None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn module_round_trip() {
    run(c_str!(
        r#"
import pyscva
sp = pyscva.Space.orthonormal(2)
a = sp.parse("a1_{-1}|0>")
assert {k: str(v) for k, v in a.ope(a).items()} == {2: "|0>"}
assert str(a.translate()) == "a1_{-2} |0>", str(a.translate())
assert (a - a).is_zero()
assert a.scale("-3/2").terms() == [("a1_{-1} |0>", "-3/2")]
assert pyscva.verify_structure("n1", sp)["passed"]
assert pyscva.brst_cohomology(pyscva.Space.polarized(1, "R"))["total"] == 2
try:
    sp.parse("a1_{-1")
    raise AssertionError("parse error expected")
except pyscva.ScvaError:
    pass
"#
    ));
}
