use pyo3::ffi::c_str;
use pyo3::prelude::*;

use toricsplit::toricsplit;

#[test]
fn module_is_usable_from_python() {
    pyo3::append_to_inittab!(toricsplit);
    Python::attach(|py| {
        py.run(
            c_str!(
                r#"
from fractions import Fraction
import toricsplit as ts

f2 = ts.Fan.builtin("hirzebruch:2")
assert ts.check(f2, 3).is_split
assert ts.check(f2, 4).uncovered_class == [0, 2]
assert [q for q, s in ts.scan(f2, 2, 7) if s] == [3, 5, 7]

p1 = ts.Fan(1, [[1], [-1]], [[0], [1]])
assert ts.basis(p1, 2) == [[Fraction(-1, 2)], [Fraction(0)], [Fraction(1, 2)]]
pi = ts.diagonal_splitting(p1, 2)
assert len(pi) == 2 and pi.is_splitting()
assert pi.terms()[0] == ([Fraction(-1, 2), Fraction(1, 2)], 1)
assert ts.verify_diagonal(p1, pi).passed
assert not ts.verify_diagonal(p1, ts.canonical_splitting(p1.power(2), 2)).passed
assert ts.normality(ts.Fan.builtin("pn:2")) is None

try:
    ts.Fan.builtin("pn:0")
except ValueError:
    pass
else:
    raise AssertionError("pn:0 accepted")
"#
            ),
            None,
            None,
        )
    })
    .unwrap();
}
