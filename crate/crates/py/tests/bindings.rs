use affine_sle_py::affine_sle_py;
use pyo3::prelude::*;
use pyo3::types::PyDict;

#[test]
fn module_exposes_solver_and_lattice() {
    pyo3::append_to_inittab!(affine_sle_py);
    Python::attach(|py| {
        let locals = PyDict::new(py);
        py.run(
            c"import affine_sle
m = affine_sle.WeylModule('sl2', 1, '0', 4)
r = m.solve(2)
ok = (r['status'] == 'unique-solution' and r['values'] == ['8/3', '1/1', '1/1', '1/1']
      and m.gram_ranks() == affine_sle.character(1, 4)
      and affine_sle.lattice_identities('sl2', 'B')['all_hold'])
try:
    affine_sle.WeylModule('sl1')
    ok = False
except ValueError:
    pass
",
            None,
            Some(&locals),
        )
        .unwrap();
        let ok: bool = locals.get_item("ok").unwrap().unwrap().extract().unwrap();
        assert!(ok);
    });
}
