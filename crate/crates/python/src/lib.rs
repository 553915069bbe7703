//! Python bindings: machines, requirements, suite generation and execution.

use std::sync::Arc;

use fsmreq::complete::complete_req_suite;
use fsmreq::{
    build_m1, build_m2, Alphabet, CompositeRequirement, Dfsm, InputTrace, NondetAbstraction,
    TestSuite,
};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(fsmreq_py, FsmreqError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    FsmreqError::new_err(e.to_string())
}

fn trace(text: &str, inputs: &Alphabet) -> PyResult<InputTrace> {
    if text.is_empty() || text == "ε" {
        return Ok(InputTrace::empty());
    }
    InputTrace::parse(text, inputs).map_err(|s| err(format!("unknown input `{s}`")))
}

fn names(ys: &[usize], alphabet: &Alphabet) -> Vec<String> {
    ys.iter().map(|&y| alphabet.name(y).to_string()).collect()
}

/// A deterministic, completely specified machine.
#[pyclass(name = "Machine", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMachine {
    inner: Dfsm,
}

#[pymethods]
impl PyMachine {
    /// Parses the `state,<in>,...` table format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        fsmreq::parse_fsm(text).map(|inner| PyMachine { inner }).map_err(err)
    }

    fn serialize(&self) -> String {
        fsmreq::serialize_fsm(&self.inner)
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.inner.states().to_vec()
    }

    #[getter]
    fn inputs(&self) -> Vec<String> {
        self.inner.inputs().symbols().to_vec()
    }

    #[getter]
    fn outputs(&self) -> Vec<String> {
        self.inner.outputs().symbols().to_vec()
    }

    /// Outputs produced from the initial state for a `.`-joined input trace.
    fn run(&self, inputs: &str) -> PyResult<Vec<String>> {
        let t = trace(inputs, self.inner.inputs())?;
        Ok(names(&self.inner.run(t.symbols()), self.inner.outputs()))
    }

    /// State reached from the initial state.
    fn after(&self, inputs: &str) -> PyResult<String> {
        let t = trace(inputs, self.inner.inputs())?;
        let q = self.inner.after(self.inner.initial(), t.symbols());
        Ok(self.inner.state_name(q).to_string())
    }

    fn minimize(&self) -> Self {
        PyMachine {
            inner: fsmreq::minimize(&self.inner).machine,
        }
    }

    /// A shortest input trace on which the two machines differ, if any.
    fn distinguish(&self, other: &PyMachine) -> PyResult<Option<String>> {
        let t = fsmreq::language_equivalent(&self.inner, &other.inner).map_err(err)?;
        Ok(t.map(|t| t.render(self.inner.inputs())))
    }

    fn __len__(&self) -> usize {
        self.inner.num_states()
    }

    fn __repr__(&self) -> String {
        format!(
            "Machine(states={}, inputs={}, outputs={})",
            self.inner.num_states(),
            self.inner.num_inputs(),
            self.inner.outputs().len()
        )
    }
}

/// A conjunction of `R(q, x, Z)` items, bound to its reference machine.
#[pyclass(name = "Requirement", frozen)]
struct PyRequirement {
    inner: CompositeRequirement,
    model: Dfsm,
}

#[pymethods]
impl PyRequirement {
    /// Parses `<state>,<input>,{y|...}` lines and validates them against `model`.
    #[staticmethod]
    fn parse(text: &str, model: &PyMachine) -> PyResult<Self> {
        let inner = fsmreq::parse_requirement(text, &model.inner).map_err(err)?;
        fsmreq::validate_requirement(&model.inner, &inner).map_err(err)?;
        Ok(PyRequirement {
            inner,
            model: model.inner.clone(),
        })
    }

    /// Requirement whose satisfaction is language equivalence with `model`.
    #[staticmethod]
    fn language_equivalence(model: &PyMachine) -> Self {
        PyRequirement {
            inner: CompositeRequirement::language_equivalence(&model.inner),
            model: model.inner.clone(),
        }
    }

    fn serialize(&self) -> String {
        fsmreq::serialize_requirement(&self.inner, &self.model)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// A prefix-free set of input traces.
#[pyclass(name = "Suite", frozen)]
struct PySuite {
    inner: TestSuite,
    inputs: Arc<Alphabet>,
}

#[pymethods]
impl PySuite {
    /// Cases as `.`-joined input names, sorted.
    #[getter]
    fn cases(&self) -> Vec<String> {
        self.inner.render(&self.inputs).lines().map(str::to_string).collect()
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.tag()
    }

    #[getter]
    fn max_len(&self) -> usize {
        self.inner.max_len()
    }

    fn render(&self) -> String {
        self.inner.render(&self.inputs)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

impl PySuite {
    fn wrap(inner: TestSuite, m: &Dfsm) -> Self {
        PySuite {
            inner,
            inputs: m.inputs_arc().clone(),
        }
    }
}

/// Builds a suite from `.`-joined traces over `model`'s inputs.
#[pyfunction]
fn suite_from_cases(model: &PyMachine, cases: Vec<String>) -> PyResult<PySuite> {
    let m = &model.inner;
    let cases = cases
        .iter()
        .map(|c| trace(c, m.inputs()))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(PySuite::wrap(TestSuite::external(m, cases), m))
}

/// Complete suite for language equivalence.
#[pyfunction]
#[pyo3(signature = (model, extra_states = 0))]
fn h_suite(model: &PyMachine, extra_states: usize) -> PyResult<PySuite> {
    let ts = fsmreq::h_suite(&model.inner, extra_states).map_err(err)?;
    Ok(PySuite::wrap(ts, &model.inner))
}

/// Exhaustive requirements suite, run with exact output comparison.
#[pyfunction]
#[pyo3(signature = (model, requirement, extra_states = 0))]
fn exhaustive_suite(model: &PyMachine, requirement: &PyRequirement, extra_states: usize) -> PyResult<PySuite> {
    let ts = fsmreq::exhaustive_req_suite(&model.inner, &requirement.inner, extra_states).map_err(err)?;
    Ok(PySuite::wrap(ts, &model.inner))
}

/// Complete requirements suite, run with output-set membership.
#[pyfunction]
#[pyo3(signature = (model, requirement, extra_states = 0))]
fn complete_suite(model: &PyMachine, requirement: &PyRequirement, extra_states: usize) -> PyResult<PySuite> {
    let m = &model.inner;
    let (_, ts) = complete_req_suite(m, &requirement.inner, m.num_states() + extra_states).map_err(err)?;
    Ok(PySuite::wrap(ts, m))
}

/// Failure lines of `sut` on `suite`; empty when the suite passes.
#[pyfunction]
#[pyo3(signature = (sut, model, suite, requirement = None))]
fn run_suite(
    sut: &PyMachine,
    model: &PyMachine,
    suite: &PySuite,
    requirement: Option<&PyRequirement>,
) -> PyResult<Vec<String>> {
    let run = match requirement {
        None => fsmreq::run_suite_equiv(&sut.inner, &model.inner, &suite.inner),
        Some(r) => {
            let m1 = build_m1(&model.inner, &r.inner).map_err(err)?;
            fsmreq::run_suite_reduction(&sut.inner, &NondetAbstraction::from_m1(&m1), &suite.inner)
        }
    }
    .map_err(err)?;
    Ok(run.render_failures().lines().map(str::to_string).collect())
}

/// `None` if `sut` satisfies the requirement, else a shortest violating
/// trace rendered `inputs/outputs`.
#[pyfunction]
fn violation(sut: &PyMachine, model: &PyMachine, requirement: &PyRequirement) -> PyResult<Option<String>> {
    let w = fsmreq::satisfies_oracle(&sut.inner, &model.inner, &requirement.inner).map_err(err)?;
    Ok(w.map(|w| w.render(sut.inner.inputs(), sut.inner.outputs())))
}

/// Seeded mutants of `model`.
#[pyfunction]
fn mutants(model: &PyMachine, seed: u64, count: usize) -> Vec<PyMachine> {
    fsmreq::mutate(&model.inner, seed, count)
        .into_iter()
        .map(|inner| PyMachine { inner })
        .collect()
}

/// `(M1, M2, M1′)`: the two abstractions in table format and the
/// transition list of M1′.
#[pyfunction]
fn abstractions(model: &PyMachine, requirement: &PyRequirement) -> PyResult<(String, String, String)> {
    let m1 = build_m1(&model.inner, &requirement.inner).map_err(err)?;
    let m2 = build_m2(&m1);
    Ok((
        fsmreq::serialize_fsm(m1.machine()),
        fsmreq::serialize_fsm(m2.prime()),
        NondetAbstraction::from_m1(&m1).render_transitions(),
    ))
}

#[pymodule]
fn fsmreq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FsmreqError", m.py().get_type::<FsmreqError>())?;
    m.add_class::<PyMachine>()?;
    m.add_class::<PyRequirement>()?;
    m.add_class::<PySuite>()?;
    m.add_function(wrap_pyfunction!(suite_from_cases, m)?)?;
    m.add_function(wrap_pyfunction!(h_suite, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_suite, m)?)?;
    m.add_function(wrap_pyfunction!(complete_suite, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(violation, m)?)?;
    m.add_function(wrap_pyfunction!(mutants, m)?)?;
    m.add_function(wrap_pyfunction!(abstractions, m)?)?;
    Ok(())
}
