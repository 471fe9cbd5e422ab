//! Python bindings. Results are returned as plain Python objects decoded
//! from the same JSON the command line emits.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use monotri_core::colorings::{self, Coloring as CoreColoring, PlaneColoring};
use monotri_core::forcing::{forcing_check, ForcingPart};
use monotri_core::geom::{Point, Region, TriangleSpec, DEFAULT_TOLERANCE};
use monotri_core::io;
use monotri_core::lines::{solve_unit_triangles, Line};
use monotri_core::scan;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn to_region(r: (f64, f64, f64, f64)) -> PyResult<Region> {
    Region::new(r.0, r.1, r.2, r.3).map_err(value_error)
}

#[pyclass(frozen)]
struct Coloring {
    inner: CoreColoring,
}

#[pymethods]
impl Coloring {
    #[staticmethod]
    #[pyo3(signature = (text, tolerance = DEFAULT_TOLERANCE))]
    fn from_json(text: &str, tolerance: f64) -> PyResult<Self> {
        let inner = io::parse_coloring_str(text).map_err(value_error)?.with_tolerance(tolerance);
        Ok(Coloring { inner })
    }

    fn to_json(&self) -> String {
        io::coloring_to_string(&self.inner)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind()
    }

    /// `"black"` or `"white"`.
    fn color(&self, x: f64, y: f64) -> &'static str {
        self.inner.color(Point::new(x, y)).as_str()
    }

    fn boundary_distance(&self, x: f64, y: f64) -> f64 {
        self.inner.boundary_distance(Point::new(x, y))
    }

    fn __repr__(&self) -> String {
        format!("Coloring({})", self.inner.kind())
    }
}

#[pyfunction]
#[pyo3(signature = (sides, part = "i", tolerance = DEFAULT_TOLERANCE))]
fn forcing<'py>(py: Python<'py>, sides: (f64, f64, f64), part: &str, tolerance: f64) -> PyResult<Bound<'py, PyAny>> {
    let part = match part {
        "i" => ForcingPart::I,
        "ii" => ForcingPart::II,
        other => return Err(PyValueError::new_err(format!("part must be 'i' or 'ii', got {other:?}"))),
    };
    let v = forcing_check(part, sides.0, sides.1, sides.2, tolerance).map_err(value_error)?;
    to_py(py, &v)
}

/// Lines are given in command-line syntax: `"a,b"` or `"vertical:k"`.
#[pyfunction]
#[pyo3(signature = (q1, q2, q3, tolerance = DEFAULT_TOLERANCE))]
fn lines<'py>(py: Python<'py>, q1: &str, q2: &str, q3: &str, tolerance: f64) -> PyResult<Bound<'py, PyAny>> {
    let parse = |s: &str| s.parse::<Line>().map_err(value_error);
    let sol = solve_unit_triangles(parse(q1)?, parse(q2)?, parse(q3)?, tolerance).map_err(value_error)?;
    to_py(py, &sol)
}

#[pyfunction]
#[pyo3(signature = (coloring, triangle, region = (0.0, 0.0, 10.0, 10.0), step = 0.01, angles = 720, min_margin = 0.0))]
fn find_copy<'py>(
    py: Python<'py>,
    coloring: &Coloring,
    triangle: (f64, f64, f64),
    region: (f64, f64, f64, f64),
    step: f64,
    angles: usize,
    min_margin: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let spec = TriangleSpec::new(triangle.0, triangle.1, triangle.2).map_err(value_error)?;
    let grid = scan::ScanGrid::new(to_region(region)?, step, angles).map_err(value_error)?;
    let out = py
        .detach(|| scan::find_monochromatic_copy(&coloring.inner, &spec, &grid, min_margin))
        .map_err(value_error)?;
    to_py(py, &out)
}

#[pyfunction]
#[pyo3(signature = (coloring, triangle, region = (0.0, 0.0, 10.0, 10.0), step = 0.01, angles = 720))]
fn avoid<'py>(
    py: Python<'py>,
    coloring: &Coloring,
    triangle: (f64, f64, f64),
    region: (f64, f64, f64, f64),
    step: f64,
    angles: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let spec = TriangleSpec::new(triangle.0, triangle.1, triangle.2).map_err(value_error)?;
    let grid = scan::ScanGrid::new(to_region(region)?, step, angles).map_err(value_error)?;
    let out = py.detach(|| scan::avoidance_scan(&coloring.inner, &spec, &grid)).map_err(value_error)?;
    to_py(py, &out)
}

#[pyfunction]
#[pyo3(signature = (coloring, epsilon, seed, tries = 1_000_000))]
fn almost<'py>(py: Python<'py>, coloring: &Coloring, epsilon: f64, seed: u64, tries: u64) -> PyResult<Bound<'py, PyAny>> {
    let out = scan::find_almost_unit(&coloring.inner, epsilon, tries, seed).map_err(value_error)?;
    to_py(py, &out)
}

#[pyfunction]
fn check_zebra<'py>(py: Python<'py>, coloring: &Coloring) -> PyResult<Bound<'py, PyAny>> {
    match &coloring.inner {
        CoreColoring::Zebra(z) => to_py(py, &colorings::check_zebra_conditions(z).map_err(value_error)?),
        other => Err(PyValueError::new_err(format!("expected a zebra coloring, got {}", other.kind()))),
    }
}

#[pyfunction]
#[pyo3(signature = (coloring, point, half_width = 2.0, angular_tol = scan::HEXAGON_ANGULAR_TOL))]
fn hexagon<'py>(
    py: Python<'py>,
    coloring: &Coloring,
    point: (f64, f64),
    half_width: f64,
    angular_tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let a = Point::new(point.0, point.1);
    let out = scan::hexagon_probe(&coloring.inner, a, &Region::around(a, half_width), angular_tol).map_err(value_error)?;
    to_py(py, &out)
}

#[pyfunction]
#[pyo3(signature = (coloring, region = (0.0, 0.0, 4.0, 4.0), ppu = 50.0))]
fn render(coloring: &Coloring, region: (f64, f64, f64, f64), ppu: f64) -> PyResult<String> {
    Ok(monotri_core::svg::render_svg(&coloring.inner, &to_region(region)?, ppu, None))
}

#[pymodule]
fn monotri(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Coloring>()?;
    m.add_function(wrap_pyfunction!(forcing, m)?)?;
    m.add_function(wrap_pyfunction!(lines, m)?)?;
    m.add_function(wrap_pyfunction!(find_copy, m)?)?;
    m.add_function(wrap_pyfunction!(avoid, m)?)?;
    m.add_function(wrap_pyfunction!(almost, m)?)?;
    m.add_function(wrap_pyfunction!(check_zebra, m)?)?;
    m.add_function(wrap_pyfunction!(hexagon, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    Ok(())
}
