// The pyo3 macros expand to identity error conversions under this clippy.
#![allow(clippy::useless_conversion)]

//! Python bindings for the wallkit library.
//!
//! Graphs, embeddings, walls, vortices and near-embeddings are passed as
//! their flat-file text representations; the classes here wrap the parsed
//! objects and expose the main operations.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use wallkit::extract::{
    extract_planar_subwall, plant_instance, verify_planar_certificate, PlantSpec,
};
use wallkit::formats;
use wallkit::graph::{Graph, VertexId, Walk};
use wallkit::homotopy::{
    are_homotopic_cycles, classify, find_homotopic_pair, is_contractible, CurveFamily, CurveKind,
};
use wallkit::nearembed::{validate_near_embedding, DEFAULT_ADHESION_BUDGET};
use wallkit::surface::{euler_genus, validate_embedding};
use wallkit::vortex::{adhesion, transaction_order, AdhesionOutcome};
use wallkit::walls::{
    cylindrical_to_grid, generate_q, generate_wall, grid_to_wall, verify_wall_model,
    wall_to_cylindrical,
};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// An undirected multigraph, addressed through its text form.
#[pyclass(name = "Graph")]
#[derive(Clone)]
struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: formats::parse_graph(text).map_err(value_err)?,
        })
    }

    fn emit(&self) -> String {
        formats::emit_graph(&self.inner)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertices={}, edges={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// Rotation-system embedding with signs and cuffs.
#[pyclass(name = "Embedding")]
#[derive(Clone)]
struct PyEmbedding {
    inner: wallkit::surface::Embedding,
}

#[pymethods]
impl PyEmbedding {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyEmbedding {
            inner: formats::parse_embedding(text).map_err(value_err)?,
        })
    }

    fn emit(&self) -> String {
        formats::emit_embedding(&self.inner)
    }

    fn euler_genus(&self) -> PyResult<u32> {
        euler_genus(&self.inner).map_err(runtime_err)
    }

    fn validate(&self) -> (bool, Vec<String>, Vec<String>) {
        let rep = validate_embedding(&self.inner);
        (rep.is_valid(), rep.violations, rep.warnings)
    }

    /// Whether the cycle through the given vertices is contractible.
    fn is_contractible(&self, cycle: Vec<u32>) -> PyResult<bool> {
        let vs: Vec<VertexId> = cycle.into_iter().map(VertexId).collect();
        let walk = Walk::cycle_from_vertices(self.inner.graph(), &vs).map_err(value_err)?;
        Ok(is_contractible(&self.inner, &walk)
            .map_err(runtime_err)?
            .is_some())
    }

    fn are_homotopic_cycles(&self, a: Vec<u32>, b: Vec<u32>) -> PyResult<bool> {
        let g = self.inner.graph();
        let ca = Walk::cycle_from_vertices(g, &a.into_iter().map(VertexId).collect::<Vec<_>>())
            .map_err(value_err)?;
        let cb = Walk::cycle_from_vertices(g, &b.into_iter().map(VertexId).collect::<Vec<_>>())
            .map_err(value_err)?;
        Ok(are_homotopic_cycles(&self.inner, &ca, &cb)
            .map_err(runtime_err)?
            .is_some())
    }

    /// Partition of disjoint cycles into homotopy classes.
    fn classify_cycles(&self, cycles: Vec<Vec<u32>>) -> PyResult<Vec<Vec<usize>>> {
        let family = self.cycle_family(cycles)?;
        classify(&self.inner, &family).map_err(runtime_err)
    }

    fn find_homotopic_pair(&self, cycles: Vec<Vec<u32>>) -> PyResult<(usize, usize)> {
        let family = self.cycle_family(cycles)?;
        let w = find_homotopic_pair(&self.inner, &family).map_err(runtime_err)?;
        Ok(w.pair)
    }

    fn render_svg(&self) -> PyResult<String> {
        wallkit::svg::render_svg(&self.inner, &[]).map_err(runtime_err)
    }
}

impl PyEmbedding {
    fn cycle_family(&self, cycles: Vec<Vec<u32>>) -> PyResult<CurveFamily> {
        let g = self.inner.graph();
        let members: Result<Vec<Walk>, _> = cycles
            .into_iter()
            .map(|vs| {
                Walk::cycle_from_vertices(g, &vs.into_iter().map(VertexId).collect::<Vec<_>>())
            })
            .collect();
        Ok(CurveFamily {
            kind: CurveKind::Cycles,
            members: members.map_err(value_err)?,
            cuffs: None,
        })
    }
}

/// Subdivision model of a wall inside a host graph.
#[pyclass(name = "WallModel")]
#[derive(Clone)]
struct PyWallModel {
    inner: wallkit::walls::WallModel,
}

#[pymethods]
impl PyWallModel {
    #[staticmethod]
    fn parse(text: &str, host: &PyGraph) -> PyResult<Self> {
        Ok(PyWallModel {
            inner: formats::parse_wall_model(text, &host.inner).map_err(value_err)?,
        })
    }

    fn emit(&self) -> String {
        formats::emit_wall_model(&self.inner)
    }

    #[getter]
    fn order(&self) -> u16 {
        self.inner.order
    }

    #[getter]
    fn cylindrical(&self) -> bool {
        self.inner.kind == wallkit::walls::WallKind::Cylindrical
    }

    fn verify(&self, host: &PyGraph) -> (bool, Vec<String>) {
        let rep = verify_wall_model(&host.inner, &self.inner);
        (rep.is_valid(), rep.violations)
    }

    fn __repr__(&self) -> String {
        format!(
            "WallModel(order={}, kind={:?})",
            self.inner.order, self.inner.kind
        )
    }
}

/// Graph with an ordered society.
#[pyclass(name = "Vortex")]
#[derive(Clone)]
struct PyVortex {
    inner: wallkit::vortex::Vortex,
}

#[pymethods]
impl PyVortex {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyVortex {
            inner: formats::parse_vortex(text).map_err(value_err)?,
        })
    }

    fn emit(&self) -> String {
        formats::emit_vortex(&self.inner)
    }

    #[pyo3(signature = (cyclic = false))]
    fn transaction_order(&self, cyclic: bool) -> PyResult<usize> {
        Ok(transaction_order(&self.inner, cyclic)
            .map_err(runtime_err)?
            .0)
    }

    /// Exact minimum adhesion; None when the search budget runs out,
    /// ValueError when no decomposition exists.
    #[pyo3(signature = (budget = 2_000_000))]
    fn adhesion(&self, budget: usize) -> PyResult<Option<usize>> {
        match adhesion(&self.inner, budget).map_err(runtime_err)? {
            AdhesionOutcome::Exact(rep) => Ok(Some(rep.adhesion)),
            AdhesionOutcome::Unknown { .. } => Ok(None),
            AdhesionOutcome::Infeasible { edge } => Err(PyValueError::new_err(format!(
                "infeasible: nonconsecutive society edge {} - {}",
                edge.0, edge.1
            ))),
        }
    }
}

/// Near-embedding: apex set, embedded part, vortices on cuffs.
#[pyclass(name = "NearEmbedding")]
#[derive(Clone)]
struct PyNearEmbedding {
    inner: wallkit::nearembed::NearEmbedding,
}

#[pymethods]
impl PyNearEmbedding {
    fn validate(&self) -> (bool, Vec<String>, Vec<String>) {
        let rep = validate_near_embedding(&self.inner, DEFAULT_ADHESION_BUDGET);
        (rep.is_valid(), rep.violations, rep.warnings)
    }

    #[getter]
    fn alpha(&self) -> u32 {
        self.inner.alpha
    }

    #[getter]
    fn vortex_count(&self) -> usize {
        self.inner.vortices.len()
    }

    fn euler_genus(&self) -> PyResult<u32> {
        euler_genus(&self.inner.embedding).map_err(runtime_err)
    }

    /// Extraction of a planarly embedded cylindrical subwall; returns
    /// (order, hypotheses_met, certificate_text).
    fn extract(&self, wall: &PyWallModel, a: usize) -> PyResult<(u16, bool, String)> {
        let got = extract_planar_subwall(&self.inner, &wall.inner, a).map_err(runtime_err)?;
        let text = formats::emit_certificate(&got.certificate);
        Ok((got.certificate.subwall.order, got.hypotheses_met, text))
    }

    fn verify_certificate(&self, text: &str) -> PyResult<(bool, Vec<String>)> {
        let cert = formats::parse_certificate(text, &self.inner).map_err(value_err)?;
        let rep = verify_planar_certificate(&self.inner, &cert);
        Ok((rep.is_valid(), rep.violations))
    }
}

/// Generates the cylindrical r-wall; returns (host, model).
#[pyfunction]
fn gen_qwall(r: u16) -> PyResult<(PyGraph, PyWallModel)> {
    let (g, m) = generate_q(r).map_err(value_err)?;
    Ok((PyGraph { inner: g }, PyWallModel { inner: m }))
}

/// Generates the flat r-wall; returns (host, model).
#[pyfunction]
fn gen_wall(r: u16) -> PyResult<(PyGraph, PyWallModel)> {
    let (g, m) = generate_wall(r).map_err(value_err)?;
    Ok((PyGraph { inner: g }, PyWallModel { inner: m }))
}

/// Round trip through the correspondences: cylindrical wall to grid minor
/// to flat wall; returns the flat wall model.
#[pyfunction]
fn grid_round_trip(host: &PyGraph, model: &PyWallModel) -> PyResult<PyWallModel> {
    let grid = cylindrical_to_grid(&host.inner, &model.inner).map_err(value_err)?;
    let wall = grid_to_wall(&host.inner, &grid).map_err(value_err)?;
    Ok(PyWallModel { inner: wall })
}

/// Cylindrical s-wall inside a flat wall of order at least 4s + 2.
#[pyfunction]
fn cylindrical_in_wall(host: &PyGraph, wall: &PyWallModel, s: u16) -> PyResult<PyWallModel> {
    Ok(PyWallModel {
        inner: wall_to_cylindrical(&host.inner, &wall.inner, s).map_err(value_err)?,
    })
}

/// Deterministic planted instance; returns (near_embedding, wall,
/// certificate_text).
#[pyfunction]
#[pyo3(signature = (genus, vortices, max_transaction, order, seed = 0))]
fn plant(
    genus: u32,
    vortices: usize,
    max_transaction: usize,
    order: u16,
    seed: u64,
) -> PyResult<(PyNearEmbedding, PyWallModel, String)> {
    let spec = PlantSpec::grid(genus, vortices, max_transaction, order);
    let inst = plant_instance(&spec, seed).map_err(runtime_err)?;
    let cert = formats::emit_certificate(&inst.certificate);
    Ok((
        PyNearEmbedding { inner: inst.ne },
        PyWallModel { inner: inst.wall },
        cert,
    ))
}

/// Parses a near-embedding bundle from in-memory file contents: a dict
/// name -> text including the manifest under `manifest_name`.
#[pyfunction]
fn parse_ne_bundle(
    manifest_name: &str,
    files: std::collections::HashMap<String, String>,
) -> PyResult<PyNearEmbedding> {
    let manifest = files
        .get(manifest_name)
        .ok_or_else(|| PyValueError::new_err(format!("missing {manifest_name}")))?;
    let read = |p: &std::path::Path| -> Result<String, std::io::Error> {
        let name = p.file_name().and_then(|s| s.to_str()).unwrap_or_default();
        files
            .get(name)
            .cloned()
            .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::NotFound, name.to_string()))
    };
    let ne = formats::parse_ne_bundle(manifest, std::path::Path::new(""), &read)
        .map_err(value_err)?;
    Ok(PyNearEmbedding { inner: ne })
}

/// Emits a near-embedding as bundle files: list of (name, text).
#[pyfunction]
fn emit_ne_bundle(ne: &PyNearEmbedding, stem: &str) -> Vec<(String, String)> {
    formats::emit_ne_bundle(&ne.inner, stem)
}

/// Runs the command-line interface in-process; returns (exit_code, human,
/// json_text).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let result = wallkit::cli::run(args);
    (
        result.exit_code,
        result.human,
        serde_json::to_string(&result.machine).unwrap_or_default(),
    )
}

#[pymodule]
fn wallkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyEmbedding>()?;
    m.add_class::<PyWallModel>()?;
    m.add_class::<PyVortex>()?;
    m.add_class::<PyNearEmbedding>()?;
    m.add_function(wrap_pyfunction!(gen_qwall, m)?)?;
    m.add_function(wrap_pyfunction!(gen_wall, m)?)?;
    m.add_function(wrap_pyfunction!(grid_round_trip, m)?)?;
    m.add_function(wrap_pyfunction!(cylindrical_in_wall, m)?)?;
    m.add_function(wrap_pyfunction!(plant, m)?)?;
    m.add_function(wrap_pyfunction!(parse_ne_bundle, m)?)?;
    m.add_function(wrap_pyfunction!(emit_ne_bundle, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
