//! Homology of one slice of a complex, and tables of slice results.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::linalg::sparse::SparseVec;
use crate::linalg::{Field, Matrix, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Homology,
    Cohomology,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Homology => "homology",
            Direction::Cohomology => "cohomology",
        }
    }
}

/// How far a slice result can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// Every component the slice touches is known.
    Exact,
    /// Some component needed by the slice lies outside the window.
    Truncated,
    /// Computed with an input-weight cutoff; `stable` records whether a
    /// larger cutoff reproduced the same dimension.
    Windowed { stable: bool },
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact)
    }
}

/// `ker(out) / im(in)` at one slice.
#[derive(Clone, Debug)]
pub struct SliceHomology<F: Field> {
    kernel: Subspace<F>,
    image: Subspace<F>,
    /// Echelon basis of kernel vectors reduced modulo the image.
    reps: Subspace<F>,
}

impl<F: Field> SliceHomology<F> {
    /// `incoming` maps into the slice, `outgoing` maps out of it; `None`
    /// stands for a zero map.
    pub fn new(field: &F, dim: usize, incoming: Option<&Matrix<F>>, outgoing: Option<&Matrix<F>>) -> Self {
        let kernel = match outgoing {
            Some(m) => {
                assert_eq!(m.ncols(), dim, "outgoing map has wrong domain");
                m.kernel()
            }
            None => Subspace::full(field, dim),
        };
        let image = match incoming {
            Some(m) => {
                assert_eq!(m.nrows(), dim, "incoming map has wrong codomain");
                m.image()
            }
            None => Subspace::zero(field, dim),
        };
        Self::from_spaces(kernel, image)
    }

    pub fn from_spaces(kernel: Subspace<F>, image: Subspace<F>) -> Self {
        let residuals = kernel.basis().iter().map(|v| image.reduce(v)).collect();
        let reps = Subspace::from_spanning(kernel.field(), kernel.ambient_dim(), residuals);
        SliceHomology { kernel, image, reps }
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }
    pub fn kernel(&self) -> &Subspace<F> {
        &self.kernel
    }
    pub fn image(&self) -> &Subspace<F> {
        &self.image
    }
    /// Canonical representatives, one per basis class.
    pub fn representatives(&self) -> &[SparseVec<F::Elem>] {
        self.reps.basis()
    }
    pub fn is_cycle(&self, v: &SparseVec<F::Elem>) -> bool {
        self.kernel.contains(v)
    }
    pub fn is_boundary(&self, v: &SparseVec<F::Elem>) -> bool {
        self.image.contains(v)
    }
    /// Canonical representative of the class of a cycle.
    pub fn canonical(&self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        self.image.reduce(v)
    }
    /// Coordinates of the class of a cycle in the representative basis.
    pub fn class_coords(&self, v: &SparseVec<F::Elem>) -> Vec<F::Elem> {
        self.reps.coords_unchecked(&self.image.reduce(v))
    }
}

#[derive(Clone, Debug)]
pub struct SliceResult<F: Field> {
    pub dim: usize,
    pub exactness: Exactness,
    pub representatives: Vec<SparseVec<F::Elem>>,
}

/// Results keyed by `(degree, weight)` in key order.
#[derive(Clone, Debug)]
pub struct HomologyReport<F: Field> {
    /// `HK` or `HH`.
    pub theory: &'static str,
    pub direction: Direction,
    /// Meaning of the weight key, for display.
    pub weight_name: &'static str,
    pub entries: BTreeMap<(usize, i64), SliceResult<F>>,
}

impl<F: Field> HomologyReport<F> {
    pub fn new(theory: &'static str, direction: Direction, weight_name: &'static str) -> Self {
        HomologyReport {
            theory,
            direction,
            weight_name,
            entries: BTreeMap::new(),
        }
    }

    pub fn get(&self, degree: usize, weight: i64) -> Option<&SliceResult<F>> {
        self.entries.get(&(degree, weight))
    }

    pub fn dim(&self, degree: usize, weight: i64) -> Option<usize> {
        self.get(degree, weight).map(|e| e.dim)
    }

    /// Sum of dimensions in one degree over slices that are not truncated.
    pub fn total_dim(&self, degree: usize) -> usize {
        self.entries
            .iter()
            .filter(|((p, _), e)| *p == degree && e.exactness != Exactness::Truncated)
            .map(|(_, e)| e.dim)
            .sum()
    }

    /// Line records `<theory> dir=<d> p=<p> r=<w> dim=<k> exact=<bool>`.
    pub fn records(&self) -> String {
        let mut s = String::new();
        for ((p, w), e) in &self.entries {
            let _ = write!(
                s,
                "{} dir={} p={} {}={} dim={} exact={}",
                self.theory,
                self.direction.as_str(),
                p,
                if self.weight_name == "t" { "t" } else { "r" },
                w,
                e.dim,
                e.exactness.is_exact()
            );
            if let Exactness::Windowed { stable } = e.exactness {
                let _ = write!(s, " windowed=true stable={stable}");
            }
            s.push('\n');
        }
        s
    }

    /// Aligned table: one row per degree, one column per weight.
    /// Truncated slices are shown as `?`, unstable windowed slices with `~`.
    pub fn table(&self) -> String {
        let degrees: Vec<usize> = {
            let mut d: Vec<usize> = self.entries.keys().map(|k| k.0).collect();
            d.dedup();
            d
        };
        let weights: Vec<i64> = {
            let mut w: Vec<i64> = self.entries.keys().map(|k| k.1).collect();
            w.sort_unstable();
            w.dedup();
            w
        };
        let mut s = String::new();
        let sym = if self.direction == Direction::Homology { "_" } else { "^" };
        let _ = write!(s, "{:>8}", format!("{}{}", self.theory, sym));
        for w in &weights {
            let _ = write!(s, "{:>6}", format!("{}={}", self.weight_name, w));
        }
        s.push('\n');
        for p in degrees {
            let _ = write!(s, "{:>8}", format!("p={p}"));
            for w in &weights {
                let cell = match self.entries.get(&(p, *w)) {
                    None => ".".to_string(),
                    Some(e) => match e.exactness {
                        Exactness::Exact => e.dim.to_string(),
                        Exactness::Truncated => format!("{}?", e.dim),
                        Exactness::Windowed { stable: true } => e.dim.to_string(),
                        Exactness::Windowed { stable: false } => format!("{}~", e.dim),
                    },
                };
                let _ = write!(s, "{cell:>6}");
            }
            s.push('\n');
        }
        s
    }
}
