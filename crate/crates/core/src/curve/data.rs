//! Curves supplied as samples `t,x,y,z`.
//!
//! Jets come from the degree-5 polynomial through the six nodes nearest to
//! the evaluation point. This is markedly less accurate than jet arithmetic
//! on expressions; results carry `JetSource::Interpolated`.

use std::io::Read;

use super::{CurveError, JetSource, ParametricCurve};
use crate::expr::{Jet, Jet5};

const STENCIL: usize = 6;

#[derive(Debug, Clone)]
pub struct DataCurve {
    t: Vec<f64>,
    xyz: [Vec<f64>; 3],
}

impl DataCurve {
    pub fn new(
        t: Vec<f64>,
        x: Vec<f64>,
        y: Vec<f64>,
        z: Vec<f64>,
    ) -> Result<DataCurve, CurveError> {
        let n = t.len();
        if x.len() != n || y.len() != n || z.len() != n {
            return Err(CurveError::Data("column lengths differ".into()));
        }
        if n < STENCIL {
            return Err(CurveError::Data(format!(
                "need at least {STENCIL} rows, got {n}"
            )));
        }
        if let Some(w) = t.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(CurveError::Data(format!(
                "t must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let all = t.iter().chain(&x).chain(&y).chain(&z);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(CurveError::Data("non-finite value".into()));
        }
        Ok(DataCurve { t, xyz: [x, y, z] })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    fn window(&self, t: f64) -> usize {
        let n = self.t.len();
        // index of the interval [t_i, t_{i+1}] containing t
        let i = self.t.partition_point(|&v| v <= t).saturating_sub(1);
        i.saturating_sub(STENCIL / 2 - 1).min(n - STENCIL)
    }
}

/// Taylor coefficients at `t` of the polynomial through `(ts[i], vs[i])`.
fn local_taylor(ts: &[f64], vs: &[f64], t: f64) -> Jet5 {
    let m = ts.len();
    let mut total = [0.0; 6];
    for i in 0..m {
        // L_i(t + u) as a polynomial in u, expanded from its roots
        let mut poly = [0.0; 6];
        poly[0] = 1.0;
        let mut deg = 0;
        let mut denom = 1.0;
        for j in 0..m {
            if j == i {
                continue;
            }
            let root = ts[j] - t;
            for k in (0..=deg).rev() {
                poly[k + 1] += poly[k];
                poly[k] *= -root;
            }
            deg += 1;
            denom *= ts[i] - ts[j];
        }
        for (acc, p) in total.iter_mut().zip(poly) {
            *acc += vs[i] * p / denom;
        }
    }
    Jet::from_coeffs(total)
}

impl ParametricCurve for DataCurve {
    fn domain(&self) -> (f64, f64) {
        (self.t[0], self.t[self.t.len() - 1])
    }

    fn jets(&self, t: f64) -> Result<[Jet5; 3], CurveError> {
        let w = self.window(t);
        let ts = &self.t[w..w + STENCIL];
        Ok(self
            .xyz
            .each_ref()
            .map(|col| local_taylor(ts, &col[w..w + STENCIL], t)))
    }

    fn jet_source(&self) -> JetSource {
        JetSource::Interpolated
    }
}

/// Reads the `t,x,y,z` CSV layout.
pub fn read_csv<R: Read>(reader: R) -> Result<DataCurve, CurveError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| CurveError::Data(e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "x", "y", "z"] {
        return Err(CurveError::Data(format!(
            "expected header `t,x,y,z`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut cols: [Vec<f64>; 4] = Default::default();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CurveError::Data(e.to_string()))?;
        for (k, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                CurveError::Data(format!("row {}: cannot parse `{field}`", row + 2))
            })?;
            cols[k].push(v);
        }
    }
    let [t, x, y, z] = cols;
    DataCurve::new(t, x, y, z)
}
