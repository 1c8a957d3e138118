use crate::error::{domain, Error, Result};

/// Values of a (possibly vector-valued) path at the uniform grid `u_i = i/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    grid: usize,
    dim: usize,
    values: Vec<f64>,
}

impl SampledPath {
    /// `values` is row-major with `grid + 1` rows of `dim` entries.
    pub fn new(grid: usize, dim: usize, values: Vec<f64>) -> Result<Self> {
        if grid == 0 {
            return Err(Error::InvalidParameter("grid size must be >= 1".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if values.len() != (grid + 1) * dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} values for grid {grid} x dim {dim}, got {}",
                (grid + 1) * dim,
                values.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(SampledPath { grid, dim, values })
    }

    /// Scalar path; the grid size is `values.len() - 1`.
    pub fn scalar(values: Vec<f64>) -> Result<Self> {
        let grid = values.len().saturating_sub(1);
        Self::new(grid, 1, values)
    }

    pub fn zeros(grid: usize, dim: usize) -> Result<Self> {
        Self::new(grid, dim, vec![0.0; (grid + 1) * dim])
    }

    pub(crate) fn from_parts_unchecked(grid: usize, dim: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), (grid + 1) * dim);
        SampledPath { grid, dim, values }
    }

    /// Number of grid cells `N`; the path holds `N + 1` points.
    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// Euclidean norm of `path((a + m)/N) - path(a/N)`.
    #[inline]
    pub fn increment_norm(&self, a: usize, m: usize) -> f64 {
        if self.dim == 1 {
            (self.values[a + m] - self.values[a]).abs()
        } else {
            let (x, y) = (self.point(a), self.point(a + m));
            x.iter()
                .zip(y)
                .map(|(p, q)| (q - p) * (q - p))
                .sum::<f64>()
                .sqrt()
        }
    }

    /// Magnitudes `|path((a+m)/N) - path(a/N)|` for `a = 0..=N-m`.
    pub fn lag_increments(&self, m: usize) -> Result<Vec<f64>> {
        self.check_lag(m)?;
        Ok((0..=self.grid - m)
            .map(|a| self.increment_norm(a, m))
            .collect())
    }

    pub fn check_lag(&self, m: usize) -> Result<()> {
        if m == 0 || m > self.grid {
            Err(Error::LagOutOfRange {
                lag: m,
                max: self.grid,
            })
        } else {
            Ok(())
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        SampledPath {
            grid: self.grid,
            dim: self.dim,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Pointwise sum with `scale · drift`, where `drift` holds one scalar per
    /// grid point and is added to every coordinate.
    pub fn add_drift(&mut self, drift: &[f64], scale: f64) -> Result<()> {
        if drift.len() != self.grid + 1 {
            return Err(Error::InvalidParameter(format!(
                "drift has {} points, path has {}",
                drift.len(),
                self.grid + 1
            )));
        }
        if scale == 0.0 {
            return Ok(());
        }
        for (row, &f) in self.values.chunks_mut(self.dim).zip(drift) {
            for v in row {
                *v += scale * f;
            }
        }
        Ok(())
    }
}

/// `n` observations of dimension `d`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Observations {
    n: usize,
    dim: usize,
    data: Vec<f64>,
}

impl Observations {
    pub fn new(n: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || dim == 0 {
            return Err(Error::InvalidParameter(
                "observations need n >= 1 and d >= 1".into(),
            ));
        }
        if data.len() != n * dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} values for {n} x {dim}, got {}",
                n * dim,
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Observations { n, dim, data })
    }

    pub fn scalar(data: Vec<f64>) -> Result<Self> {
        let n = data.len();
        Self::new(n, 1, data)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Observation `X_t` for `t = 1..=n`.
    pub fn get(&self, t: usize) -> &[f64] {
        &self.data[(t - 1) * self.dim..t * self.dim]
    }

    /// Euclidean norms `|X_t|`.
    pub fn norms(&self) -> Vec<f64> {
        self.data
            .chunks(self.dim)
            .map(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt())
            .collect()
    }
}

/// Prefix sums `P_0 = 0`, `P_k = Σ_{t<=k} X_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixSums {
    n: usize,
    dim: usize,
    sums: Vec<f64>,
}

impl PrefixSums {
    pub fn new(x: &Observations) -> Self {
        let (n, dim) = (x.len(), x.dim());
        let mut sums = vec![0.0; (n + 1) * dim];
        for t in 1..=n {
            for j in 0..dim {
                sums[t * dim + j] = sums[(t - 1) * dim + j] + x.data[(t - 1) * dim + j];
            }
        }
        PrefixSums { n, dim, sums }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sum(&self, k: usize) -> &[f64] {
        &self.sums[k * self.dim..(k + 1) * self.dim]
    }

    pub fn raw(&self) -> &[f64] {
        &self.sums
    }

    /// `X_k = P_k - P_{k-1}`.
    pub fn observation(&self, k: usize) -> Vec<f64> {
        self.sum(k)
            .iter()
            .zip(self.sum(k - 1))
            .map(|(a, b)| a - b)
            .collect()
    }

    /// Euclidean norm of `P_{b} - P_{a}`.
    #[inline]
    pub fn block_norm(&self, a: usize, b: usize) -> f64 {
        if self.dim == 1 {
            (self.sums[b] - self.sums[a]).abs()
        } else {
            self.sum(b)
                .iter()
                .zip(self.sum(a))
                .map(|(p, q)| (p - q) * (p - q))
                .sum::<f64>()
                .sqrt()
        }
    }

    /// Step process `P_{⌊un⌋} / √n`.
    pub fn eval(&self, u: f64) -> Result<Vec<f64>> {
        if !(0.0..=1.0).contains(&u) {
            return Err(domain("u", u, "[0, 1]"));
        }
        let k = ((u * self.n as f64).floor() as usize).min(self.n);
        let scale = 1.0 / (self.n as f64).sqrt();
        Ok(self.sum(k).iter().map(|v| v * scale).collect())
    }

    /// The step process sampled at `k/n`, `k = 0..=n`.
    pub fn to_path(&self) -> SampledPath {
        let scale = 1.0 / (self.n as f64).sqrt();
        SampledPath::from_parts_unchecked(
            self.n,
            self.dim,
            self.sums.iter().map(|v| v * scale).collect(),
        )
    }
}

/// Polygonal partial-sum process
/// `S_n(u) = P_{⌊un⌋}/√n + (un - ⌊un⌋) X_{⌈un⌉}/√n` at `u = i/(Rn)`.
pub fn partial_sum_polygonal(x: &Observations, refine: usize) -> Result<SampledPath> {
    if refine == 0 {
        return Err(Error::InvalidParameter("refine must be >= 1".into()));
    }
    let (n, dim) = (x.len(), x.dim());
    let prefix = PrefixSums::new(x);
    let grid = n * refine;
    let scale = 1.0 / (n as f64).sqrt();
    let mut values = Vec::with_capacity((grid + 1) * dim);
    for i in 0..=grid {
        let (k, rem) = (i / refine, i % refine);
        let frac = rem as f64 / refine as f64;
        for j in 0..dim {
            let mut v = prefix.sums[k * dim + j];
            if rem > 0 {
                v += frac * x.data[k * dim + j];
            }
            values.push(v * scale);
        }
    }
    Ok(SampledPath::from_parts_unchecked(grid, dim, values))
}

/// Step (non-interpolated) partial-sum process as a prefix-sum table.
pub fn partial_sum_step(x: &Observations) -> PrefixSums {
    PrefixSums::new(x)
}
