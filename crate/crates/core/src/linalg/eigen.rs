use super::inverse::approx_inverse;
use crate::error::{Error, Result};
use crate::interval::{IMatrix, IVector, Interval};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Verified enclosure of a simple eigenpair.
///
/// For a complex pair `λ = value + i·value_im` with eigenvector
/// `vector + i·vector_im`. The `raw_*` vectors carry the normalization used
/// in the Krawczyk test (pivot entry equal to one); `vector` is rescaled to
/// unit Euclidean length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenpairEnclosure {
    pub value: Interval,
    pub value_im: Option<Interval>,
    pub vector: IVector,
    pub vector_im: Option<IVector>,
    pub raw_vector: IVector,
    pub raw_vector_im: Option<IVector>,
    pub pivot: usize,
    /// `‖vector‖ ∈ [1 − norm_slack, 1 + norm_slack]`.
    pub norm_slack: f64,
    pub simple: bool,
}

impl EigenpairEnclosure {
    pub fn is_complex(&self) -> bool {
        self.value_im.is_some()
    }

    /// Real part excludes zero.
    pub fn is_hyperbolic(&self) -> bool {
        self.value.is_positive() || self.value.is_negative()
    }
}

/// Floating approximation of an eigenpair of a point matrix.
#[derive(Clone, Debug)]
pub struct ApproxEigenpair {
    pub re: f64,
    pub im: f64,
    pub vec_re: Vec<f64>,
    pub vec_im: Vec<f64>,
}

/// All eigenpairs of `m`, sorted by decreasing real part. Complex pairs are
/// reported once, with positive imaginary part.
pub fn approx_eigenpairs(m: &DMatrix<f64>) -> Vec<ApproxEigenpair> {
    let n = m.nrows();
    let mut vals: Vec<(f64, f64)> = m
        .clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| (z.re, z.im))
        .filter(|&(_, im)| im >= 0.0)
        .collect();
    vals.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
    let scale = m.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    vals.into_iter()
        .map(|(re, im)| {
            if im.abs() <= 1e-12 * scale {
                let shifted = m - DMatrix::identity(n, n) * re;
                let v = null_vector(&shifted);
                ApproxEigenpair {
                    re,
                    im: 0.0,
                    vec_re: v,
                    vec_im: vec![0.0; n],
                }
            } else {
                let mut big = DMatrix::zeros(2 * n, 2 * n);
                for i in 0..n {
                    for j in 0..n {
                        let a = m[(i, j)] - if i == j { re } else { 0.0 };
                        big[(i, j)] = a;
                        big[(n + i, n + j)] = a;
                    }
                    big[(i, n + i)] = im;
                    big[(n + i, i)] = -im;
                }
                let v = null_vector(&big);
                ApproxEigenpair {
                    re,
                    im,
                    vec_re: v[..n].to_vec(),
                    vec_im: v[n..].to_vec(),
                }
            }
        })
        .collect()
}

fn null_vector(m: &DMatrix<f64>) -> Vec<f64> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    v_t.row(k).iter().copied().collect()
}

/// Krawczyk test for `F(z) = 0` near the point `z0`.
///
/// `residual` must enclose `F(z0)`; `jac(Z)` must enclose `F'` over `Z`.
/// On success the returned box contains a unique zero.
pub fn krawczyk(
    z0: &[f64],
    residual: &IVector,
    jac: impl Fn(&IVector) -> Result<IMatrix>,
) -> Result<IVector> {
    let n = z0.len();
    let zc = IVector::from_points(z0);
    let r = approx_inverse(&jac(&zc)?.mid())
        .ok_or_else(|| Error::UnverifiedEigenpair("Jacobian at approximation is singular".into()))?;
    let ri = IMatrix::from_dmatrix(&r);
    let step = ri.mul_vec(residual)?.map(|x| -x);
    let eye = IMatrix::identity(n);
    let mut delta: IVector = step
        .iter()
        .zip(z0)
        .map(|(d, z)| {
            let rho = 2.0 * d.mag() + 1e-15 * z.abs().max(1e-3);
            Interval::symmetric(rho)
        })
        .collect();
    for _ in 0..12 {
        let z = zc.add(&delta)?;
        let c = eye.sub(&ri.matmul(&jac(&z)?)?)?;
        let k_delta = step.add(&c.mul_vec(&delta)?)?;
        if delta.interior_contains(&k_delta) {
            return zc.add(&k_delta);
        }
        delta = delta
            .hull(&k_delta)?
            .iter()
            .map(|d| d.inflate(0.5, 1e-300))
            .collect();
    }
    Err(Error::UnverifiedEigenpair("Krawczyk operator did not contract".into()))
}

/// Certify the eigenpair of the interval matrix `a` closest to the given
/// approximation. A nonzero `approx_im` requests a complex pair.
pub fn enclose_simple_eigenpair(
    a: &IMatrix,
    approx_value: (f64, f64),
    approx_vector: (&[f64], &[f64]),
) -> Result<EigenpairEnclosure> {
    if !a.is_square() || approx_vector.0.len() != a.rows() {
        return Err(Error::Shape("eigenpair of non-square matrix".into()));
    }
    if approx_value.1 == 0.0 {
        enclose_real(a, approx_value.0, approx_vector.0)
    } else {
        enclose_complex(a, approx_value, approx_vector)
    }
}

fn pivot_of(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

fn enclose_real(a: &IMatrix, lambda: f64, v: &[f64]) -> Result<EigenpairEnclosure> {
    let n = a.rows();
    let k = pivot_of(v);
    if v[k] == 0.0 {
        return Err(Error::UnverifiedEigenpair("zero approximate vector".into()));
    }
    let mut z0: Vec<f64> = v.iter().map(|x| x / v[k]).collect();
    z0[k] = 1.0;
    z0.push(lambda);

    let eval = |z: &IVector| -> Result<IVector> {
        let vv = z.slice(0..n);
        let l = z[n];
        let av = a.mul_vec(&vv)?;
        let mut out: Vec<Interval> = (0..n).map(|i| av[i] - l * vv[i]).collect();
        out.push(vv[k] - 1.0);
        Ok(IVector::new(out))
    };
    let jac = |z: &IVector| -> Result<IMatrix> {
        let l = z[n];
        Ok(IMatrix::from_fn(n + 1, n + 1, |i, j| {
            if i < n {
                if j < n {
                    if i == j {
                        a[(i, j)] - l
                    } else {
                        a[(i, j)]
                    }
                } else {
                    -z[i]
                }
            } else if j == k {
                Interval::ONE
            } else {
                Interval::ZERO
            }
        }))
    };
    let res = eval(&IVector::from_points(&z0))?;
    let z = krawczyk(&z0, &res, jac)?;
    let raw = z.slice(0..n);
    let (vector, norm_slack) = normalize(&raw, None)?;
    Ok(EigenpairEnclosure {
        value: z[n],
        value_im: None,
        vector: vector.0,
        vector_im: None,
        raw_vector: raw,
        raw_vector_im: None,
        pivot: k,
        norm_slack,
        simple: true,
    })
}

fn enclose_complex(
    a: &IMatrix,
    (re, im): (f64, f64),
    (p, q): (&[f64], &[f64]),
) -> Result<EigenpairEnclosure> {
    let n = a.rows();
    // Pivot on the largest complex modulus, then rotate so that entry is real 1.
    let k = (0..n)
        .max_by(|&i, &j| (p[i].hypot(q[i])).total_cmp(&p[j].hypot(q[j])))
        .unwrap_or(0);
    let (pk, qk) = (p[k], q[k]);
    let d = pk * pk + qk * qk;
    if d == 0.0 {
        return Err(Error::UnverifiedEigenpair("zero approximate vector".into()));
    }
    // (p + iq) / (pk + i qk)
    let mut z0 = vec![0.0; 2 * n + 2];
    for i in 0..n {
        z0[i] = (p[i] * pk + q[i] * qk) / d;
        z0[n + i] = (q[i] * pk - p[i] * qk) / d;
    }
    z0[k] = 1.0;
    z0[n + k] = 0.0;
    z0[2 * n] = re;
    z0[2 * n + 1] = im;

    let eval = |z: &IVector| -> Result<IVector> {
        let pv = z.slice(0..n);
        let qv = z.slice(n..2 * n);
        let (al, be) = (z[2 * n], z[2 * n + 1]);
        let ap = a.mul_vec(&pv)?;
        let aq = a.mul_vec(&qv)?;
        let mut out = Vec::with_capacity(2 * n + 2);
        for i in 0..n {
            out.push(ap[i] - al * pv[i] + be * qv[i]);
        }
        for i in 0..n {
            out.push(aq[i] - be * pv[i] - al * qv[i]);
        }
        out.push(pv[k] - 1.0);
        out.push(qv[k]);
        Ok(IVector::new(out))
    };
    let jac = |z: &IVector| -> Result<IMatrix> {
        let (al, be) = (z[2 * n], z[2 * n + 1]);
        let m = 2 * n + 2;
        let mut j = IMatrix::zeros(m, m);
        for i in 0..n {
            for c in 0..n {
                let mut v = a[(i, c)];
                if i == c {
                    v -= al;
                }
                j[(i, c)] = v;
                j[(n + i, n + c)] = v;
            }
            j[(i, n + i)] = be;
            j[(n + i, i)] = -be;
            j[(i, 2 * n)] = -z[i];
            j[(i, 2 * n + 1)] = z[n + i];
            j[(n + i, 2 * n)] = -z[n + i];
            j[(n + i, 2 * n + 1)] = -z[i];
        }
        j[(2 * n, k)] = Interval::ONE;
        j[(2 * n + 1, n + k)] = Interval::ONE;
        Ok(j)
    };
    let res = eval(&IVector::from_points(&z0))?;
    let z = krawczyk(&z0, &res, jac)?;
    let raw_p = z.slice(0..n);
    let raw_q = z.slice(n..2 * n);
    let ((vp, vq), norm_slack) = normalize(&raw_p, Some(&raw_q))?;
    let value_im = z[2 * n + 1];
    if value_im.contains(0.0) {
        return Err(Error::UnverifiedEigenpair(
            "imaginary part not separated from zero".into(),
        ));
    }
    Ok(EigenpairEnclosure {
        value: z[2 * n],
        value_im: Some(value_im),
        vector: vp,
        vector_im: vq,
        raw_vector: raw_p,
        raw_vector_im: Some(raw_q),
        pivot: k,
        norm_slack,
        simple: true,
    })
}

type Normalized = ((IVector, Option<IVector>), f64);

fn normalize(p: &IVector, q: Option<&IVector>) -> Result<Normalized> {
    let mut sq: Interval = p.iter().map(|x| x.sqr()).sum();
    if let Some(q) = q {
        sq += q.iter().map(|x| x.sqr()).sum();
    }
    let norm = sq.sqrt_truncated()?;
    let div = |v: &IVector| -> Result<IVector> {
        v.iter().map(|x| x.checked_div(&norm)).collect()
    };
    let vp = div(p)?;
    let vq = q.map(div).transpose()?;
    let mut sq2: Interval = vp.iter().map(|x| x.sqr()).sum();
    if let Some(vq) = &vq {
        sq2 += vq.iter().map(|x| x.sqr()).sum();
    }
    let n2 = sq2.sqrt_truncated()?;
    let slack = (1.0 - n2.lo()).max(n2.hi() - 1.0).max(0.0);
    Ok(((vp, vq), slack))
}

/// Certify every eigenpair of `a`, sorted by decreasing real part.
pub fn enclose_spectrum(a: &IMatrix) -> Result<Vec<EigenpairEnclosure>> {
    let approx = approx_eigenpairs(&a.mid());
    let pairs = approx
        .iter()
        .map(|e| enclose_simple_eigenpair(a, (e.re, e.im), (&e.vec_re, &e.vec_im)))
        .collect::<Result<Vec<_>>>()?;
    // Disjoint real-part enclosures among real eigenvalues certify that they
    // are distinct, hence simple.
    for (i, x) in pairs.iter().enumerate() {
        for y in &pairs[i + 1..] {
            if !x.is_complex() && !y.is_complex() && x.value.intersects(&y.value) {
                return Err(Error::UnverifiedEigenpair(format!(
                    "overlapping enclosures {} and {}",
                    x.value, y.value
                )));
            }
        }
    }
    Ok(pairs)
}
