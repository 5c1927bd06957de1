//! Linear, polynomial, and finite-atomic Gaussian kernels on tuples of
//! algebra elements, and the QR polynomial kernel.

use super::GaussianAtom;
use crate::algebra::{expm, qr_decompose, AlgebraValue, DenseOperator};
use crate::error::{Error, Result};
use num_complex::Complex64;

fn check_tuple(d: usize, xs: &[AlgebraValue], ys: &[AlgebraValue], p: usize) -> Result<()> {
    if xs.len() != d || ys.len() != d {
        return Err(Error::InputMismatch(format!(
            "kernel expects tuples of length d={d}, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    for v in xs.iter().chain(ys.iter()) {
        if v.p() != p {
            return Err(Error::DimensionMismatch { expected: p, got: v.p() });
        }
    }
    Ok(())
}

/// `k(x, y) = sum_i a1[i]* x_i* a2[i]* a2[i] y_i a1[i]`.
pub fn eval_linear(
    d: usize,
    a1: &[AlgebraValue],
    a2: &[AlgebraValue],
    xs: &[AlgebraValue],
    ys: &[AlgebraValue],
) -> Result<AlgebraValue> {
    let p = a1[0].p();
    check_tuple(d, xs, ys, p)?;
    let mut acc: Option<AlgebraValue> = None;
    for i in 0..d {
        let left = a1[i].adjoint().mul(&xs[i].adjoint())?.mul(&a2[i].adjoint())?;
        let right = a2[i].mul(&ys[i])?.mul(&a1[i])?;
        let term = left.mul(&right)?;
        acc = Some(match acc {
            Some(cur) => cur.add(&term)?,
            None => term,
        });
    }
    Ok(acc.expect("d >= 1"))
}

/// The degree-`q` product kernel
/// `k(x, y) = sum_i (prod_{j=1..q} a[i][j]* x_i*) a[i][q+1]* a[i][q+1]
///            (prod_{j=1..q} y_i a[i][q+1-j])`, with the right factor's
/// parameters multiplied in reversed index order, exactly as the closed
/// form requires for Hermitian symmetry.
pub fn eval_polynomial(
    d: usize,
    q: usize,
    a: &[Vec<AlgebraValue>],
    xs: &[AlgebraValue],
    ys: &[AlgebraValue],
) -> Result<AlgebraValue> {
    let p = a[0][0].p();
    check_tuple(d, xs, ys, p)?;
    let mut acc: Option<AlgebraValue> = None;
    for i in 0..d {
        let row = &a[i];
        // left = a_{i,1}* x* a_{i,2}* x* ... a_{i,q}* x*
        let mut left: Option<AlgebraValue> = None;
        for j in 0..q {
            let factor = row[j].adjoint().mul(&xs[i].adjoint())?;
            left = Some(match left {
                Some(cur) => cur.mul(&factor)?,
                None => factor,
            });
        }
        let mid = row[q].adjoint().mul(&row[q])?;
        // right = y a_{i,q} y a_{i,q-1} ... y a_{i,1}
        let mut right: Option<AlgebraValue> = None;
        for j in 1..=q {
            let factor = ys[i].mul(&row[q - j])?;
            right = Some(match right {
                Some(cur) => cur.mul(&factor)?,
                None => factor,
            });
        }
        let term = left.expect("q >= 1").mul(&mid)?.mul(&right.expect("q >= 1"))?;
        acc = Some(match acc {
            Some(cur) => cur.add(&term)?,
            None => term,
        });
    }
    Ok(acc.expect("d >= 1"))
}

/// Finite-atomic Gaussian kernel `sum_k E_k(x)* w_k E_k(y)` with
/// `E_k(v) = exp(i sum_i a2[i] v_i a1[i])` evaluated by scaling-and-squaring.
pub fn eval_gaussian_atomic(
    d: usize,
    atoms: &[GaussianAtom],
    xs: &[AlgebraValue],
    ys: &[AlgebraValue],
) -> Result<DenseOperator> {
    let p = atoms[0].weight.p();
    check_tuple(d, xs, ys, p)?;
    let mut acc = DenseOperator::zeros(p);
    for atom in atoms {
        let ex = atom_exponential(atom, xs)?;
        let ey = atom_exponential(atom, ys)?;
        let term = ex.adjoint().mul(&atom.weight)?.mul(&ey)?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

fn atom_exponential(atom: &GaussianAtom, vs: &[AlgebraValue]) -> Result<DenseOperator> {
    let p = atom.weight.p();
    let mut exponent = DenseOperator::zeros(p);
    for (i, v) in vs.iter().enumerate() {
        let term = atom.a2[i].mul(&v.to_dense())?.mul(&atom.a1[i])?;
        exponent = exponent.add(&term)?;
    }
    Ok(expm(&exponent.scale(Complex64::new(0.0, 1.0))))
}

/// `k(x, y) = sum_{i=1}^degree R_x* (I - c Q_x*)^i (I - c Q_y)^i R_y`,
/// computed as `sum_i X_i* Y_i` with `X_i = (I - c Q_x)^i R_x`.
pub fn eval_qr_poly(
    c: f64,
    degree: usize,
    x: &DenseOperator,
    y: &DenseOperator,
) -> Result<DenseOperator> {
    if x.p() != y.p() {
        return Err(Error::DimensionMismatch { expected: x.p(), got: y.p() });
    }
    let p = x.p();
    let (qx, rx) = qr_decompose(x);
    let (qy, ry) = qr_decompose(y);
    let cs = Complex64::new(c, 0.0);
    let mx = DenseOperator::identity(p).sub(&qx.scale(cs))?;
    let my = DenseOperator::identity(p).sub(&qy.scale(cs))?;
    let mut xi = rx;
    let mut yi = ry;
    let mut acc = DenseOperator::zeros(p);
    for _ in 0..degree {
        xi = mx.mul(&xi)?;
        yi = my.mul(&yi)?;
        acc = acc.add(&xi.adjoint().mul(&yi)?)?;
    }
    Ok(acc)
}
