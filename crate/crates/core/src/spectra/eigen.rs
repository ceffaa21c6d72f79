use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::hamiltonian::{embed_sector_vector, real_hamiltonian, sector_hamiltonian, ParitySector};
use crate::operator::{Operator, StateVector, C64, HERMITICITY_TOL};
use crate::params::SystemParams;

/// Lowest eigenpairs, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<StateVector>,
}

/// The `k` lowest eigenpairs of a Hermitian operator.
///
/// Accepts any [`Operator`] (a `DenseHermitianOperator` derefs to one) and
/// rejects input whose Hermiticity defect exceeds the operator tolerance.
/// Real input takes the real symmetric solver.
pub fn eigendecompose(h: &Operator, k: usize) -> Result<EigenPairs> {
    let dim = h.dim();
    if k == 0 || k > dim {
        return Err(Error::InvalidParameter(format!("requested {k} eigenpairs of a {dim}x{dim} operator")));
    }
    let deviation = h.hermiticity_defect();
    if deviation > HERMITICITY_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }

    if h.is_real() {
        let (values, vecs) = symmetric_eigen(&h.real_part())?;
        let vectors = (0..k)
            .map(|c| StateVector::normalized((0..dim).map(|r| C64::new(vecs[(r, c)], 0.0)).collect()))
            .collect::<Result<Vec<_>>>()?;
        return Ok(EigenPairs { values: values[..k].to_vec(), vectors });
    }

    let evd = h.as_mat().self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let values = (0..k).map(|i| s[i].re).collect();
    let vectors = (0..k)
        .map(|c| StateVector::normalized((0..dim).map(|r| u[(r, c)]).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenPairs { values, vectors })
}

/// All eigenvalues and eigenvectors (columns) of a real symmetric matrix.
pub(crate) fn symmetric_eigen(m: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = m.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let values = (0..m.nrows()).map(|i| s[i]).collect();
    Ok((values, evd.U().to_owned()))
}

pub(crate) fn symmetric_eigenvalues(m: &Mat<f64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))
}

/// The `k` lowest eigenvalues of the full Hamiltonian for `params`.
///
/// At `ε = 0` the two parity sectors are diagonalized separately and merged,
/// halving the matrix dimension.
pub fn lowest_levels(params: &SystemParams, k: usize) -> Result<Vec<f64>> {
    let dim = params.dim();
    if k == 0 || k > dim {
        return Err(Error::InvalidParameter(format!("requested {k} levels of a {dim}-dimensional space")));
    }
    let mut values = if params.is_unbiased() {
        let mut v = symmetric_eigenvalues(&sector_hamiltonian(params, ParitySector::Even)?)?;
        v.extend(symmetric_eigenvalues(&sector_hamiltonian(params, ParitySector::Odd)?)?);
        v
    } else {
        symmetric_eigenvalues(&real_hamiltonian(params))?
    };
    values.sort_by(f64::total_cmp);
    values.truncate(k);
    Ok(values)
}

/// Spectrum of one parity sector (`ε = 0` only) together with its lowest
/// eigenvector embedded in the composite space.
pub(crate) fn sector_ground(params: &SystemParams, sector: ParitySector) -> Result<(Vec<f64>, Vec<C64>)> {
    let (values, vecs) = symmetric_eigen(&sector_hamiltonian(params, sector)?)?;
    let col: Vec<f64> = (0..vecs.nrows()).map(|r| vecs[(r, 0)]).collect();
    Ok((values, embed_sector_vector(&col, sector, params.n_max())))
}

/// Spectrum of the full real Hamiltonian with its lowest eigenvector.
pub(crate) fn full_ground(params: &SystemParams) -> Result<(Vec<f64>, Vec<C64>)> {
    let (values, vecs) = symmetric_eigen(&real_hamiltonian(params))?;
    let col = (0..vecs.nrows()).map(|r| C64::new(vecs[(r, 0)], 0.0)).collect();
    Ok((values, col))
}
