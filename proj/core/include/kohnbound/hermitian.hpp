#pragma once

#include "kohnbound/types.hpp"

namespace kohnbound {

/// Eigen-decomposition of a Hermitian matrix. `values` are sorted
/// ascending; column k of `vectors` is the unit eigenvector for values[k].
struct EigenDecomposition {
  RVec values;
  CMat vectors;
};

/// Cyclic complex Jacobi iteration. Intended for the small dense matrices
/// arising from complex Hessians; quadratically convergent.
EigenDecomposition hermitian_eig(CMat a);

/// Largest eigenvalue modulus of a Hermitian matrix. Rejects input whose
/// Hermitian defect exceeds 1e-12 times the max entry.
double spectral_radius_hermitian(const CMat& h);

/// Inverse of a Hermitian positive definite matrix through its
/// eigen-decomposition.
CMat hermitian_inverse(const EigenDecomposition& eig);

}  // namespace kohnbound
