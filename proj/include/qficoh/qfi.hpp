#pragma once

#include "qficoh/states.hpp"

namespace qficoh {

// Quantum Fisher information of rho for the unitary family exp(-i A theta).
//
// Convention used everywhere in this library: the spectral sum
//   F(rho, A) = 2 * sum_{l,l': lam_l + lam_l' > 0}
//               (lam_l - lam_l')^2 / (lam_l + lam_l') * |<phi_l|A|phi_l'>|^2,
// which evaluates to 4 * variance(A) on pure states. Representations that
// are natural in the variance normalization (pure_qfi's underlying variance,
// the Z-matrix identity) are rescaled by 4 to this convention.
double qfi(const DensityMatrix& rho, const Matrix& a, const TolerancePolicy& tol = {});

// 4 * (<psi|A^2|psi> - <psi|A|psi>^2) for a normalized vector.
double pure_qfi(const Vector& psi, const Matrix& a, const TolerancePolicy& tol = {});

// Z_A = sum_{l,l'} sqrt(2 lam_l lam_l' / (lam_l + lam_l'))
//       |phi_l><phi_l| A |phi_l'><phi_l'|, with the 0/0 coefficient set to 0.
Matrix z_matrix(const DensityMatrix& rho, const Matrix& a, const TolerancePolicy& tol = {});

// The same QFI through the Z-matrix identity, 4 * (tr(rho A^2) - tr(Z_A^2)).
// Agrees with qfi() within numerical tolerance; kept as an independent route
// for cross-validation.
double qfi_via_z(const DensityMatrix& rho, const Matrix& a, const TolerancePolicy& tol = {});

} // namespace qficoh
