#pragma once

#include "fracgrad/grid.hpp"

/// Fourier-multiplier discretization of the Riesz fractional calculus on the
/// periodic box. Symbols are evaluated at xi = k / L:
///
///   D^s          2 pi i xi |2 pi xi|^{s-1}        (s = 1 gives the classical D)
///   div^s        sum_j of the same symbol on component j
///   I_alpha      |2 pi xi|^{-alpha}
///   FTC inverse  -2 pi i xi . V / |2 pi xi|^{1+s}
///
/// The zero frequency of every symbol is 0, so the operators annihilate
/// means. Odd symbols also drop the Nyquist bin (k_a = -N/2 on any axis).
namespace fracgrad::spectral {

VectorField fractional_gradient(const ScalarField& u, double s);
/// Row i of the result is D^s u_i.
MatrixField fractional_gradient(const VectorField& u, double s);

ScalarField fractional_divergence(const VectorField& phi, double s);
/// Row-wise divergence: component i of the result is div^s of row i.
VectorField fractional_divergence(const MatrixField& P, double s);

VectorField classical_gradient(const ScalarField& u);
MatrixField classical_gradient(const VectorField& u);
ScalarField classical_divergence(const VectorField& phi);
VectorField classical_divergence(const MatrixField& P);

/// Componentwise Riesz potential of order alpha in (0, n). Each component
/// must have zero mean (|mean| <= 1e-10 max|f|); a nonzero mean is a
/// modelling error on the torus and is rejected rather than dropped.
template <int Rank>
Field<Rank> riesz_potential(const Field<Rank>& f, double alpha);

/// Inverts V = D^s u back to u - mean(u). V must lie in the range of D^s:
/// every Fourier mode of V parallel to xi within 1e-8 of max |V_k|.
ScalarField ftc_reconstruct(const VectorField& V, double s);

/// I_{s - s_bar} applied to D^s u, checked against D^{s_bar} u to the given
/// relative L^2 tolerance (SolveError on mismatch). Requires 0 < s_bar <= s < 1;
/// s_bar == s returns D^s u unchanged.
VectorField semigroup_compose(const ScalarField& u, double s, double s_bar, double tolerance = 1e-12);
MatrixField semigroup_compose(const VectorField& u, double s, double s_bar, double tolerance = 1e-12);

}  // namespace fracgrad::spectral
