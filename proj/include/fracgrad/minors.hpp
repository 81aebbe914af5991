#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "fracgrad/grid.hpp"
#include "fracgrad/quadrature.hpp"
#include "fracgrad/sweep_table.hpp"

namespace fracgrad::minors {

/// Rows i_1 < ... < i_k and columns j_1 < ... < j_k of a k x k minor of an
/// n x n matrix. Indices are 0-based; labels print them 1-based.
struct MinorIndex {
  std::vector<int> rows;
  std::vector<int> cols;

  int order() const { return static_cast<int>(rows.size()); }
  std::string label() const;
};

/// Validates strictly increasing indices in [0, n).
MinorIndex make_minor_index(int n, std::vector<int> rows, std::vector<int> cols);

/// Every minor of an n x n matrix: order ascending, then rows, then columns
/// lexicographically. Length sum_k C(n,k)^2 (5 for n = 2).
std::vector<MinorIndex> all_minors(int n);

/// Dense row-major matrix of size at most 4 x 4.
class SmallMatrix {
public:
  SmallMatrix() = default;
  SmallMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}
  static SmallMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[i * 4 + j]; }
  double operator()(int i, int j) const { return a_[i * 4 + j]; }

  friend bool operator==(const SmallMatrix&, const SmallMatrix&) = default;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::array<double, 16> a_{};
};

/// Laplace expansion along the first row.
double determinant(const SmallMatrix& F);
/// cof F_{ij} = (-1)^{i+j} det(F without row i and column j); cof of a 1x1 is [1].
SmallMatrix cofactor(const SmallMatrix& F);

/// The submatrix of F on the selected rows and columns.
SmallMatrix submatrix_M(const SmallMatrix& F, const MinorIndex& idx);
/// n x n matrix carrying G on the selected rows/columns, zero elsewhere.
SmallMatrix embed_Mbar(const SmallMatrix& G, const MinorIndex& idx, int n);
/// Copy of v with every entry outside `rows` set to zero.
std::vector<double> restrict_Ntilde(std::span<const double> v, std::span<const int> rows);

/// All minors in all_minors() order.
std::vector<double> minor_vector(const SmallMatrix& F);

/// Pointwise value of F at grid point j.
SmallMatrix matrix_at(const MatrixField& F, std::size_t j);

ScalarField det_field(const MatrixField& F);
MatrixField cof_field(const MatrixField& F);
ScalarField minor_field(const MatrixField& F, const MinorIndex& idx);

struct IbpResult {
  double lhs = 0.0;  ///< -(1/k) int N(u) . K_phi(Mbar(cof M(D^s u)))
  double rhs = 0.0;  ///< int det M(D^s u) phi
  double residual = 0.0;
};

/// Nonlocal determinant integration by parts, both sides computed
/// independently: D^s u spectrally, K_phi by direct quadrature. Needs k >= 2.
IbpResult det_ibp_residual(const VectorField& u, double s, const MinorIndex& idx, const ScalarField& phi,
                           const quadrature::QuadratureScheme& scheme = {});

/// Pairings of det D^s u and each cofactor entry of D^s u with every test
/// function, against their classical (Du) limits. Columns
/// s, quantity, value, limit, rel_err; one trailing block with s = "local".
SweepTable weak_pairing_sweep(const VectorField& u, const std::vector<double>& s_grid,
                              const std::vector<ScalarField>& test_functions);

}  // namespace fracgrad::minors
