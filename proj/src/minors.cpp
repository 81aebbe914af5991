#include "fracgrad/minors.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "fracgrad/constants.hpp"
#include "fracgrad/spectral.hpp"

namespace fracgrad::minors {

namespace {

constexpr double kResidualFloor = 1e-30;

void check_increasing(const std::vector<int>& v, int n) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0 || v[i] >= n || (i > 0 && v[i] <= v[i - 1])) {
      throw RangeError("minor indices must be strictly increasing within [0, n)");
    }
  }
}

void combinations(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

SmallMatrix drop(const SmallMatrix& F, int row, int col) {
  SmallMatrix out(F.rows() - 1, F.cols() - 1);
  for (int i = 0, r = 0; i < F.rows(); ++i) {
    if (i == row) continue;
    for (int j = 0, c = 0; j < F.cols(); ++j) {
      if (j == col) continue;
      out(r, c++) = F(i, j);
    }
    ++r;
  }
  return out;
}

double relative_gap(double value, double limit) {
  return std::abs(value - limit) / (std::abs(limit) + kResidualFloor);
}

}  // namespace

std::string MinorIndex::label() const {
  std::ostringstream os;
  os << "[";
  for (int r : rows) os << r + 1;
  os << ";";
  for (int c : cols) os << c + 1;
  os << "]";
  return os.str();
}

MinorIndex make_minor_index(int n, std::vector<int> rows, std::vector<int> cols) {
  constants::check_dimension(n);
  if (rows.empty() || rows.size() != cols.size()) throw RangeError("minor needs equally many rows and columns");
  check_increasing(rows, n);
  check_increasing(cols, n);
  return MinorIndex{std::move(rows), std::move(cols)};
}

std::vector<MinorIndex> all_minors(int n) {
  constants::check_dimension(n);
  std::vector<MinorIndex> out;
  for (int k = 1; k <= n; ++k) {
    std::vector<std::vector<int>> sets;
    std::vector<int> cur;
    combinations(n, k, 0, cur, sets);
    for (const auto& r : sets) {
      for (const auto& c : sets) out.push_back(MinorIndex{r, c});
    }
  }
  return out;
}

SmallMatrix SmallMatrix::identity(int n) {
  SmallMatrix I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

double determinant(const SmallMatrix& F) {
  if (F.rows() != F.cols()) throw RangeError("determinant of a non-square matrix");
  switch (F.rows()) {
    case 0:
      return 1.0;
    case 1:
      return F(0, 0);
    case 2:
      return F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0);
    default: {
      double det = 0.0;
      for (int j = 0; j < F.cols(); ++j) {
        if (F(0, j) == 0.0) continue;
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        det += sign * F(0, j) * determinant(drop(F, 0, j));
      }
      return det;
    }
  }
}

SmallMatrix cofactor(const SmallMatrix& F) {
  if (F.rows() != F.cols()) throw RangeError("cofactor of a non-square matrix");
  const int k = F.rows();
  SmallMatrix C(k, k);
  if (k == 1) {
    C(0, 0) = 1.0;
    return C;
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      C(i, j) = sign * determinant(drop(F, i, j));
    }
  }
  return C;
}

SmallMatrix submatrix_M(const SmallMatrix& F, const MinorIndex& idx) {
  check_increasing(idx.rows, F.rows());
  check_increasing(idx.cols, F.cols());
  const int k = idx.order();
  SmallMatrix out(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) out(a, b) = F(idx.rows[a], idx.cols[b]);
  }
  return out;
}

SmallMatrix embed_Mbar(const SmallMatrix& G, const MinorIndex& idx, int n) {
  check_increasing(idx.rows, n);
  check_increasing(idx.cols, n);
  const int k = idx.order();
  if (G.rows() != k || G.cols() != k) throw RangeError("embed_Mbar: block size does not match the index");
  SmallMatrix out(n, n);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) out(idx.rows[a], idx.cols[b]) = G(a, b);
  }
  return out;
}

std::vector<double> restrict_Ntilde(std::span<const double> v, std::span<const int> rows) {
  std::vector<int> r(rows.begin(), rows.end());
  check_increasing(r, static_cast<int>(v.size()));
  std::vector<double> out(v.size(), 0.0);
  for (int i : rows) out[i] = v[i];
  return out;
}

std::vector<double> minor_vector(const SmallMatrix& F) {
  std::vector<double> out;
  for (const auto& idx : all_minors(F.rows())) out.push_back(determinant(submatrix_M(F, idx)));
  return out;
}

SmallMatrix matrix_at(const MatrixField& F, std::size_t j) {
  const int n = F.grid().n;
  SmallMatrix m(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) m(a, b) = F.entry(a, b)[j];
  }
  return m;
}

ScalarField det_field(const MatrixField& F) {
  ScalarField out(F.grid());
  auto v = out.component(0);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = determinant(matrix_at(F, j));
  return out;
}

MatrixField cof_field(const MatrixField& F) {
  const int n = F.grid().n;
  MatrixField out(F.grid());
  for (std::size_t j = 0; j < F.points(); ++j) {
    const SmallMatrix C = cofactor(matrix_at(F, j));
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) out.entry(a, b)[j] = C(a, b);
    }
  }
  return out;
}

ScalarField minor_field(const MatrixField& F, const MinorIndex& idx) {
  ScalarField out(F.grid());
  auto v = out.component(0);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = determinant(submatrix_M(matrix_at(F, j), idx));
  return out;
}

IbpResult det_ibp_residual(const VectorField& u, double s, const MinorIndex& idx, const ScalarField& phi,
                           const quadrature::QuadratureScheme& scheme) {
  const Grid& grid = u.grid();
  require_same_grid(grid, phi.grid());
  const int n = grid.n;
  check_increasing(idx.rows, n);
  check_increasing(idx.cols, n);
  const int k = idx.order();
  if (k < 2) throw RangeError("det_ibp_residual: minor order must be at least 2");

  const MatrixField Ds = spectral::fractional_gradient(u, s);
  MatrixField embedded(grid);
  for (std::size_t j = 0; j < grid.points(); ++j) {
    const SmallMatrix E = embed_Mbar(cofactor(submatrix_M(matrix_at(Ds, j), idx)), idx, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) embedded.entry(a, b)[j] = E(a, b);
    }
  }
  const VectorField K = quadrature::k_phi(phi, embedded, s, scheme);

  VectorField restricted(grid);
  for (int i : idx.rows) {
    std::copy(u.component(i).begin(), u.component(i).end(), restricted.component(i).begin());
  }

  IbpResult r;
  r.lhs = -pairing(restricted, K) / k;
  r.rhs = pairing(minor_field(Ds, idx), phi);
  r.residual = std::abs(r.lhs - r.rhs) / (std::abs(r.rhs) + kResidualFloor);
  return r;
}

SweepTable weak_pairing_sweep(const VectorField& u, const std::vector<double>& s_grid,
                              const std::vector<ScalarField>& test_functions) {
  const Grid& grid = u.grid();
  const int n = grid.n;
  for (const auto& t : test_functions) require_same_grid(grid, t.grid());

  struct Quantity {
    std::string name;
    std::function<ScalarField(const MatrixField&)> eval;
  };
  std::vector<Quantity> quantities;
  quantities.push_back({"det", [](const MatrixField& G) { return det_field(G); }});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      std::ostringstream name;
      name << "cof" << a + 1 << b + 1;
      quantities.push_back({name.str(), [a, b](const MatrixField& G) {
                              const MatrixField C = cof_field(G);
                              return ScalarField(G.grid(), {C.entry(a, b).begin(), C.entry(a, b).end()});
                            }});
    }
  }

  const MatrixField Du = spectral::classical_gradient(u);
  std::vector<std::vector<double>> limits;
  for (const auto& q : quantities) {
    const ScalarField f = q.eval(Du);
    std::vector<double> row;
    for (const auto& t : test_functions) row.push_back(pairing(f, t));
    limits.push_back(std::move(row));
  }

  SweepTable table({"s", "quantity", "value", "limit", "rel_err"});
  for (double s : s_grid) {
    const MatrixField Ds = spectral::fractional_gradient(u, s);
    for (std::size_t qi = 0; qi < quantities.size(); ++qi) {
      const ScalarField f = quantities[qi].eval(Ds);
      for (std::size_t ti = 0; ti < test_functions.size(); ++ti) {
        const double value = pairing(f, test_functions[ti]);
        const double limit = limits[qi][ti];
        table.add_row({s, quantities[qi].name + "@theta" + std::to_string(ti), value, limit,
                       relative_gap(value, limit)});
      }
    }
  }
  for (std::size_t qi = 0; qi < quantities.size(); ++qi) {
    for (std::size_t ti = 0; ti < test_functions.size(); ++ti) {
      table.add_row({std::string("local"), quantities[qi].name + "@theta" + std::to_string(ti), limits[qi][ti],
                     limits[qi][ti], 0.0});
    }
  }
  return table;
}

}  // namespace fracgrad::minors
