#include "diqss/qmath.hpp"

#include <algorithm>
#include <cmath>

#include "diqss/errors.hpp"

namespace diqss {

namespace {

std::size_t qubit_count(std::size_t n) {
  switch (n) {
    case 2: return 1;
    case 4: return 2;
    case 8: return 3;
    default:
      throw UsageError("state length must be 2, 4 or 8, got " + std::to_string(n));
  }
}

}  // namespace

ComplexVec::ComplexVec(std::vector<Complex> amplitudes)
    : amplitudes_(std::move(amplitudes)), qubits_(qubit_count(amplitudes_.size())) {}

double ComplexVec::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amplitudes_) total += std::norm(a);
  return total;
}

bool ComplexVec::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

Matrix ComplexVec::projector() const {
  const auto n = static_cast<Eigen::Index>(amplitudes_.size());
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = amplitudes_[static_cast<std::size_t>(i)];
  return v * v.adjoint();
}

std::string density_matrix_violation(const Matrix& m) {
  if (m.rows() != m.cols()) return "matrix is not square";
  if (m.rows() != 2 && m.rows() != 4 && m.rows() != 8) return "dimension must be 2, 4 or 8";
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > Tolerance::algebraic) return "not Hermitian";
  const Complex tr = m.trace();
  if (std::abs(tr.real() - 1.0) > Tolerance::algebraic || std::abs(tr.imag()) > Tolerance::algebraic)
    return "trace is not 1";
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -Tolerance::spectral) return "not positive semidefinite";
  return {};
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (auto why = density_matrix_violation(entries_); !why.empty())
    throw UsageError("invalid density matrix: " + why);
}

DensityMatrix DensityMatrix::from_pure(const ComplexVec& psi) {
  if (!psi.is_normalized()) throw UsageError("state is not normalized");
  return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::mix(double weight, const DensityMatrix& other) const {
  if (other.dim() != dim()) throw UsageError("cannot mix density matrices of different size");
  if (weight < 0.0 || weight > 1.0) throw UsageError("mixture weight outside [0,1]");
  return DensityMatrix(weight * entries_ + (1.0 - weight) * other.entries_);
}

Matrix ObservableXY::matrix() const {
  Matrix m(2, 2);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  m << Complex(0.0, 0.0), Complex(c, -s),
       Complex(c, s), Complex(0.0, 0.0);
  return m;
}

Matrix pauli_x() { return ObservableXY{0.0}.matrix(); }

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1),
       Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << Complex(1, 0), Complex(0, 0),
       Complex(0, 0), Complex(-1, 0);
  return m;
}

Matrix identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Matrix::Identity(n, n);
}

ComplexVec ghz_state(int index, Sign sign) {
  // first ket of each pair; the partner is its bitwise complement
  static constexpr std::size_t first_ket[] = {0b000, 0b001, 0b010, 0b011};
  if (index < 1 || index > 4) throw UsageError("GHZ index must be in 1..4");
  const std::size_t lo = first_ket[index - 1];
  const std::size_t hi = 0b111 ^ lo;
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Complex> amps(8, Complex(0.0, 0.0));
  amps[lo] = r;
  amps[hi] = sign == Sign::plus ? r : -r;
  return ComplexVec(std::move(amps));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix tensor3(const Matrix& a, const Matrix& b, const Matrix& c) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2 || c.rows() != 2 ||
      c.cols() != 2)
    throw UsageError("tensor3 expects three 2x2 operators");
  return kron(kron(a, b), c);
}

double expectation(const DensityMatrix& rho, const Matrix& obs) {
  if (obs.rows() != obs.cols() || static_cast<std::size_t>(obs.rows()) != rho.dim())
    throw UsageError("observable dimension does not match the state");
  return (rho.matrix() * obs).trace().real();
}

double correlator(const DensityMatrix& rho, const ObservableXY& a, const ObservableXY& b,
                  const ObservableXY& c) {
  const double v = expectation(rho, tensor3(a.matrix(), b.matrix(), c.matrix()));
  return std::clamp(v, -1.0, 1.0);
}

}  // namespace diqss
