// Small complex linear algebra for 1-, 2- and 3-qubit systems.
//
// Basis ordering is big-endian over parties A, B, C with H = 0 and V = 1,
// i.e. index = 4*a + 2*b + c, so |HHH>, |HHV>, ..., |VVV>.

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace diqss {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct Tolerance {
  static constexpr double algebraic = 1e-12;
  static constexpr double spectral = 1e-10;
};

// Pure state amplitudes for k = 1..3 qubits.
class ComplexVec {
 public:
  explicit ComplexVec(std::vector<Complex> amplitudes);

  std::size_t size() const { return amplitudes_.size(); }
  std::size_t qubits() const { return qubits_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }

  double norm_squared() const;
  bool is_normalized(double tol = Tolerance::algebraic) const;

  // |psi><psi|
  Matrix projector() const;

 private:
  std::vector<Complex> amplitudes_;
  std::size_t qubits_;
};

// Validated mixed state: Hermitian, unit trace, PSD (eigenvalue floor
// -Tolerance::spectral).
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries);
  static DensityMatrix from_pure(const ComplexVec& psi);

  const Matrix& matrix() const { return entries_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }

  // Convex combination w*this + (1-w)*other.
  DensityMatrix mix(double weight, const DensityMatrix& other) const;

 private:
  Matrix entries_;
};

// Returns an empty string when `m` is a valid density matrix, otherwise the
// first violated condition.
std::string density_matrix_violation(const Matrix& m);

// cos(angle) * sigma_x + sin(angle) * sigma_y
struct ObservableXY {
  double angle = 0.0;

  Matrix matrix() const;
};

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix identity(std::size_t dim);

enum class Sign { plus, minus };

// |GHZ_index^sign>, index in 1..4:
//   1: |HHH> +- |VVV>   2: |HHV> +- |VVH>
//   3: |HVH> +- |VHV>   4: |HVV> +- |VHH>
ComplexVec ghz_state(int index, Sign sign);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix tensor3(const Matrix& a, const Matrix& b, const Matrix& c);

// Tr(rho * obs), real part. Throws std::invalid_argument on size mismatch.
double expectation(const DensityMatrix& rho, const Matrix& obs);

// <a (x) b (x) c> for three XY-plane observables, clamped to [-1, 1].
double correlator(const DensityMatrix& rho, const ObservableXY& a,
                  const ObservableXY& b, const ObservableXY& c);

}  // namespace diqss
