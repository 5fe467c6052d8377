#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>

#include "twomode/errors.hpp"

namespace twomode {

using cplx = std::complex<double>;

// Numerical contract shared across the library.
inline constexpr double kHermitianTol = 1e-12;  // max |M - M^dag|, relative to max entry
inline constexpr double kTraceTol = 1e-10;      // |tr - 1|
inline constexpr double kPsdFloor = -1e-10;     // eigenvalue floor
inline constexpr double kSsrTol = 1e-10;        // coherence residual
inline constexpr double kWeightTol = 1e-12;     // dropped/ensemble weight
inline constexpr double kDetectionMargin = 1e-10;

enum class Mode { A, B };

// Two-mode Fock basis truncated at total occupation n_max, sector-major:
// basis states ordered by total number n = n_a + n_b, and within each
// sector by ascending n_b. dim = (n_max+1)(n_max+2)/2.
class FockSpace {
 public:
  explicit FockSpace(std::int64_t n_max);

  std::int64_t n_max() const { return n_max_; }
  std::int64_t dim() const { return dim_; }

  std::int64_t index_of(std::int64_t n_a, std::int64_t n_b) const;
  std::pair<std::int64_t, std::int64_t> occupations_of(std::int64_t index) const;
  std::int64_t total_of(std::int64_t index) const;

  // first basis index of the total-number-n sector
  std::int64_t sector_begin(std::int64_t n) const { return n * (n + 1) / 2; }

  friend bool operator==(const FockSpace& a, const FockSpace& b) {
    return a.n_max_ == b.n_max_;
  }

 private:
  std::int64_t n_max_;
  std::int64_t dim_;
};

// Normalized pure state over a FockSpace.
class StateVector {
 public:
  StateVector(FockSpace space, Eigen::VectorXcd amplitudes);

  const FockSpace& space() const { return space_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }

 private:
  FockSpace space_;
  Eigen::VectorXcd amps_;
};

// Dense operator on a FockSpace. Not required to be Hermitian or unitary;
// images that leave the truncated space are dropped.
class ModeOperator {
 public:
  ModeOperator(FockSpace space, Eigen::MatrixXcd matrix, std::string label = "");

  const FockSpace& space() const { return space_; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }
  const std::string& label() const { return label_; }

 private:
  FockSpace space_;
  Eigen::MatrixXcd mat_;
  std::string label_;
};

// Mixed state. Construction validates Hermiticity, unit trace and
// positive semidefiniteness against the shared tolerances.
class DensityOperator {
 public:
  DensityOperator(FockSpace space, Eigen::MatrixXcd matrix);

  const FockSpace& space() const { return space_; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }

 private:
  FockSpace space_;
  Eigen::MatrixXcd mat_;
};

// Reduced state of one mode, indexed by occupation 0..max_n. Same
// validation contract as DensityOperator.
class SingleModeDensity {
 public:
  explicit SingleModeDensity(Eigen::MatrixXcd matrix);

  std::int64_t max_n() const { return mat_.rows() - 1; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }

 private:
  Eigen::MatrixXcd mat_;
};

// Pure state confined to one total-number sector, amplitudes indexed by
// n_b = 0..total_n (so n_a = total_n - n_b). This is the fast path: all
// collective-spin quantities cost O(total_n) here.
class SectorState {
 public:
  SectorState(std::int64_t total_n, Eigen::VectorXcd amplitudes);

  std::int64_t total_n() const { return total_n_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }

 private:
  std::int64_t total_n_;
  Eigen::VectorXcd amps_;
};

FockSpace build_space(std::int64_t n_max);

bool is_hermitian(const Eigen::MatrixXcd& m, double tol = kHermitianTol);

ModeOperator annihilator(const FockSpace& space, Mode mode);
ModeOperator adjoint(const ModeOperator& op);
ModeOperator compose(const ModeOperator& lhs, const ModeOperator& rhs);
ModeOperator add(const ModeOperator& lhs, const ModeOperator& rhs);
ModeOperator scale(cplx factor, const ModeOperator& op);
ModeOperator number_operator(const FockSpace& space, Mode mode);
ModeOperator total_number_operator(const FockSpace& space);

inline ModeOperator operator*(const ModeOperator& a, const ModeOperator& b) { return compose(a, b); }
inline ModeOperator operator+(const ModeOperator& a, const ModeOperator& b) { return add(a, b); }
inline ModeOperator operator*(cplx f, const ModeOperator& op) { return scale(f, op); }

cplx expectation(const ModeOperator& op, const DensityOperator& rho);
cplx expectation(const ModeOperator& op, const StateVector& psi);

// for Hermitian op: checks the imaginary residue and clips it
double real_expectation(const ModeOperator& op, const DensityOperator& rho);
double real_expectation(const ModeOperator& op, const StateVector& psi);

double variance(const ModeOperator& op, const DensityOperator& rho);
double variance(const ModeOperator& op, const StateVector& psi);

DensityOperator make_density(const StateVector& psi);
SingleModeDensity partial_trace(const DensityOperator& rho, Mode keep);

StateVector embed_sector(const FockSpace& space, const SectorState& s);
SectorState extract_sector(const StateVector& psi);

// <a^m (b^dag)^n>, evaluated as (b^dag)^n a^m (the modes commute, and
// lowering first keeps the result exact under truncation)
cplx correlation_moment(const DensityOperator& rho, int m, int n);
cplx correlation_moment(const SectorState& s, int m, int n);

// <(a^dag)^m a^m (b^dag)^n b^n>: diagonal falling-factorial expectation
double correlation_threshold(const DensityOperator& rho, int m, int n);
double correlation_threshold(const SectorState& s, int m, int n);

}  // namespace twomode
