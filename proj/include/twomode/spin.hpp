#pragma once

#include <Eigen/Dense>

#include "twomode/fock.hpp"

namespace twomode {

// First and second collective-spin moments of a state, plus its mean
// total occupation. covariance(i,j) = <{S_i,S_j}>/2 - <S_i><S_j> with
// axes ordered x, y, z.
struct SpinMoments {
  Eigen::Vector3d means = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double mean_number = 0.0;
};

struct SpinOperators {
  ModeOperator sx, sy, sz;
};

// S_x = (b^dag a + a^dag b)/2, S_y = (b^dag a - a^dag b)/(2i),
// S_z = (b^dag b - a^dag a)/2. All three preserve total-number sectors,
// so the su(2) algebra holds exactly in the truncated space.
SpinOperators schwinger_ops(const FockSpace& space);

SpinMoments spin_moments(const DensityOperator& rho);
SpinMoments spin_moments(const StateVector& psi);
SpinMoments spin_moments(const SectorState& s);

// n . S for a unit direction n
ModeOperator rotated_spin_op(const FockSpace& space, const Eigen::Vector3d& direction);

double rotated_mean(const SpinMoments& m, const Eigen::Vector3d& direction);
double rotated_variance(const SpinMoments& m, const Eigen::Vector3d& direction);

// moments of J_i = sum_j R_ij S_j
SpinMoments rotate_moments(const SpinMoments& m, const Eigen::Matrix3d& rotation);

// Eigenframe of the covariance. rotation rows are the principal axes
// (J_i = sum_j rotation(i,j) S_j), variances ascend, and the frame is
// deterministic: degenerate clusters are aligned with the lab axes in
// x, y, z order, each axis is signed so its largest component is
// positive, and det(rotation) = +1.
struct PrincipalFrame {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d principal_variances = Eigen::Vector3d::Zero();
  Eigen::Vector3d principal_means = Eigen::Vector3d::Zero();
};

PrincipalFrame principal_frame(const SpinMoments& m);

// Re-express a sector state in the +/- superposition modes
//   c^dag = -(e^{-i theta/2} a^dag + e^{i theta/2} b^dag)/sqrt(2)
//   d^dag =  (e^{-i theta/2} a^dag - e^{i theta/2} b^dag)/sqrt(2)
// chosen so that (n_d - n_c)/2 equals -cos(theta) S_x + sin(theta) S_y and
// (n_b - n_a)/2 becomes the ladder component (d^dag c + c^dag d)/2.
// Returns amplitudes indexed by n_d.
SectorState cd_mode_transform(const SectorState& s, double theta);
StateVector cd_mode_transform(const StateVector& psi, double theta);

}  // namespace twomode
