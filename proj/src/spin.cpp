#include "twomode/spin.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <vector>

namespace twomode {

namespace {

const cplx kI{0.0, 1.0};

// ladder weight of b^dag a on |total-j, j>
double ladder(std::int64_t total, std::int64_t j) {
  return std::sqrt(static_cast<double>(total - j) * static_cast<double>(j + 1));
}

void symmetrize(Eigen::Matrix3d& c) { c = 0.5 * (c + c.transpose()).eval(); }

}  // namespace

SpinOperators schwinger_ops(const FockSpace& space) {
  const ModeOperator a = annihilator(space, Mode::A);
  const ModeOperator b = annihilator(space, Mode::B);
  const Eigen::MatrixXcd l = b.matrix().adjoint() * a.matrix();  // b^dag a
  Eigen::MatrixXcd sx = 0.5 * (l + l.adjoint().eval());
  Eigen::MatrixXcd sy = (l - l.adjoint().eval()) / (2.0 * kI);
  Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    const auto [n_a, n_b] = space.occupations_of(i);
    sz(i, i) = 0.5 * static_cast<double>(n_b - n_a);
  }
  return {ModeOperator(space, std::move(sx), "S_x"), ModeOperator(space, std::move(sy), "S_y"),
          ModeOperator(space, std::move(sz), "S_z")};
}

SpinMoments spin_moments(const DensityOperator& rho) {
  const auto ops = schwinger_ops(rho.space());
  const std::array<const Eigen::MatrixXcd*, 3> s = {&ops.sx.matrix(), &ops.sy.matrix(),
                                                    &ops.sz.matrix()};
  SpinMoments m;
  std::array<Eigen::MatrixXcd, 3> t;  // rho * S_i
  for (int i = 0; i < 3; ++i) {
    t[i] = rho.matrix() * (*s[i]);
    m.means(i) = t[i].trace().real();
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const double sij = (t[i].cwiseProduct(s[j]->transpose())).sum().real();
      const double sji = (t[j].cwiseProduct(s[i]->transpose())).sum().real();
      const double sym = 0.5 * (sij + sji);
      m.covariance(i, j) = sym - m.means(i) * m.means(j);
      m.covariance(j, i) = m.covariance(i, j);
    }
  }
  m.mean_number = real_expectation(total_number_operator(rho.space()), rho);
  return m;
}

SpinMoments spin_moments(const StateVector& psi) {
  const auto ops = schwinger_ops(psi.space());
  const std::array<const Eigen::MatrixXcd*, 3> s = {&ops.sx.matrix(), &ops.sy.matrix(),
                                                    &ops.sz.matrix()};
  const auto& c = psi.amplitudes();
  SpinMoments m;
  std::array<Eigen::VectorXcd, 3> u;
  for (int i = 0; i < 3; ++i) {
    u[i] = (*s[i]) * c;
    m.means(i) = c.dot(u[i]).real();
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const double sym = 0.5 * (u[i].dot(u[j]) + u[j].dot(u[i])).real();
      m.covariance(i, j) = sym - m.means(i) * m.means(j);
      m.covariance(j, i) = m.covariance(i, j);
    }
  }
  const auto& space = psi.space();
  double n_mean = 0.0;
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    n_mean += std::norm(c(i)) * static_cast<double>(space.total_of(i));
  }
  m.mean_number = n_mean;
  return m;
}

SpinMoments spin_moments(const SectorState& s) {
  // Within a sector the spin operators are tridiagonal in n_b, so each
  // image vector costs O(total_n).
  const std::int64_t total = s.total_n();
  const auto& c = s.amplitudes();
  const std::int64_t len = total + 1;

  std::array<Eigen::VectorXcd, 3> u;
  for (auto& v : u) v = Eigen::VectorXcd::Zero(len);
  for (std::int64_t j = 0; j < len; ++j) {
    u[2](j) = (static_cast<double>(j) - 0.5 * static_cast<double>(total)) * c(j);
    if (j + 1 < len) {
      const double l = ladder(total, j);
      u[0](j + 1) += 0.5 * l * c(j);           // raising part of S_x
      u[1](j + 1) += -0.5 * kI * l * c(j);     // raising part of S_y
      u[0](j) += 0.5 * l * c(j + 1);           // lowering parts
      u[1](j) += 0.5 * kI * l * c(j + 1);
    }
  }

  SpinMoments m;
  for (int i = 0; i < 3; ++i) m.means(i) = c.dot(u[i]).real();
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const double sym = 0.5 * (u[i].dot(u[j]) + u[j].dot(u[i])).real();
      m.covariance(i, j) = sym - m.means(i) * m.means(j);
      m.covariance(j, i) = m.covariance(i, j);
    }
  }
  m.mean_number = static_cast<double>(total);
  return m;
}

ModeOperator rotated_spin_op(const FockSpace& space, const Eigen::Vector3d& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw UsageError("rotated_spin_op: direction must be a unit vector");
  }
  const auto ops = schwinger_ops(space);
  Eigen::MatrixXcd m = direction(0) * ops.sx.matrix() + direction(1) * ops.sy.matrix() +
                       direction(2) * ops.sz.matrix();
  return ModeOperator(space, std::move(m), "n.S");
}

double rotated_mean(const SpinMoments& m, const Eigen::Vector3d& direction) {
  return direction.dot(m.means);
}

double rotated_variance(const SpinMoments& m, const Eigen::Vector3d& direction) {
  return direction.dot(m.covariance * direction);
}

SpinMoments rotate_moments(const SpinMoments& m, const Eigen::Matrix3d& rotation) {
  SpinMoments out;
  out.means = rotation * m.means;
  out.covariance = rotation * m.covariance * rotation.transpose();
  symmetrize(out.covariance);
  out.mean_number = m.mean_number;
  return out;
}

namespace {

// Rebuild the eigenvector columns [begin, end) of a degenerate cluster so
// they hug the lab axes: project e_x, e_y, e_z onto the cluster subspace in
// that order, keep directions with meaningful weight, Gram-Schmidt as we go.
void align_cluster(Eigen::Matrix3d& vecs, int begin, int end) {
  const int count = end - begin;
  const Eigen::Matrix3d block = vecs.block(0, begin, 3, count) *
                                vecs.block(0, begin, 3, count).transpose();  // projector
  std::vector<Eigen::Vector3d> chosen;
  for (int axis = 0; axis < 3 && static_cast<int>(chosen.size()) < count; ++axis) {
    Eigen::Vector3d w = block * Eigen::Vector3d::Unit(axis);
    for (const auto& c : chosen) w -= c.dot(w) * c;
    if (w.norm() > 1e-6) chosen.push_back(w.normalized());
  }
  for (int k = begin; k < end && static_cast<int>(chosen.size()) < count; ++k) {
    Eigen::Vector3d w = vecs.col(k);
    for (const auto& c : chosen) w -= c.dot(w) * c;
    if (w.norm() > 1e-8) chosen.push_back(w.normalized());
  }
  for (int k = 0; k < count; ++k) vecs.col(begin + k) = chosen[k];
}

void canonical_sign(Eigen::Matrix3d& vecs) {
  for (int k = 0; k < 3; ++k) {
    int arg = 0;
    vecs.col(k).cwiseAbs().maxCoeff(&arg);
    if (vecs(arg, k) < 0.0) vecs.col(k) = -vecs.col(k);
  }
}

}  // namespace

PrincipalFrame principal_frame(const SpinMoments& m) {
  Eigen::Matrix3d c = m.covariance;
  symmetrize(c);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(c);
  Eigen::Vector3d lambda = es.eigenvalues();  // ascending
  Eigen::Matrix3d vecs = es.eigenvectors();

  int i = 0;
  while (i < 3) {
    int j = i + 1;
    while (j < 3 && lambda(j) - lambda(j - 1) < 1e-9) ++j;
    if (j - i >= 2) align_cluster(vecs, i, j);
    i = j;
  }
  canonical_sign(vecs);

  PrincipalFrame frame;
  frame.rotation = vecs.transpose();
  if (frame.rotation.determinant() < 0.0) frame.rotation.row(2) = -frame.rotation.row(2);
  frame.principal_variances = lambda;
  frame.principal_means = frame.rotation * m.means;
  return frame;
}

namespace {

// Apply kc*c^dag + kd*d^dag to a sector-n vector indexed by n_d, dividing by
// sqrt(power) so that repeated application of one creation operator builds
// normalized monomials without factorial overflow.
Eigen::VectorXcd apply_creation(const Eigen::VectorXcd& v, std::int64_t n, cplx kc, cplx kd,
                                double power) {
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(n + 2);
  for (std::int64_t nd = 0; nd <= n; ++nd) {
    if (v(nd) == cplx{0.0, 0.0}) continue;
    w(nd) += kc * std::sqrt(static_cast<double>(n - nd + 1)) * v(nd);
    w(nd + 1) += kd * std::sqrt(static_cast<double>(nd + 1)) * v(nd);
  }
  return w / std::sqrt(power);
}

}  // namespace

SectorState cd_mode_transform(const SectorState& s, double theta) {
  const std::int64_t total = s.total_n();
  const auto& c = s.amplitudes();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // a^dag = -e^{ i theta/2}(c^dag - d^dag)/sqrt(2)
  // b^dag = -e^{-i theta/2}(c^dag + d^dag)/sqrt(2)
  // The phase signs are fixed by requiring (n_d - n_c)/2 to coincide with
  // the principal component -cos(theta) S_x + sin(theta) S_y.
  const cplx pa = -std::exp(kI * (theta / 2.0)) * inv_sqrt2;
  const cplx pb = -std::exp(-kI * (theta / 2.0)) * inv_sqrt2;

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(total + 1);
  for (std::int64_t j = 0; j <= total; ++j) {  // source term |total-j, j>_ab
    if (std::abs(c(j)) <= 1e-16) continue;
    Eigen::VectorXcd v(1);
    v(0) = 1.0;
    for (std::int64_t t = 0; t < j; ++t) {
      v = apply_creation(v, t, pb, pb, static_cast<double>(t + 1));
    }
    for (std::int64_t t = 0; t < total - j; ++t) {
      v = apply_creation(v, j + t, pa, -pa, static_cast<double>(t + 1));
    }
    out += c(j) * v;
  }

  const double norm = out.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw ValidationError("cd_mode_transform: norm drifted to " + std::to_string(norm));
  }
  return SectorState(total, std::move(out));
}

StateVector cd_mode_transform(const StateVector& psi, double theta) {
  return embed_sector(psi.space(), cd_mode_transform(extract_sector(psi), theta));
}

}  // namespace twomode
