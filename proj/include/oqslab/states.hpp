#ifndef OQSLAB_STATES_HPP
#define OQSLAB_STATES_HPP

#include <string>
#include <utility>
#include <vector>

#include "oqslab/linalg.hpp"

namespace oqslab {

inline std::vector<std::string> density_violations(const Mat& m) {
  std::vector<std::string> out;
  if (m.rows() != m.cols()) {
    out.push_back("not square");
    return out;
  }
  if (hermiticity_defect(m) > 1e-10) out.push_back("not Hermitian");
  if (std::abs(m.trace().real() - 1.0) > 1e-10 ||
      std::abs(m.trace().imag()) > 1e-10)
    out.push_back("trace not 1");
  if (out.empty()) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    if (es.eigenvalues().minCoeff() < -1e-10)
      out.push_back("negative eigenvalue");
  }
  return out;
}

class DensityMatrix {
 public:
  explicit DensityMatrix(Mat m) : mat_(std::move(m)) {
    const auto bad = density_violations(mat_);
    if (!bad.empty()) {
      std::string msg = "invalid density matrix:";
      for (const auto& b : bad) msg += " [" + b + "]";
      throw InvalidState(msg);
    }
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Mat& mat() const { return mat_; }

 private:
  Mat mat_;
};

class PureState {
 public:
  explicit PureState(CVec v) : vec_(std::move(v)) {
    if (std::abs(vec_.norm() - 1.0) > 1e-12)
      throw InvalidState("pure state vector not unit norm");
  }

  int dim() const { return static_cast<int>(vec_.size()); }
  const CVec& vec() const { return vec_; }
  Mat projector() const { return vec_ * vec_.adjoint(); }

 private:
  CVec vec_;
};

class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(Mat u) : u_(std::move(u)) {
    if (u_.rows() != u_.cols())
      throw DimensionMismatch("basis matrix not square");
    if (unitarity_defect(u_) > 1e-11)
      throw InvalidState("basis columns not orthonormal");
  }

  int dim() const { return static_cast<int>(u_.rows()); }
  const Mat& mat() const { return u_; }
  CVec column(int j) const { return u_.col(j); }
  Mat projector(int j) const { return u_.col(j) * u_.col(j).adjoint(); }

  static OrthonormalBasis computational(int d) {
    return OrthonormalBasis(Mat::Identity(d, d));
  }

 private:
  Mat u_;
};

enum class SpectrumLabel { nondegenerate, degenerate };

struct SpectrumClass {
  RVec eigenvalues;  // ascending
  SpectrumLabel label = SpectrumLabel::nondegenerate;
  double min_gap = 0.0;
};

inline DensityMatrix random_density(int d, Rng& rng) {
  const Mat g = rng.ginibre(d, d);
  Mat w = g * g.adjoint();
  w /= w.trace().real();
  w = 0.5 * (w + Mat(w.adjoint()));  // kill rounding skew
  return DensityMatrix(w);
}

inline PureState random_pure(int d, Rng& rng) {
  CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.cnormal();
  v /= v.norm();
  return PureState(v);
}

inline SpectrumClass spectrum_class(const DensityMatrix& rho,
                                    double gap_tol = 1e-8) {
  SpectrumClass out;
  out.eigenvalues = herm_eig(rho.mat()).eigenvalues;
  out.min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i + 1 < out.eigenvalues.size(); ++i)
    out.min_gap =
        std::min(out.min_gap, out.eigenvalues(i + 1) - out.eigenvalues(i));
  if (out.eigenvalues.size() < 2) out.min_gap = 0.0;
  out.label = (out.min_gap <= gap_tol) ? SpectrumLabel::degenerate
                                       : SpectrumLabel::nondegenerate;
  return out;
}

// Diagonal entries of rho in the given basis; requires rho to commute with
// the basis projectors (off-diagonal part below 1e-8).
inline RVec simplex_coords(const DensityMatrix& rho,
                           const OrthonormalBasis& basis) {
  if (basis.dim() != rho.dim())
    throw DimensionMismatch("simplex_coords: basis dim mismatch");
  const Mat in_basis = basis.mat().adjoint() * rho.mat() * basis.mat();
  Mat offdiag = in_basis;
  offdiag.diagonal().setZero();
  if (offdiag.cwiseAbs().maxCoeff() > 1e-8)
    throw NotDiagonalInBasis("state is not diagonal in the given basis");
  return in_basis.diagonal().real();
}

// Characters of the cyclic group of order d, scaled to a unitary.
inline Mat dft_hadamard(int d) {
  Mat u(d, d);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a) {
      const double phase = 2.0 * M_PI * ((static_cast<long>(k) * a) % d) / d;
      u(k, a) = inv_sqrt_d * cdouble(std::cos(phase), std::sin(phase));
    }
  return u;
}

inline bool is_hadamard(const Mat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  if (unitarity_defect(u) > tol) return false;
  const double target = 1.0 / std::sqrt(static_cast<double>(u.rows()));
  return ((u.cwiseAbs().array() - target).abs() <= tol).all();
}

// A Haar basis V and its Hadamard-rotated partner V * F; all mutual
// overlaps have squared magnitude 1/d.
inline std::pair<OrthonormalBasis, OrthonormalBasis> relatively_unbiased_pair(
    int d, Rng& rng) {
  const Mat v = haar_unitary(d, rng);
  return {OrthonormalBasis(v), OrthonormalBasis(v * dft_hadamard(d))};
}

}  // namespace oqslab

#endif  // OQSLAB_STATES_HPP
