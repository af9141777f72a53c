#ifndef OQSLAB_LINALG_HPP
#define OQSLAB_LINALG_HPP

#include <utility>
#include <vector>

#include "oqslab/common.hpp"

namespace oqslab {

// Composite indexing is system-major throughout: (j, b) -> j * dB + b,
// matching kron(system, bath).

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.rows(); ++j)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      out.block(j * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(j, k) * b;
  return out;
}

inline Mat matrix_unit(int d, int j, int k) {
  Mat e = Mat::Zero(d, d);
  e(j, k) = 1.0;
  return e;
}

// Column-stacking vectorization, fixed project-wide.
inline CVec vec(const Mat& x) {
  return Eigen::Map<const CVec>(x.data(), x.size());
}

inline Mat unvec(const CVec& v, int rows, int cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

inline void require_square_composite(const Mat& m, int dS, int dB) {
  if (m.rows() != m.cols() ||
      m.rows() != static_cast<Eigen::Index>(dS) * dB)
    throw DimensionMismatch("matrix is not square of size dS*dB");
}

inline Mat partial_trace_bath(const Mat& m, int dS, int dB) {
  require_square_composite(m, dS, dB);
  Mat r = Mat::Zero(dS, dS);
  for (int j = 0; j < dS; ++j)
    for (int k = 0; k < dS; ++k)
      for (int b = 0; b < dB; ++b) r(j, k) += m(j * dB + b, k * dB + b);
  return r;
}

inline Mat partial_trace_system(const Mat& m, int dS, int dB) {
  require_square_composite(m, dS, dB);
  Mat r = Mat::Zero(dB, dB);
  for (int a = 0; a < dB; ++a)
    for (int b = 0; b < dB; ++b)
      for (int j = 0; j < dS; ++j) r(a, b) += m(j * dB + a, j * dB + b);
  return r;
}

inline double hermiticity_defect(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

struct EigResult {
  RVec eigenvalues;  // ascending
  Mat eigenvectors;  // columns, unitary
};

inline EigResult herm_eig(const Mat& h, double herm_tol = 1e-10) {
  if (h.rows() != h.cols()) throw DimensionMismatch("herm_eig: not square");
  if (hermiticity_defect(h) > herm_tol)
    throw NotHermitian("herm_eig: input not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

struct HermBasis {
  int dim = 0;
  // elems[0] = identity; elems[u>=1] traceless, trace(e_u e_v) = delta_uv.
  std::vector<Mat> elems;
};

// Generalized Gell-Mann family: symmetric, antisymmetric, then diagonal,
// normalized so trace(e_u^2) = 1 for u >= 1. The identity is kept
// unnormalized at index 0.
inline HermBasis gell_mann_basis(int d) {
  HermBasis basis;
  basis.dim = d;
  basis.elems.push_back(Mat::Identity(d, d));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k)
      basis.elems.push_back(
          inv_sqrt2 * (matrix_unit(d, j, k) + matrix_unit(d, k, j)));
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k)
      basis.elems.push_back(cdouble(0.0, -1.0) * inv_sqrt2 *
                            (matrix_unit(d, j, k) - matrix_unit(d, k, j)));
  for (int l = 1; l < d; ++l) {
    Mat m = Mat::Zero(d, d);
    for (int j = 0; j < l; ++j) m(j, j) = 1.0;
    m(l, l) = -static_cast<double>(l);
    basis.elems.push_back(m / std::sqrt(static_cast<double>(l) * (l + 1)));
  }
  return basis;
}

// Real coefficients C (dS^2 x dB^2) with m = sum_uv C_uv e_u (x) g_v,
// e/g the Gell-Mann bases of the factors.
inline RMat expand_coeffs(const Mat& m, int dS, int dB) {
  require_square_composite(m, dS, dB);
  if (hermiticity_defect(m) > 1e-10)
    throw NotHermitian("expand_coeffs: input not Hermitian");
  const HermBasis bs = gell_mann_basis(dS);
  const HermBasis bb = gell_mann_basis(dB);
  RMat c(dS * dS, dB * dB);
  for (int u = 0; u < dS * dS; ++u) {
    for (int v = 0; v < dB * dB; ++v) {
      const double nu = (u == 0) ? dS : 1.0;
      const double nv = (v == 0) ? dB : 1.0;
      c(u, v) =
          (m * kron(bs.elems[u], bb.elems[v])).trace().real() / (nu * nv);
    }
  }
  return c;
}

inline Mat resum_coeffs(const RMat& c, int dS, int dB) {
  const HermBasis bs = gell_mann_basis(dS);
  const HermBasis bb = gell_mann_basis(dB);
  Mat m = Mat::Zero(dS * dB, dS * dB);
  for (int u = 0; u < dS * dS; ++u)
    for (int v = 0; v < dB * dB; ++v)
      if (c(u, v) != 0.0) m += c(u, v) * kron(bs.elems[u], bb.elems[v]);
  return m;
}

enum class Norm { trace, frobenius };

inline double dist(const Mat& a, const Mat& b, Norm kind) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("dist: shape mismatch");
  const Mat diff = a - b;
  if (kind == Norm::frobenius) return diff.norm();
  if (diff.rows() != diff.cols())
    throw DimensionMismatch("dist: trace norm needs a square difference");
  Eigen::JacobiSVD<Mat> svd(diff);
  return svd.singularValues().sum();
}

// Ginibre + QR with the R-diagonal phase fix, so the draw is Haar.
inline Mat haar_unitary(int d, Rng& rng) {
  const Mat g = rng.ginibre(d, d);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const cdouble rii = r(i, i);
    const double a = std::abs(rii);
    q.col(i) *= (a > 0.0) ? rii / a : cdouble(1.0, 0.0);
  }
  return q;
}

inline double unitarity_defect(const Mat& u) {
  return (u.adjoint() * u - Mat::Identity(u.cols(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

// Rank by singular values above cutoff * largest.
inline int numerical_rank(const Mat& m, double rel_cutoff = 1e-10) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const RVec sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_cutoff * sv(0)) ++rank;
  return rank;
}

inline int numerical_rank(const RMat& m, double rel_cutoff = 1e-10) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<RMat> svd(m);
  const RVec sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_cutoff * sv(0)) ++rank;
  return rank;
}

// Real coordinates of a Hermitian matrix: diagonal, then sqrt(2)-scaled
// real and imaginary parts of the upper triangle. Isometric for the
// Frobenius inner product.
inline RVec herm_coords(const Mat& m) {
  const int d = static_cast<int>(m.rows());
  RVec out(d * d);
  int idx = 0;
  for (int j = 0; j < d; ++j) out(idx++) = m(j, j).real();
  const double s = std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      out(idx++) = s * m(j, k).real();
      out(idx++) = s * m(j, k).imag();
    }
  return out;
}

inline Mat herm_from_coords(const RVec& v, int d) {
  Mat m = Mat::Zero(d, d);
  int idx = 0;
  for (int j = 0; j < d; ++j) m(j, j) = v(idx++);
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      const double re = v(idx++) * s;
      const double im = v(idx++) * s;
      m(j, k) = cdouble(re, im);
      m(k, j) = cdouble(re, -im);
    }
  return m;
}

}  // namespace oqslab

#endif  // OQSLAB_LINALG_HPP
