#ifndef OQSLAB_CHANNELS_HPP
#define OQSLAB_CHANNELS_HPP

#include <utility>
#include <vector>

#include "oqslab/correlations.hpp"

namespace oqslab {

struct AssignmentFamily {
  int dim_s = 0;
  int dim_b = 0;
  std::vector<BipartiteState> members;

  std::vector<Mat> marginals() const {
    std::vector<Mat> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(m.system_marginal());
    return out;
  }
};

// Linear map on system operators, stored as a d^2 x d^2 matrix acting on
// column-stacked coordinates: apply(X) = unvec(mat * vec(X)).
struct Superoperator {
  int dim = 0;
  Mat mat;

  Mat apply(const Mat& x) const {
    if (x.rows() != dim || x.cols() != dim)
      throw DimensionMismatch("Superoperator::apply: shape mismatch");
    return unvec(mat * vec(x), dim, dim);
  }
};

struct ChoiMatrix {
  int dim = 0;
  Mat mat;  // size dim^2, C = sum_jk E_jk (x) L(E_jk)
};

struct CPVerdict {
  bool is_cp = false;
  double min_choi_eigenvalue = 0.0;
  bool is_tp = false;
  double tp_residual = 0.0;
  bool is_herm_preserving = false;
};

struct AuditReport {
  bool injective = false;
  std::vector<std::pair<int, int>> colliding_pairs;
  int span_dim = 0;    // complex span of marginals in B(H_S)
  int affine_dim = 0;  // affine hull of marginals in Hermitian trace-one space
  bool full_span = false;
};

inline AuditReport audit_family(const AssignmentFamily& omega,
                                double tol = 1e-9) {
  if (omega.members.empty()) throw EmptyFamily("audit_family: empty family");
  const auto marg = omega.marginals();
  const int n = static_cast<int>(omega.members.size());
  AuditReport report;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dist(marg[i], marg[j], Norm::frobenius) <= tol &&
          dist(omega.members[i].mat(), omega.members[j].mat(),
               Norm::frobenius) > tol)
        report.colliding_pairs.emplace_back(i, j);
  report.injective = report.colliding_pairs.empty();

  const int ds2 = omega.dim_s * omega.dim_s;
  Mat span(n, ds2);
  for (int i = 0; i < n; ++i) span.row(i) = vec(marg[i]).transpose();
  report.span_dim = numerical_rank(span);
  report.full_span = report.span_dim == ds2;

  RMat affine(n > 1 ? n - 1 : 1, ds2);
  if (n > 1) {
    for (int i = 1; i < n; ++i) {
      const Mat diff = 0.5 * (marg[i] - marg[0] +
                              Mat((marg[i] - marg[0]).adjoint()));
      affine.row(i - 1) = herm_coords(diff).transpose();
    }
    report.affine_dim = numerical_rank(affine);
  } else {
    report.affine_dim = 0;
  }
  return report;
}

// Finds a joint unitary that makes a traceless-on-bath perturbation
// visible in the system marginal. Haar sampling first, then local ascent
// from the best candidate over small Givens perturbations.
inline Mat illdefinedness_witness(const Mat& delta, int ds, int db, Rng& rng,
                                  int max_trials = 200) {
  require_square_composite(delta, ds, db);
  const double norm = delta.norm();
  if (hermiticity_defect(delta) > 1e-10 || norm <= 1e-10 ||
      std::abs(delta.trace()) > 1e-10 ||
      partial_trace_bath(delta, ds, db).norm() > 1e-10)
    throw PreconditionViolated(
        "witness search needs a nonzero Hermitian traceless perturbation "
        "with vanishing bath trace");

  const int d = ds * db;
  const double threshold = 1e-3 * norm;
  const auto gain = [&](const Mat& u) {
    return partial_trace_bath(u * delta * u.adjoint(), ds, db).norm();
  };

  Mat best_u = Mat::Identity(d, d);
  double best = gain(best_u);
  int trials = 0;
  for (; trials < max_trials; ++trials) {
    const Mat u = haar_unitary(d, rng);
    const double g = gain(u);
    if (g > best) {
      best = g;
      best_u = u;
    }
    if (best >= threshold) return best_u;
    if (trials + 1 >= max_trials / 2) break;
  }

  // Ascent on -gain around the best sample; evaluations count against
  // the remaining budget.
  const auto objective = [&](const std::vector<double>& p) {
    return -gain(unitary_from_params(d, p) * best_u);
  };
  const int budget = std::max(1, (max_trials - trials) * 25);
  const auto res = coordinate_search(
      objective, std::vector<double>(unitary_param_count(d), 0.0), 0.3, 1e-6,
      1e-12, budget);
  if (-res.value >= threshold) return unitary_from_params(d, res.x) * best_u;
  throw WitnessNotFound("no unitary reached the visibility threshold");
}

inline Superoperator folklore_map(const DensityMatrix& rho_b_fid,
                                  const Mat& u) {
  const int db = rho_b_fid.dim();
  if (u.rows() != u.cols() || u.rows() % db != 0)
    throw DimensionMismatch("folklore_map: unitary size incompatible");
  if (unitarity_defect(u) > 1e-10)
    throw NotUnitary("folklore_map: input not unitary");
  const int ds = static_cast<int>(u.rows()) / db;
  Superoperator l;
  l.dim = ds;
  l.mat = Mat(ds * ds, ds * ds);
  for (int j = 0; j < ds; ++j)
    for (int k = 0; k < ds; ++k) {
      const Mat image = partial_trace_bath(
          u * kron(matrix_unit(ds, j, k), rho_b_fid.mat()) * u.adjoint(), ds,
          db);
      l.mat.col(k * ds + j) = vec(image);  // column-stacking index of E_jk
    }
  return l;
}

// Unique linear extension of marginal_i -> Tr_B(U member_i U^dag), by least
// squares over column-stacked coordinates.
inline Superoperator induced_map(const AssignmentFamily& omega, const Mat& u,
                                 double audit_tol = 1e-9,
                                 double sv_cutoff = 1e-10,
                                 double fit_tol = 1e-9) {
  const AuditReport report = audit_family(omega, audit_tol);
  if (!report.injective)
    throw NotInjective("family has colliding marginals; map is one-to-many");
  if (!report.full_span)
    throw Underdetermined(
        "marginals do not span the operator space; linear extension is not "
        "fixed");
  if (unitarity_defect(u) > 1e-10)
    throw NotUnitary("induced_map: input not unitary");

  const int ds = omega.dim_s;
  const int db = omega.dim_b;
  const int n = static_cast<int>(omega.members.size());
  Mat a(ds * ds, n);
  Mat b(ds * ds, n);
  const auto marg = omega.marginals();
  for (int i = 0; i < n; ++i) {
    a.col(i) = vec(marg[i]);
    b.col(i) = vec(partial_trace_bath(
        u * omega.members[i].mat() * u.adjoint(), ds, db));
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec sv = svd.singularValues();
  RVec inv = RVec::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > sv_cutoff * sv(0)) inv(i) = 1.0 / sv(i);
  const Mat pinv = svd.matrixV() * inv.asDiagonal() *
                   svd.matrixU().adjoint();
  Superoperator l;
  l.dim = ds;
  l.mat = b * pinv;

  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, (l.mat * a.col(i) - b.col(i)).norm());
  if (worst > fit_tol)
    throw InconsistentImages("linear extension fit residual too large");
  return l;
}

inline ChoiMatrix choi_of(const Superoperator& l) {
  const int d = l.dim;
  ChoiMatrix c;
  c.dim = d;
  c.mat = Mat::Zero(d * d, d * d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      c.mat += kron(matrix_unit(d, j, k), l.apply(matrix_unit(d, j, k)));
  return c;
}

inline CPVerdict cp_verdict(const Superoperator& l, double tol = 1e-9) {
  CPVerdict v;
  const ChoiMatrix c = choi_of(l);
  v.is_herm_preserving = hermiticity_defect(c.mat) <= 1e-8;
  if (v.is_herm_preserving) {
    const Mat sym = 0.5 * (c.mat + Mat(c.mat.adjoint()));
    v.min_choi_eigenvalue = herm_eig(sym).eigenvalues.minCoeff();
    v.is_cp = v.min_choi_eigenvalue >= -tol;
  } else {
    v.min_choi_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    v.is_cp = false;
  }
  const int d = l.dim;
  double tp_res = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      const cdouble tr = l.apply(matrix_unit(d, j, k)).trace();
      tp_res = std::max(tp_res, std::abs(tr - (j == k ? 1.0 : 0.0)));
    }
  v.tp_residual = tp_res;
  v.is_tp = tp_res <= tol;
  return v;
}

inline std::vector<Mat> kraus_from_choi(const ChoiMatrix& c,
                                        double tol = 1e-9) {
  if (hermiticity_defect(c.mat) > 1e-8)
    throw NotHermitian("kraus_from_choi: Choi matrix not Hermitian");
  const Mat sym = 0.5 * (c.mat + Mat(c.mat.adjoint()));
  const EigResult eig = herm_eig(sym);
  if (eig.eigenvalues.minCoeff() < -tol)
    throw NotCP("kraus_from_choi: Choi matrix has a negative eigenvalue");
  std::vector<Mat> kraus;
  const int d = c.dim;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double mu = eig.eigenvalues(i);
    if (mu > tol)
      kraus.push_back(std::sqrt(mu) *
                      unvec(eig.eigenvectors.col(i), d, d));
  }
  return kraus;
}

inline Superoperator superop_from_kraus(const std::vector<Mat>& kraus,
                                        int d) {
  Superoperator l;
  l.dim = d;
  l.mat = Mat::Zero(d * d, d * d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      Mat image = Mat::Zero(d, d);
      for (const auto& kk : kraus)
        image += kk * matrix_unit(d, j, k) * kk.adjoint();
      l.mat.col(k * d + j) = vec(image);
    }
  return l;
}

}  // namespace oqslab

#endif  // OQSLAB_CHANNELS_HPP
