#ifndef OQSLAB_OPTIMIZE_HPP
#define OQSLAB_OPTIMIZE_HPP

#include <functional>
#include <vector>

#include "oqslab/linalg.hpp"

namespace oqslab {

// Plane rotation on rows/cols (i, j) with mixing angle theta and relative
// phase phi.
inline Mat givens_rotation(int d, int i, int j, double theta, double phi) {
  Mat g = Mat::Identity(d, d);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const cdouble e = {std::cos(phi), std::sin(phi)};
  g(i, i) = c;
  g(j, j) = c;
  g(i, j) = -std::conj(e) * s;
  g(j, i) = e * s;
  return g;
}

// d(d-1)/2 Givens pairs (theta, phi). Column phases are omitted, so this
// covers unitaries up to right multiplication by a diagonal phase matrix,
// which is exactly the freedom a measurement basis carries.
inline int basis_param_count(int d) { return d * (d - 1); }

inline Mat basis_from_params(int d, const std::vector<double>& params) {
  Mat u = Mat::Identity(d, d);
  int idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      u = givens_rotation(d, i, j, params[idx], params[idx + 1]) * u;
      idx += 2;
    }
  return u;
}

// Full U(d): Givens pairs plus d column phases, d^2 parameters.
inline int unitary_param_count(int d) { return d * d; }

inline Mat unitary_from_params(int d, const std::vector<double>& params) {
  Mat u = basis_from_params(d, params);
  const int base = basis_param_count(d);
  for (int j = 0; j < d; ++j) {
    const double phi = params[base + j];
    u.col(j) *= cdouble(std::cos(phi), std::sin(phi));
  }
  return u;
}

struct CoordinateSearchResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
};

// Gradient-free coordinate descent with shrinking step. Deterministic for
// a given start point.
inline CoordinateSearchResult coordinate_search(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double step, double min_step, double f_tol,
    int max_evals) {
  CoordinateSearchResult res;
  res.value = f(x);
  res.evals = 1;
  while (step > min_step && res.evals < max_evals) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size() && res.evals < max_evals; ++i) {
      for (const double delta : {step, -step}) {
        std::vector<double> trial = x;
        trial[i] += delta;
        const double fv = f(trial);
        ++res.evals;
        if (fv < res.value - f_tol) {
          x = std::move(trial);
          res.value = fv;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  res.x = std::move(x);
  return res;
}

}  // namespace oqslab

#endif  // OQSLAB_OPTIMIZE_HPP
