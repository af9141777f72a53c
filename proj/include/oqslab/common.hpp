#ifndef OQSLAB_COMMON_HPP
#define OQSLAB_COMMON_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace oqslab {

using cdouble = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Error hierarchy. Each maps to one named failure mode of an operation
// contract; CLI translates any of these into exit code 2 or 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NotUnitary : Error { using Error::Error; };
struct NotDiagonalInBasis : Error { using Error::Error; };
struct InvalidState : Error { using Error::Error; };
struct NotPureMarginal : Error { using Error::Error; };
struct FactorizationResidual : Error { using Error::Error; };
struct EmptyFamily : Error { using Error::Error; };
struct NotInjective : Error { using Error::Error; };
struct Underdetermined : Error { using Error::Error; };
struct InconsistentImages : Error { using Error::Error; };
struct NotCP : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };
struct WitnessNotFound : Error { using Error::Error; };
struct ConstructionFailed : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic 64-bit-seeded generator. Reproducible within this
// implementation; not meant to be bit-compatible across toolchains.
// Per-trial streams come from derive(), which mixes the master seed
// with the trial index through splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  Rng derive(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ (0xa0761d6478bd642fULL * (stream + 1))));
  }

  double normal() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }

  cdouble cnormal() { return {normal(), normal()}; }

  // d x d matrix of i.i.d. standard complex normals.
  Mat ginibre(int rows, int cols) {
    Mat g(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) g(i, j) = cnormal();
    return g;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace oqslab

#endif  // OQSLAB_COMMON_HPP
