#ifndef POLARIS_LINALG_HPP
#define POLARIS_LINALG_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace polaris
{

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Rank decisions: a singular value counts as zero when it is below
/// max(relative * sigma_max, absolute).
struct RankThreshold
{
  double relative = 1e-9;
  double absolute = 1e-12;

  double cutoff(double sigma_max) const { return std::max(relative * sigma_max, absolute); }
};

/// Seeded generator used everywhere randomness is needed.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : m_engine(seed) {}

  double normal() { return m_normal(m_engine); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(m_engine); }
  Vec gaussian(int n);
  Vec unit(int n);
  std::uint64_t next() { return m_engine(); }

private:
  std::mt19937_64 m_engine;
  std::normal_distribution<double> m_normal{0.0, 1.0};
};

/// Deterministic per-task seed derived from a base seed and an index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Upper-triangular R with gram = R^T R.
Mat metric_factor(const Mat& gram);

/// Modified Gram-Schmidt with one re-orthogonalization pass; columns whose
/// remaining norm falls below the rank threshold (relative to the largest
/// input column) are dropped. Output columns are gram-orthonormal.
Mat orthonormalize(const Mat& vectors, const Mat& gram, const RankThreshold& thr = {});
Mat orthonormalize(const Mat& vectors, const RankThreshold& thr = {});

int numerical_rank(const Mat& a, const RankThreshold& thr = {});

/// Orthonormal basis (Euclidean) of the right null space of a.
Mat kernel(const Mat& a, const RankThreshold& thr = {});

/// Orthonormal basis of the column space of a (Euclidean).
Mat range(const Mat& a, const RankThreshold& thr = {});

/// Gram-orthogonal complement of span(basis) inside R^n; basis is gram-orthonormal.
Mat orthogonal_complement(const Mat& basis, const Mat& gram);
Mat orthogonal_complement(const Mat& basis, int n);

/// Gram-norm of the component of v orthogonal to span(basis).
double out_of_span(const Vec& v, const Mat& basis, const Mat& gram);
double out_of_span(const Vec& v, const Mat& basis);

/// Principal angles between two gram-orthonormal bases; missing dimensions
/// count as pi/2.
Vec principal_angles(const Mat& a, const Mat& b, const Mat& gram);
Vec principal_angles(const Mat& a, const Mat& b);
double max_principal_angle(const Mat& a, const Mat& b);

/// Symmetric square root of the inverse of a positive definite matrix.
Mat inverse_sqrt(const Mat& spd);

/// Orthonormal columns closest to the columns of a (Loewdin / polar factor).
Mat polar_orthonormalize(const Mat& a);

}  // namespace polaris

#endif
