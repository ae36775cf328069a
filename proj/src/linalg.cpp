#include "polaris/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polaris
{

Vec Rng::gaussian(int n)
{
  Vec v(n);
  for (int i = 0; i < n; ++i)
    v(i) = normal();
  return v;
}

Vec Rng::unit(int n)
{
  Vec v = gaussian(n);
  while (v.norm() < 1e-12)
    v = gaussian(n);
  return v / v.norm();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
{
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Mat metric_factor(const Mat& gram)
{
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success)
    throw Error("metric is not positive definite");
  return llt.matrixU();
}

Mat orthonormalize(const Mat& vectors, const Mat& gram, const RankThreshold& thr)
{
  const int n = static_cast<int>(vectors.rows());
  double scale = 0.0;
  for (int j = 0; j < vectors.cols(); ++j)
    scale = std::max(scale, std::sqrt(std::max(0.0, vectors.col(j).dot(gram * vectors.col(j)))));
  const double cutoff = thr.cutoff(scale);

  Mat out(n, 0);
  for (int j = 0; j < vectors.cols(); ++j)
  {
    Vec v = vectors.col(j);
    for (int pass = 0; pass < 2; ++pass)
    {
      for (int k = 0; k < out.cols(); ++k)
        v -= out.col(k) * out.col(k).dot(gram * v);
    }
    const double nv = std::sqrt(std::max(0.0, v.dot(gram * v)));
    if (nv <= cutoff)
      continue;
    out.conservativeResize(n, out.cols() + 1);
    out.col(out.cols() - 1) = v / nv;
  }
  return out;
}

Mat orthonormalize(const Mat& vectors, const RankThreshold& thr)
{
  return orthonormalize(vectors, Mat::Identity(vectors.rows(), vectors.rows()), thr);
}

int numerical_rank(const Mat& a, const RankThreshold& thr)
{
  if (a.size() == 0)
    return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec& s = svd.singularValues();
  const double cutoff = thr.cutoff(s.size() ? s(0) : 0.0);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cutoff)
      ++r;
  return r;
}

Mat kernel(const Mat& a, const RankThreshold& thr)
{
  const int n = static_cast<int>(a.cols());
  if (a.rows() == 0)
    return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double cutoff = thr.cutoff(s.size() ? s(0) : 0.0);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cutoff)
      ++r;
  return svd.matrixV().rightCols(n - r);
}

Mat range(const Mat& a, const RankThreshold& thr)
{
  const int m = static_cast<int>(a.rows());
  if (a.cols() == 0)
    return Mat(m, 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  const double cutoff = thr.cutoff(s.size() ? s(0) : 0.0);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cutoff)
      ++r;
  return svd.matrixU().leftCols(r);
}

Mat orthogonal_complement(const Mat& basis, const Mat& gram)
{
  const int n = static_cast<int>(gram.rows());
  if (basis.cols() == 0)
    return orthonormalize(Mat::Identity(n, n), gram);
  // v is gram-orthogonal to the basis iff basis^T gram v = 0
  Mat constraint = basis.transpose() * gram;
  Mat ker = kernel(constraint);
  return orthonormalize(ker, gram);
}

Mat orthogonal_complement(const Mat& basis, int n)
{
  return orthogonal_complement(basis, Mat::Identity(n, n));
}

double out_of_span(const Vec& v, const Mat& basis, const Mat& gram)
{
  Vec r = v;
  if (basis.cols() > 0)
    r -= basis * (basis.transpose() * (gram * v));
  return std::sqrt(std::max(0.0, r.dot(gram * r)));
}

double out_of_span(const Vec& v, const Mat& basis)
{
  Vec r = v;
  if (basis.cols() > 0)
    r -= basis * (basis.transpose() * v);
  return r.norm();
}

Vec principal_angles(const Mat& a, const Mat& b, const Mat& gram)
{
  const int k = static_cast<int>(std::max(a.cols(), b.cols()));
  Vec angles = Vec::Constant(k, std::numbers::pi / 2);
  if (a.cols() == 0 || b.cols() == 0)
    return angles;
  // cosines from the cross Gram matrix, sines from the residual of the
  // smaller basis against the larger; atan2 keeps small angles accurate
  const Mat& big = a.cols() >= b.cols() ? a : b;
  const Mat& small = a.cols() >= b.cols() ? b : a;
  Mat cross = big.transpose() * gram * small;
  Mat resid = metric_factor(gram) * (small - big * cross);
  Vec cosines = Eigen::JacobiSVD<Mat>(cross).singularValues();
  Vec sines = Eigen::JacobiSVD<Mat>(resid).singularValues();
  const int m = static_cast<int>(small.cols());
  for (int i = 0; i < m; ++i)
  {
    const double s = i < sines.size() ? sines(m - 1 - i) : 0.0;
    angles(i) = std::atan2(s, cosines(i));
  }
  return angles;
}

Vec principal_angles(const Mat& a, const Mat& b)
{
  return principal_angles(a, b, Mat::Identity(a.rows(), a.rows()));
}

double max_principal_angle(const Mat& a, const Mat& b)
{
  Vec ang = principal_angles(a, b);
  return ang.size() ? ang.maxCoeff() : 0.0;
}

Mat inverse_sqrt(const Mat& spd)
{
  Eigen::SelfAdjointEigenSolver<Mat> es(spd);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

Mat polar_orthonormalize(const Mat& a)
{
  if (a.cols() == 0)
    return a;
  return a * inverse_sqrt(a.transpose() * a);
}

}  // namespace polaris
