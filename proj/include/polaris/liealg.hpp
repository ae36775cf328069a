#ifndef POLARIS_LIEALG_HPP
#define POLARIS_LIEALG_HPP

#include "polaris/linalg.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace polaris
{

/// Ordered orthonormal basis (columns) inside a named ambient space.
/// Orthonormality is with respect to the ambient inner product.
struct Subspace
{
  std::string ambient;
  Mat basis;

  int dim() const { return static_cast<int>(basis.cols()); }
  int ambient_dim() const { return static_cast<int>(basis.rows()); }
};

/// Outcome of a subspace predicate. On failure `witness` holds the basis
/// indices of the offending pair/triple and `residual` its size.
struct Verdict
{
  bool holds = true;
  double residual = 0.0;
  std::vector<int> witness;
};

enum class ClassicalFamily
{
  SpecialUnitary,
  SpecialOrthogonal,
  Unitary,
  Torus
};

ClassicalFamily parse_family(const std::string& name);

/// Finite-dimensional real Lie algebra given by structure constants
/// [e_i, e_j] = sum_k c(i,j,k) e_k and an ad-invariant inner product.
class LieAlgebra
{
public:
  LieAlgebra() = default;
  LieAlgebra(int dim, std::vector<double> structure, Mat inner, std::vector<CMat> realization = {},
             std::string name = {});

  int dim() const { return m_dim; }
  const std::string& name() const { return m_name; }

  double c(int i, int j, int k) const { return m_structure[(i * m_dim + j) * m_dim + k]; }
  const std::vector<double>& structure() const { return m_structure; }

  const Mat& inner() const { return m_inner; }
  /// R with inner = R^T R; maps coordinates to an orthonormal frame.
  const Mat& metric_factor() const { return m_factor; }

  Vec bracket(const Vec& x, const Vec& y) const;
  /// Matrix of ad(x) acting on coordinates.
  Mat ad(const Vec& x) const;
  double inner(const Vec& x, const Vec& y) const { return x.dot(m_inner * y); }
  double norm(const Vec& x) const;

  bool has_realization() const { return !m_realization.empty(); }
  const std::vector<CMat>& realization() const { return m_realization; }
  CMat to_matrix(const Vec& x) const;
  /// Coordinates of a matrix in span(realization) (least squares for -Re tr).
  Vec from_matrix(const CMat& m) const;
  /// exp of the realization matrix of x.
  CMat exp(const Vec& x) const;
  /// Matrix of Ad(g) on coordinates, for g in the realized group.
  Mat adjoint_action(const CMat& g) const;
  /// Matrix on coordinates of a linear map of the realization.
  Mat induced_map(const std::function<CMat(const CMat&)>& f) const;

  double antisymmetry_residual(int* wi = nullptr, int* wj = nullptr, int* wk = nullptr) const;
  double jacobi_residual() const;
  double invariance_residual() const;
  double realization_residual() const;

  /// Throws Error naming the first violated invariant.
  void validate(double tol = 1e-9) const;

  /// Orthonormal basis of the whole algebra (as a Subspace).
  Subspace whole() const;

private:
  int m_dim = 0;
  std::vector<double> m_structure;
  Mat m_inner;
  Mat m_factor;
  std::vector<CMat> m_realization;
  Mat m_realization_gram;
  std::string m_name;
};

/// Standard matrix models. The inner product is metric_scale * (-Re tr XY).
/// Bases: su(n) uses -i/2 times generalized Gell-Mann matrices (so su(2) has
/// [e1,e2] = e3 cyclically), so(n) uses elementary antisymmetric matrices,
/// u(n) appends a central element, torus(n) uses diagonal imaginary units.
LieAlgebra build_classical(ClassicalFamily family, int n, double metric_scale = 1.0);

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);

/// Lie algebra of a subalgebra given by a Subspace (orthonormal basis, so the
/// induced inner product is the identity).
LieAlgebra subalgebra(const LieAlgebra& lie, const Subspace& h, double tol = 1e-8);

Subspace make_subspace(const LieAlgebra& lie, const Mat& vectors, const RankThreshold& thr = {});

double killing_form(const LieAlgebra& lie, const Vec& x, const Vec& y);
Mat killing_matrix(const LieAlgebra& lie);

/// [u,[v,w]] in span(m) for all basis triples.
Verdict is_lie_triple_system(const LieAlgebra& lie, const Subspace& m, double tol = 1e-9);
/// [u,v] = 0 for all basis pairs.
Verdict is_abelian_subspace(const LieAlgebra& lie, const Subspace& m, double tol = 1e-9);
/// [u,v] in span(h) for all basis pairs.
Verdict is_subalgebra(const LieAlgebra& lie, const Subspace& h, double tol = 1e-9);

/// {y in span(w) : [x, y] = 0}.
Subspace centralizer_in(const LieAlgebra& lie, const Vec& x, const Subspace& w, const RankThreshold& thr = {});

/// Scale used to make absolute tolerances relative to the algebra.
double structure_scale(const LieAlgebra& lie);

}  // namespace polaris

#endif
