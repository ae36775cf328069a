#include "polaris/liealg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <sstream>

namespace polaris
{

using cd = std::complex<double>;

ClassicalFamily parse_family(const std::string& name)
{
  if (name == "special-unitary" || name == "su")
    return ClassicalFamily::SpecialUnitary;
  if (name == "special-orthogonal" || name == "so")
    return ClassicalFamily::SpecialOrthogonal;
  if (name == "unitary" || name == "u")
    return ClassicalFamily::Unitary;
  if (name == "torus" || name == "t")
    return ClassicalFamily::Torus;
  throw Error("unsupported family '" + name + "'");
}

LieAlgebra::LieAlgebra(int dim, std::vector<double> structure, Mat inner, std::vector<CMat> realization,
                       std::string name)
    : m_dim(dim), m_structure(std::move(structure)), m_inner(std::move(inner)),
      m_realization(std::move(realization)), m_name(std::move(name))
{
  if (dim < 1)
    throw Error("Lie algebra dimension must be positive");
  if (m_structure.empty())
    m_structure.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  if (m_structure.size() != static_cast<std::size_t>(dim) * dim * dim)
    throw Error("structure tensor has wrong size");
  if (m_inner.size() == 0)
    m_inner = Mat::Identity(dim, dim);
  if (m_inner.rows() != dim || m_inner.cols() != dim)
    throw Error("inner product has wrong shape");
  if ((m_inner - m_inner.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m_inner.cwiseAbs().maxCoeff()))
    throw Error("inner product is not symmetric");
  m_factor = polaris::metric_factor(m_inner);
  if (!m_realization.empty())
  {
    if (static_cast<int>(m_realization.size()) != dim)
      throw Error("realization must have one matrix per basis element");
    const auto sz = m_realization[0].rows();
    m_realization_gram.resize(dim, dim);
    for (int i = 0; i < dim; ++i)
    {
      if (m_realization[i].rows() != sz || m_realization[i].cols() != sz)
        throw Error("realization matrices must be square and of equal size");
      for (int j = 0; j < dim; ++j)
        m_realization_gram(i, j) = -(m_realization[i] * m_realization[j]).trace().real();
    }
  }
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const
{
  if (x.size() != m_dim || y.size() != m_dim)
    throw Error("bracket: dimension mismatch");
  Vec out = Vec::Zero(m_dim);
  for (int i = 0; i < m_dim; ++i)
  {
    if (x(i) == 0.0)
      continue;
    for (int j = 0; j < m_dim; ++j)
    {
      const double w = x(i) * y(j);
      if (w == 0.0)
        continue;
      const double* row = &m_structure[(i * m_dim + j) * m_dim];
      for (int k = 0; k < m_dim; ++k)
        out(k) += w * row[k];
    }
  }
  return out;
}

Mat LieAlgebra::ad(const Vec& x) const
{
  if (x.size() != m_dim)
    throw Error("ad: dimension mismatch");
  Mat out = Mat::Zero(m_dim, m_dim);
  for (int i = 0; i < m_dim; ++i)
    for (int j = 0; j < m_dim; ++j)
      for (int k = 0; k < m_dim; ++k)
        out(k, j) += x(i) * c(i, j, k);
  return out;
}

double LieAlgebra::norm(const Vec& x) const
{
  return std::sqrt(std::max(0.0, inner(x, x)));
}

CMat LieAlgebra::to_matrix(const Vec& x) const
{
  if (!has_realization())
    throw Error("algebra '" + m_name + "' has no matrix realization");
  CMat out = CMat::Zero(m_realization[0].rows(), m_realization[0].cols());
  for (int i = 0; i < m_dim; ++i)
    out += x(i) * m_realization[i];
  return out;
}

Vec LieAlgebra::from_matrix(const CMat& m) const
{
  if (!has_realization())
    throw Error("algebra '" + m_name + "' has no matrix realization");
  Vec rhs(m_dim);
  for (int i = 0; i < m_dim; ++i)
    rhs(i) = -(m_realization[i] * m).trace().real();
  return m_realization_gram.ldlt().solve(rhs);
}

CMat LieAlgebra::exp(const Vec& x) const
{
  CMat m = to_matrix(x);
  return m.exp();
}

Mat LieAlgebra::induced_map(const std::function<CMat(const CMat&)>& f) const
{
  Mat out(m_dim, m_dim);
  for (int j = 0; j < m_dim; ++j)
    out.col(j) = from_matrix(f(m_realization[j]));
  return out;
}

Mat LieAlgebra::adjoint_action(const CMat& g) const
{
  const CMat ginv = g.inverse();
  return induced_map([&](const CMat& x) { return CMat(g * x * ginv); });
}

double LieAlgebra::antisymmetry_residual(int* wi, int* wj, int* wk) const
{
  double worst = 0.0;
  for (int i = 0; i < m_dim; ++i)
    for (int j = 0; j < m_dim; ++j)
      for (int k = 0; k < m_dim; ++k)
      {
        const double r = std::abs(c(i, j, k) + c(j, i, k));
        if (r > worst)
        {
          worst = r;
          if (wi)
            *wi = i;
          if (wj)
            *wj = j;
          if (wk)
            *wk = k;
        }
      }
  return worst;
}

double LieAlgebra::jacobi_residual() const
{
  double worst = 0.0;
  const Mat id = Mat::Identity(m_dim, m_dim);
  for (int i = 0; i < m_dim; ++i)
    for (int j = i + 1; j < m_dim; ++j)
      for (int k = j + 1; k < m_dim; ++k)
      {
        const Vec x = id.col(i), y = id.col(j), z = id.col(k);
        Vec r = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
      }
  return worst;
}

double LieAlgebra::invariance_residual() const
{
  // <[x,y],z> + <y,[x,z]> = 0 on basis triples
  double worst = 0.0;
  const Mat id = Mat::Identity(m_dim, m_dim);
  for (int i = 0; i < m_dim; ++i)
  {
    Mat adx = ad(id.col(i));
    Mat sym = adx.transpose() * m_inner + m_inner * adx;
    worst = std::max(worst, sym.cwiseAbs().maxCoeff());
  }
  return worst;
}

double LieAlgebra::realization_residual() const
{
  if (!has_realization())
    return 0.0;
  double worst = 0.0;
  for (int i = 0; i < m_dim; ++i)
    for (int j = 0; j < m_dim; ++j)
    {
      CMat comm = m_realization[i] * m_realization[j] - m_realization[j] * m_realization[i];
      CMat expected = CMat::Zero(comm.rows(), comm.cols());
      for (int k = 0; k < m_dim; ++k)
        expected += c(i, j, k) * m_realization[k];
      worst = std::max(worst, (comm - expected).cwiseAbs().maxCoeff());
    }
  return worst;
}

void LieAlgebra::validate(double tol) const
{
  const double scale = 1.0 + structure_scale(*this);
  int i = 0, j = 0, k = 0;
  if (double r = antisymmetry_residual(&i, &j, &k); r > tol * scale)
  {
    std::ostringstream os;
    os << "structure constants not antisymmetric at (i,j,k)=(" << i + 1 << "," << j + 1 << "," << k + 1
       << "), residual " << r;
    throw Error(os.str());
  }
  if (double r = jacobi_residual(); r > tol * scale * scale)
  {
    std::ostringstream os;
    os << "Jacobi identity violated, residual " << r;
    throw Error(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(m_inner);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw Error("inner product is not positive definite");
  if (double r = invariance_residual(); r > tol * scale * (1.0 + m_inner.cwiseAbs().maxCoeff()))
  {
    std::ostringstream os;
    os << "inner product is not ad-invariant, residual " << r;
    throw Error(os.str());
  }
  if (double r = realization_residual(); r > tol * scale)
  {
    std::ostringstream os;
    os << "realization commutators disagree with structure constants, residual " << r;
    throw Error(os.str());
  }
}

Subspace LieAlgebra::whole() const
{
  return Subspace{m_name, orthonormalize(Mat::Identity(m_dim, m_dim), m_inner)};
}

namespace
{

std::vector<double> structure_from_realization(const std::vector<CMat>& basis)
{
  const int n = static_cast<int>(basis.size());
  Mat gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) = -(basis[i] * basis[j]).trace().real();
  auto solver = gram.ldlt();
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
    {
      CMat comm = basis[i] * basis[j] - basis[j] * basis[i];
      Vec rhs(n);
      for (int k = 0; k < n; ++k)
        rhs(k) = -(basis[k] * comm).trace().real();
      Vec coeff = solver.solve(rhs);
      for (int k = 0; k < n; ++k)
      {
        // entries are rationals of small denominators up to the sqrt factors;
        // zero out rounding noise so abelian pieces stay exactly abelian
        const double v = std::abs(coeff(k)) < 1e-14 ? 0.0 : coeff(k);
        c[(i * n + j) * n + k] = v;
      }
    }
  // enforce exact antisymmetry
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = 0; k < n; ++k)
      {
        const double a = 0.5 * (c[(i * n + j) * n + k] - c[(j * n + i) * n + k]);
        c[(i * n + j) * n + k] = a;
        c[(j * n + i) * n + k] = -a;
      }
  return c;
}

Mat realization_gram(const std::vector<CMat>& basis)
{
  const int n = static_cast<int>(basis.size());
  Mat gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) = -(basis[i] * basis[j]).trace().real();
  return gram;
}

CMat unit(int n, int i, int j)
{
  CMat e = CMat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

std::vector<CMat> su_basis(int n)
{
  const cd mi(0.0, -0.5);
  std::vector<CMat> basis;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
    {
      CMat sym = unit(n, j, k) + unit(n, k, j);
      CMat asym = cd(0, -1) * unit(n, j, k) + cd(0, 1) * unit(n, k, j);
      basis.push_back(mi * sym);
      basis.push_back(mi * asym);
    }
  for (int l = 1; l < n; ++l)
  {
    CMat d = CMat::Zero(n, n);
    const double f = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j)
      d(j, j) = f;
    d(l, l) = -f * l;
    basis.push_back(mi * d);
  }
  return basis;
}

std::vector<CMat> so_basis(int n)
{
  std::vector<CMat> basis;
  if (n == 3)
  {
    // rotation generators about the x, y, z axes: [L1, L2] = L3
    basis.push_back(unit(3, 2, 1) - unit(3, 1, 2));
    basis.push_back(unit(3, 0, 2) - unit(3, 2, 0));
    basis.push_back(unit(3, 1, 0) - unit(3, 0, 1));
    return basis;
  }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      basis.push_back(unit(n, k, j) - unit(n, j, k));
  return basis;
}

}  // namespace

LieAlgebra build_classical(ClassicalFamily family, int n, double metric_scale)
{
  if (n < 1)
    throw Error("build_classical: n must be positive");
  if (!(metric_scale > 0.0))
    throw Error("build_classical: metric scale must be positive");
  std::vector<CMat> basis;
  std::string name;
  switch (family)
  {
  case ClassicalFamily::SpecialUnitary:
    if (n < 2)
      throw Error("build_classical: special-unitary needs n >= 2");
    basis = su_basis(n);
    name = "su(" + std::to_string(n) + ")";
    break;
  case ClassicalFamily::SpecialOrthogonal:
    if (n < 2)
      throw Error("build_classical: special-orthogonal needs n >= 2");
    basis = so_basis(n);
    name = "so(" + std::to_string(n) + ")";
    break;
  case ClassicalFamily::Unitary:
    basis = n >= 2 ? su_basis(n) : std::vector<CMat>{};
    basis.push_back(CMat::Identity(n, n) * cd(0.0, -1.0 / std::sqrt(2.0 * n)));
    name = "u(" + std::to_string(n) + ")";
    break;
  case ClassicalFamily::Torus:
    for (int j = 0; j < n; ++j)
      basis.push_back(unit(n, j, j) * cd(0.0, -1.0 / std::sqrt(2.0)));
    name = "t(" + std::to_string(n) + ")";
    break;
  }
  const Mat gram = realization_gram(basis);
  auto c = structure_from_realization(basis);
  const int dim = static_cast<int>(basis.size());
  return LieAlgebra(dim, std::move(c), metric_scale * gram, std::move(basis), name);
}

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b)
{
  const int na = a.dim(), nb = b.dim(), n = na + nb;
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < na; ++k)
        c[(i * n + j) * n + k] = a.c(i, j, k);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < nb; ++k)
        c[((na + i) * n + na + j) * n + na + k] = b.c(i, j, k);
  Mat inner = Mat::Zero(n, n);
  inner.topLeftCorner(na, na) = a.inner();
  inner.bottomRightCorner(nb, nb) = b.inner();
  std::vector<CMat> real;
  if (a.has_realization() && b.has_realization())
  {
    const auto sa = a.realization()[0].rows(), sb = b.realization()[0].rows();
    for (int i = 0; i < na; ++i)
    {
      CMat m = CMat::Zero(sa + sb, sa + sb);
      m.topLeftCorner(sa, sa) = a.realization()[i];
      real.push_back(m);
    }
    for (int i = 0; i < nb; ++i)
    {
      CMat m = CMat::Zero(sa + sb, sa + sb);
      m.bottomRightCorner(sb, sb) = b.realization()[i];
      real.push_back(m);
    }
  }
  return LieAlgebra(n, std::move(c), inner, std::move(real), a.name() + "+" + b.name());
}

LieAlgebra subalgebra(const LieAlgebra& lie, const Subspace& h, double tol)
{
  const int k = h.dim();
  if (k == 0)
    throw Error("subalgebra: empty subspace");
  if (auto v = is_subalgebra(lie, h, tol); !v.holds)
    throw Error("subalgebra: subspace is not closed under the bracket (residual " + std::to_string(v.residual) +
                ")");
  std::vector<double> c(static_cast<std::size_t>(k) * k * k, 0.0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
    {
      Vec br = lie.bracket(h.basis.col(a), h.basis.col(b));
      for (int d = 0; d < k; ++d)
        c[(a * k + b) * k + d] = lie.inner(br, h.basis.col(d));
    }
  std::vector<CMat> real;
  if (lie.has_realization())
    for (int a = 0; a < k; ++a)
      real.push_back(lie.to_matrix(h.basis.col(a)));
  return LieAlgebra(k, std::move(c), Mat::Identity(k, k), std::move(real), "sub(" + lie.name() + ")");
}

Subspace make_subspace(const LieAlgebra& lie, const Mat& vectors, const RankThreshold& thr)
{
  if (vectors.rows() != lie.dim())
    throw Error("make_subspace: dimension mismatch");
  return Subspace{lie.name(), orthonormalize(vectors, lie.inner(), thr)};
}

double killing_form(const LieAlgebra& lie, const Vec& x, const Vec& y)
{
  if (x.size() != lie.dim() || y.size() != lie.dim())
    throw Error("killing_form: dimension mismatch");
  return (lie.ad(x) * lie.ad(y)).trace();
}

Mat killing_matrix(const LieAlgebra& lie)
{
  const int n = lie.dim();
  std::vector<Mat> ads;
  for (int i = 0; i < n; ++i)
    ads.push_back(lie.ad(Mat::Identity(n, n).col(i)));
  Mat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b(i, j) = (ads[i] * ads[j]).trace();
  return b;
}

double structure_scale(const LieAlgebra& lie)
{
  const Subspace all = lie.whole();
  double s = 0.0;
  for (int i = 0; i < all.dim(); ++i)
    for (int j = i + 1; j < all.dim(); ++j)
      s = std::max(s, lie.norm(lie.bracket(all.basis.col(i), all.basis.col(j))));
  return s;
}

namespace
{

void check_ambient(const LieAlgebra& lie, const Subspace& m)
{
  if (m.ambient_dim() != lie.dim())
    throw Error("subspace dimension does not match the algebra");
}

}  // namespace

Verdict is_lie_triple_system(const LieAlgebra& lie, const Subspace& m, double tol)
{
  check_ambient(lie, m);
  Verdict v;
  const double thr = tol * (1.0 + structure_scale(lie) * structure_scale(lie));
  const int k = m.dim();
  std::vector<Vec> inner_brackets(static_cast<std::size_t>(k) * k);
  for (int b = 0; b < k; ++b)
    for (int c = b + 1; c < k; ++c)
      inner_brackets[b * k + c] = lie.bracket(m.basis.col(b), m.basis.col(c));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = b + 1; c < k; ++c)
      {
        Vec t = lie.bracket(m.basis.col(a), inner_brackets[b * k + c]);
        const double r = out_of_span(t, m.basis, lie.inner());
        if (r > v.residual)
        {
          v.residual = r;
          v.witness = {a, b, c};
        }
      }
  v.holds = v.residual <= thr;
  if (v.holds)
    v.witness.clear();
  return v;
}

Verdict is_abelian_subspace(const LieAlgebra& lie, const Subspace& m, double tol)
{
  check_ambient(lie, m);
  Verdict v;
  const double thr = tol * (1.0 + structure_scale(lie));
  for (int a = 0; a < m.dim(); ++a)
    for (int b = a + 1; b < m.dim(); ++b)
    {
      const double r = lie.norm(lie.bracket(m.basis.col(a), m.basis.col(b)));
      if (r > v.residual)
      {
        v.residual = r;
        v.witness = {a, b};
      }
    }
  v.holds = v.residual <= thr;
  if (v.holds)
    v.witness.clear();
  return v;
}

Verdict is_subalgebra(const LieAlgebra& lie, const Subspace& h, double tol)
{
  check_ambient(lie, h);
  Verdict v;
  const double thr = tol * (1.0 + structure_scale(lie));
  for (int a = 0; a < h.dim(); ++a)
    for (int b = a + 1; b < h.dim(); ++b)
    {
      const double r = out_of_span(lie.bracket(h.basis.col(a), h.basis.col(b)), h.basis, lie.inner());
      if (r > v.residual)
      {
        v.residual = r;
        v.witness = {a, b};
      }
    }
  v.holds = v.residual <= thr;
  if (v.holds)
    v.witness.clear();
  return v;
}

Subspace centralizer_in(const LieAlgebra& lie, const Vec& x, const Subspace& w, const RankThreshold& thr)
{
  check_ambient(lie, w);
  if (w.dim() == 0)
    return w;
  // y = W c; |[x, y]| = |R ad(x) W c| with R the metric factor
  Mat map = lie.metric_factor() * lie.ad(x) * w.basis;
  const double xnorm = lie.norm(x);
  RankThreshold local = thr;
  local.absolute = std::max(thr.absolute, thr.relative * xnorm * (1.0 + structure_scale(lie)));
  Mat ker = kernel(map, local);
  return Subspace{w.ambient, w.basis * ker};
}

}  // namespace polaris
