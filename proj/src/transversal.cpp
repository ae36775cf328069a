#include "polaris/transversal.hpp"

#include <algorithm>
#include <cmath>

namespace polaris
{

JacobiPropagator::JacobiPropagator(const Mat& r)
{
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (r + r.transpose()));
  m_q = es.eigenvectors();
  m_mu = es.eigenvalues();
}

void JacobiPropagator::evaluate(double t, const Mat& initial, Mat* y, Mat* dy) const
{
  const int d = static_cast<int>(m_q.rows());
  const Mat w0 = m_q.transpose() * initial.topRows(d);
  const Mat w1 = m_q.transpose() * initial.bottomRows(d);
  Mat v(d, initial.cols()), dv(d, initial.cols());
  for (int k = 0; k < d; ++k)
  {
    const double mu = m_mu(k);
    double c, s;
    if (std::abs(mu) < 1e-14)
    {
      c = 1.0;
      s = t;
    }
    else if (mu > 0)
    {
      const double w = std::sqrt(mu);
      c = std::cos(w * t);
      s = std::sin(w * t) / w;
    }
    else
    {
      const double w = std::sqrt(-mu);
      c = std::cosh(w * t);
      s = std::sinh(w * t) / w;
    }
    v.row(k) = c * w0.row(k) + s * w1.row(k);
    dv.row(k) = -mu * s * w0.row(k) + c * w1.row(k);
  }
  if (y)
    *y = m_q * v;
  if (dy)
    *dy = m_q * dv;
}

int OrbitGeodesic::steps() const
{
  return std::max(1, static_cast<int>(std::lround((b - a) / h)));
}

Vec OrbitGeodesic::point(double t) const
{
  return action.manifold.exp(p, t * xi);
}

Vec OrbitGeodesic::velocity(double t) const
{
  return action.manifold.geodesic_velocity(p, xi, t);
}

Mat OrbitGeodesic::frame(double t) const
{
  Mat e(frame0.rows(), frame0.cols());
  for (int j = 0; j < frame0.cols(); ++j)
    e.col(j) = action.manifold.transport(p, xi, frame0.col(j), t);
  return e;
}

Mat OrbitGeodesic::orbit_coordinates(double t) const
{
  const Mat o = action.orbit_basis(point(t));
  if (o.cols() == 0)
    return Mat(dim(), 0);
  return orthonormalize(frame(t).transpose() * o);
}

namespace
{

Mat shape_operator(const GroupAction& action, const Vec& p, const Mat& tangent, const Vec& xi)
{
  const int m = static_cast<int>(tangent.cols());
  Mat s(m, m);
  if (m == 0)
    return s;
  const Mat span = action.rep.orbit_tangent(p);
  const auto cod = span.completeOrthogonalDecomposition();
  for (int k = 0; k < m; ++k)
  {
    const Vec c = cod.solve(tangent.col(k));
    s.col(k) = -tangent.transpose() * (action.rep.generator(c) * xi);
  }
  return s;
}

double smallest_singular(const Mat& m)
{
  if (m.cols() == 0)
    return 1.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

template <class F>
double golden_minimize(F f, double lo, double hi, double tol = 1e-13)
{
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(hi)); ++it)
  {
    if (f1 <= f2)
    {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
    else
    {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  // boundary minima are legitimate (roots at the end of the interval)
  double best = 0.5 * (lo + hi), fb = f(best);
  for (double x : {lo, hi})
  {
    const double fx = f(x);
    if (fx < fb)
    {
      fb = fx;
      best = x;
    }
  }
  return best;
}

std::vector<double> uniform_grid(double a, double b, double h)
{
  const int n = std::max(1, static_cast<int>(std::lround((b - a) / h)));
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i)
    t[i] = a + (b - a) * i / n;
  return t;
}

// Candidate intervals around local minima of a sampled function.
std::vector<std::pair<int, int>> minima_brackets(const std::vector<double>& s, int first)
{
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(s.size()) - 1;
  for (int i = first + 1; i < n; ++i)
    if (s[i] <= s[i - 1] && s[i] <= s[i + 1])
      out.push_back({i - 1, i + 1});
  if (n > first && s[n] < s[n - 1])
    out.push_back({n - 1, n});
  return out;
}

}  // namespace

OrbitGeodesic make_orbit_geodesic(const GroupAction& action, const Vec& p, const Vec& xi, double a, double b,
                                  double h)
{
  if (!(h > 0.0) || h > 1e-2)
    throw Error("step size rejected: h must lie in (0, 1e-2]");
  if (!(b > a))
    throw Error("geodesic interval must satisfy a < b");
  const ModelManifold& m = action.manifold;
  if (!m.contains(p, 1e-8))
    throw Error("geodesic base point is not on the manifold");
  if ((m.project(p, xi) - xi).norm() > 1e-8 * std::max(1.0, xi.norm()) || xi.norm() == 0.0)
    throw Error("geodesic direction is not a nonzero tangent vector");
  OrbitGeodesic g;
  g.action = action;
  g.p = p;
  g.xi = xi / xi.norm();
  g.a = a;
  g.b = b;
  g.h = h;
  g.orbit_tangent = action.orbit_basis(p);
  if (g.orbit_tangent.cols() > 0 && (g.orbit_tangent.transpose() * g.xi).norm() > 1e-8)
    throw Error("geodesic direction is not normal to the orbit");
  g.shape = shape_operator(action, p, g.orbit_tangent, g.xi);
  g.frame0 = m.tangent_basis(p);
  const int d = g.dim();
  g.jacobi_operator.resize(d, d);
  for (int j = 0; j < d; ++j)
    g.jacobi_operator.col(j) = g.frame0.transpose() * m.curvature(p, g.frame0.col(j), g.xi, g.xi);
  g.propagator = JacobiPropagator(g.jacobi_operator);
  return g;
}

Vec FieldFamily::stacked(int k) const
{
  if (value.empty())
    return Vec();
  const int d = static_cast<int>(value.front().rows());
  Vec out(d * value.size());
  for (std::size_t i = 0; i < value.size(); ++i)
    out.segment(i * d, d) = value[i].col(k);
  return out;
}

FieldFamily jacobi_integrate(const OrbitGeodesic& geod, const Mat& initial, double a, double b, JacobiMethod method)
{
  const int d = geod.dim();
  if (initial.rows() != 2 * d)
    throw Error("Jacobi initial data must have 2 * dim rows");
  FieldFamily out;
  out.times = uniform_grid(a, b, geod.h);
  if (method == JacobiMethod::ClosedForm)
  {
    for (double t : out.times)
    {
      Mat y, dy;
      geod.propagator.evaluate(t - a, initial, &y, &dy);
      out.value.push_back(y);
      out.derivative.push_back(dy);
    }
    return out;
  }
  const Mat& r = geod.jacobi_operator;
  Mat y = initial.topRows(d), v = initial.bottomRows(d);
  out.value.push_back(y);
  out.derivative.push_back(v);
  for (std::size_t i = 1; i < out.times.size(); ++i)
  {
    const double s = out.times[i] - out.times[i - 1];
    const Mat k1y = v, k1v = -r * y;
    const Mat k2y = v + 0.5 * s * k1v, k2v = -r * (y + 0.5 * s * k1y);
    const Mat k3y = v + 0.5 * s * k2v, k3v = -r * (y + 0.5 * s * k2y);
    const Mat k4y = v + s * k3v, k4v = -r * (y + s * k3y);
    y += s / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    v += s / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    out.value.push_back(y);
    out.derivative.push_back(v);
  }
  return out;
}

FieldFamily jacobi_integrate(const OrbitGeodesic& geod, const Vec& j0, const Vec& dj0, double a, double b,
                             JacobiMethod method)
{
  const Mat e = geod.frame(a);
  Mat init(2 * geod.dim(), 1);
  init.col(0) << e.transpose() * j0, e.transpose() * dj0;
  return jacobi_integrate(geod, init, a, b, method);
}

Mat n_jacobi_space(const OrbitGeodesic& geod)
{
  const int d = geod.dim();
  const Mat& t = geod.orbit_tangent;
  const Mat nrm = geod.action.normal_basis(geod.p);
  const int m = static_cast<int>(t.cols());
  Mat out = Mat::Zero(2 * d, m + nrm.cols());
  for (int k = 0; k < m; ++k)
  {
    out.col(k).head(d) = geod.frame0.transpose() * t.col(k);
    out.col(k).tail(d) = -geod.frame0.transpose() * (t * geod.shape.col(k));
  }
  for (int j = 0; j < nrm.cols(); ++j)
    out.col(m + j).tail(d) = geod.frame0.transpose() * nrm.col(j);
  if (out.cols() != d)
    throw Error("normal and orbit tangent spaces do not add up to the tangent space");
  return out;
}

Mat field_values(const OrbitGeodesic& geod, const Mat& initial, double t, Mat* derivative)
{
  Mat y;
  geod.propagator.evaluate(t, initial, &y, derivative);
  return y;
}

std::vector<FocalPoint> focal_points(const OrbitGeodesic& geod, double a, double b, double threshold)
{
  const Mat lambda = n_jacobi_space(geod);
  auto sigma = [&](double t) { return smallest_singular(field_values(geod, lambda, t)); };
  const std::vector<double> grid = uniform_grid(a, b, geod.h);
  std::vector<double> s(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    s[i] = sigma(grid[i]);
  std::vector<FocalPoint> out;
  for (auto [lo, hi] : minima_brackets(s, 1))
  {
    const double t = golden_minimize(sigma, grid[lo], grid[hi]);
    const Mat y = field_values(geod, lambda, t);
    Eigen::JacobiSVD<Mat> svd(y);
    const Vec sv = svd.singularValues();
    if (sv(sv.size() - 1) >= threshold)
      continue;
    if (!out.empty() && std::abs(out.back().t - t) < 1e-6)
      continue;
    FocalPoint f;
    f.t = t;
    f.residual = sv(sv.size() - 1);
    for (int k = 0; k < sv.size(); ++k)
      f.multiplicity += sv(k) < threshold ? 1 : 0;
    out.push_back(f);
  }
  return out;
}

KillingRestrictions killing_restrictions(const OrbitGeodesic& geod, double a, double b)
{
  KillingRestrictions out;
  const OrthogonalRep& rep = geod.action.rep;
  out.fields.times = uniform_grid(a, b, geod.h);
  const int d = geod.dim();
  for (double t : out.fields.times)
  {
    const Mat e = geod.frame(t);
    const Vec x = geod.point(t), v = geod.velocity(t);
    Mat val(d, rep.count()), der(d, rep.count());
    for (int i = 0; i < rep.count(); ++i)
    {
      val.col(i) = e.transpose() * (rep.generators[i] * x);
      der.col(i) = e.transpose() * (rep.generators[i] * v);
    }
    out.fields.value.push_back(val);
    out.fields.derivative.push_back(der);
  }
  Mat stack(d * out.fields.times.size(), rep.count());
  for (int i = 0; i < rep.count(); ++i)
    stack.col(i) = out.fields.stacked(i);
  out.basis = rep.count() > 0 ? range(stack) : Mat(stack.rows(), 0);
  return out;
}

CompletenessVerdict variational_completeness_probe(const OrbitGeodesic& geod, double a, double b, double tol)
{
  CompletenessVerdict out;
  const double threshold = 1e-7;
  out.focal = focal_points(geod, a, b, threshold);
  if (out.focal.empty())
    return out;
  const KillingRestrictions killing = killing_restrictions(geod, a, b);
  const Mat lambda = n_jacobi_space(geod);
  const std::vector<double>& grid = killing.fields.times;
  const int d = geod.dim();
  Mat stack(d * grid.size(), lambda.cols());
  for (std::size_t i = 0; i < grid.size(); ++i)
    stack.middleRows(i * d, d) = field_values(geod, lambda, grid[i]);
  for (const FocalPoint& f : out.focal)
  {
    Eigen::JacobiSVD<Mat> svd(field_values(geod, lambda, f.t), Eigen::ComputeFullV);
    const int m = f.multiplicity;
    const Mat coeff = svd.matrixV().rightCols(m);
    const Mat fields = stack * coeff;
    // orthonormal frame of the kernel fields as grid functions
    Eigen::JacobiSVD<Mat> fsvd(fields, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Mat q = fsvd.matrixU();
    const Mat off = q - killing.basis * (killing.basis.transpose() * q);
    Eigen::JacobiSVD<Mat> osvd(off, Eigen::ComputeThinV);
    const double angle = std::asin(std::min(1.0, osvd.singularValues()(0)));
    if (out.witness.size() == 0 || angle > out.worst_angle)
    {
      out.worst_angle = angle;
      out.worst_time = f.t;
      const Vec c = fsvd.matrixV() * fsvd.singularValues().cwiseInverse().asDiagonal() * osvd.matrixV().col(0);
      out.witness = lambda * (coeff * c.normalized());
    }
  }
  out.complete = out.worst_angle < tol;
  return out;
}

TangencyReport tangency_probe(const OrthogonalRep& rep, const Vec& p, std::uint64_t seed, double tol)
{
  if (rep.restrict_to_sphere)
    throw Error("the tangency probe needs a linear representation");
  const GroupAction action = GroupAction::linear(rep);
  const Mat t = action.orbit_basis(p);
  const Mat nrm = action.normal_basis(p);
  if (t.cols() == 0 || nrm.cols() == 0)
    throw Error("the tangency probe needs a nontrivial orbit with nontrivial normal space");
  Rng rng(seed);
  TangencyReport out;
  Mat vectors;
  bool found = false;
  for (int attempt = 0; attempt < 64 && !found; ++attempt)
  {
    const Vec xi = nrm * rng.unit(static_cast<int>(nrm.cols()));
    const Mat s = shape_operator(action, p, t, xi);
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (s + s.transpose()));
    const Vec ev = es.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    if (ev.cwiseAbs().minCoeff() > 1e-6 * std::max(1.0, top))
    {
      out.xi = xi;
      out.eigenvalues = ev;
      vectors = t * es.eigenvectors();
      found = true;
    }
  }
  if (!found)
    throw Error("no normal vector with an invertible shape operator was found");
  const double top = out.eigenvalues.cwiseAbs().maxCoeff();
  const int samples = 96;
  for (int k = 0; k < vectors.cols(); ++k)
  {
    const Vec u = vectors.col(k);
    for (int j = 1; j <= samples; ++j)
    {
      const double s = 1.5 / top * j / samples;
      const Vec j_s = (1.0 - out.eigenvalues(k) * s) * u;
      const Mat span = action.orbit_basis(p + s * out.xi);
      const double r = span.cols() == 0 ? j_s.norm() : out_of_span(j_s, span);
      if (r > out.worst_tangency)
      {
        out.worst_tangency = r;
        out.worst_eigenfield = k;
      }
    }
  }
  out.tangency_holds = out.worst_tangency < tol;
  out.second_time = 0.5 / top;
  out.tangent_angle = max_principal_angle(t, action.orbit_basis(p + out.second_time * out.xi));
  out.tangent_agreement = out.tangent_angle < tol;
  return out;
}

double symplectic_form(const Vec& j1, const Vec& dj1, const Vec& j2, const Vec& dj2)
{
  return dj1.dot(j2) - j1.dot(dj2);
}

Mat TransversalSystem::vertical_basis(double t) const
{
  const int d = geodesic.dim();
  const int r = rank();
  if (r == 0)
    return Mat(d, 0);
  Mat dy;
  const Mat y = field_values(geodesic, upsilon, t, &dy);
  Eigen::JacobiSVD<Mat> svd(y, Eigen::ComputeThinV);
  const Vec sv = svd.singularValues();
  const double scale = std::max(1.0, dy.norm());
  Mat cand(d, r);
  for (int k = 0; k < r; ++k)
  {
    const Vec c = svd.matrixV().col(k);
    // at a zero of a field its derivative spans the limit of the vertical space
    cand.col(k) = sv(k) < 1e-10 * scale ? Vec(dy * c) : Vec(y * c);
  }
  const Mat v = orthonormalize(cand);
  if (v.cols() != r)
    throw Error("Upsilon fields have a non-isolated common zero");
  return v;
}

Mat TransversalSystem::projector(double t) const
{
  const Mat v = vertical_basis(t);
  return v * v.transpose();
}

Mat TransversalSystem::projector_derivative(double t) const
{
  const double d = geodesic.h;
  auto centered = [&](double s) { return Mat((projector(t + s) - projector(t - s)) / (2.0 * s)); };
  return (4.0 * centered(0.5 * d) - centered(d)) / 3.0;
}

Mat a_tensor(const TransversalSystem& sys, double t)
{
  const Mat p = sys.projector(t);
  const Mat dp = sys.projector_derivative(t);
  return dp * p - p * dp;
}

TransversalSystem vertical_bundle(const OrbitGeodesic& geod)
{
  TransversalSystem sys;
  sys.geodesic = geod;
  sys.lambda = n_jacobi_space(geod);
  const int d = geod.dim();
  const int samples = 48;
  Mat rows(samples * d, d);
  for (int j = 0; j < samples; ++j)
  {
    const double t = geod.a + (geod.b - geod.a) * (j + 0.5) / samples;
    const Mat o = geod.orbit_coordinates(t);
    const Mat y = field_values(geod, sys.lambda, t);
    rows.middleRows(j * d, d) = y - o * (o.transpose() * y);
  }
  const Mat coeff = kernel(rows, RankThreshold{1e-8, 1e-12});
  sys.upsilon = sys.lambda * coeff;
  sys.times = uniform_grid(geod.a, geod.b, geod.h);
  for (double t : sys.times)
  {
    const Mat v = sys.vertical_basis(t);
    sys.vertical.push_back(v);
    const Mat y = field_values(geod, sys.upsilon, t);
    sys.regular.push_back(sys.rank() == 0 || smallest_singular(y) > 1e-6);
    sys.horizontal.push_back(orthogonal_complement(v, d));
  }
  return sys;
}

TransversalSystem transversal_system(const OrbitGeodesic& geod)
{
  TransversalSystem sys = vertical_bundle(geod);
  const int d = geod.dim();
  const std::size_t n = sys.times.size();
  const Mat id = Mat::Identity(d, d);
  // initial horizontal frame: gamma' first, then the rest of the complement
  const Vec g = (geod.frame(geod.a).transpose() * geod.velocity(geod.a)).normalized();
  Mat seed(d, sys.rank() + 1);
  seed << sys.vertical[0], g;
  const Mat rest = orthogonal_complement(orthonormalize(seed), d);
  Mat h(d, 1 + rest.cols());
  h << g, rest;
  const double step = sys.times[1] - sys.times[0];
  sys.horizontal.assign(n, Mat());
  sys.a_tensor.assign(n, Mat());
  sys.curvature.assign(n, Mat());
  Mat dp = sys.projector_derivative(sys.times[0]);
  for (std::size_t i = 0; i < n; ++i)
  {
    const double t = sys.times[i];
    const Mat p = sys.vertical[i] * sys.vertical[i].transpose();
    const Mat a = dp * p - p * dp;
    sys.horizontal[i] = h;
    sys.a_tensor[i] = a;
    sys.curvature[i] = h.transpose() * (geod.jacobi_operator - 3.0 * a * a) * h;
    if (i + 1 == n)
      break;
    const Mat dp_mid = sys.projector_derivative(t + 0.5 * step);
    const Mat dp_end = sys.projector_derivative(t + step);
    const Mat k1 = -dp * h;
    const Mat k2 = -dp_mid * (h + 0.5 * step * k1);
    const Mat k3 = -dp_mid * (h + 0.5 * step * k2);
    const Mat k4 = -dp_end * (h + step * k3);
    h += step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    const Mat pn = sys.vertical[i + 1] * sys.vertical[i + 1].transpose();
    h = polar_orthonormalize((id - pn) * h);
    dp = dp_end;
  }
  return sys;
}

FieldFamily transversal_integrate(const TransversalSystem& sys, const Mat& initial)
{
  if (sys.curvature.empty())
    throw Error("transversal system has no curvature operator");
  const int k = static_cast<int>(sys.curvature[0].rows());
  if (initial.rows() != 2 * k)
    throw Error("transversal initial data must have 2 * dim(H) rows");
  FieldFamily out;
  Mat z = initial.topRows(k), v = initial.bottomRows(k);
  const std::size_t n = sys.times.size();
  out.times.push_back(sys.times[0]);
  out.value.push_back(z);
  out.derivative.push_back(v);
  for (std::size_t i = 0; i + 2 < n; i += 2)
  {
    const double s = sys.times[i + 2] - sys.times[i];
    const Mat& r0 = sys.curvature[i];
    const Mat& r1 = sys.curvature[i + 1];
    const Mat& r2 = sys.curvature[i + 2];
    const Mat k1z = v, k1v = -r0 * z;
    const Mat k2z = v + 0.5 * s * k1v, k2v = -r1 * (z + 0.5 * s * k1z);
    const Mat k3z = v + 0.5 * s * k2v, k3v = -r1 * (z + 0.5 * s * k2z);
    const Mat k4z = v + s * k3v, k4v = -r2 * (z + s * k3z);
    z += s / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z);
    v += s / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    out.times.push_back(sys.times[i + 2]);
    out.value.push_back(z);
    out.derivative.push_back(v);
  }
  return out;
}

TransversalDiagnostics diagnose(const TransversalSystem& sys, std::uint64_t seed)
{
  TransversalDiagnostics out;
  const OrbitGeodesic& geod = sys.geodesic;
  const int d = geod.dim();
  const std::size_t n = sys.times.size();
  const Mat id = Mat::Identity(d, d);
  for (std::size_t i = 0; i < n; ++i)
  {
    const Mat& v = sys.vertical[i];
    const Mat& h = sys.horizontal[i];
    const Mat& a = sys.a_tensor[i];
    const Mat p = v * v.transpose();
    out.rank_constant = out.rank_constant && v.cols() == sys.rank() && h.cols() == d - sys.rank();
    if (v.cols() > 0)
      out.orthogonality = std::max(out.orthogonality, (h.transpose() * v).cwiseAbs().maxCoeff());
    out.antisymmetry = std::max(out.antisymmetry, (a + a.transpose()).cwiseAbs().maxCoeff());
    out.block_structure = std::max({out.block_structure, (p * a * p).cwiseAbs().maxCoeff(),
                                    ((id - p) * a * (id - p)).cwiseAbs().maxCoeff()});
    const Mat& r = sys.curvature[i];
    out.curvature_symmetry = std::max(out.curvature_symmetry, (r - r.transpose()).cwiseAbs().maxCoeff());
    if (r.size() > 0)
    {
      const double lo = Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (r + r.transpose())).eigenvalues()(0);
      out.curvature_min_eigenvalue = i == 0 ? lo : std::min(out.curvature_min_eigenvalue, lo);
    }
    if (sys.regular[i] && a.size() > 0)
      out.max_a_regular = std::max(out.max_a_regular, Eigen::JacobiSVD<Mat>(a).singularValues()(0));
  }

  // vertical part of J' against A_t on the horizontal part
  const int stride = 10;
  for (std::size_t i = 0; i < n; i += stride)
  {
    if (!sys.regular[i] || sys.rank() == 0)
      continue;
    const double t = sys.times[i];
    Mat dj, du;
    const Mat j = field_values(geod, sys.lambda, t, &dj);
    const Mat u = field_values(geod, sys.upsilon, t, &du);
    const Mat p = sys.vertical[i] * sys.vertical[i].transpose();
    const Mat c = u.completeOrthogonalDecomposition().solve(p * j);
    const Mat jt = j - u * c;
    const Mat djt = dj - du * c;
    out.claim_vertical = std::max(out.claim_vertical, (p * djt + sys.a_tensor[i] * jt).cwiseAbs().maxCoeff());
  }

  // horizontal frame transport: E' = A E by five-point differences
  for (std::size_t i = 2; i + 2 < n; ++i)
  {
    const double s = sys.times[i + 1] - sys.times[i];
    const Mat de = (sys.horizontal[i - 2] - 8.0 * sys.horizontal[i - 1] + 8.0 * sys.horizontal[i + 1] -
                    sys.horizontal[i + 2]) /
                   (12.0 * s);
    out.claim_frame = std::max(out.claim_frame, (de - sys.a_tensor[i] * sys.horizontal[i]).cwiseAbs().maxCoeff());
  }

  // projected N-Jacobi fields solve the transversal equation
  {
    const Mat& h0 = sys.horizontal[0];
    const double t0 = sys.times[0];
    Mat dj;
    const Mat j = field_values(geod, sys.lambda, t0, &dj);
    const Mat dh0 = -sys.projector_derivative(t0) * h0;
    Mat init(2 * h0.cols(), j.cols());
    init << h0.transpose() * j, dh0.transpose() * j + h0.transpose() * dj;
    const FieldFamily z = transversal_integrate(sys, init);
    for (std::size_t k = 0; k < z.times.size(); ++k)
    {
      const std::size_t i = 2 * k;
      const Mat proj = sys.horizontal[i].transpose() * field_values(geod, sys.lambda, sys.times[i]);
      out.projected_residual = std::max(out.projected_residual, (z.value[k] - proj).cwiseAbs().maxCoeff());
    }
  }

  auto omega_max = [&](const Mat& init) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; i += stride)
    {
      Mat dy;
      const Mat y = field_values(geod, init, sys.times[i], &dy);
      const Mat w = dy.transpose() * y - y.transpose() * dy;
      if (w.size() > 0)
        worst = std::max(worst, w.cwiseAbs().maxCoeff());
    }
    return worst;
  };
  out.omega_lambda = omega_max(sys.lambda);
  out.omega_upsilon = omega_max(sys.upsilon);

  Rng rng(seed);
  Mat pair(2 * d, 2);
  pair.col(0) = rng.gaussian(2 * d);
  pair.col(1) = rng.gaussian(2 * d);
  const FieldFamily f = jacobi_integrate(geod, pair, geod.a, geod.b, JacobiMethod::RungeKutta);
  const double w0 = symplectic_form(f.value[0].col(0), f.derivative[0].col(0), f.value[0].col(1),
                                    f.derivative[0].col(1));
  for (std::size_t i = 0; i < f.times.size(); ++i)
  {
    const double w = symplectic_form(f.value[i].col(0), f.derivative[i].col(0), f.value[i].col(1),
                                     f.derivative[i].col(1));
    out.omega_drift = std::max(out.omega_drift, std::abs(w - w0));
  }
  return out;
}

namespace
{

// Curvature operator at an arbitrary time by linear interpolation on the grid.
Mat curvature_at(const TransversalSystem& sys, double t)
{
  const double h = sys.times[1] - sys.times[0];
  const int n = static_cast<int>(sys.times.size());
  double x = (t - sys.times[0]) / h;
  x = std::clamp(x, 0.0, static_cast<double>(n - 1));
  const int i = std::min(static_cast<int>(std::floor(x)), n - 2);
  const double f = x - i;
  return (1.0 - f) * sys.curvature[i] + f * sys.curvature[i + 1];
}

// Negative inertia of the discrete index form with n linear elements.
int fem_index(const TransversalSystem& sys, int n)
{
  const int k = static_cast<int>(sys.curvature[0].rows());
  const double a = sys.times.front(), b = sys.times.back();
  const double dt = (b - a) / n;
  const double g = 0.5 / std::sqrt(3.0);
  const double phi[2] = {0.5 + g, 0.5 - g};
  std::vector<Mat> diag(n - 1, Mat::Zero(k, k)), off(n - 1, Mat::Zero(k, k));
  const Mat id = Mat::Identity(k, k);
  for (int e = 0; e < n; ++e)
  {
    const double t0 = a + e * dt;
    Mat mll = Mat::Zero(k, k), mlr = Mat::Zero(k, k), mrr = Mat::Zero(k, k);
    for (int q = 0; q < 2; ++q)
    {
      const double xl = phi[q], xr = 1.0 - phi[q];
      const Mat r = curvature_at(sys, t0 + xr * dt);
      mll += 0.5 * dt * xl * xl * r;
      mlr += 0.5 * dt * xl * xr * r;
      mrr += 0.5 * dt * xr * xr * r;
    }
    // element nodes e (left) and e+1 (right); interior nodes are 1..n-1
    if (e >= 1)
      diag[e - 1] += id / dt - mll;
    if (e + 1 <= n - 1)
      diag[e] += id / dt - mrr;
    if (e >= 1 && e + 1 <= n - 1)
      off[e - 1] += -id / dt - mlr;
  }
  int negative = 0;
  Mat schur = diag[0];
  for (int j = 0; j < n - 1; ++j)
  {
    if (j > 0)
      schur = diag[j] - off[j - 1].transpose() * schur.inverse() * off[j - 1];
    schur = 0.5 * (schur + schur.transpose());
    const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(schur).eigenvalues();
    for (int q = 0; q < k; ++q)
      negative += ev(q) < 0 ? 1 : 0;
  }
  return negative;
}

}  // namespace

ConjugateScan conjugate_scan(const TransversalSystem& sys, int elements, double threshold)
{
  if (sys.curvature.empty())
    throw Error("transversal system has no curvature operator");
  const int k = static_cast<int>(sys.curvature[0].rows());
  Mat init = Mat::Zero(2 * k, k);
  init.bottomRows(k) = Mat::Identity(k, k);
  const FieldFamily z = transversal_integrate(sys, init);
  const std::size_t m = z.times.size();
  auto hermite = [&](double t) {
    std::size_t j = 0;
    while (j + 2 < m && z.times[j + 1] < t)
      ++j;
    const double t0 = z.times[j], t1 = z.times[j + 1], s = t1 - t0;
    const double u = std::clamp((t - t0) / s, 0.0, 1.0);
    const double h00 = 2 * u * u * u - 3 * u * u + 1, h10 = u * u * u - 2 * u * u + u;
    const double h01 = -2 * u * u * u + 3 * u * u, h11 = u * u * u - u * u;
    return Mat(h00 * z.value[j] + h10 * s * z.derivative[j] + h01 * z.value[j + 1] + h11 * s * z.derivative[j + 1]);
  };
  auto sigma = [&](double t) { return smallest_singular(hermite(t)); };
  std::vector<double> s(m);
  for (std::size_t i = 0; i < m; ++i)
    s[i] = smallest_singular(z.value[i]);
  ConjugateScan out;
  for (auto [lo, hi] : minima_brackets(s, 2))
  {
    const double t = golden_minimize(sigma, z.times[lo], z.times[hi]);
    const Vec sv = Eigen::JacobiSVD<Mat>(hermite(t)).singularValues();
    if (sv(sv.size() - 1) >= threshold)
      continue;
    if (!out.times.empty() && std::abs(out.times.back().t - t) < 1e-6)
      continue;
    ConjugateTime c;
    c.t = t;
    for (int q = 0; q < sv.size(); ++q)
      c.multiplicity += sv(q) < threshold ? 1 : 0;
    out.times.push_back(c);
  }
  out.index = fem_index(sys, elements);
  out.index_refined = fem_index(sys, 2 * elements);
  int interior = 0;
  for (const ConjugateTime& c : out.times)
    if (c.t < sys.times.back() - 1e-6)
      interior += c.multiplicity;
  out.sturm_consistent = out.index == out.index_refined && out.index == interior;
  return out;
}

BumpReport bump_index_form(const TransversalSystem& sys, double t0, double halfwidth)
{
  if (!(halfwidth > 0.0))
    throw Error("bump half width must be positive");
  const Mat r0 = curvature_at(sys, t0);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (r0 + r0.transpose()));
  const Vec e = es.eigenvectors().col(es.eigenvectors().cols() - 1);
  const double lo = std::max(sys.times.front(), t0 - halfwidth);
  const double hi = std::min(sys.times.back(), t0 + halfwidth);
  const int n = 2000;
  const double dt = (hi - lo) / n;
  const double w = M_PI / (2.0 * halfwidth);
  BumpReport out;
  out.halfwidth = halfwidth;
  for (int i = 0; i <= n; ++i)
  {
    const double t = lo + i * dt;
    const double c = std::cos(w * (t - t0));
    const double phi = c * c;
    const double dphi = -w * std::sin(2.0 * w * (t - t0));
    const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    out.energy += weight * dphi * dphi;
    out.curvature_term += weight * phi * phi * e.dot(curvature_at(sys, t) * e);
  }
  out.energy *= dt / 3.0;
  out.curvature_term *= dt / 3.0;
  out.index_form = out.energy - out.curvature_term;
  return out;
}

Vec oneill_a(const GroupAction& action, const Vec& q, const Vec& x, const Vec& y)
{
  const OrthogonalRep& rep = action.rep;
  if (rep.count() == 0)
    return Vec::Zero(q.size());
  const Mat v = rep.orbit_tangent(q);
  Vec c(rep.count());
  for (int i = 0; i < rep.count(); ++i)
    c(i) = (rep.generators[i] * y).dot(x);
  const Mat gram = v.transpose() * v;
  return v * gram.completeOrthogonalDecomposition().solve(c);
}

double quotient_curvature(const GroupAction& action, const Vec& q, const Vec& x, const Vec& y)
{
  const Vec u = x.normalized();
  Vec w = y - u.dot(y) * u;
  if (w.norm() < 1e-12 * y.norm())
    throw Error("quotient curvature: vectors are linearly dependent");
  w.normalize();
  return action.manifold.sectional_curvature(q, u, w) + 3.0 * oneill_a(action, q, u, w).squaredNorm();
}

OneillReport oneill_check(const GroupAction& action, const Vec& q, const Vec& x, const Vec& y,
                          const OptimizerConfig& cfg, double h)
{
  const Mat orbit = action.orbit_basis(q);
  auto horizontal = [&](const Vec& v) { return orbit.cols() == 0 || (orbit.transpose() * v).norm() < 1e-8 * v.norm(); };
  if (!horizontal(x) || !horizontal(y))
    throw Error("O'Neill check needs horizontal vectors");
  const Vec u = x.normalized();
  const Vec w = (y - u.dot(y) * u).normalized();
  const ModelManifold& m = action.manifold;
  OneillReport out;
  out.k_sigma = m.sectional_curvature(q, u, w);
  out.a_closed = 3.0 * oneill_a(action, q, u, w).squaredNorm();
  auto k_fd = [&](double eps) {
    const double d = quotient_distance(action, m.exp(q, eps * u), m.exp(q, eps * w), cfg).value;
    return 3.0 * (2.0 * eps * eps - d * d) / std::pow(eps, 4);
  };
  const double eps = 0.1;
  out.k_star_fd = (4.0 * k_fd(0.5 * eps) - k_fd(eps)) / 3.0;
  const OrbitGeodesic geod = make_orbit_geodesic(action, q, u, 0.0, 100 * h, h);
  const TransversalSystem sys = vertical_bundle(geod);
  const Vec yc = geod.frame0.transpose() * w;
  out.a_tensor_path = 3.0 * (a_tensor(sys, 0.0) * yc).squaredNorm();
  out.formula_residual = std::abs(out.k_star_fd - out.k_sigma - out.a_closed);
  out.tensor_residual = std::abs(out.a_tensor_path - out.a_closed);
  return out;
}

RescaleReport rescale_probe(const GroupAction& action, const Vec& p, const Vec& v, const std::vector<double>& lambdas,
                            std::uint64_t seed)
{
  RescaleReport out;
  const OrthogonalRep slice = slice_rep(action, p);
  out.slice_polar = slice.count() == 0 || is_polar_rep(slice, seed).polar;
  const ModelManifold& m = action.manifold;
  for (std::size_t k = 0; k < lambdas.size(); ++k)
  {
    const double lam = lambdas[k];
    const Vec q = m.exp(p, lam * v);
    const Mat nrm = action.normal_basis(q);
    double top = 0.0;
    bool any = false;
    for (int i = 0; i < nrm.cols(); ++i)
      for (int j = i + 1; j < nrm.cols(); ++j)
      {
        const double kq = quotient_curvature(action, q, nrm.col(i), nrm.col(j));
        top = any ? std::max(top, kq) : kq;
        any = true;
      }
    if (nrm.cols() >= 2)
    {
      Rng rng(derive_seed(seed, k));
      for (int s = 0; s < 64; ++s)
      {
        const Vec c1 = rng.unit(static_cast<int>(nrm.cols()));
        Vec c2 = rng.unit(static_cast<int>(nrm.cols()));
        c2 -= c1.dot(c2) * c1;
        if (c2.norm() < 1e-6)
          continue;
        top = std::max(top, quotient_curvature(action, q, nrm * c1, nrm * c2));
      }
    }
    out.lambdas.push_back(lam);
    out.scaled_curvature.push_back(lam * lam * top);
  }
  for (std::size_t k = 1; k < out.scaled_curvature.size(); ++k)
    if (out.scaled_curvature[k] > out.scaled_curvature[k - 1] * (1.0 + 1e-6) + 1e-12)
      out.decreasing = false;
  return out;
}

GroupAction diagonal_so3_on_spheres(double r)
{
  const LieAlgebra so3 = build_classical(ClassicalFamily::SpecialOrthogonal, 3);
  std::vector<Mat> gens;
  for (const CMat& l : so3.realization())
  {
    Mat a = Mat::Zero(6, 6);
    a.topLeftCorner(3, 3) = l.real();
    a.bottomRightCorner(3, 3) = l.real();
    gens.push_back(a);
  }
  return GroupAction::on(make_rep(so3, gens, true), ModelManifold::product_of_spheres(3, 1.0, 3, r));
}

Vec skew_curve(double r, double s, Vec* velocity, Vec* acceleration)
{
  const double speed = std::sqrt(1.0 + 1.0 / (r * r));
  const double t = s / speed;
  const double u = t / (r * r);
  Vec x(6);
  x << std::cos(t), std::sin(t), 0.0, r * std::sin(u), r * std::cos(u), 0.0;
  if (velocity)
  {
    velocity->resize(6);
    *velocity << -std::sin(t), std::cos(t), 0.0, std::cos(u) / r, -std::sin(u) / r, 0.0;
    *velocity /= speed;
  }
  if (acceleration)
  {
    acceleration->resize(6);
    const double r3 = r * r * r;
    *acceleration << -std::cos(t), -std::sin(t), 0.0, -std::sin(u) / r3, -std::cos(u) / r3, 0.0;
    *acceleration /= speed * speed;
  }
  return x;
}

SkewGeodesicReport skew_geodesic_check(double r, double t_max, double step)
{
  const GroupAction action = diagonal_so3_on_spheres(r);
  SkewGeodesicReport out;
  out.radius = r;
  Vec v0;
  const Vec x0 = skew_curve(r, 0.0, &v0);
  const int n = static_cast<int>(std::lround(t_max / step));
  for (int i = 0; i <= n; ++i)
  {
    const double s = t_max * i / n;
    Vec v, acc;
    const Vec x = skew_curve(r, s, &v, &acc);
    out.speed_residual = std::max(out.speed_residual, std::abs(v.norm() - 1.0));
    out.acceleration = std::max(out.acceleration, action.manifold.project(x, acc).norm());
    for (const Mat& a : action.rep.generators)
      out.orthogonality = std::max(out.orthogonality, std::abs(v.dot(a * x)));
    out.exp_residual = std::max(out.exp_residual, (action.manifold.exp(x0, s * v0) - x).norm());
  }
  return out;
}

}  // namespace polaris
