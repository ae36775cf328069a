#include "polaris/catalog.hpp"

#include <cmath>

namespace polaris
{

using nlohmann::json;

std::string to_string(ModelKind kind)
{
  switch (kind)
  {
  case ModelKind::LieAlgebraOnly:
    return "lie-algebra";
  case ModelKind::Representation:
    return "representation";
  case ModelKind::HomogeneousPair:
    return "homogeneous-pair";
  case ModelKind::SphereAction:
    return "sphere-action";
  case ModelKind::ProductSpheresAction:
    return "product-spheres-action";
  }
  return "unknown";
}

namespace
{

std::vector<Mat> symmetric_traceless_basis()
{
  std::vector<Mat> b(5, Mat::Zero(3, 3));
  b[0].diagonal() << 1, -1, 0;
  b[0] /= std::sqrt(2.0);
  b[1].diagonal() << 1, 1, -2;
  b[1] /= std::sqrt(6.0);
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int k = 0; k < 3; ++k)
  {
    b[2 + k](pairs[k][0], pairs[k][1]) = b[2 + k](pairs[k][1], pairs[k][0]) = 1.0 / std::sqrt(2.0);
  }
  return b;
}

Vec unit_vector(int n, int i)
{
  Vec v = Vec::Zero(n);
  v(i) = 1.0;
  return v;
}

Vec make_vec(std::initializer_list<double> xs)
{
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs)
    v(i++) = x;
  return v;
}

OrthogonalRep su2_adjoint_rep()
{
  return adjoint_representation(build_classical(ClassicalFamily::SpecialUnitary, 2));
}

Model su2_adjoint()
{
  Model m;
  m.name = "su2_adjoint";
  m.kind = ModelKind::Representation;
  const OrthogonalRep rep = su2_adjoint_rep();
  m.algebra = rep.algebra;
  m.action = GroupAction::linear(rep);
  m.basepoint = unit_vector(3, 0);
  m.direction = -unit_vector(3, 0);
  m.singular_point = Vec::Zero(3);
  m.slice_direction = unit_vector(3, 0);
  return m;
}

Model so3_sym_traceless()
{
  Model m;
  m.name = "so3_sym_traceless";
  m.kind = ModelKind::Representation;
  const OrthogonalRep rep = so3_on_symmetric_traceless();
  m.algebra = rep.algebra;
  m.action = GroupAction::linear(rep);
  Mat p = Mat::Zero(3, 3), xi = Mat::Zero(3, 3), s = Mat::Zero(3, 3);
  p.diagonal() << 1, 0, -1;
  xi.diagonal() << -1, 2, -1;
  s.diagonal() << 1, 1, -2;
  m.basepoint = symmetric_coordinates(p / std::sqrt(2.0));
  m.direction = symmetric_coordinates(xi / std::sqrt(6.0));
  m.singular_point = symmetric_coordinates(s / std::sqrt(6.0));
  Mat v = Mat::Zero(3, 3);
  v.diagonal() << 1, -1, 0;
  m.slice_direction = symmetric_coordinates(v / std::sqrt(2.0));
  return m;
}

Model su2_diag_double()
{
  Model m;
  m.name = "su2_diag_double";
  m.kind = ModelKind::Representation;
  const OrthogonalRep ad = su2_adjoint_rep();
  const OrthogonalRep rep = diagonal_sum(ad, ad);
  m.algebra = rep.algebra;
  m.action = GroupAction::linear(rep);
  m.basepoint = make_vec({1, 0, 0, 0, 1, 0});
  m.direction = make_vec({1, 1, 0, 1, 1, 0}) / 2.0;
  m.singular_point = make_vec({1, 0, 0, 0, 0, 0});
  m.slice_direction = make_vec({0, 0, 0, 0, 0.6, 0.8});
  return m;
}

Model hopf_s1_s3()
{
  Model m;
  m.name = "hopf_s1_s3";
  m.kind = ModelKind::SphereAction;
  const LieAlgebra u1 = build_classical(ClassicalFamily::Torus, 1);
  // multiplication by i on C^2 = R^4 (coordinates x1, y1, x2, y2)
  Mat j = Mat::Zero(4, 4);
  j(1, 0) = j(3, 2) = 1.0;
  j(0, 1) = j(2, 3) = -1.0;
  m.algebra = u1;
  m.action = GroupAction::on(make_rep(u1, {j}, true), ModelManifold::unit_sphere(4));
  m.basepoint = unit_vector(4, 0);
  m.direction = unit_vector(4, 2);
  return m;
}

Model so2_s2()
{
  Model m;
  m.name = "so2_s2";
  m.kind = ModelKind::SphereAction;
  const LieAlgebra so2 = build_classical(ClassicalFamily::SpecialOrthogonal, 2);
  Mat a = Mat::Zero(3, 3);
  a.topLeftCorner(2, 2) = so2.realization()[0].real();
  m.algebra = so2;
  m.action = GroupAction::on(make_rep(so2, {a}, true), ModelManifold::unit_sphere(3));
  m.basepoint = unit_vector(3, 0);
  m.direction = unit_vector(3, 2);
  m.singular_point = unit_vector(3, 2);
  m.slice_direction = unit_vector(3, 0);
  return m;
}

Subspace su3_torus(const LieAlgebra& su3)
{
  const std::complex<double> i(0.0, 1.0);
  CMat h1 = CMat::Zero(3, 3), h2 = CMat::Zero(3, 3);
  h1(0, 0) = i;
  h1(1, 1) = -i;
  h2(1, 1) = i;
  h2(2, 2) = -i;
  Mat t(su3.dim(), 2);
  t.col(0) = su3.from_matrix(h1);
  t.col(1) = su3.from_matrix(h2);
  return make_subspace(su3, t);
}

Model t2_cp2()
{
  Model m;
  m.name = "t2_cp2";
  m.kind = ModelKind::HomogeneousPair;
  m.pair = su3_projective_pair();
  m.algebra = m.pair->algebra;
  m.subgroup = su3_torus(m.algebra);
  return m;
}

Model hermann_su3()
{
  Model m;
  m.name = "hermann_su3";
  m.kind = ModelKind::HomogeneousPair;
  m.pair = su3_real_form_pair();
  m.algebra = m.pair->algebra;
  m.subgroup = su3_projective_pair().k;
  return m;
}

Model so3_s2xs2()
{
  Model m;
  m.name = "so3_s2xs2";
  m.kind = ModelKind::ProductSpheresAction;
  const double r = std::pow(2.0, 0.25);
  m.action = diagonal_so3_on_spheres(r);
  m.algebra = m.action->rep.algebra;
  Vec v;
  m.basepoint = skew_curve(r, 0.0, &v);
  m.direction = v;
  return m;
}

Model su2_diag_s5()
{
  Model m;
  m.name = "su2_diag_s5";
  m.kind = ModelKind::SphereAction;
  const OrthogonalRep ad = su2_adjoint_rep();
  OrthogonalRep rep = diagonal_sum(ad, ad);
  rep.restrict_to_sphere = true;
  m.algebra = rep.algebra;
  m.action = GroupAction::on(rep, ModelManifold::unit_sphere(6));
  m.basepoint = make_vec({1, 0, 0, 0, 1, 0}) / std::sqrt(2.0);
  m.direction = make_vec({1, 0, 0, 0, -1, 0}) / std::sqrt(2.0);
  m.singular_point = make_vec({1, 0, 0, 0, 0, 0});
  m.slice_direction = make_vec({0, 0, 0, 0, 0.6, 0.8});
  return m;
}

json expect(bool verdict)
{
  return json{{"verdict", verdict}};
}

json expect(bool verdict, double value, double tol = 0.0)
{
  return json{{"verdict", verdict}, {"value", value}, {"value_tolerance", tol}};
}

std::vector<CatalogEntry> make_catalog()
{
  std::vector<CatalogEntry> c;
  c.push_back({"su2_adjoint",
               ModelKind::Representation,
               "adjoint representation of su(2) on R^3",
               {"polarity", "hyperpolarity", "cohomogeneity", "slice-scan", "orbifold-points", "weyl",
                "reduction-isometry", "jacobi-scan", "variational-completeness", "transversal", "cartan-probe"},
               {{"polarity", expect(true, 1)},
                {"hyperpolarity", expect(true)},
                {"cohomogeneity", expect(true, 1)},
                {"slice-scan", expect(true)},
                {"orbifold-points", expect(true)},
                {"weyl", expect(true, 2)},
                {"reduction-isometry", expect(true)},
                {"jacobi-scan", expect(true, 1.0, 1e-6)},
                {"variational-completeness", expect(true)},
                {"transversal", expect(true)},
                {"cartan-probe", expect(true)}},
               su2_adjoint});
  c.push_back({"so3_sym_traceless",
               ModelKind::Representation,
               "so(3) acting by conjugation on traceless symmetric 3x3 matrices",
               {"polarity", "hyperpolarity", "cohomogeneity", "slice-scan", "orbifold-points", "weyl",
                "reduction-isometry", "jacobi-scan", "variational-completeness", "oneill", "transversal",
                "cartan-probe"},
               {{"polarity", expect(true, 2)},
                {"hyperpolarity", expect(true)},
                {"cohomogeneity", expect(true, 2)},
                {"slice-scan", expect(true)},
                {"orbifold-points", expect(true)},
                {"weyl", expect(true, 6)},
                {"reduction-isometry", expect(true)},
                {"jacobi-scan", expect(true, 1.0 / std::sqrt(3.0), 1e-6)},
                {"variational-completeness", expect(true)},
                {"oneill", expect(true, 0.0, 1e-2)},
                {"transversal", expect(true)},
                {"cartan-probe", expect(true)}},
               so3_sym_traceless});
  c.push_back({"su2_diag_double",
               ModelKind::Representation,
               "su(2) acting diagonally by the adjoint action on R^3 + R^3",
               {"polarity", "hyperpolarity", "cohomogeneity", "slice-scan", "orbifold-points", "weyl",
                "jacobi-scan", "variational-completeness", "oneill", "transversal"},
               {{"polarity", expect(false, 3)},
                {"hyperpolarity", expect(false)},
                {"cohomogeneity", expect(true, 3)},
                {"slice-scan", expect(true)},
                {"orbifold-points", expect(true)},
                {"jacobi-scan", expect(true)},
                {"variational-completeness", expect(false)},
                {"oneill", expect(true)},
                {"transversal", expect(true)}},
               su2_diag_double});
  c.push_back({"hopf_s1_s3",
               ModelKind::SphereAction,
               "circle acting on the unit sphere of C^2 by complex scalars",
               {"polarity", "hyperpolarity", "cohomogeneity", "slice-scan", "orbifold-points", "jacobi-scan",
                "variational-completeness", "oneill", "transversal", "cartan-probe"},
               {{"polarity", expect(false, 2)},
                {"hyperpolarity", expect(false)},
                {"cohomogeneity", expect(true, 2)},
                {"slice-scan", expect(true)},
                {"orbifold-points", expect(true)},
                {"jacobi-scan", expect(true, M_PI / 2, 1e-6)},
                {"variational-completeness", expect(false)},
                {"oneill", expect(true, 4.0, 1e-2)},
                {"transversal", expect(true, M_PI / 2, 1e-4)},
                {"cartan-probe", expect(true)}},
               hopf_s1_s3});
  c.push_back({"so2_s2",
               ModelKind::SphereAction,
               "rotations about an axis of the round 2-sphere",
               {"polarity", "hyperpolarity", "cohomogeneity", "slice-scan", "orbifold-points", "jacobi-scan",
                "variational-completeness", "transversal", "cartan-probe", "rescale-probe"},
               {{"polarity", expect(true, 1)},
                {"hyperpolarity", expect(true)},
                {"cohomogeneity", expect(true, 1)},
                {"slice-scan", expect(true)},
                {"orbifold-points", expect(true)},
                {"jacobi-scan", expect(true, M_PI / 2, 1e-6)},
                {"variational-completeness", expect(true)},
                {"transversal", expect(true)},
                {"cartan-probe", expect(true)},
                {"rescale-probe", expect(true)}},
               so2_s2});
  c.push_back({"t2_cp2",
               ModelKind::HomogeneousPair,
               "maximal torus of SU(3) acting on CP^2",
               {"polarity", "hyperpolarity", "cohomogeneity", "weyl", "cartan-probe"},
               {{"polarity", expect(true, 2)},
                {"hyperpolarity", expect(false)},
                {"cohomogeneity", expect(true, 2)},
                {"weyl", expect(true, 2)},
                {"cartan-probe", expect(true)}},
               t2_cp2});
  c.push_back({"hermann_su3",
               ModelKind::HomogeneousPair,
               "S(U(1) x U(2)) acting on SU(3)/SO(3)",
               {"polarity", "hyperpolarity", "cohomogeneity", "weyl", "cartan-probe"},
               {{"polarity", expect(true, 1)},
                {"hyperpolarity", expect(true)},
                {"cohomogeneity", expect(true, 1)},
                {"weyl", expect(true, 6)},
                {"cartan-probe", expect(true)}},
               hermann_su3});
  c.push_back({"so3_s2xs2",
               ModelKind::ProductSpheresAction,
               "SO(3) acting diagonally on S^2(1) x S^2(R), R = 2^(1/4)",
               {"polarity", "hyperpolarity", "cohomogeneity", "jacobi-scan", "variational-completeness", "transversal",
                "cartan-probe"},
               {{"polarity", expect(true, 1)},
                {"hyperpolarity", expect(true)},
                {"cohomogeneity", expect(true, 1)},
                {"jacobi-scan", expect(true)},
                {"variational-completeness", expect(true)},
                {"transversal", expect(true)},
                {"cartan-probe", expect(true)}},
               so3_s2xs2});
  c.push_back({"su2_diag_s5",
               ModelKind::SphereAction,
               "su(2) acting diagonally by the adjoint action on the unit sphere of R^3 + R^3",
               {"polarity", "cohomogeneity", "slice-scan", "orbifold-points", "jacobi-scan", "oneill", "transversal",
                "rescale-probe"},
               {{"polarity", expect(false, 2)},
                {"cohomogeneity", expect(true, 2)},
                {"slice-scan", expect(true)},
                {"orbifold-points", expect(true)},
                {"jacobi-scan", expect(true)},
                {"oneill", expect(true)},
                {"transversal", expect(true)},
                {"rescale-probe", expect(true)}},
               su2_diag_s5});
  return c;
}

}  // namespace

OrthogonalRep so3_on_symmetric_traceless()
{
  const LieAlgebra so3 = build_classical(ClassicalFamily::SpecialOrthogonal, 3);
  const std::vector<Mat> b = symmetric_traceless_basis();
  std::vector<Mat> gens;
  for (const CMat& lc : so3.realization())
  {
    const Mat l = lc.real();
    Mat a(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        a(i, j) = (b[i] * (l * b[j] - b[j] * l)).trace();
    gens.push_back(a);
  }
  return make_rep(so3, gens);
}

Vec symmetric_coordinates(const Mat& s)
{
  const std::vector<Mat> b = symmetric_traceless_basis();
  Vec out(5);
  for (int i = 0; i < 5; ++i)
    out(i) = (b[i] * s).trace();
  return out;
}

SymmetricPair su3_real_form_pair()
{
  const LieAlgebra su3 = build_classical(ClassicalFamily::SpecialUnitary, 3);
  return cartan_decompose(su3, involution_from_realization(su3, [](const CMat& m) { return CMat(m.conjugate()); }));
}

SymmetricPair su3_projective_pair()
{
  const LieAlgebra su3 = build_classical(ClassicalFamily::SpecialUnitary, 3);
  CMat d = CMat::Identity(3, 3);
  d(0, 0) = -1.0;
  return cartan_decompose(su3, involution_from_realization(su3, [&](const CMat& m) { return CMat(d * m * d); }));
}

const std::vector<CatalogEntry>& catalog_list()
{
  static const std::vector<CatalogEntry> entries = make_catalog();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name)
{
  for (const CatalogEntry& e : catalog_list())
    if (e.name == name)
      return e;
  throw Error("unknown catalog entry '" + name + "'");
}

}  // namespace polaris
