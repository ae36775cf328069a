#ifndef POLARIS_TRANSVERSAL_HPP
#define POLARIS_TRANSVERSAL_HPP

#include "polaris/weyl.hpp"

namespace polaris
{

/// Closed-form solution operator of y'' + R y = 0 for constant symmetric R:
/// y(t) = C(t) y0 + S(t) y0'.
class JacobiPropagator
{
public:
  JacobiPropagator() = default;
  explicit JacobiPropagator(const Mat& r);

  /// Fills y(t) and y'(t) for initial data stacked as [y0; y0'] (columns).
  void evaluate(double t, const Mat& initial, Mat* y, Mat* dy) const;

private:
  Mat m_q;
  Vec m_mu;
};

/// Horizontal geodesic t -> exp_p(t xi) leaving an orbit, with a parallel
/// frame E(t) in which the Jacobi operator R(., gamma')gamma' is constant.
/// Field coordinates are always taken in this frame.
struct OrbitGeodesic
{
  GroupAction action;
  Vec p;
  Vec xi;
  double a = 0.0;
  double b = 1.0;
  double h = 1e-3;
  /// orthonormal basis of T_p(Gp) (ambient columns)
  Mat orbit_tangent;
  /// shape operator S_xi in the orbit_tangent basis
  Mat shape;
  /// orthonormal basis of T_p M (ambient columns)
  Mat frame0;
  /// R(., xi) xi in frame coordinates
  Mat jacobi_operator;
  JacobiPropagator propagator;

  int dim() const { return static_cast<int>(frame0.cols()); }
  int steps() const;
  double time(int i) const { return a + i * h; }
  Vec point(double t) const;
  Vec velocity(double t) const;
  /// E(t) (ambient columns)
  Mat frame(double t) const;
  /// Orthonormal orbit tangent at gamma(t) in frame coordinates.
  Mat orbit_coordinates(double t) const;
};

OrbitGeodesic make_orbit_geodesic(const GroupAction& action, const Vec& p, const Vec& xi, double a, double b,
                                  double h = 1e-3);

/// Family of fields sampled on the grid (frame coordinates); column k of
/// value[i] is field k at time i.
struct FieldFamily
{
  std::vector<double> times;
  std::vector<Mat> value;
  std::vector<Mat> derivative;

  int count() const { return value.empty() ? 0 : static_cast<int>(value.front().cols()); }
  /// Column k stacked over the grid.
  Vec stacked(int k) const;
};

enum class JacobiMethod
{
  ClosedForm,
  RungeKutta
};

/// Jacobi fields with initial data at t = a given as [J(a); J'(a)] columns in
/// frame coordinates.
FieldFamily jacobi_integrate(const OrbitGeodesic& geod, const Mat& initial, double a, double b,
                             JacobiMethod method = JacobiMethod::ClosedForm);
/// Single field from ambient initial data at t = a.
FieldFamily jacobi_integrate(const OrbitGeodesic& geod, const Vec& j0, const Vec& dj0, double a, double b,
                             JacobiMethod method = JacobiMethod::ClosedForm);

/// Initial data [J(0); J'(0)] (2 dim x dim) of a basis of N-Jacobi fields.
Mat n_jacobi_space(const OrbitGeodesic& geod);

/// Values of fields with initial data at t = 0 at an arbitrary time.
Mat field_values(const OrbitGeodesic& geod, const Mat& initial, double t, Mat* derivative = nullptr);

struct FocalPoint
{
  double t = 0.0;
  int multiplicity = 0;
  double residual = 0.0;
};

std::vector<FocalPoint> focal_points(const OrbitGeodesic& geod, double a, double b, double threshold = 1e-7);

/// Restrictions t -> A_i gamma(t) of the Killing fields, orthonormalized as
/// grid functions (stacked values).
struct KillingRestrictions
{
  FieldFamily fields;
  /// orthonormal basis of the stacked span
  Mat basis;
  int dim() const { return static_cast<int>(basis.cols()); }
};

KillingRestrictions killing_restrictions(const OrbitGeodesic& geod, double a, double b);

struct CompletenessVerdict
{
  bool complete = true;
  double worst_angle = 0.0;
  double worst_time = 0.0;
  std::vector<FocalPoint> focal;
  /// initial data of the worst offending kernel field
  Vec witness;
};

CompletenessVerdict variational_completeness_probe(const OrbitGeodesic& geod, double a, double b,
                                                   double tol = 1e-6);

struct TangencyReport
{
  Vec xi;
  Vec eigenvalues;
  double worst_tangency = 0.0;
  int worst_eigenfield = -1;
  bool tangency_holds = true;
  double tangent_angle = 0.0;
  bool tangent_agreement = true;
  double second_time = 0.0;
};

/// For each eigenvector u of the shape operator S_xi with eigenvalue lambda,
/// the field (1 - lambda s) u must be tangent to the orbit it reaches at
/// s = 1 / lambda. Euclidean representations only.
TangencyReport tangency_probe(const OrthogonalRep& rep, const Vec& p, std::uint64_t seed, double tol = 1e-8);

/// omega = <J1', J2> - <J1, J2'>.
double symplectic_form(const Vec& j1, const Vec& dj1, const Vec& j2, const Vec& dj2);

/// Vertical and horizontal bundles along a horizontal geodesic.
struct TransversalSystem
{
  OrbitGeodesic geodesic;
  /// Lambda: N-Jacobi initial data; Upsilon: the subspace of fields tangent to the orbits
  Mat lambda;
  Mat upsilon;
  std::vector<double> times;
  std::vector<Mat> vertical;
  std::vector<Mat> horizontal;
  std::vector<Mat> a_tensor;
  std::vector<Mat> curvature;
  std::vector<bool> regular;

  int rank() const { return static_cast<int>(upsilon.cols()); }
  /// Projection onto the vertical space at an arbitrary time.
  Mat projector(double t) const;
  /// Orthonormal basis of the vertical space at an arbitrary time.
  Mat vertical_basis(double t) const;
  /// Derivative of the projector (centered differences with one Richardson step).
  Mat projector_derivative(double t) const;
};

/// Upsilon, vertical and horizontal spaces on the grid.
TransversalSystem vertical_bundle(const OrbitGeodesic& geod);
/// Bundles plus A_t, the horizontal parallel frame and the curvature operator.
TransversalSystem transversal_system(const OrbitGeodesic& geod);

/// A_t = [P', P] at an arbitrary time.
Mat a_tensor(const TransversalSystem& sys, double t);

struct TransversalDiagnostics
{
  bool rank_constant = true;
  double orthogonality = 0.0;
  double antisymmetry = 0.0;
  double block_structure = 0.0;
  double curvature_symmetry = 0.0;
  double curvature_min_eigenvalue = 0.0;
  double max_a_regular = 0.0;
  /// (J')^v = -A J after removing the vertical part with an Upsilon field
  double claim_vertical = 0.0;
  /// E' = A E for the horizontal parallel frame
  double claim_frame = 0.0;
  /// projected N-Jacobi fields against integrated transversal solutions
  double projected_residual = 0.0;
  double omega_lambda = 0.0;
  double omega_upsilon = 0.0;
  double omega_drift = 0.0;
};

TransversalDiagnostics diagnose(const TransversalSystem& sys, std::uint64_t seed);

/// RK4 with step 2h for (∇^h)^2 Y + R(t) Y = 0 in the horizontal parallel
/// frame; initial data in frame coordinates at the grid start.
FieldFamily transversal_integrate(const TransversalSystem& sys, const Mat& initial);

struct ConjugateTime
{
  double t = 0.0;
  int multiplicity = 0;
};

struct ConjugateScan
{
  std::vector<ConjugateTime> times;
  int index = 0;
  int index_refined = 0;
  bool sturm_consistent = true;
};

ConjugateScan conjugate_scan(const TransversalSystem& sys, int elements = 256, double threshold = 1e-6);

struct BumpReport
{
  double index_form = 0.0;
  double energy = 0.0;
  double curvature_term = 0.0;
  double halfwidth = 0.0;
};

/// I(Z,Z) for Z = phi Z0 with Z0 horizontal-parallel along the top
/// eigenvector of R(t0) and phi = cos^2 bump of the given half width.
BumpReport bump_index_form(const TransversalSystem& sys, double t0, double halfwidth);

/// Closed-form O'Neill tensor A_X Y = 1/2 [X,Y]^v for horizontal X, Y at q.
Vec oneill_a(const GroupAction& action, const Vec& q, const Vec& x, const Vec& y);

/// Quotient sectional curvature of the horizontal plane (x, y) at q.
double quotient_curvature(const GroupAction& action, const Vec& q, const Vec& x, const Vec& y);

struct OneillReport
{
  double k_sigma = 0.0;
  double k_star_fd = 0.0;
  double a_closed = 0.0;
  double a_tensor_path = 0.0;
  double formula_residual = 0.0;
  double tensor_residual = 0.0;
};

OneillReport oneill_check(const GroupAction& action, const Vec& q, const Vec& x, const Vec& y,
                          const OptimizerConfig& cfg = {}, double h = 1e-3);

struct RescaleReport
{
  std::vector<double> lambdas;
  std::vector<double> scaled_curvature;
  bool slice_polar = true;
  bool decreasing = true;
};

/// lambda^2 times the maximal quotient curvature at exp_p(lambda v).
RescaleReport rescale_probe(const GroupAction& action, const Vec& p, const Vec& v, const std::vector<double>& lambdas,
                            std::uint64_t seed);

struct SkewGeodesicReport
{
  double radius = 0.0;
  double speed_residual = 0.0;
  double acceleration = 0.0;
  double orthogonality = 0.0;
  double exp_residual = 0.0;
};

/// so(3) acting diagonally on S^2(1) x S^2(R) in R^3 + R^3.
GroupAction diagonal_so3_on_spheres(double r);
/// gamma(s) = c(s / |c'|), c(t) = ((cos t, sin t, 0), (R sin(t/R^2), R cos(t/R^2), 0)).
Vec skew_curve(double r, double s, Vec* velocity = nullptr, Vec* acceleration = nullptr);
SkewGeodesicReport skew_geodesic_check(double r, double t_max = 20.0, double step = 1e-3);

}  // namespace polaris

#endif
