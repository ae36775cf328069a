#ifndef POLARIS_CATALOG_HPP
#define POLARIS_CATALOG_HPP

#include "polaris/transversal.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace polaris
{

enum class ModelKind
{
  LieAlgebraOnly,
  Representation,
  HomogeneousPair,
  SphereAction,
  ProductSpheresAction
};

std::string to_string(ModelKind kind);

/// Everything the analysis layer needs about one model. Optional members are
/// present when the kind provides them.
struct Model
{
  std::string name;
  ModelKind kind = ModelKind::LieAlgebraOnly;
  LieAlgebra algebra;
  std::optional<SymmetricPair> pair;
  /// subgroup acting on G/K (homogeneous pairs)
  std::optional<Subspace> subgroup;
  std::optional<GroupAction> action;
  /// default horizontal geodesic
  std::optional<Vec> basepoint;
  std::optional<Vec> direction;
  double geodesic_end = M_PI;
  /// singular point and a slice direction for slice, orbifold and rescale checks
  std::optional<Vec> singular_point;
  std::optional<Vec> slice_direction;
};

struct CatalogEntry
{
  std::string name;
  ModelKind kind;
  std::string summary;
  /// checks run by the full suite
  std::vector<std::string> suite;
  /// expected outcomes keyed by check: {"verdict": bool, "value": number, "value_tolerance": number}
  nlohmann::json expected;
  std::function<Model()> build;
};

const std::vector<CatalogEntry>& catalog_list();
const CatalogEntry& catalog_entry(const std::string& name);

/// so(3) acting on traceless symmetric 3x3 matrices by conjugation (orthonormal trace basis).
OrthogonalRep so3_on_symmetric_traceless();
/// Coordinates of a traceless symmetric matrix in the basis used above.
Vec symmetric_coordinates(const Mat& s);

/// Fixed default so(3) s-representation pair su(3)/so(3) and CP^2 pair.
SymmetricPair su3_real_form_pair();
SymmetricPair su3_projective_pair();

}  // namespace polaris

#endif
