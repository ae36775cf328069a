#include "polaris/model_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace polaris
{

using nlohmann::json;

namespace
{

[[noreturn]] void fail(const std::string& field, const std::string& what)
{
  throw Error("model field '" + field + "': " + what);
}

double number(const json& v, const std::string& field)
{
  if (!v.is_number())
    fail(field, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& field)
{
  if (!v.is_number_integer())
    fail(field, "expected an integer");
  return v.get<int>();
}

std::vector<double> flat_numbers(const json& v, const std::string& field)
{
  if (!v.is_array())
    fail(field, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (v[i].is_array())
      for (std::size_t j = 0; j < v[i].size(); ++j)
        out.push_back(number(v[i][j], f + "[" + std::to_string(j) + "]"));
    else
      out.push_back(number(v[i], f));
  }
  return out;
}

Mat square_matrix(const json& v, int n, const std::string& field)
{
  const std::vector<double> xs = flat_numbers(v, field);
  if (static_cast<int>(xs.size()) != n * n)
    fail(field, "expected " + std::to_string(n) + "x" + std::to_string(n) + " entries, got " +
                    std::to_string(xs.size()));
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = xs[i * n + j];
  return m;
}

Mat square_matrix(const json& v, const std::string& field)
{
  const std::vector<double> xs = flat_numbers(v, field);
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(xs.size()))));
  if (n * n != static_cast<int>(xs.size()) || n == 0)
    fail(field, "matrix entry count is not a positive square");
  return square_matrix(v, n, field);
}

CMat complex_matrix(const json& v, const std::string& field)
{
  if (!v.is_array() || v.empty())
    fail(field, "expected a nonempty array");
  // entries are numbers or [re, im] pairs, flattened row-major
  std::vector<std::complex<double>> xs;
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (v[i].is_array())
    {
      if (v[i].size() != 2)
        fail(f, "complex entries are [re, im] pairs");
      xs.emplace_back(number(v[i][0], f + "[0]"), number(v[i][1], f + "[1]"));
    }
    else
      xs.emplace_back(number(v[i], f), 0.0);
  }
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(xs.size()))));
  if (n * n != static_cast<int>(xs.size()))
    fail(field, "matrix entry count is not a square");
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = xs[i * n + j];
  return m;
}

Vec vector_field(const json& v, const std::string& field)
{
  const std::vector<double> xs = flat_numbers(v, field);
  return Eigen::Map<const Vec>(xs.data(), static_cast<int>(xs.size()));
}

std::vector<double> structure_tensor(const json& doc, int n)
{
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  if (!doc.contains("structure"))
    return c;
  const json& s = doc["structure"];
  if (!s.is_array())
    fail("structure", "expected an array of [i, j, k, c] quadruples");
  auto at = [&](int i, int j, int k) -> double& { return c[(static_cast<std::size_t>(i) * n + j) * n + k]; };
  std::map<std::tuple<int, int, int>, double> given;
  for (std::size_t q = 0; q < s.size(); ++q)
  {
    const std::string f = "structure[" + std::to_string(q) + "]";
    if (!s[q].is_array() || s[q].size() != 4)
      fail(f, "expected [i, j, k, c]");
    int idx[3];
    for (int r = 0; r < 3; ++r)
    {
      idx[r] = integer(s[q][r], f);
      if (idx[r] < 1 || idx[r] > n)
        fail(f, "index " + std::to_string(idx[r]) + " outside 1.." + std::to_string(n));
    }
    const double value = number(s[q][3], f);
    const auto key = std::make_tuple(idx[0] - 1, idx[1] - 1, idx[2] - 1);
    if (given.count(key))
      fail(f, "duplicate quadruple");
    given[key] = value;
  }
  for (const auto& [key, value] : given)
  {
    const auto [i, j, k] = key;
    at(i, j, k) = value;
    // only i < j entries are required; the mirrored entry is implied
    if (i < j && !given.count(std::make_tuple(j, i, k)))
      at(j, i, k) = -value;
  }
  return c;
}

LieAlgebra algebra_from_json(const json& doc, const std::string& name)
{
  if (!doc.contains("dim"))
    fail("dim", "required");
  const int n = integer(doc["dim"], "dim");
  if (n < 1)
    fail("dim", "must be positive");
  std::vector<double> c = structure_tensor(doc, n);
  Mat inner;
  if (doc.contains("inner"))
    inner = square_matrix(doc["inner"], n, "inner");
  std::vector<CMat> realization;
  if (doc.contains("realization"))
  {
    const json& r = doc["realization"];
    if (!r.is_array() || static_cast<int>(r.size()) != n)
      fail("realization", "expected one matrix per basis element");
    for (std::size_t i = 0; i < r.size(); ++i)
      realization.push_back(complex_matrix(r[i], "realization[" + std::to_string(i) + "]"));
  }
  LieAlgebra lie(n, std::move(c), inner, std::move(realization), name);
  lie.validate(1e-8);
  return lie;
}

ModelManifold manifold_from_json(const json& doc, int space)
{
  if (!doc.contains("manifold"))
    return ModelManifold::euclidean(space);
  const json& m = doc["manifold"];
  if (!m.is_object() || !m.contains("kind") || !m["kind"].is_string())
    fail("manifold.kind", "required string");
  const ManifoldKind kind = parse_manifold_kind(m["kind"].get<std::string>());
  if (kind == ManifoldKind::Euclidean)
    return ModelManifold::euclidean(space);
  if (kind == ManifoldKind::UnitSphere)
    return ModelManifold::unit_sphere(space);
  std::vector<double> radii = m.contains("radii") ? flat_numbers(m["radii"], "manifold.radii") : std::vector<double>{1, 1};
  if (radii.size() != 2)
    fail("manifold.radii", "a product of spheres has two radii");
  std::vector<int> blocks{space / 2, space - space / 2};
  if (m.contains("blocks"))
  {
    const std::vector<double> b = flat_numbers(m["blocks"], "manifold.blocks");
    if (b.size() != 2 || b[0] + b[1] != space)
      fail("manifold.blocks", "two block sizes summing to the representation dimension");
    blocks = {static_cast<int>(b[0]), static_cast<int>(b[1])};
  }
  return ModelManifold::product_of_spheres(blocks[0], radii[0], blocks[1], radii[1]);
}

json matrix_json(const Mat& m)
{
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i)
  {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j)
      row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Vec& v)
{
  json out = json::array();
  for (int i = 0; i < v.size(); ++i)
    out.push_back(v(i));
  return out;
}

}  // namespace

Model model_from_json(const json& doc)
{
  if (!doc.is_object())
    fail("<root>", "expected an object");
  if (!doc.contains("schema"))
    fail("schema", "version field required");
  if (integer(doc["schema"], "schema") != kModelSchema)
    fail("schema", "unsupported version " + doc["schema"].dump());
  if (!doc.contains("kind") || !doc["kind"].is_string())
    fail("kind", "required string");
  const std::string kind = doc["kind"].get<std::string>();
  Model m;
  m.name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : "model";
  m.algebra = algebra_from_json(doc, m.name);

  if (kind == "lie-algebra")
  {
    m.kind = ModelKind::LieAlgebraOnly;
  }
  else if (kind == "symmetric-pair" || kind == "homogeneous-pair")
  {
    if (!doc.contains("involution"))
      fail("involution", "required for " + kind);
    m.kind = ModelKind::HomogeneousPair;
    m.pair = cartan_decompose(m.algebra, square_matrix(doc["involution"], m.algebra.dim(), "involution"), 1e-8);
    if (doc.contains("subalgebra"))
    {
      const json& rows = doc["subalgebra"];
      if (!rows.is_array() || rows.empty())
        fail("subalgebra", "expected a nonempty list of coordinate rows");
      Mat h(m.algebra.dim(), rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r)
      {
        const Vec row = vector_field(rows[r], "subalgebra[" + std::to_string(r) + "]");
        if (row.size() != m.algebra.dim())
          fail("subalgebra[" + std::to_string(r) + "]", "row length must equal dim");
        h.col(r) = row;
      }
      m.subgroup = make_subspace(m.algebra, h);
      const Verdict v = is_subalgebra(m.algebra, *m.subgroup, 1e-8);
      if (!v.holds)
        fail("subalgebra", "rows do not span a subalgebra (residual " + std::to_string(v.residual) + ")");
    }
  }
  else if (kind == "representation" || kind == "sphere-action" || kind == "product-spheres-action")
  {
    if (!doc.contains("generators") || !doc["generators"].is_array())
      fail("generators", "required list of matrices");
    const json& g = doc["generators"];
    if (static_cast<int>(g.size()) != m.algebra.dim())
      fail("generators", "expected one matrix per basis element");
    std::vector<Mat> gens;
    for (std::size_t i = 0; i < g.size(); ++i)
      gens.push_back(square_matrix(g[i], "generators[" + std::to_string(i) + "]"));
    const int space = static_cast<int>(gens[0].rows());
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (gens[i].rows() != space)
        fail("generators[" + std::to_string(i) + "]", "all generators must have the same size");
    json adjusted = doc;
    if (kind == "sphere-action" && !doc.contains("manifold"))
      adjusted["manifold"] = {{"kind", "unit-sphere"}};
    if (kind == "product-spheres-action" && !doc.contains("manifold"))
      adjusted["manifold"] = {{"kind", "product-of-spheres"}};
    const ModelManifold manifold = manifold_from_json(adjusted, space);
    const bool sphere = manifold.kind() != ManifoldKind::Euclidean;
    OrthogonalRep rep = make_rep(m.algebra, gens, sphere);
    rep.validate(1e-8);
    m.action = GroupAction::on(rep, manifold);
    m.kind = manifold.kind() == ManifoldKind::Euclidean  ? ModelKind::Representation
             : manifold.kind() == ManifoldKind::UnitSphere ? ModelKind::SphereAction
                                                           : ModelKind::ProductSpheresAction;
  }
  else
    fail("kind", "unknown kind '" + kind + "'");

  auto optional_vec = [&](const char* key, std::optional<Vec>& out) {
    if (!doc.contains(key))
      return;
    out = vector_field(doc[key], key);
    if (m.action && out->size() != m.action->manifold.ambient_dim())
      fail(key, "length must equal the representation dimension");
  };
  optional_vec("basepoint", m.basepoint);
  optional_vec("direction", m.direction);
  optional_vec("singular_point", m.singular_point);
  optional_vec("slice_direction", m.slice_direction);
  if (doc.contains("geodesic_end"))
    m.geodesic_end = number(doc["geodesic_end"], "geodesic_end");
  if (m.basepoint && m.action && !m.action->manifold.contains(*m.basepoint, 1e-8))
    fail("basepoint", "not on the manifold");
  return m;
}

Model load_model(const std::string& path_or_json)
{
  std::string text = path_or_json;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{')
  {
    std::ifstream in(path_or_json);
    if (!in)
      throw Error("cannot open model file '" + path_or_json + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::parse_error& e)
  {
    throw Error(std::string("model is not valid JSON: ") + e.what());
  }
  return model_from_json(doc);
}

json model_to_json(const Model& model)
{
  const LieAlgebra& lie = model.algebra;
  const int n = lie.dim();
  json doc;
  doc["schema"] = kModelSchema;
  doc["name"] = model.name;
  doc["dim"] = n;
  json s = json::array();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (lie.c(i, j, k) != 0.0)
          s.push_back({i + 1, j + 1, k + 1, lie.c(i, j, k)});
  doc["structure"] = s;
  doc["inner"] = matrix_json(lie.inner());
  if (lie.has_realization())
  {
    json r = json::array();
    for (const CMat& m : lie.realization())
    {
      json flat = json::array();
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
          flat.push_back({m(i, j).real(), m(i, j).imag()});
      r.push_back(flat);
    }
    doc["realization"] = r;
  }
  switch (model.kind)
  {
  case ModelKind::LieAlgebraOnly:
    doc["kind"] = "lie-algebra";
    break;
  case ModelKind::HomogeneousPair:
    doc["kind"] = model.subgroup ? "homogeneous-pair" : "symmetric-pair";
    doc["involution"] = matrix_json(model.pair->theta);
    if (model.subgroup)
      doc["subalgebra"] = matrix_json(model.subgroup->basis.transpose());
    break;
  default:
  {
    doc["kind"] = to_string(model.kind);
    json g = json::array();
    for (const Mat& a : model.action->rep.generators)
      g.push_back(matrix_json(a));
    doc["generators"] = g;
    const ModelManifold& man = model.action->manifold;
    json mj{{"kind", to_string(man.kind())}};
    if (man.kind() == ManifoldKind::ProductOfSpheres)
    {
      mj["radii"] = man.radii();
      mj["blocks"] = man.block_dims();
    }
    doc["manifold"] = mj;
  }
  }
  if (model.basepoint)
    doc["basepoint"] = vector_json(*model.basepoint);
  if (model.direction)
    doc["direction"] = vector_json(*model.direction);
  if (model.singular_point)
    doc["singular_point"] = vector_json(*model.singular_point);
  if (model.slice_direction)
    doc["slice_direction"] = vector_json(*model.slice_direction);
  doc["geodesic_end"] = model.geodesic_end;
  return doc;
}

}  // namespace polaris
