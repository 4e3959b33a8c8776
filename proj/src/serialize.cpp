#include "logcave/serialize.hpp"

#include <vendor/json.hpp>

#include "logcave/linalg.hpp"

namespace logcave {

namespace {

using nlohmann::json;

std::string dump(const json& j, int indent) { return indent >= 0 ? j.dump(indent) : j.dump(); }

json vec_to_json(const Vec& v) { return json(v); }

Vec vec_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array");
  Vec v;
  for (const json& e : j) {
    if (!e.is_number()) throw ConfigError(std::string(what) + ": expected numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.n; ++i) {
    json row = json::array();
    for (int j = 0; j < m.n; ++j) row.push_back(m.at(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + ": expected a matrix");
  Mat m;
  m.n = static_cast<int>(j.size());
  for (const json& row : j) {
    Vec r = vec_from_json(row, what);
    if (static_cast<int>(r.size()) != m.n)
      throw ConfigError(std::string(what) + ": matrix must be square");
    m.a.insert(m.a.end(), r.begin(), r.end());
  }
  return m;
}

json density_to_json_impl(const Density& f);

json log_concave_to_json(const LogConcaveDensity& f) {
  json j;
  j["family"] = family_name(f.family());
  j["dimension"] = f.dim();
  json params;
  switch (f.family()) {
    case Family::Gaussian:
      params["mean"] = vec_to_json(f.param_mean());
      params["cov"] = matrix_to_json(f.param_cov());
      break;
    case Family::UniformConvex: {
      const auto& body = f.param_body();
      if (!body || !body->polytope_form || !body->polytope_form->vertices)
        throw ConfigError("density_to_json: uniform density on a non-polytope body");
      json verts = json::array();
      for (const Vec& v : *body->polytope_form->vertices) verts.push_back(vec_to_json(v));
      params["vertices"] = verts;
      break;
    }
    case Family::ProductExponential:
      params["rates"] = vec_to_json(f.param_rates());
      break;
    case Family::ProductLaplace:
      params["locations"] = vec_to_json(f.param_mean());
      params["scales"] = vec_to_json(f.param_scales());
      break;
    case Family::Generic:
      throw ConfigError("density_to_json: generic densities have no parameter form");
  }
  j["params"] = params;
  return j;
}

json piecewise_to_json_impl(const PiecewisePolytopeDensity& g) {
  json j;
  j["family"] = "piecewise-polytope";
  j["dimension"] = g.dim();
  json pieces = json::array();
  for (const LevelPiece& p : g.pieces()) {
    json piece;
    piece["y"] = p.y;
    json facets = json::array();
    for (const Halfspace& h : p.polytope.facets)
      facets.push_back(json{{"normal", vec_to_json(h.normal)}, {"offset", h.offset}});
    piece["facets"] = facets;
    if (p.polytope.vertices) {
      json verts = json::array();
      for (const Vec& v : *p.polytope.vertices) verts.push_back(vec_to_json(v));
      piece["vertices"] = verts;
    }
    pieces.push_back(piece);
  }
  j["pieces"] = pieces;
  return j;
}

json density_to_json_impl(const Density& f) {
  if (auto* c = dynamic_cast<const ContaminatedDensity*>(&f)) {
    json j;
    j["family"] = "contaminated";
    j["dimension"] = c->dim();
    j["weight"] = c->weight();
    j["base"] = log_concave_to_json(c->base());
    j["contaminant"] = density_to_json_impl(c->contaminant());
    return j;
  }
  if (auto* p = dynamic_cast<const PiecewisePolytopeDensity*>(&f)) return piecewise_to_json_impl(*p);
  if (auto* l = dynamic_cast<const LogConcaveDensity*>(&f)) return log_concave_to_json(*l);
  throw ConfigError("density_to_json: unsupported density type");
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string("density JSON: missing field '") + key + "'");
  return *it;
}

std::shared_ptr<Density> density_from_json_impl(const json& j) {
  if (!j.is_object()) throw ConfigError("density JSON: expected an object");
  const std::string family = field(j, "family").get<std::string>();

  if (family == "contaminated") {
    double weight = field(j, "weight").get<double>();
    std::shared_ptr<Density> base_any = density_from_json_impl(field(j, "base"));
    auto base = std::dynamic_pointer_cast<LogConcaveDensity>(base_any);
    if (!base) throw ConfigError("density JSON: contamination base must be a closed-form family");
    std::shared_ptr<Density> cont = density_from_json_impl(field(j, "contaminant"));
    return std::make_shared<ContaminatedDensity>(*base, cont, weight);
  }

  if (family == "piecewise-polytope") {
    const int d = field(j, "dimension").get<int>();
    std::vector<LevelPiece> pieces;
    for (const json& pj : field(j, "pieces")) {
      LevelPiece piece;
      piece.y = field(pj, "y").get<double>();
      Polytope poly;
      poly.dimension = d;
      poly.bounded = true;
      for (const json& fj : field(pj, "facets")) {
        Halfspace h;
        h.normal = vec_from_json(field(fj, "normal"), "facet normal");
        h.offset = field(fj, "offset").get<double>();
        if (static_cast<int>(h.normal.size()) != d)
          throw ConfigError("density JSON: facet dimension mismatch");
        poly.facets.push_back(std::move(h));
      }
      if (pj.contains("vertices")) {
        std::vector<Vec> verts;
        for (const json& vj : pj["vertices"]) {
          Vec v = vec_from_json(vj, "vertex");
          if (static_cast<int>(v.size()) != d)
            throw ConfigError("density JSON: vertex dimension mismatch");
          verts.push_back(std::move(v));
        }
        poly.vertices = std::move(verts);
      }
      piece.polytope = std::move(poly);
      pieces.push_back(std::move(piece));
    }
    return std::make_shared<PiecewisePolytopeDensity>(d, std::move(pieces));
  }

  const int d = field(j, "dimension").get<int>();
  const json& params = field(j, "params");
  if (family == "gaussian") {
    Vec mean = vec_from_json(field(params, "mean"), "mean");
    Mat cov = matrix_from_json(field(params, "cov"), "cov");
    if (static_cast<int>(mean.size()) != d || cov.n != d)
      throw ConfigError("density JSON: gaussian dimension mismatch");
    return std::make_shared<LogConcaveDensity>(LogConcaveDensity::gaussian(mean, cov));
  }
  if (family == "uniform-convex") {
    std::vector<Vec> verts;
    for (const json& vj : field(params, "vertices"))
      verts.push_back(vec_from_json(vj, "vertex"));
    Polytope hull = Polytope::hull_of(verts);
    if (hull.dimension != d) throw ConfigError("density JSON: uniform dimension mismatch");
    return std::make_shared<LogConcaveDensity>(
        LogConcaveDensity::uniform_on(ConvexBody::from_polytope(std::move(hull))));
  }
  if (family == "product-exponential") {
    Vec rates = vec_from_json(field(params, "rates"), "rates");
    if (static_cast<int>(rates.size()) != d)
      throw ConfigError("density JSON: rate dimension mismatch");
    return std::make_shared<LogConcaveDensity>(LogConcaveDensity::product_exponential(rates));
  }
  if (family == "product-laplace") {
    Vec loc = vec_from_json(field(params, "locations"), "locations");
    Vec scales = vec_from_json(field(params, "scales"), "scales");
    if (static_cast<int>(loc.size()) != d || scales.size() != loc.size())
      throw ConfigError("density JSON: laplace dimension mismatch");
    return std::make_shared<LogConcaveDensity>(LogConcaveDensity::product_laplace(loc, scales));
  }
  throw ConfigError("density JSON: unknown family '" + family + "'");
}

}  // namespace

std::string density_to_json(const Density& f, int indent) {
  return dump(density_to_json_impl(f), indent);
}

std::shared_ptr<Density> density_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("density JSON: parse error: ") + e.what());
  }
  try {
    return density_from_json_impl(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("density JSON: ") + e.what());
  }
}

std::shared_ptr<PiecewisePolytopeDensity> piecewise_from_json(const std::string& text) {
  auto any = density_from_json(text);
  auto p = std::dynamic_pointer_cast<PiecewisePolytopeDensity>(any);
  if (!p) throw ConfigError("density JSON: expected a piecewise-polytope density");
  return p;
}

std::string selection_to_json(const SelectionResult& r, int indent) {
  json j;
  j["chosen_index"] = r.chosen_index;
  j["row_max"] = r.row_max;
  j["scores"] = r.scores;
  json pairs = json::array();
  for (const auto& [a, b] : r.pairs) pairs.push_back(json::array({a, b}));
  j["pairs"] = pairs;
  j["sample_count"] = r.sample_count;
  j["exact_integrals"] = r.exact_integrals;
  j["seed"] = r.seed;
  j["integral_budget"] = r.integral_budget;
  return dump(j, indent);
}

std::string guarantee_to_json(const GuaranteeReport& r, int indent) {
  json j;
  j["candidate_tv"] = r.candidate_tv;
  j["candidate_tv_err"] = r.candidate_tv_err;
  j["opt"] = r.opt;
  j["opt_err"] = r.opt_err;
  j["successes"] = r.successes;
  j["success_rate"] = r.success_rate;
  j["n_samples"] = r.n_samples;
  json trials = json::array();
  for (const GuaranteeTrial& t : r.trials)
    trials.push_back(json{{"chosen", t.chosen}, {"tv", t.tv_chosen}, {"success", t.success}});
  j["trials"] = trials;
  return dump(j, indent);
}

std::string sandwich_to_json(const SandwichReport& r, int indent) {
  json j;
  j["all_pass"] = r.all_pass;
  json pts = json::array();
  for (const SandwichPoint& p : r.points)
    pts.push_back(json{{"y", p.y},
                       {"lhs", p.lhs},
                       {"lhs_err", p.lhs_err},
                       {"rhs", p.rhs},
                       {"rhs_err", p.rhs_err},
                       {"pass", p.pass}});
  j["points"] = pts;
  return dump(j, indent);
}

}  // namespace logcave
