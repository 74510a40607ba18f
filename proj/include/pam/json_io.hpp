#pragma once

/**
 * Canonical JSON forms of every payload type. Rationals are strings "n/d"
 * (d omitted when 1); a norm is {"base": p, "exp": v} with exp null for the
 * norm of zero. Objects use sorted keys, so serialization is byte-stable.
 */

#include <json.hpp>

#include <string>
#include <vector>

#include "pam/operators.hpp"
#include "pam/product.hpp"
#include "pam/spectral.hpp"

namespace pam::io {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::schema, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* key) {
  const Json& v = field(j, key);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::schema, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace detail

inline Json to_json(const Rational& q) { return to_string(q); }

inline Rational rational_from(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail(ErrorKind::schema, "rational must be a string \"n/d\"");
  return parse_rational(j.get<std::string>());
}

inline Json to_json(const UltraNorm& n) {
  return Json{{"base", n.base}, {"exp", n.exponent ? Json(*n.exponent) : Json(nullptr)}};
}

inline UltraNorm norm_from(const Json& j) {
  const Json& e = detail::field(j, "exp");
  if (e.is_null()) return UltraNorm::zero(detail::get<long>(j, "base"));
  if (!e.is_number_integer()) fail(ErrorKind::schema, "norm exponent must be an integer or null");
  return UltraNorm{detail::get<long>(j, "base"), e.get<long>()};
}

inline Json to_json(const RootNorm& n) {
  return Json{{"base", n.base}, {"exp", n.exponent ? to_json(*n.exponent) : Json(nullptr)}};
}

inline Json to_json(const Cyclotomic& c) {
  Json coeffs = Json::object();
  for (const auto& [k, v] : c.coefficients()) coeffs[std::to_string(k)] = to_string(v);
  return Json{{"r", c.prime()}, {"level", c.level()}, {"coeffs", coeffs}};
}

inline Cyclotomic cyclotomic_from(const Json& j) {
  const long r = detail::get<long>(j, "r");
  const int level = detail::get<int>(j, "level");
  const Json& coeffs = detail::field(j, "coeffs");
  if (!coeffs.is_object()) fail(ErrorKind::schema, "cyclotomic coeffs must be an object");
  Cyclotomic::Coeffs c;
  for (const auto& [k, v] : coeffs.items()) {
    std::uint64_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoull(k, &used);
      if (used != k.size()) throw std::invalid_argument(k);
    } catch (const std::exception&) {
      fail(ErrorKind::schema, "cyclotomic exponent '" + k + "' is not an integer");
    }
    c[idx] = rational_from(v);
  }
  if (level == 0) {
    if (c.size() > 1 || (c.size() == 1 && c.begin()->first != 0)) {
      fail(ErrorKind::schema, "level-0 cyclotomic may only carry exponent 0");
    }
    return Cyclotomic(c.empty() ? Rational(0) : c.begin()->second, r);
  }
  return Cyclotomic::from_coeffs(r, level, c);
}

inline Json to_json(const Ball& b) {
  return Json{{"r", b.ambient.r}, {"m0", b.ambient.m0}, {"level", b.level}, {"center", to_string(b.center())}};
}

inline Ball ball_from(const Json& j) {
  const Ambient g{detail::get<long>(j, "r"), detail::get<int>(j, "m0")};
  return make_ball(g, detail::get<int>(j, "level"), rational_from(detail::field(j, "center")));
}

inline Json to_json(const ClopenSet& s) {
  Json balls = Json::array();
  for (const Ball& b : s.balls()) balls.push_back(to_json(b));
  return Json{{"r", s.ambient().r}, {"m0", s.ambient().m0}, {"balls", balls}};
}

inline Ambient ambient_from(const Json& j) {
  Ambient g{detail::get<long>(j, "r"), detail::get<int>(j, "m0")};
  validate(g);
  return g;
}

/// {"balls": [...]}, with r and m0 taken from the object or its first ball.
inline ClopenSet set_from(const Json& j) {
  const Json& arr = detail::field(j, "balls");
  if (!arr.is_array()) fail(ErrorKind::schema, "balls must be an array");
  Ambient g;
  if (j.contains("r")) {
    g = ambient_from(j);
  } else if (!arr.empty()) {
    g = ambient_from(arr.front());
  } else {
    fail(ErrorKind::schema, "empty set needs r and m0");
  }
  std::vector<Ball> balls;
  for (const Json& b : arr) balls.push_back(ball_from(b));
  return ClopenSet::canonicalize(g, balls);
}

inline Json to_json(const MeasureValue& v) {
  switch (v.shape().kind) {
    case ValueShape::Kind::scalar: return to_string(v.scalar_value());
    case ValueShape::Kind::vector: {
      Json out = Json::array();
      for (const Rational& e : v.entries()) out.push_back(to_string(e));
      return out;
    }
    case ValueShape::Kind::matrix: {
      Json out = Json::array();
      for (int i = 0; i < v.shape().n; ++i) {
        Json row = Json::array();
        for (int k = 0; k < v.shape().n; ++k) row.push_back(to_string(v.at(i, k)));
        out.push_back(row);
      }
      return out;
    }
  }
  return nullptr;
}

inline MeasureValue value_from(const Json& j, const ValueShape& shape) {
  switch (shape.kind) {
    case ValueShape::Kind::scalar: return MeasureValue::scalar(rational_from(j));
    case ValueShape::Kind::vector: {
      if (!j.is_array() || j.size() != static_cast<std::size_t>(shape.n)) {
        fail(ErrorKind::schema, "expected a " + shape.to_string() + " value");
      }
      std::vector<Rational> e;
      for (const Json& x : j) e.push_back(rational_from(x));
      return MeasureValue::vector(std::move(e));
    }
    case ValueShape::Kind::matrix: {
      if (!j.is_array() || j.size() != static_cast<std::size_t>(shape.n)) {
        fail(ErrorKind::schema, "expected a " + shape.to_string() + " value");
      }
      std::vector<Rational> e;
      for (const Json& row : j) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(shape.n)) {
          fail(ErrorKind::schema, "matrix rows must have " + std::to_string(shape.n) + " entries");
        }
        for (const Json& x : row) e.push_back(rational_from(x));
      }
      return MeasureValue::matrix(shape.n, std::move(e));
    }
  }
  fail(ErrorKind::schema, "unknown shape");
}

inline Json to_json(const LocallyConstantFn& f) {
  Json values = Json::array();
  for (const auto& [a, v] : f.values()) values.push_back(Json{{"atom", to_json(a)}, {"value", to_json(v)}});
  return Json{{"r", f.ambient().r},
              {"m0", f.ambient().m0},
              {"level", f.level()},
              {"shape", f.shape().to_string()},
              {"domain", to_json(f.domain())},
              {"values", values}};
}

/// The domain defaults to G; "shape" defaults to scalar.
inline LocallyConstantFn fn_from(const Json& j) {
  const Ambient g = ambient_from(j);
  const ValueShape shape = j.contains("shape") ? parse_shape(detail::get<std::string>(j, "shape")) : ValueShape::scalar();
  const ClopenSet domain = j.contains("domain") ? set_from(j.at("domain")) : ClopenSet::whole(g);
  require_same(g, domain.ambient());
  const Json& arr = detail::field(j, "values");
  if (!arr.is_array()) fail(ErrorKind::schema, "values must be an array");
  LocallyConstantFn::Values values;
  for (const Json& e : arr) {
    const Ball a = ball_from(detail::field(e, "atom"));
    require_same(g, a.ambient);
    if (!values.emplace(a, value_from(detail::field(e, "value"), shape)).second) {
      fail(ErrorKind::schema, "duplicate atom in step function");
    }
  }
  return LocallyConstantFn(domain, detail::get<int>(j, "level"), shape, std::move(values));
}

inline Json to_json(const ProductFn& f) {
  Json values = Json::array();
  for (const auto& [key, v] : f.values()) {
    values.push_back(Json{{"left", to_json(key.first)}, {"right", to_json(key.second)}, {"value", to_json(v)}});
  }
  return Json{{"left", Json{{"r", f.left().r}, {"m0", f.left().m0}, {"level", f.level_left()}}},
              {"right", Json{{"r", f.right().r}, {"m0", f.right().m0}, {"level", f.level_right()}}},
              {"shape", f.shape().to_string()},
              {"values", values}};
}

inline ProductFn product_fn_from(const Json& j) {
  const Json& l = detail::field(j, "left");
  const Json& r = detail::field(j, "right");
  const ValueShape shape = j.contains("shape") ? parse_shape(detail::get<std::string>(j, "shape")) : ValueShape::scalar();
  ProductFn::Values values;
  for (const Json& e : detail::field(j, "values")) {
    values.emplace(ProductFn::Key{ball_from(detail::field(e, "left")), ball_from(detail::field(e, "right"))},
                   value_from(detail::field(e, "value"), shape));
  }
  return ProductFn(ambient_from(l), ambient_from(r), detail::get<int>(l, "level"), detail::get<int>(r, "level"), shape,
                   std::move(values));
}

inline const char* kind_name(Measure::Kind k) {
  switch (k) {
    case Measure::Kind::haar: return "haar";
    case Measure::Kind::density: return "density";
    case Measure::Kind::atomic: return "atomic";
    case Measure::Kind::sum: return "sum";
  }
  return "sum";
}

inline Json to_json(const Measure& m) {
  Json out{{"kind", kind_name(m.kind())},
           {"r", m.ambient().r},
           {"m0", m.ambient().m0},
           {"p", m.value_prime()},
           {"shape", m.shape().to_string()}};
  switch (m.kind()) {
    case Measure::Kind::haar: out["total"] = to_json(m.haar_total()); break;
    case Measure::Kind::density: out["density"] = to_json(m.density_fn()); break;
    case Measure::Kind::atomic: {
      Json atoms = Json::array();
      for (const auto& [x, v] : m.atoms()) atoms.push_back(Json{{"point", to_string(x)}, {"mass", to_json(v)}});
      out["atoms"] = atoms;
      break;
    }
    case Measure::Kind::sum: {
      Json parts = Json::array();
      for (const Measure& c : m.components()) parts.push_back(to_json(c));
      out["components"] = parts;
      break;
    }
  }
  return out;
}

inline Measure measure_from(const Json& j) {
  const std::string kind = detail::get<std::string>(j, "kind");
  const Ambient g = ambient_from(j);
  const long p = detail::get<long>(j, "p");
  const ValueShape shape = j.contains("shape") ? parse_shape(detail::get<std::string>(j, "shape")) : ValueShape::scalar();
  if (kind == "haar") {
    const MeasureValue total = j.contains("total") ? value_from(j.at("total"), shape) : MeasureValue::scalar(1);
    if (!(total.shape() == shape)) fail(ErrorKind::schema, "Haar total does not match the shape");
    return Measure::haar(g, p, total);
  }
  if (kind == "density") {
    const LocallyConstantFn f = fn_from(detail::field(j, "density"));
    require_same(g, f.ambient());
    if (!(f.shape() == shape)) fail(ErrorKind::schema, "density values do not match the shape");
    return Measure::density(p, f);
  }
  if (kind == "atomic") {
    Measure::Atoms atoms;
    for (const Json& a : detail::field(j, "atoms")) {
      const Rational x = rational_from(detail::field(a, "point"));
      if (!atoms.emplace(x, value_from(detail::field(a, "mass"), shape)).second) {
        fail(ErrorKind::schema, "duplicate atom point " + to_string(x));
      }
    }
    return Measure::atomic(g, p, shape, std::move(atoms));
  }
  if (kind == "sum") {
    std::vector<Measure> parts;
    for (const Json& c : detail::field(j, "components")) parts.push_back(measure_from(c));
    for (const Measure& c : parts) {
      require_same(g, c.ambient());
      if (c.value_prime() != p || !(c.shape() == shape)) fail(ErrorKind::schema, "component does not match the sum");
    }
    return Measure::sum(std::move(parts));
  }
  fail(ErrorKind::schema, "unknown measure kind '" + kind + "'");
}

inline Json to_json(const FinVector& v) {
  Json entries = Json::array();
  for (const auto& [i, x] : v.entries()) entries.push_back(Json{{"i", i}, {"v", to_string(x)}});
  return Json{{"p", v.prime()}, {"entries", entries}};
}

inline FinVector vector_from(const Json& j, std::optional<long> p = std::nullopt) {
  const long prime = j.contains("p") ? detail::get<long>(j, "p") : (p ? *p : 0);
  FinVector::Entries e;
  for (const Json& x : detail::field(j, "entries")) {
    if (!e.emplace(detail::get<std::uint64_t>(x, "i"), rational_from(detail::field(x, "v"))).second) {
      fail(ErrorKind::schema, "duplicate vector index");
    }
  }
  return FinVector(prime, e);
}

inline Json to_json(const FinMatrix& f) {
  Json entries = Json::array();
  for (const auto& [ij, v] : f.entries()) entries.push_back(Json{{"i", ij.first}, {"j", ij.second}, {"v", to_string(v)}});
  return Json{{"p", f.prime()}, {"entries", entries}};
}

inline FinMatrix matrix_from(const Json& j) {
  FinMatrix::Entries e;
  for (const Json& x : detail::field(j, "entries")) {
    const FinMatrix::Index ij{detail::get<std::uint64_t>(x, "i"), detail::get<std::uint64_t>(x, "j")};
    if (!e.emplace(ij, rational_from(detail::field(x, "v"))).second) fail(ErrorKind::schema, "duplicate matrix entry");
  }
  return FinMatrix(detail::get<long>(j, "p"), e);
}

inline Json to_json(const OrthStochMeasure& xi) {
  Json atoms = Json::array();
  Json c = Json::array();
  Json factors = Json::array();
  for (const StochAtom& a : xi.atoms()) {
    atoms.push_back(to_json(a.ball));
    c.push_back(to_string(a.c));
    factors.push_back(a.factor ? Json(*a.factor) : Json(nullptr));
  }
  return Json{{"r", xi.ambient().r},
              {"m0", xi.ambient().m0},
              {"p", xi.space()->prime()},
              {"atomLevel", xi.level()},
              {"atoms", atoms},
              {"c", c},
              {"factors", factors},
              {"measure", to_json(xi.structure())}};
}

/// Factors default to one fair sign per nonzero c, in atom order.
inline OrthStochMeasure xi_from(const Json& j) {
  const Measure mu = measure_from(detail::field(j, "measure"));
  const long p = detail::get<long>(j, "p");
  if (p != mu.value_prime()) fail(ErrorKind::schema, "xi prime differs from its structure measure");
  const Json& atoms = detail::field(j, "atoms");
  const Json& c = detail::field(j, "c");
  if (!atoms.is_array() || !c.is_array() || atoms.size() != c.size()) {
    fail(ErrorKind::schema, "xi needs one coefficient per atom");
  }
  const Json* factors = j.contains("factors") ? &j.at("factors") : nullptr;
  if (factors && (!factors->is_array() || factors->size() != atoms.size())) {
    fail(ErrorKind::schema, "xi factors must list one entry per atom");
  }
  std::vector<StochAtom> out;
  std::uint32_t next = 0;
  std::uint32_t count = 0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    StochAtom a{ball_from(atoms[k]), rational_from(c[k]), std::nullopt};
    if (factors) {
      if (!(*factors)[k].is_null()) a.factor = (*factors)[k].get<std::uint32_t>();
    } else if (a.c != 0) {
      a.factor = next++;
    }
    if (a.factor) count = std::max(count, *a.factor + 1);
    out.push_back(std::move(a));
  }
  return OrthStochMeasure(mu, detail::get<int>(j, "atomLevel"), std::move(out), FiniteProbSpace::rademacher(p, count));
}

inline Json to_json(const RandomVariable& x) {
  Json terms = Json::array();
  for (const auto& [mono, c] : x.terms()) {
    Json m = Json::array();
    for (const auto& [f, o] : mono) m.push_back(Json::array({f, o}));
    terms.push_back(Json{{"monomial", m}, {"coeff", to_json(c)}});
  }
  return Json{{"p", x.space()->prime()}, {"factors", x.space()->size()}, {"terms", terms}};
}

inline Json to_json(const SpectralSpec& s) {
  Json y = Json::array();
  Json m = Json::array();
  for (const Rational& v : s.frequencies) y.push_back(to_string(v));
  for (const Rational& v : s.masses) m.push_back(to_string(v));
  return Json{{"r", s.r}, {"p", s.p}, {"frequencies", y}, {"masses", m}};
}

inline SpectralSpec spec_from(const Json& j) {
  SpectralSpec s;
  s.r = detail::get<long>(j, "r");
  s.p = detail::get<long>(j, "p");
  for (const Json& v : detail::field(j, "frequencies")) s.frequencies.push_back(rational_from(v));
  for (const Json& v : detail::field(j, "masses")) s.masses.push_back(rational_from(v));
  validate(s);
  return s;
}

inline Json to_json(const MReport& r) {
  Json failures = Json::array();
  for (const std::string& f : r.failures) failures.push_back(f);
  return Json{{"balls", r.balls},
              {"pairs", r.pairs},
              {"emptySet", r.empty_set},
              {"meanZero", r.mean_zero},
              {"additivity", r.additive},
              {"orthogonality", r.orthogonal},
              {"structureAdditivity", r.structure_additive},
              {"pass", r.all()},
              {"failures", failures}};
}

}  // namespace pam::io
