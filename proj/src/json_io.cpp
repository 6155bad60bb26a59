#include "ndual/json_io.hpp"

#include <string>

namespace ndual::json_io {

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValueError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValueError(std::string("field \"") + key + "\": " + e.what());
  }
}

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) throw ValueError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const json& v : j) {
    if (!v.is_number()) throw ValueError(std::string(what) + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json nest(std::span<const double> flat, std::size_t d, std::size_t order) {
  if (order == 0) return flat.front();
  json arr = json::array();
  const std::size_t block = flat.size() / d;
  for (std::size_t k = 0; k < d; ++k) arr.push_back(nest(flat.subspan(k * block, block), d, order - 1));
  return arr;
}

void flatten_into(const json& j, std::size_t d, std::size_t order, std::vector<double>& out) {
  if (order == 0) {
    if (!j.is_number()) throw ValueError("tensor coefficients nested deeper than its order");
    out.push_back(j.get<double>());
    return;
  }
  if (!j.is_array() || j.size() != d) {
    throw ValueError("tensor coefficients: expected an array of length " + std::to_string(d));
  }
  for (const json& sub : j) flatten_into(sub, d, order - 1, out);
}

SpaceSpec with_p(const SpaceSpec& s, std::optional<double> p) { return p ? SpaceSpec(s.d, *p) : s; }

}  // namespace

json to_json(const SpaceSpec& space) {
  json j{{"d", space.d}, {"p", space.p()}};
  if (space.exponent.q_is_infinite()) {
    j["q"] = "inf";
  } else {
    j["q"] = space.exponent.q();
  }
  return j;
}

json to_json(const Vector& v) {
  return json{{"space", to_json(v.space())}, {"coords", std::vector<double>(v.coords().begin(), v.coords().end())}};
}

json to_json(const DualFunctional& f) {
  return json{{"space", to_json(f.space())}, {"coords", std::vector<double>(f.coeffs().begin(), f.coeffs().end())}};
}

json to_json(const MultiFunctional& f) {
  return json{{"order", f.order()}, {"space", to_json(f.space())}, {"coeffs", nest(f.coeffs(), f.space().d, f.order())}};
}

json to_json(std::span<const Vector> xs) {
  json arr = json::array();
  for (const Vector& x : xs) arr.push_back(to_json(x));
  return arr;
}

json to_json(const OrthogonalizationResult& r) {
  return json{{"originals", to_json(r.originals)},
              {"orthogonalized", to_json(r.orthogonalized)},
              {"coefficients", r.coefficients},
              {"step_gram_dets", r.step_gram_dets}};
}

json to_json(const GahlerEstimate& e) {
  json fs = json::array();
  for (const DualFunctional& f : e.functionals) fs.push_back(to_json(f));
  return json{{"value", e.value},
              {"functionals", fs},
              {"lower_bound", e.lower_bound},
              {"upper_bound", e.upper_bound},
              {"iterations_per_restart", e.iterations_per_restart},
              {"converged", e.converged},
              {"best_start", e.best_start}};
}

json to_json(const FunctionalNormEstimate& e) {
  return json{{"value", e.value},
              {"witness", to_json(e.witness)},
              {"mode", to_string(e.mode)},
              {"denominator_exact", e.denominator_exact},
              {"restarts", e.restarts},
              {"iterations", e.iterations},
              {"converged", e.converged}};
}

SpaceSpec space_from_json(const json& j) {
  const auto d = field<long long>(j, "d");
  if (d < 1) throw DimensionError("space dimension must be at least 1");
  return SpaceSpec(static_cast<std::size_t>(d), field<double>(j, "p"));
}

Vector vector_from_json(const json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("coords")) {
    throw ValueError("vector must be an object with \"space\" and \"coords\"");
  }
  return Vector(space_from_json(j.at("space")), number_array(j.at("coords"), "coords"));
}

DualFunctional functional_from_json(const json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("coords")) {
    throw ValueError("functional must be an object with \"space\" and \"coords\"");
  }
  return DualFunctional(space_from_json(j.at("space")), number_array(j.at("coords"), "coords"));
}

MultiFunctional tensor_from_json(const json& j, std::optional<double> p_override) {
  if (!j.is_object() || !j.contains("coeffs")) throw ValueError("tensor must be an object with \"coeffs\"");
  const auto order = field<long long>(j, "order");
  if (order < 0) throw ValueError("tensor order must be >= 0");
  if (!j.contains("space")) throw ValueError("tensor needs a \"space\"");
  const SpaceSpec space = with_p(space_from_json(j.at("space")), p_override);
  std::vector<double> flat;
  flatten_into(j.at("coeffs"), space.d, static_cast<std::size_t>(order), flat);
  return MultiFunctional(space, static_cast<std::size_t>(order), std::move(flat));
}

std::vector<Vector> tuple_from_json(const json& j, std::optional<double> p_override) {
  std::vector<Vector> out;
  if (j.is_object()) {
    if (!j.contains("vectors")) throw ValueError("tuple object needs \"vectors\"");
    const json& vs = j.at("vectors");
    if (!vs.is_array()) throw ValueError("\"vectors\" must be an array");
    std::optional<SpaceSpec> space;
    if (j.contains("space")) space = with_p(space_from_json(j.at("space")), p_override);
    for (const json& v : vs) {
      if (v.is_object()) {
        const Vector parsed = vector_from_json(v);
        out.emplace_back(with_p(parsed.space(), p_override), std::vector<double>(parsed.coords().begin(), parsed.coords().end()));
      } else {
        std::vector<double> c = number_array(v, "vector");
        const SpaceSpec s = space ? *space : [&] {
          if (!p_override) throw ValueError("tuple of plain arrays needs a space or an explicit p");
          return SpaceSpec(c.size(), *p_override);
        }();
        out.emplace_back(s, std::move(c));
      }
    }
  } else if (j.is_array()) {
    json wrapped{{"vectors", j}};
    return tuple_from_json(wrapped, p_override);
  } else {
    throw ValueError("tuple must be an array or an object with \"vectors\"");
  }
  if (out.empty()) throw ValueError("empty tuple");
  common_space(out);
  return out;
}

}  // namespace ndual::json_io
