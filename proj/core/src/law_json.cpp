#include "perpetua/law_json.hpp"

#include "perpetua/errors.hpp"

#include <cmath>
#include <limits>

namespace perpetua {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key, "required");
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) throw ConfigError(path + "." + key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw ConfigError(path + "." + key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

}  // namespace

ScalarLaw law_from_json(const json& doc, const std::string& path) {
  const json& fam = field(doc, "family", path);
  if (!fam.is_string()) throw ConfigError(path + ".family", "expected a string");
  const std::string name = fam.get<std::string>();
  const std::string ppath = path + ".params";
  const json empty = json::object();
  const json& params = doc.contains("params") ? doc.at("params") : empty;
  if (!params.is_object()) throw ConfigError(ppath, "expected an object");

  try {
    if (name == "point_mass") return ScalarLaw::point_mass(number(params, "c", ppath));
    if (name == "finite_discrete")
      return ScalarLaw::finite_discrete(numbers(params, "values", ppath),
                                        numbers(params, "probs", ppath));
    if (name == "uniform")
      return ScalarLaw::uniform(number(params, "lo", ppath), number(params, "hi", ppath));
    if (name == "uniform_discrete") {
      const double n = number(params, "n", ppath);
      if (!(n >= 1.0) || n != std::floor(n) || n > 9.007199254740992e15)
        throw ConfigError(ppath + ".n", "expected a positive integer");
      return ScalarLaw::uniform_discrete(static_cast<std::uint64_t>(n));
    }
    if (name == "exponential") return ScalarLaw::exponential(number(params, "rate", ppath));
    if (name == "gamma")
      return ScalarLaw::gamma(number(params, "shape", ppath), number(params, "rate", ppath));
    if (name == "beta")
      return ScalarLaw::beta(number(params, "alpha", ppath), number(params, "beta", ppath));
    if (name == "weibull")
      return ScalarLaw::weibull(number(params, "shape", ppath), number(params, "scale", ppath));
    if (name == "poisson") return ScalarLaw::poisson(number(params, "mean", ppath));
    if (name == "inverse_gamma")
      return ScalarLaw::inverse_gamma(number(params, "shape", ppath),
                                      number(params, "scale", ppath));
    if (name == "rademacher") return ScalarLaw::rademacher(number(params, "scale", ppath));
    if (name == "log_pareto") return ScalarLaw::log_pareto(number(params, "alpha", ppath));
  } catch (const InvalidLaw& e) {
    throw ConfigError(ppath, e.what());
  }
  throw ConfigError(path + ".family", "unknown family '" + name + "'");
}

JointLaw joint_from_json(const json& doc, const std::string& path) {
  const json& coupling = field(doc, "coupling", path);
  if (!coupling.is_string()) throw ConfigError(path + ".coupling", "expected a string");
  const std::string kind = coupling.get<std::string>();
  if (kind == "independent") {
    ScalarLaw m = law_from_json(field(doc, "M", path), path + ".M");
    ScalarLaw q = law_from_json(field(doc, "Q", path), path + ".Q");
    return JointLaw::independent(std::move(m), std::move(q));
  }
  if (kind == "finite_joint") {
    const json& atoms = field(doc, "atoms", path);
    const std::string apath = path + ".atoms";
    if (!atoms.is_array()) throw ConfigError(apath, "expected an array");
    std::vector<JointAtom> parsed;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string ipath = apath + "[" + std::to_string(i) + "]";
      const json& a = atoms[i];
      if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() ||
          !a[2].is_number())
        throw ConfigError(ipath, "expected [m, q, prob]");
      parsed.push_back({a[0].get<double>(), a[1].get<double>(), a[2].get<double>()});
    }
    try {
      return JointLaw::finite_joint(std::move(parsed));
    } catch (const InvalidLaw& e) {
      throw ConfigError(apath, e.what());
    }
  }
  throw ConfigError(path + ".coupling", "unknown coupling '" + kind + "'");
}

json to_json(const ScalarLaw& law) {
  json params = std::visit(
      overloaded{
          [](const family::PointMass& f) { return json{{"c", f.c}}; },
          [](const family::FiniteDiscrete& f) { return json{{"values", f.values}, {"probs", f.probs}}; },
          [](const family::UniformContinuous& f) { return json{{"lo", f.lo}, {"hi", f.hi}}; },
          [](const family::UniformDiscreteRange& f) { return json{{"n", f.n}}; },
          [](const family::Exponential& f) { return json{{"rate", f.rate}}; },
          [](const family::Gamma& f) { return json{{"shape", f.shape}, {"rate", f.rate}}; },
          [](const family::Beta& f) { return json{{"alpha", f.alpha}, {"beta", f.beta}}; },
          [](const family::Weibull& f) { return json{{"shape", f.shape}, {"scale", f.scale}}; },
          [](const family::Poisson& f) { return json{{"mean", f.mean}}; },
          [](const family::InverseGamma& f) { return json{{"shape", f.shape}, {"scale", f.scale}}; },
          [](const family::SignedRademacher& f) { return json{{"scale", f.scale}}; },
          [](const family::LogPareto& f) { return json{{"alpha", f.alpha}}; },
      },
      law.family());
  return json{{"family", std::string(law.family_name())}, {"params", std::move(params)}};
}

json to_json(const JointLaw& joint) {
  if (const auto* ind = std::get_if<JointLaw::Independent>(&joint.coupling())) {
    return json{{"coupling", "independent"}, {"M", to_json(ind->m)}, {"Q", to_json(ind->q)}};
  }
  json atoms = json::array();
  for (const auto& a : std::get<JointLaw::FiniteJoint>(joint.coupling()).atoms)
    atoms.push_back(json::array({a.m, a.q, a.prob}));
  return json{{"coupling", "finite_joint"}, {"atoms", std::move(atoms)}};
}

}  // namespace perpetua
