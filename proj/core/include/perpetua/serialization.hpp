#pragma once

#include "perpetua/empirical.hpp"
#include "perpetua/existence.hpp"
#include "perpetua/moments.hpp"
#include "perpetua/oracles.hpp"
#include "perpetua/verification.hpp"

#include <nlohmann/json.hpp>

namespace perpetua {

// Finite values as numbers, +-inf as "inf" / "-inf", NaN as null.
nlohmann::json extended_real(double x);

nlohmann::json to_json(const IntegralVerdict& v);
nlohmann::json to_json(const ExistenceReport& r);
nlohmann::json to_json(const MomentReport& r);
nlohmann::json to_json(const RestrictedMoments& d);
nlohmann::json to_json(const AbscissaResult& r);
nlohmann::json to_json(const Provenance& p);
nlohmann::json to_json(const Atom& a);
nlohmann::json to_json(const PurityReport& r);
nlohmann::json to_json(const CheckResult& c);

}  // namespace perpetua
