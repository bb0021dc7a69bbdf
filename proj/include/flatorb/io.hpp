#pragma once

#include "flatorb/affine_group.hpp"

#include <json.hpp>

#include <string>

namespace flatorb {

using json = nlohmann::json;

/// Integers stay exact, floats go through their shortest decimal form, strings may be "p/q".
Rat rat_from_json(const json& j);
json rat_to_json(const Rat& r);
RatMatrix matrix_from_json(const json& j);
json matrix_to_json(const RatMatrix& m);
RatVec vector_from_json(const json& j);
json vector_to_json(const RatVec& v);

CrystalGroup group_from_json(const json& j);
json group_to_json(const CrystalGroup& g);
CrystalGroup load_group_file(const std::string& path);

}  // namespace flatorb
