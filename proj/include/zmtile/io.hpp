#pragma once

// JSON forms of the library types. Rationals are always "num/den" strings
// so nothing is lost on the way through a double.

#include <string>

#include <json.hpp>

#include "zmtile/class_set.hpp"
#include "zmtile/cyclotomic.hpp"
#include "zmtile/delsarte.hpp"
#include "zmtile/step_fn.hpp"
#include "zmtile/tiling.hpp"

namespace zmtile {

using Json = nlohmann::ordered_json;

Json rational_to_json(const Rational& q);
/// Accepts "n/d", "n" or a JSON integer.
Rational rational_from_json(const Json& j);

/// {"M": M, "coeffs": {"<divisor>": "n/d", ...}} with nonzero entries only.
Json step_to_json(const StepFunction& f);
StepFunction step_from_json(const Json& j);

/// {"M": M, "elements": [...]}
Json tileset_to_json(const TileSet& A);
TileSet tileset_from_json(const Json& j);

/// {"M": M, "members": [...], "hex": "0x..."}; either key is accepted on input.
Json classset_to_json(const ClassSet& H);
ClassSet classset_from_json(const Json& j);

Json cyclo_to_json(const CycloReport& r);
Json screen_to_json(const ScreenReport& r);
ScreenReport screen_from_json(const Json& j);
Json pd_report_to_json(const PdTilingReport& r);

/// Parses a file's contents; throws InvalidInput with the parser message.
Json parse_json(const std::string& text);

}  // namespace zmtile
