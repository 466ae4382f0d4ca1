#pragma once

#include <string>
#include <string_view>

namespace drivesent {

// Porter (1980) suffix-stripping stemmer, following the published five-step
// rule set (no later "departures" such as logi->log). Expects a lowercase
// ASCII word; other bytes are treated as consonants.
//
// Note the published algorithm is not idempotent: "agreed" -> "agre" -> "agr".
std::string porter_stem(std::string_view word);

}  // namespace drivesent
