#pragma once

#include <string>
#include <string_view>

namespace qtm::corpus {

/// Porter (1980) suffix-stripping stemmer, following the reference C implementation
/// (including its "bli" -> "ble" and "logi" -> "log" departures from the published rules).
/// Input must be lowercase ASCII letters; words of length <= 2 and words containing
/// anything other than a-z are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace qtm::corpus
