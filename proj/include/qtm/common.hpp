#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qtm {

using TermId = std::uint32_t;
using DocId = std::uint32_t;

struct TermCount {
    TermId term;
    std::uint32_t count;

    friend bool operator==(const TermCount&, const TermCount&) = default;
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (documents, topics, qrels, config).
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Index file that cannot be trusted: bad magic, wrong version, truncation.
class IntegrityError : public Error {
  public:
    using Error::Error;
};

class NotFoundError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Raised when an operation has nothing meaningful to work on, e.g. a query whose terms
/// are all out of vocabulary or a feedback pool without informative terms.
class InputError : public Error {
  public:
    using Error::Error;
};

using WarningSink = std::function<void(std::string_view)>;

/// Routes library warnings. The default sink writes "warning: <msg>" to stderr.
/// Returns the previously installed sink.
WarningSink set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace qtm
