#pragma once

#include <stdexcept>
#include <string>

namespace ballotlens {

// Base for all structured errors raised by the pipeline.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- ingest ---
class OddYearError : public Error { using Error::Error; };
class SchemaError : public Error { using Error::Error; };
class DuplicateCandidate : public Error { using Error::Error; };
class AmbiguousLink : public Error { using Error::Error; };
class PageNotFound : public Error { using Error::Error; };
class TransportError : public Error { using Error::Error; };
class RateLimited : public Error { using Error::Error; };
class InvalidQuery : public Error { using Error::Error; };

// --- features ---
class WindowMismatch : public Error { using Error::Error; };
class AlreadyCumulative : public Error { using Error::Error; };
class MissingResults : public Error { using Error::Error; };

// --- regress ---
class UnknownField : public Error { using Error::Error; };
class EmptyAfterFiltering : public Error { using Error::Error; };
class RankDeficient : public Error { using Error::Error; };
class Separation : public Error { using Error::Error; };
class NotConverged : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class InvalidDf : public Error { using Error::Error; };
class DegenerateResiduals : public Error { using Error::Error; };

// --- analysis ---
class UnknownModel : public Error { using Error::Error; };
class EmptyStratum : public Error { using Error::Error; };
class EmptyGroup : public Error { using Error::Error; };
class GroupTooSmall : public Error { using Error::Error; };
class MissingCovariate : public Error { using Error::Error; };

// --- cli ---
class ConfigError : public Error { using Error::Error; };
class MissingFit : public Error { using Error::Error; };

}  // namespace ballotlens
