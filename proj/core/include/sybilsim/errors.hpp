#pragma once

#include <stdexcept>
#include <string>

namespace sybilsim
{

/// Lookup of a node or round that the history does not contain.
class QueryError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Graph generator gave up after its restart budget.
class ConstructionError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Rejected run parameters; raised before any round executes.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A conservation or accounting identity failed. Always a simulator bug.
class InvariantViolation : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/// Exact expansion requested above the enumeration cap.
class ExpansionCapExceeded : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace sybilsim
