#pragma once

#include <stdexcept>
#include <string>

namespace iavs {

// Three families, each mapped to its own CLI exit code.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InitOutOfRange : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

class TooManyVariables : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

class DimensionError : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

class EmptyTrace : public DataError {
  public:
    using DataError::DataError;
};

class AllZeroGold : public DataError {
  public:
    using DataError::DataError;
};

class RankDeficient : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class NumericalFailure : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class DegenerateWeights : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

} // namespace iavs
