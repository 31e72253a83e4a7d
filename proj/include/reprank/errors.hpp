#pragma once

#include <stdexcept>
#include <string>

namespace reprank {

/// Malformed or inconsistent configuration (flags, config file, endpoint).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error("ConfigError: " + what) {}
};

/// A stage input file is absent; names the stage that produces it.
class MissingInputError : public std::runtime_error {
 public:
  MissingInputError(const std::string& path, const std::string& producer)
      : std::runtime_error("missing input " + path + " (produced by `" + producer + "`)"),
        path_(path),
        producer_(producer) {}

  const std::string& path() const { return path_; }
  const std::string& producer() const { return producer_; }

 private:
  std::string path_;
  std::string producer_;
};

/// File could not be read, written or decoded.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error("IOFailure: " + what) {}
};

}  // namespace reprank
