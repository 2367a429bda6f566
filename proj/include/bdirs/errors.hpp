#ifndef BDIRS_ERRORS_HPP
#define BDIRS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bdirs {

// Invalid or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

// Failure to read or write experiment outputs (CLI exit code 3).
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace bdirs

#endif // BDIRS_ERRORS_HPP
