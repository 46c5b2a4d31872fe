// Exception taxonomy shared by the library and the command-line driver.
// Each class pins the process exit code the driver maps it to; 1 is left to
// unexpected failures.
#ifndef DUALMEISSNER_ERRORS_HPP
#define DUALMEISSNER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dm {

struct ConfigError : std::runtime_error {
    static constexpr int exit_code = 2;
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConvergenceError : std::runtime_error {
    static constexpr int exit_code = 3;
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    static constexpr int exit_code = 4;
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dm

#endif
