#pragma once

#include <stdexcept>
#include <string>

namespace wordmap {

// Error categories map 1:1 onto CLI exit codes / C API statuses.
enum class ErrorKind { usage = 1, data = 2, runtime = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& message) {
    throw Error(ErrorKind::usage, message);
}

[[noreturn]] inline void throw_data(const std::string& message) {
    throw Error(ErrorKind::data, message);
}

[[noreturn]] inline void throw_runtime(const std::string& message) {
    throw Error(ErrorKind::runtime, message);
}

}  // namespace wordmap
