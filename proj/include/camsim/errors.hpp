#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace camsim {

// Error categories map 1:1 onto CLI exit codes (input=2, infeasible=3,
// divergence=4).
enum class ErrorKind { Input, Infeasible, Divergence };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string msg)
        : std::runtime_error(std::move(msg)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    static Error input(std::string msg) { return {ErrorKind::Input, std::move(msg)}; }
    static Error infeasible(std::string msg) { return {ErrorKind::Infeasible, std::move(msg)}; }
    static Error divergence(std::string msg) { return {ErrorKind::Divergence, std::move(msg)}; }

private:
    ErrorKind kind_;
};

// Pattern syntax error carrying the byte offset of the offending character.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, const std::string& what)
        : Error(ErrorKind::Input,
                "syntax error at byte " + std::to_string(offset) + ": " + what),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace camsim
