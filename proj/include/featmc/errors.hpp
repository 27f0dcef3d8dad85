#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace featmc {

struct SourcePos {
    int line = 0;
    int column = 0;

    bool valid() const { return line > 0; }
    std::string to_string() const { return std::to_string(line) + ":" + std::to_string(column); }
};

/// Any error caused by the model or property input (syntax, typing, semantics).
class ModelError : public std::runtime_error {
  public:
    explicit ModelError(const std::string& message, SourcePos pos = {})
        : std::runtime_error(pos.valid() ? pos.to_string() + ": " + message : message), pos_(pos), message_(message) {}

    SourcePos pos() const { return pos_; }
    const std::string& message() const { return message_; }

  private:
    SourcePos pos_;
    std::string message_;
};

class SyntaxError : public ModelError {
  public:
    SyntaxError(const std::string& message, SourcePos pos, std::vector<std::string> expected = {})
        : ModelError(message, pos), expected_(std::move(expected)) {}

    const std::vector<std::string>& expected() const { return expected_; }

  private:
    std::vector<std::string> expected_;
};

/// Raised when an iterative solver exhausts its iteration budget.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& message, double residual, std::size_t iterations)
        : std::runtime_error(message), residual_(residual), iterations_(iterations) {}

    double residual() const { return residual_; }
    std::size_t iterations() const { return iterations_; }

  private:
    double residual_;
    std::size_t iterations_;
};

}  // namespace featmc
