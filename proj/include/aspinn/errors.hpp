#pragma once

#include <stdexcept>
#include <string>

namespace aspinn {

// Rejected user-facing configuration (bad dimension, tau out of range, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Violated API precondition (shape mismatch, empty batch, point outside domain).
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aspinn
