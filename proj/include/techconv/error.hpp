#pragma once

#include <stdexcept>
#include <string>

namespace techconv {

/// Failure caused by the caller's input (bad file, bad argument, violated
/// precondition). The CLI maps it to exit code 2; anything else is exit 1.
class InputError : public std::runtime_error {
 public:
  InputError(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

}  // namespace techconv
